// Copyright 2026-present the seismicwave project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "seismicwave/format_error.h"

namespace seismicwave::detail {

/// Little-endian primitive reader with bounds checks against the stream size.
class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {
    start_ = in_.tellg();
    if (start_ != std::istream::pos_type(-1)) {
      in_.seekg(0, std::ios::end);
      const auto end = in_.tellg();
      in_.seekg(start_);
      if (end != std::istream::pos_type(-1)) {
        remaining_ = static_cast<std::uint64_t>(end - start_);
        size_ = remaining_;
        seekable_ = true;
      }
    }
    in_.clear();
  }

  std::uint64_t offset() const { return offset_; }
  std::uint64_t remaining() const { return remaining_; }

  [[noreturn]] void fail(const std::string& what) const { throw FormatError(what, offset_); }

  /// Fails unless `count` elements of `width` bytes are still available.
  void require(std::uint64_t count, std::uint64_t width, const char* what) const {
    if (width != 0 && count > remaining_ / width) {
      fail(std::string("truncated ") + what);
    }
  }

  void read_bytes(void* dst, std::uint64_t n, const char* what) {
    require(n, 1, what);
    if (n != 0 && !in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n))) {
      fail(std::string("truncated ") + what);
    }
    offset_ += n;
    remaining_ -= n;
  }

  std::uint32_t u32(const char* what) {
    unsigned char b[4];
    read_bytes(b, 4, what);
    return std::uint32_t{b[0]} | std::uint32_t{b[1]} << 8 | std::uint32_t{b[2]} << 16 |
           std::uint32_t{b[3]} << 24;
  }

  std::uint64_t u64(const char* what) {
    const std::uint64_t lo = u32(what);
    const std::uint64_t hi = u32(what);
    return lo | hi << 32;
  }

  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
  double f64(const char* what) { return std::bit_cast<double>(u64(what)); }

  /// Repositions to an absolute offset from where reading started.
  void seek(std::uint64_t offset) {
    if (!seekable_ || offset > size_) {
      fail("cannot seek to byte " + std::to_string(offset));
    }
    in_.clear();
    in_.seekg(start_ + static_cast<std::streamoff>(offset));
    offset_ = offset;
    remaining_ = size_ - offset;
  }

  /// Fails if any byte is left after a complete record.
  void expect_end() {
    if (remaining_ != 0) {
      fail("trailing bytes after payload");
    }
    char c;
    if (in_.read(&c, 1)) {
      fail("trailing bytes after payload");
    }
  }

 private:
  std::istream& in_;
  std::istream::pos_type start_{};
  bool seekable_ = false;
  std::uint64_t size_ = 0;
  std::uint64_t offset_ = 0;
  std::uint64_t remaining_ = std::numeric_limits<std::uint64_t>::max();
};

class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void bytes(const void* src, std::uint64_t n) {
    out_.write(static_cast<const char*>(src), static_cast<std::streamsize>(n));
    written_ += n;
  }
  void u32(std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 24)};
    bytes(b, 4);
  }
  void u64(std::uint64_t v) {
    u32(static_cast<std::uint32_t>(v));
    u32(static_cast<std::uint32_t>(v >> 32));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  std::uint64_t written() const { return written_; }

 private:
  std::ostream& out_;
  std::uint64_t written_ = 0;
};

}  // namespace seismicwave::detail
