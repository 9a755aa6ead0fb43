// Copyright 2026 The CBL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CBL_BITS_HPP_
#define CBL_BITS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cbl/error.hpp"

namespace cbl {

/// MSB-first bit sink. The last byte is zero padded.
class BitWriter {
 public:
  void write_bit(bool bit) {
    if (bits_ % 8 == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ % 8));
    ++bits_;
  }

  /// Writes the low `count` bits of value, most significant first.
  void write_bits(std::uint64_t value, unsigned count) {
    for (unsigned i = count; i-- > 0;) write_bit((value >> i) & 1u);
  }

  void append(const BitWriter& other) {
    for (std::size_t i = 0; i < other.bits_; ++i) {
      write_bit((other.bytes_[i / 8] >> (7 - i % 8)) & 1u);
    }
  }

  std::size_t bit_size() const { return bits_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

  /// '0'/'1' rendering, handy in tests and diagnostics.
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < bits_; ++i) {
      s += ((bytes_[i / 8] >> (7 - i % 8)) & 1u) ? '1' : '0';
    }
    return s;
  }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bits_ = 0;
};

/// MSB-first bit source over a byte span.
class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes)
      : bytes_(bytes), limit_(bytes.size() * 8) {}

  BitReader(std::span<const std::uint8_t> bytes, std::size_t bit_limit)
      : bytes_(bytes), limit_(bit_limit) {
    if (bit_limit > bytes.size() * 8) {
      throw Error(Errc::kTruncated, "bit limit beyond buffer");
    }
  }

  bool read_bit() {
    if (pos_ >= limit_) throw Error(Errc::kTruncated, "bit stream exhausted");
    const bool bit = (bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1u;
    ++pos_;
    return bit;
  }

  std::uint64_t read_bits(unsigned count) {
    if (count > remaining()) {
      throw Error(Errc::kTruncated, "need " + std::to_string(count) +
                                        " bits, have " +
                                        std::to_string(remaining()));
    }
    std::uint64_t v = 0;
    for (unsigned i = 0; i < count; ++i) v = (v << 1) | (read_bit() ? 1u : 0u);
    return v;
  }

  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return limit_ - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t limit_;
  std::size_t pos_ = 0;
};

/// Parses a string of '0'/'1' (spaces ignored) into a writer. Test helper.
inline BitWriter bits_from_string(const std::string& s) {
  BitWriter w;
  for (char c : s) {
    if (c == '0' || c == '1') w.write_bit(c == '1');
  }
  return w;
}

}  // namespace cbl

#endif  // CBL_BITS_HPP_
