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

#ifndef CBL_CBOR_HPP_
#define CBL_CBOR_HPP_

// Deterministic subset of RFC 8949: unsigned and negative integers, text
// strings, definite-length arrays and maps, tags, floats and the simple
// values false/true/null. Encoding always uses the shortest head and the
// shortest float width that preserves the value.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cbl/error.hpp"

namespace cbl {

using Bytes = std::vector<std::uint8_t>;

/// Major type 1: the encoded value is -1 - minus_one.
struct CborNegative {
  std::uint64_t minus_one = 0;
  friend bool operator==(const CborNegative&, const CborNegative&) = default;
};

/// Compared bitwise so NaN round-trips and 0.0 differs from -0.0.
struct CborFloat {
  double value = 0.0;
  friend bool operator==(const CborFloat& a, const CborFloat& b) {
    return std::bit_cast<std::uint64_t>(a.value) ==
           std::bit_cast<std::uint64_t>(b.value);
  }
};

enum class CborSimple : std::uint8_t { kFalse = 20, kTrue = 21, kNull = 22 };

class CborItem;
struct CborMapEntry;
using CborArray = std::vector<CborItem>;
using CborMap = std::vector<CborMapEntry>;

struct CborTagged {
  std::uint64_t number = 0;
  std::shared_ptr<const CborItem> content;
  friend bool operator==(const CborTagged& a, const CborTagged& b);
};

class CborItem {
 public:
  using Storage = std::variant<std::uint64_t, CborNegative, std::string,
                               CborArray, CborMap, CborTagged, CborFloat,
                               CborSimple>;

  CborItem() = default;
  CborItem(Storage s) : data_(std::move(s)) {}

  static CborItem uint(std::uint64_t v) { return CborItem(Storage(v)); }
  static CborItem negative(std::uint64_t minus_one) {
    return CborItem(Storage(CborNegative{minus_one}));
  }
  static CborItem integer(std::int64_t v) {
    if (v >= 0) return uint(static_cast<std::uint64_t>(v));
    return negative(static_cast<std::uint64_t>(-(v + 1)));
  }
  static CborItem text(std::string s) { return CborItem(Storage(std::move(s))); }
  static CborItem array(CborArray items) {
    return CborItem(Storage(std::move(items)));
  }
  static CborItem map(CborMap entries) {
    return CborItem(Storage(std::move(entries)));
  }
  static CborItem tag(std::uint64_t number, CborItem content) {
    return CborItem(Storage(CborTagged{
        number, std::make_shared<const CborItem>(std::move(content))}));
  }
  static CborItem float64(double v) { return CborItem(Storage(CborFloat{v})); }
  static CborItem simple(CborSimple s) { return CborItem(Storage(s)); }

  bool is_uint() const { return std::holds_alternative<std::uint64_t>(data_); }
  bool is_negative() const {
    return std::holds_alternative<CborNegative>(data_);
  }
  bool is_text() const { return std::holds_alternative<std::string>(data_); }
  bool is_array() const { return std::holds_alternative<CborArray>(data_); }
  bool is_map() const { return std::holds_alternative<CborMap>(data_); }
  bool is_tag() const { return std::holds_alternative<CborTagged>(data_); }
  bool is_float() const { return std::holds_alternative<CborFloat>(data_); }
  bool is_simple() const { return std::holds_alternative<CborSimple>(data_); }

  std::uint64_t as_uint() const { return std::get<std::uint64_t>(data_); }
  const CborNegative& as_negative() const {
    return std::get<CborNegative>(data_);
  }
  const std::string& as_text() const { return std::get<std::string>(data_); }
  const CborArray& as_array() const { return std::get<CborArray>(data_); }
  const CborMap& as_map() const { return std::get<CborMap>(data_); }
  const CborTagged& as_tag() const { return std::get<CborTagged>(data_); }
  double as_float() const { return std::get<CborFloat>(data_).value; }
  CborSimple as_simple() const { return std::get<CborSimple>(data_); }

  const Storage& storage() const { return data_; }

  friend bool operator==(const CborItem& a, const CborItem& b) {
    return a.data_ == b.data_;
  }

 private:
  Storage data_;
};

struct CborMapEntry {
  CborItem key;
  CborItem value;
  friend bool operator==(const CborMapEntry&, const CborMapEntry&) = default;
};

inline bool operator==(const CborTagged& a, const CborTagged& b) {
  if (a.number != b.number) return false;
  if (!a.content || !b.content) return a.content == b.content;
  return *a.content == *b.content;
}

enum class CborMode { kStrict, kLenient };

struct CborDecoded {
  CborItem item;
  std::size_t next = 0;
};

namespace detail {

inline constexpr int kMaxCborDepth = 256;

inline void put_head(Bytes& out, std::uint8_t major, std::uint64_t arg) {
  const std::uint8_t mt = static_cast<std::uint8_t>(major << 5);
  if (arg < 24) {
    out.push_back(static_cast<std::uint8_t>(mt | arg));
  } else if (arg <= 0xFF) {
    out.push_back(mt | 24);
    out.push_back(static_cast<std::uint8_t>(arg));
  } else if (arg <= 0xFFFF) {
    out.push_back(mt | 25);
    for (int s = 8; s >= 0; s -= 8) out.push_back(std::uint8_t(arg >> s));
  } else if (arg <= 0xFFFFFFFFull) {
    out.push_back(mt | 26);
    for (int s = 24; s >= 0; s -= 8) out.push_back(std::uint8_t(arg >> s));
  } else {
    out.push_back(mt | 27);
    for (int s = 56; s >= 0; s -= 8) out.push_back(std::uint8_t(arg >> s));
  }
}

/// Half-precision bits for d if the conversion is exact.
inline bool to_half_exact(double d, std::uint16_t& half) {
  if (std::isnan(d)) {
    half = 0x7E00;
    return true;
  }
  const float f = static_cast<float>(d);
  if (static_cast<double>(f) != d) return false;
  const std::uint32_t bits = std::bit_cast<std::uint32_t>(f);
  const std::uint16_t sign = static_cast<std::uint16_t>((bits >> 16) & 0x8000);
  const int exp = static_cast<int>((bits >> 23) & 0xFF);
  const std::uint32_t mant = bits & 0x7FFFFF;
  if (exp == 0xFF) {  // infinity (NaN handled above)
    half = sign | 0x7C00;
    return true;
  }
  if (exp == 0 && mant == 0) {
    half = sign;
    return true;
  }
  if (exp == 0) return false;  // float32 subnormals are below half range
  const int e = exp - 127;
  if (e >= -14 && e <= 15) {
    if (mant & 0x1FFF) return false;
    half = static_cast<std::uint16_t>(sign | ((e + 15) << 10) | (mant >> 13));
    return true;
  }
  if (e >= -24 && e < -14) {
    const std::uint32_t full = mant | 0x800000;
    const int shift = -1 - e;
    if (full & ((1u << shift) - 1)) return false;
    half = static_cast<std::uint16_t>(sign | (full >> shift));
    return true;
  }
  return false;
}

inline double from_half(std::uint16_t h) {
  const int exp = (h >> 10) & 0x1F;
  const int mant = h & 0x3FF;
  double v;
  if (exp == 0) {
    v = std::ldexp(mant, -24);
  } else if (exp != 31) {
    v = std::ldexp(mant + 1024, exp - 25);
  } else {
    v = mant == 0 ? std::numeric_limits<double>::infinity()
                  : std::numeric_limits<double>::quiet_NaN();
  }
  return (h & 0x8000) ? -v : v;
}

inline void encode_into(Bytes& out, const CborItem& item) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::uint64_t>) {
          put_head(out, 0, x);
        } else if constexpr (std::is_same_v<T, CborNegative>) {
          put_head(out, 1, x.minus_one);
        } else if constexpr (std::is_same_v<T, std::string>) {
          put_head(out, 3, x.size());
          out.insert(out.end(), x.begin(), x.end());
        } else if constexpr (std::is_same_v<T, CborArray>) {
          put_head(out, 4, x.size());
          for (const auto& e : x) encode_into(out, e);
        } else if constexpr (std::is_same_v<T, CborMap>) {
          put_head(out, 5, x.size());
          for (const auto& e : x) {
            encode_into(out, e.key);
            encode_into(out, e.value);
          }
        } else if constexpr (std::is_same_v<T, CborTagged>) {
          if (!x.content) {
            throw Error(Errc::kUnsupportedItem, "tag without content");
          }
          put_head(out, 6, x.number);
          encode_into(out, *x.content);
        } else if constexpr (std::is_same_v<T, CborFloat>) {
          std::uint16_t half;
          if (to_half_exact(x.value, half)) {
            out.push_back(0xF9);
            out.push_back(std::uint8_t(half >> 8));
            out.push_back(std::uint8_t(half));
          } else if (static_cast<double>(static_cast<float>(x.value)) ==
                     x.value) {
            const auto bits =
                std::bit_cast<std::uint32_t>(static_cast<float>(x.value));
            out.push_back(0xFA);
            for (int s = 24; s >= 0; s -= 8) out.push_back(std::uint8_t(bits >> s));
          } else {
            const auto bits = std::bit_cast<std::uint64_t>(x.value);
            out.push_back(0xFB);
            for (int s = 56; s >= 0; s -= 8) out.push_back(std::uint8_t(bits >> s));
          }
        } else {
          out.push_back(static_cast<std::uint8_t>(0xE0 | std::uint8_t(x)));
        }
      },
      item.storage());
}

class CborReader {
 public:
  CborReader(std::span<const std::uint8_t> buf, std::size_t pos, CborMode mode)
      : buf_(buf), pos_(pos), mode_(mode) {}

  std::size_t pos() const { return pos_; }

  CborItem read(int depth) {
    if (depth > kMaxCborDepth) {
      throw Error(Errc::kUnsupportedItem, "nesting too deep");
    }
    const std::size_t start = pos_;
    const std::uint8_t initial = byte();
    const std::uint8_t major = initial >> 5;
    const std::uint8_t info = initial & 0x1F;

    if (major == 7) return read_major7(start, info);

    const std::uint64_t arg = argument(start, info);
    switch (major) {
      case 0: return CborItem::uint(arg);
      case 1: return CborItem::negative(arg);
      case 2:
        throw Error(Errc::kUnsupportedItem,
                    "byte string at offset " + std::to_string(start));
      case 3: {
        need(arg);
        std::string s(reinterpret_cast<const char*>(buf_.data() + pos_),
                      static_cast<std::size_t>(arg));
        pos_ += static_cast<std::size_t>(arg);
        return CborItem::text(std::move(s));
      }
      case 4: {
        need(arg);  // every item occupies at least one byte
        CborArray items;
        items.reserve(static_cast<std::size_t>(arg));
        for (std::uint64_t i = 0; i < arg; ++i) items.push_back(read(depth + 1));
        return CborItem::array(std::move(items));
      }
      case 5: {
        need(arg);
        CborMap entries;
        entries.reserve(static_cast<std::size_t>(arg));
        for (std::uint64_t i = 0; i < arg; ++i) {
          CborItem k = read(depth + 1);
          CborItem v = read(depth + 1);
          entries.push_back(CborMapEntry{std::move(k), std::move(v)});
        }
        return CborItem::map(std::move(entries));
      }
      default: {  // 6
        CborItem content = read(depth + 1);
        return CborItem::tag(arg, std::move(content));
      }
    }
  }

 private:
  void need(std::uint64_t n) const {
    if (n > buf_.size() - pos_) {
      throw Error(Errc::kTruncated,
                  "need " + std::to_string(n) + " bytes at offset " +
                      std::to_string(pos_));
    }
  }

  std::uint8_t byte() {
    need(1);
    return buf_[pos_++];
  }

  std::uint64_t big_endian(int n) {
    need(static_cast<std::uint64_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v = (v << 8) | buf_[pos_++];
    return v;
  }

  [[noreturn]] void non_canonical(std::size_t at) const {
    throw Error(Errc::kNonCanonical,
                "non-shortest encoding at offset " + std::to_string(at));
  }

  std::uint64_t argument(std::size_t start, std::uint8_t info) {
    if (info < 24) return info;
    std::uint64_t v;
    std::uint64_t floor;
    switch (info) {
      case 24: v = big_endian(1); floor = 24; break;
      case 25: v = big_endian(2); floor = 0x100; break;
      case 26: v = big_endian(4); floor = 0x10000; break;
      case 27: v = big_endian(8); floor = 0x100000000ull; break;
      case 31:
        throw Error(Errc::kUnsupportedItem,
                    "indefinite length at offset " + std::to_string(start));
      default:
        throw Error(Errc::kMalformed, "reserved additional info " +
                                          std::to_string(info) + " at offset " +
                                          std::to_string(start));
    }
    if (mode_ == CborMode::kStrict && v < floor) non_canonical(start);
    return v;
  }

  CborItem read_major7(std::size_t start, std::uint8_t info) {
    switch (info) {
      case 20: return CborItem::simple(CborSimple::kFalse);
      case 21: return CborItem::simple(CborSimple::kTrue);
      case 22: return CborItem::simple(CborSimple::kNull);
      case 25: {
        const auto h = static_cast<std::uint16_t>(big_endian(2));
        const double d = from_half(h);
        if (mode_ == CborMode::kStrict && std::isnan(d) && h != 0x7E00) {
          non_canonical(start);
        }
        return CborItem::float64(d);
      }
      case 26: {
        const auto bits = static_cast<std::uint32_t>(big_endian(4));
        const double d = std::bit_cast<float>(bits);
        std::uint16_t half;
        if (mode_ == CborMode::kStrict && to_half_exact(d, half)) {
          non_canonical(start);
        }
        return CborItem::float64(d);
      }
      case 27: {
        const double d = std::bit_cast<double>(big_endian(8));
        std::uint16_t half;
        if (mode_ == CborMode::kStrict &&
            (to_half_exact(d, half) ||
             static_cast<double>(static_cast<float>(d)) == d)) {
          non_canonical(start);
        }
        return CborItem::float64(d);
      }
      case 28: case 29: case 30:
        throw Error(Errc::kMalformed, "reserved additional info at offset " +
                                          std::to_string(start));
      default:
        throw Error(Errc::kUnsupportedItem,
                    "unsupported simple value at offset " +
                        std::to_string(start));
    }
  }

  std::span<const std::uint8_t> buf_;
  std::size_t pos_;
  CborMode mode_;
};

}  // namespace detail

/// Canonical encoding of one item.
inline Bytes encode_item(const CborItem& item) {
  Bytes out;
  detail::encode_into(out, item);
  return out;
}

inline void encode_item(const CborItem& item, Bytes& out) {
  detail::encode_into(out, item);
}

/// Decodes the item starting at buf[offset]. Throws kTruncated, kMalformed,
/// kNonCanonical (strict mode only) or kUnsupportedItem.
inline CborDecoded decode_item(std::span<const std::uint8_t> buf,
                               std::size_t offset = 0,
                               CborMode mode = CborMode::kStrict) {
  if (offset > buf.size()) {
    throw Error(Errc::kTruncated, "offset past end of buffer");
  }
  detail::CborReader reader(buf, offset, mode);
  CborItem item = reader.read(0);
  return CborDecoded{std::move(item), reader.pos()};
}

inline std::size_t encoded_size(const CborItem& item) {
  return encode_item(item).size();
}

}  // namespace cbl

#endif  // CBL_CBOR_HPP_
