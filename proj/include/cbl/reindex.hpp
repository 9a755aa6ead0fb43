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

#ifndef CBL_REINDEX_HPP_
#define CBL_REINDEX_HPP_

// Per-message re-indexation dictionary.
//
// Only the terms a message actually uses are listed, so the structure can
// point at them with a few bits. Keys are static ids above the reserved range
// (wire key index = 6 + position; ids 0..5 are implied). Values form one flat
// array split into three regions:
//
//   [literal arrays...] [static ids, ascending...] [strings, byte-sorted...]
//
// On the wire both id runs are delta coded, and a string that differs from
// its predecessor only by a numeric suffix becomes [-drop, append].
// A decoder recovers the regions from the CBOR item types alone: arrays
// before the first integer are literal arrays, and arrays after the first
// text or tag are string ops.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "cbl/cbor.hpp"
#include "cbl/error.hpp"
#include "cbl/json.hpp"
#include "cbl/static_dictionary.hpp"

namespace cbl {

inline constexpr std::uint64_t kLiteralNumberTag = 1040;
inline constexpr std::uint64_t kDateTimeTag = 1041;

// ---------------------------------------------------------------------------
// Delta coding of ascending id runs.

inline std::vector<std::uint64_t> delta_encode_ints(
    std::span<const std::uint64_t> xs) {
  std::vector<std::uint64_t> out;
  out.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i == 0) {
      out.push_back(xs[0]);
      continue;
    }
    if (xs[i] <= xs[i - 1]) {
      throw Error(Errc::kNotSorted, "element " + std::to_string(i) +
                                        " is not above its predecessor");
    }
    out.push_back(xs[i] - xs[i - 1]);
  }
  return out;
}

inline std::vector<std::uint64_t> delta_decode_ints(
    std::span<const std::uint64_t> ds) {
  std::vector<std::uint64_t> out;
  out.reserve(ds.size());
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i > 0 && ds[i] == 0) {
      throw Error(Errc::kNotSorted, "zero delta at " + std::to_string(i));
    }
    if (ds[i] > UINT64_MAX - acc) {
      throw Error(Errc::kMalformed, "delta overflows 64 bits");
    }
    acc += ds[i];
    out.push_back(acc);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Value entries.

struct StaticIdValue {
  TermId id = 0;
  friend bool operator==(const StaticIdValue&, const StaticIdValue&) = default;
};

struct LiteralString {
  std::string text;
  friend bool operator==(const LiteralString&, const LiteralString&) = default;
};

struct LiteralNumber {
  std::string lexical;
  friend bool operator==(const LiteralNumber&, const LiteralNumber&) = default;
};

/// JSON true, false or null used as a value.
struct LiteralAtom {
  JsonValue value;
  friend bool operator==(const LiteralAtom&, const LiteralAtom&) = default;
};

/// An array of scalars carried whole, e.g. a series of measurements.
struct LiteralArray {
  JsonArray items;
  friend bool operator==(const LiteralArray&, const LiteralArray&) = default;
};

/// Timestamp with explicit UTC offset, kept so it renders back identically.
struct DateTimeValue {
  std::int64_t epoch_seconds = 0;
  std::int32_t offset_minutes = 0;
  friend bool operator==(const DateTimeValue&, const DateTimeValue&) = default;
};

/// Drop `drop` trailing bytes of the previous string, append `append` in
/// decimal.
struct StringOp {
  std::uint64_t drop = 0;
  std::uint64_t append = 0;
  friend bool operator==(const StringOp&, const StringOp&) = default;
};

using ValueEntry = std::variant<StaticIdValue, LiteralArray, LiteralString,
                                LiteralNumber, LiteralAtom, DateTimeValue,
                                StringOp>;

struct ReindexDictionary {
  std::vector<TermId> keys;
  std::vector<ValueEntry> values;
  friend bool operator==(const ReindexDictionary&,
                         const ReindexDictionary&) = default;
};

/// Identity of a leaf value independent of how it is encoded.
enum class LeafKind : std::uint8_t { kString, kNumber, kAtom, kDataArray };

struct LeafKey {
  LeafKind kind = LeafKind::kString;
  std::string text;
  friend auto operator<=>(const LeafKey&, const LeafKey&) = default;
};

inline LeafKey leaf_key(const JsonValue& v) {
  if (v.is_string()) return {LeafKind::kString, v.as_string()};
  if (v.is_number()) return {LeafKind::kNumber, v.as_number().lexical};
  if (is_data_array(v)) return {LeafKind::kDataArray, serialize_json(v)};
  if (v.is_bool() || v.is_null()) return {LeafKind::kAtom, serialize_json(v)};
  throw Error(Errc::kMalformed, "container is not a leaf value");
}

/// Wire indices of every key and leaf value used by one document.
struct TermIndexMaps {
  std::map<std::string, std::uint64_t, std::less<>> keys;
  std::map<LeafKey, std::uint64_t> values;

  std::uint64_t key_index(std::string_view term) const {
    auto it = keys.find(term);
    if (it == keys.end()) {
      throw Error(Errc::kUnknownKeyTerm, std::string(term));
    }
    return it->second;
  }

  std::uint64_t value_index(const JsonValue& leaf) const {
    auto it = values.find(leaf_key(leaf));
    if (it == values.end()) {
      throw Error(Errc::kMalformed, "leaf missing from value index");
    }
    return it->second;
  }
};

// ---------------------------------------------------------------------------
// Numbers and timestamps.

/// Integer form of a number's lexical text when it is a canonical JSON
/// integer that fits 64 bits; other numbers travel as text.
inline std::optional<CborItem> canonical_integer(std::string_view lexical) {
  const bool negative = !lexical.empty() && lexical.front() == '-';
  std::string_view digits = negative ? lexical.substr(1) : lexical;
  if (digits.empty() || digits.size() > 20) return std::nullopt;
  if (digits.size() > 1 && digits.front() == '0') return std::nullopt;
  for (char c : digits) {
    if (c < '0' || c > '9') return std::nullopt;
  }
  // -2^64 is the one negative CBOR integer whose magnitude overflows.
  if (negative && digits == "18446744073709551616") {
    return CborItem::negative(UINT64_MAX);
  }
  std::uint64_t mag = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(),
                                   mag);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    return std::nullopt;
  }
  if (!negative) return CborItem::uint(mag);
  if (mag == 0) return std::nullopt;  // "-0" must keep its sign
  return CborItem::negative(mag - 1);
}

inline std::string integer_lexical(const CborItem& item) {
  if (item.is_uint()) return std::to_string(item.as_uint());
  const std::uint64_t m = item.as_negative().minus_one;
  if (m == UINT64_MAX) return "-18446744073709551616";
  return "-" + std::to_string(m + 1);
}

namespace detail {

// Days since 1970-01-01 for a proleptic Gregorian date.
inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m,
                            unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y = static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2);
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

/// Renders YYYY-MM-DDTHH:MM:SS+HH:MM.
inline std::string render_datetime(const DateTimeValue& dt) {
  const std::int64_t local = dt.epoch_seconds + dt.offset_minutes * 60;
  const std::int64_t days = detail::floor_div(local, 86400);
  const std::int64_t secs = local - days * 86400;
  std::int64_t y;
  unsigned m, d;
  detail::civil_from_days(days, y, m, d);
  const int off = dt.offset_minutes < 0 ? -dt.offset_minutes : dt.offset_minutes;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02d:%02d:%02d%c%02d:%02d",
                static_cast<long long>(y), m, d, int(secs / 3600),
                int(secs / 60 % 60), int(secs % 60),
                dt.offset_minutes < 0 ? '-' : '+', off / 60, off % 60);
  return buf;
}

/// Parses a timestamp that render_datetime reproduces byte for byte;
/// anything else (fractions, 'Z', -00:00, out-of-range fields) is rejected.
inline std::optional<DateTimeValue> parse_datetime(std::string_view s) {
  if (s.size() != 25) return std::nullopt;
  auto num = [&](std::size_t pos, std::size_t len, int& out) {
    out = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
      out = out * 10 + (s[i] - '0');
    }
    return true;
  };
  int y, mo, d, h, mi, se, oh, om;
  if (!num(0, 4, y) || s[4] != '-' || !num(5, 2, mo) || s[7] != '-' ||
      !num(8, 2, d) || s[10] != 'T' || !num(11, 2, h) || s[13] != ':' ||
      !num(14, 2, mi) || s[16] != ':' || !num(17, 2, se) ||
      (s[19] != '+' && s[19] != '-') || !num(20, 2, oh) || s[22] != ':' ||
      !num(23, 2, om)) {
    return std::nullopt;
  }
  if (mo < 1 || mo > 12 || d < 1 || h > 23 || mi > 59 || se > 59 || oh > 23 ||
      om > 59) {
    return std::nullopt;
  }
  int offset = oh * 60 + om;
  if (s[19] == '-') {
    if (offset == 0) return std::nullopt;
    offset = -offset;
  }
  const std::int64_t days =
      detail::days_from_civil(y, unsigned(mo), unsigned(d));
  DateTimeValue dt{days * 86400 + h * 3600 + mi * 60 + se - offset * 60,
                   offset};
  if (render_datetime(dt) != s) return std::nullopt;  // e.g. Feb 30
  return dt;
}

// ---------------------------------------------------------------------------
// String suffix ops.

inline std::string resolve_string_op(std::string_view prev, const StringOp& op) {
  if (op.drop > prev.size()) {
    throw Error(Errc::kDropTooLong, "drop " + std::to_string(op.drop) +
                                        " exceeds length " +
                                        std::to_string(prev.size()));
  }
  std::string out(prev.substr(0, prev.size() - op.drop));
  out += std::to_string(op.append);
  return out;
}

namespace detail {

inline CborItem string_op_item(const StringOp& op) {
  return CborItem::array(
      {CborItem::negative(op.drop - 1), CborItem::uint(op.append)});
}

}  // namespace detail

/// Suffix op turning prev into cur, if one exists and its encoding is
/// strictly smaller than the literal string. The kept prefix is non-empty,
/// at least one byte is dropped, and the appended digits carry no leading
/// zero so that resolving the op reproduces cur exactly.
inline std::optional<StringOp> make_string_op(std::string_view prev,
                                              std::string_view cur) {
  std::size_t common = 0;
  while (common < prev.size() && common < cur.size() &&
         prev[common] == cur[common]) {
    ++common;
  }
  std::size_t digits_from = cur.size();
  while (digits_from > 0 && cur[digits_from - 1] >= '0' &&
         cur[digits_from - 1] <= '9') {
    --digits_from;
  }
  const std::size_t lo = std::max<std::size_t>(digits_from, 1);
  std::size_t hi = std::min(common, cur.size() - (cur.empty() ? 0 : 1));
  if (cur.empty() || hi < lo) return std::nullopt;
  for (std::size_t keep = hi + 1; keep-- > lo;) {
    if (keep >= prev.size()) continue;
    std::string_view suffix = cur.substr(keep);
    if (suffix.size() > 1 && suffix.front() == '0') continue;
    std::uint64_t append = 0;
    auto [ptr, ec] =
        std::from_chars(suffix.data(), suffix.data() + suffix.size(), append);
    if (ec != std::errc() || ptr != suffix.data() + suffix.size()) continue;
    StringOp op{prev.size() - keep, append};
    if (encoded_size(detail::string_op_item(op)) >=
        encoded_size(CborItem::text(std::string(cur)))) {
      return std::nullopt;
    }
    return op;
  }
  return std::nullopt;
}

/// Encodes byte-sorted strings: the first stays literal, each later one
/// becomes a suffix op against its predecessor when that is smaller.
inline std::vector<ValueEntry> encode_string_region(
    std::span<const std::string> sorted) {
  std::vector<ValueEntry> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i > 0) {
      if (auto op = make_string_op(sorted[i - 1], sorted[i])) {
        out.emplace_back(*op);
        continue;
      }
    }
    out.emplace_back(LiteralString{sorted[i]});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Building the dictionary for a document.

struct ExtractOptions {
  bool string_delta = true;
  bool epoch_dates = false;
};

namespace detail {

inline void collect_terms(const JsonValue& v, std::set<std::string>& keys,
                          std::set<LeafKey>& leaves,
                          std::map<LeafKey, JsonValue>& samples) {
  if (is_leaf(v)) {
    LeafKey k = leaf_key(v);
    if (leaves.insert(k).second) samples.emplace(std::move(k), v);
    return;
  }
  if (v.is_array()) {
    for (const auto& e : v.as_array()) collect_terms(e, keys, leaves, samples);
    return;
  }
  for (const auto& m : v.as_map()) {
    keys.insert(m.key);
    collect_terms(m.value, keys, leaves, samples);
  }
}

}  // namespace detail

/// Lists the keys and leaf values of doc and assigns their wire indices.
/// Throws kUnknownKeyTerm for a key the static dictionary lacks; unknown
/// value strings become literals.
inline std::pair<ReindexDictionary, TermIndexMaps> extract_terms(
    const JsonValue& doc, const StaticDictionary& dict,
    const ExtractOptions& opts = {}) {
  std::set<std::string> key_terms;
  std::set<LeafKey> leaves;
  std::map<LeafKey, JsonValue> samples;
  detail::collect_terms(doc, key_terms, leaves, samples);

  ReindexDictionary rd;
  TermIndexMaps maps;

  std::map<TermId, std::string> key_ids;
  for (const auto& term : key_terms) {
    auto id = dict.lookup_id(term);
    if (!id) throw Error(Errc::kUnknownKeyTerm, term);
    if (*id < kReservedCount) {
      maps.keys.emplace(term, *id);
    } else {
      key_ids.emplace(*id, term);
    }
  }
  for (const auto& [id, term] : key_ids) {
    maps.keys.emplace(term, kReservedCount + rd.keys.size());
    rd.keys.push_back(id);
  }

  std::vector<LeafKey> arrays;
  std::map<TermId, LeafKey> static_values;
  std::vector<LeafKey> region;
  for (const auto& leaf : leaves) {
    if (leaf.kind == LeafKind::kDataArray) {
      arrays.push_back(leaf);
    } else if (leaf.kind == LeafKind::kString) {
      if (auto id = dict.lookup_id(leaf.text)) {
        static_values.emplace(*id, leaf);
      } else {
        region.push_back(leaf);
      }
    } else {
      region.push_back(leaf);
    }
  }
  std::sort(region.begin(), region.end(), [](const LeafKey& a, const LeafKey& b) {
    return std::tie(a.text, a.kind) < std::tie(b.text, b.kind);
  });

  auto assign = [&](const LeafKey& k) {
    maps.values.emplace(k, rd.values.size());
  };
  for (const auto& k : arrays) {
    assign(k);
    rd.values.emplace_back(LiteralArray{samples.at(k).as_array()});
  }
  for (const auto& [id, k] : static_values) {
    assign(k);
    rd.values.emplace_back(StaticIdValue{id});
  }
  const std::string* prev = nullptr;
  for (const auto& k : region) {
    assign(k);
    switch (k.kind) {
      case LeafKind::kNumber:
        rd.values.emplace_back(LiteralNumber{k.text});
        break;
      case LeafKind::kAtom:
        rd.values.emplace_back(LiteralAtom{samples.at(k)});
        break;
      default: {
        std::optional<DateTimeValue> dt;
        std::optional<StringOp> op;
        if (opts.epoch_dates) dt = parse_datetime(k.text);
        if (!dt && opts.string_delta && prev) op = make_string_op(*prev, k.text);
        if (dt) {
          rd.values.emplace_back(*dt);
        } else if (op) {
          rd.values.emplace_back(*op);
        } else {
          rd.values.emplace_back(LiteralString{k.text});
        }
      }
    }
    prev = &k.text;
  }
  return {std::move(rd), std::move(maps)};
}

// ---------------------------------------------------------------------------
// Wire form.

namespace detail {

enum class Region { kArrays, kIds, kStrings };

inline Region region_of(const ValueEntry& v) {
  if (std::holds_alternative<LiteralArray>(v)) return Region::kArrays;
  if (std::holds_alternative<StaticIdValue>(v)) return Region::kIds;
  return Region::kStrings;
}

inline CborItem number_item(const std::string& lexical) {
  if (auto i = canonical_integer(lexical)) return *i;
  return CborItem::text(lexical);
}

inline CborItem atom_item(const JsonValue& v) {
  if (v.is_null()) return CborItem::simple(CborSimple::kNull);
  return CborItem::simple(v.as_bool() ? CborSimple::kTrue : CborSimple::kFalse);
}

inline JsonValue atom_value(CborSimple s) {
  switch (s) {
    case CborSimple::kFalse: return JsonValue(false);
    case CborSimple::kTrue: return JsonValue(true);
    default: return JsonValue(JsonNull{});
  }
}

// Inside a literal array integers are bare, other numbers are tagged text
// and strings are plain text.
inline CborItem array_element_item(const JsonValue& v) {
  if (v.is_number()) {
    if (auto i = canonical_integer(v.as_number().lexical)) return *i;
    return CborItem::tag(kLiteralNumberTag,
                         CborItem::text(v.as_number().lexical));
  }
  if (v.is_string()) return CborItem::text(v.as_string());
  if (v.is_bool() || v.is_null()) return atom_item(v);
  throw Error(Errc::kUnsupportedItem, "literal array holds a container");
}

inline JsonValue array_element_value(const CborItem& item) {
  if (item.is_uint() || item.is_negative()) {
    return JsonValue::number(integer_lexical(item));
  }
  if (item.is_text()) return JsonValue(item.as_text());
  if (item.is_simple()) return atom_value(item.as_simple());
  if (item.is_tag() && item.as_tag().number == kLiteralNumberTag &&
      item.as_tag().content->is_text()) {
    return JsonValue::number(item.as_tag().content->as_text());
  }
  throw Error(Errc::kMalformed, "bad literal array element");
}

inline std::vector<std::uint64_t> uint_array(const CborItem& item,
                                             const char* what) {
  if (!item.is_array()) {
    throw Error(Errc::kMalformed, std::string(what) + " must be an array");
  }
  std::vector<std::uint64_t> out;
  for (const auto& e : item.as_array()) {
    if (!e.is_uint()) {
      throw Error(Errc::kMalformed, std::string(what) + " holds a non-uint");
    }
    out.push_back(e.as_uint());
  }
  return out;
}

}  // namespace detail

/// Checks region order and id monotonicity; throws kRegionOrderViolation.
inline void validate_reindex(const ReindexDictionary& rd) {
  for (std::size_t i = 0; i < rd.keys.size(); ++i) {
    if (rd.keys[i] < kReservedCount) {
      throw Error(Errc::kRegionOrderViolation, "reserved id in keys");
    }
    if (i > 0 && rd.keys[i] <= rd.keys[i - 1]) {
      throw Error(Errc::kNotSorted, "keys must be strictly increasing");
    }
  }
  detail::Region region = detail::Region::kArrays;
  const TermId* last_id = nullptr;
  bool have_string = false;
  for (const auto& v : rd.values) {
    const detail::Region r = detail::region_of(v);
    if (r < region) {
      throw Error(Errc::kRegionOrderViolation, "value regions out of order");
    }
    region = r;
    if (const auto* id = std::get_if<StaticIdValue>(&v)) {
      if (last_id && id->id <= *last_id) {
        throw Error(Errc::kNotSorted, "static ids must be strictly increasing");
      }
      last_id = &id->id;
    }
    if (const auto* op = std::get_if<StringOp>(&v)) {
      if (!have_string) {
        throw Error(Errc::kRegionOrderViolation, "string op without predecessor");
      }
      if (op->drop == 0) throw Error(Errc::kMalformed, "string op drops nothing");
    }
    if (r == detail::Region::kStrings) have_string = true;
  }
}

/// CBOR [keys, values]. With delta set, key and id runs are delta coded.
inline CborItem reindex_item(const ReindexDictionary& rd, bool delta = true) {
  validate_reindex(rd);
  std::vector<std::uint64_t> keys = rd.keys;
  if (delta) keys = delta_encode_ints(keys);
  CborArray key_items;
  for (auto k : keys) key_items.push_back(CborItem::uint(k));

  std::vector<std::uint64_t> ids;
  for (const auto& v : rd.values) {
    if (const auto* id = std::get_if<StaticIdValue>(&v)) ids.push_back(id->id);
  }
  if (delta) ids = delta_encode_ints(ids);

  CborArray values;
  std::size_t next_id = 0;
  for (const auto& v : rd.values) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, StaticIdValue>) {
            values.push_back(CborItem::uint(ids[next_id++]));
          } else if constexpr (std::is_same_v<T, LiteralArray>) {
            CborArray items;
            for (const auto& e : x.items) {
              items.push_back(detail::array_element_item(e));
            }
            values.push_back(CborItem::array(std::move(items)));
          } else if constexpr (std::is_same_v<T, LiteralString>) {
            values.push_back(CborItem::text(x.text));
          } else if constexpr (std::is_same_v<T, LiteralNumber>) {
            values.push_back(
                CborItem::tag(kLiteralNumberTag, detail::number_item(x.lexical)));
          } else if constexpr (std::is_same_v<T, LiteralAtom>) {
            values.push_back(detail::atom_item(x.value));
          } else if constexpr (std::is_same_v<T, DateTimeValue>) {
            values.push_back(CborItem::tag(
                kDateTimeTag, CborItem::array({CborItem::integer(x.epoch_seconds),
                                               CborItem::integer(x.offset_minutes)})));
          } else {
            values.push_back(detail::string_op_item(x));
          }
        },
        v);
  }
  return CborItem::array(
      {CborItem::array(std::move(key_items)), CborItem::array(std::move(values))});
}

inline Bytes serialize_reindex(const ReindexDictionary& rd, bool delta = true) {
  return encode_item(reindex_item(rd, delta));
}

/// Inverse of reindex_item. Region boundaries are inferred from item types.
inline ReindexDictionary reindex_from_item(const CborItem& item,
                                           bool delta = true) {
  if (!item.is_array() || item.as_array().size() != 2) {
    throw Error(Errc::kMalformed, "dictionary must be [keys, values]");
  }
  ReindexDictionary rd;
  rd.keys = detail::uint_array(item.as_array()[0], "keys");
  if (delta) rd.keys = delta_decode_ints(rd.keys);

  const CborItem& values = item.as_array()[1];
  if (!values.is_array()) throw Error(Errc::kMalformed, "values must be an array");

  detail::Region region = detail::Region::kArrays;
  std::vector<std::uint64_t> ids;
  for (const auto& v : values.as_array()) {
    if (v.is_uint()) {
      if (region == detail::Region::kStrings) {
        throw Error(Errc::kRegionOrderViolation, "integer after string region");
      }
      region = detail::Region::kIds;
      ids.push_back(v.as_uint());
      rd.values.emplace_back(StaticIdValue{});
    } else if (v.is_array()) {
      if (region == detail::Region::kArrays) {
        LiteralArray arr;
        for (const auto& e : v.as_array()) {
          arr.items.push_back(detail::array_element_value(e));
          if (!arr.items.back().is_number()) {
            throw Error(Errc::kMalformed, "literal array holds a non-number");
          }
        }
        if (arr.items.empty()) throw Error(Errc::kMalformed, "empty literal array");
        rd.values.emplace_back(std::move(arr));
      } else if (region == detail::Region::kIds) {
        throw Error(Errc::kRegionOrderViolation, "array inside id region");
      } else {
        const auto& a = v.as_array();
        if (a.size() != 2 || !a[0].is_negative() || !a[1].is_uint() ||
            a[0].as_negative().minus_one == UINT64_MAX) {
          throw Error(Errc::kMalformed, "string op must be [-drop, append]");
        }
        rd.values.emplace_back(
            StringOp{a[0].as_negative().minus_one + 1, a[1].as_uint()});
      }
    } else {
      region = detail::Region::kStrings;
      if (v.is_text()) {
        rd.values.emplace_back(LiteralString{v.as_text()});
      } else if (v.is_simple()) {
        rd.values.emplace_back(LiteralAtom{detail::atom_value(v.as_simple())});
      } else if (v.is_tag() && v.as_tag().number == kLiteralNumberTag) {
        const CborItem& c = *v.as_tag().content;
        if (c.is_uint() || c.is_negative()) {
          rd.values.emplace_back(LiteralNumber{integer_lexical(c)});
        } else if (c.is_text()) {
          rd.values.emplace_back(LiteralNumber{c.as_text()});
        } else {
          throw Error(Errc::kMalformed, "bad literal number");
        }
      } else if (v.is_tag() && v.as_tag().number == kDateTimeTag) {
        const CborItem& c = *v.as_tag().content;
        auto as_int = [](const CborItem& i) -> std::int64_t {
          if (i.is_uint() && i.as_uint() <= INT64_MAX) {
            return static_cast<std::int64_t>(i.as_uint());
          }
          if (i.is_negative() && i.as_negative().minus_one <= INT64_MAX) {
            return -static_cast<std::int64_t>(i.as_negative().minus_one) - 1;
          }
          throw Error(Errc::kMalformed, "bad timestamp field");
        };
        if (!c.is_array() || c.as_array().size() != 2) {
          throw Error(Errc::kMalformed, "timestamp must be [epoch, offset]");
        }
        const std::int64_t off = as_int(c.as_array()[1]);
        if (off < -24 * 60 || off > 24 * 60) {
          throw Error(Errc::kMalformed, "timestamp offset out of range");
        }
        rd.values.emplace_back(
            DateTimeValue{as_int(c.as_array()[0]), static_cast<std::int32_t>(off)});
      } else {
        throw Error(Errc::kMalformed, "unexpected item in values");
      }
    }
  }
  if (delta) ids = delta_decode_ints(ids);
  std::size_t next_id = 0;
  for (auto& v : rd.values) {
    if (auto* id = std::get_if<StaticIdValue>(&v)) id->id = ids[next_id++];
  }
  validate_reindex(rd);
  return rd;
}

/// Decodes the dictionary section at buf[offset]; returns it with the offset
/// one past it.
inline std::pair<ReindexDictionary, std::size_t> deserialize_reindex(
    std::span<const std::uint8_t> buf, std::size_t offset = 0,
    bool delta = true) {
  CborDecoded d = decode_item(buf, offset);
  return {reindex_from_item(d.item, delta), d.next};
}

// ---------------------------------------------------------------------------
// Resolution against the static dictionary.

/// Key terms by wire key index: 0..5 reserved, then the keys array.
inline std::vector<std::string> resolve_keys(const ReindexDictionary& rd,
                                             const StaticDictionary& dict) {
  std::vector<std::string> out(kReservedTerms.begin(), kReservedTerms.end());
  for (TermId id : rd.keys) {
    auto term = dict.lookup_term(id);
    if (!term) {
      throw Error(Errc::kUnknownTermId, "key id " + std::to_string(id));
    }
    out.emplace_back(*term);
  }
  return out;
}

/// Leaf values by wire value index.
inline std::vector<JsonValue> resolve_values(const ReindexDictionary& rd,
                                             const StaticDictionary& dict) {
  std::vector<JsonValue> out;
  out.reserve(rd.values.size());
  std::string prev;
  for (const auto& v : rd.values) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, StaticIdValue>) {
            auto term = dict.lookup_term(x.id);
            if (!term) {
              throw Error(Errc::kUnknownTermId, "value id " + std::to_string(x.id));
            }
            out.emplace_back(std::string(*term));
          } else if constexpr (std::is_same_v<T, LiteralArray>) {
            out.emplace_back(x.items);
          } else if constexpr (std::is_same_v<T, LiteralString>) {
            prev = x.text;
            out.emplace_back(x.text);
          } else if constexpr (std::is_same_v<T, LiteralNumber>) {
            prev = x.lexical;
            out.push_back(JsonValue::number(x.lexical));
          } else if constexpr (std::is_same_v<T, LiteralAtom>) {
            prev = serialize_json(x.value);
            out.push_back(x.value);
          } else if constexpr (std::is_same_v<T, DateTimeValue>) {
            prev = render_datetime(x);
            out.emplace_back(prev);
          } else {
            prev = resolve_string_op(prev, x);
            out.emplace_back(prev);
          }
        },
        v);
  }
  return out;
}

}  // namespace cbl

#endif  // CBL_REINDEX_HPP_
