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

#ifndef CBL_PIPELINE_HPP_
#define CBL_PIPELINE_HPP_

// Whole-message encode and decode.
//
// Standard message layout, with no header:
//
//   dictionary   CBOR [keys, values] (re-indexation dictionary)
//   length       CBOR uint: bit length of the structure bitmap
//   body         structure bitmap, then the packed index list, as one bit
//                stream zero padded to a byte boundary
//
// Variants: kCborMap sends the dictionary followed by the document as a
// CBOR tree of re-indexed integers in place of length and body. kGzipAfter
// gzips a standard message. With framing, a version/flags byte and the
// static dictionary fingerprint precede everything.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cbl/bits.hpp"
#include "cbl/cbor.hpp"
#include "cbl/deflate.hpp"
#include "cbl/error.hpp"
#include "cbl/index_codec.hpp"
#include "cbl/json.hpp"
#include "cbl/reindex.hpp"
#include "cbl/static_dictionary.hpp"
#include "cbl/structure.hpp"

namespace cbl {

enum class Variant : std::uint8_t { kStandard = 0, kCborMap = 1, kGzipAfter = 2 };

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kStandard: return "standard";
    case Variant::kCborMap: return "cbor-map";
    case Variant::kGzipAfter: return "gzip-after";
  }
  return "?";
}

struct EncodeOptions {
  bool delta_encoding = true;
  Variant variant = Variant::kStandard;
  bool epoch_dates = false;
  bool framed = false;
  friend bool operator==(const EncodeOptions&, const EncodeOptions&) = default;
};

/// What the bytes cannot tell the decoder by themselves. Framed messages
/// carry both fields in their header and override these.
struct DecodeOptions {
  bool delta_encoding = true;
  Variant variant = Variant::kStandard;
};

inline constexpr std::uint8_t kFrameVersion = 1;
inline constexpr std::size_t kFrameHeaderBytes = 1 + 32;

/// The sections of one standard message before framing or compression.
struct CblMessage {
  Bytes dict_bytes;
  std::uint64_t bitmap_bits = 0;
  std::size_t index_bits = 0;
  BitWriter body;  // bitmap followed by indices

  Bytes length_bytes() const {
    return encode_item(CborItem::uint(bitmap_bits));
  }

  Bytes to_bytes() const {
    Bytes out = dict_bytes;
    const Bytes len = length_bytes();
    out.insert(out.end(), len.begin(), len.end());
    out.insert(out.end(), body.bytes().begin(), body.bytes().end());
    return out;
  }
};

/// Widths derived from the dictionary: the largest key index is 5 plus the
/// number of listed keys, the largest value index is one below the count.
inline unsigned key_bits_for(const ReindexDictionary& rd) {
  return bit_width(kReservedCount - 1 + rd.keys.size());
}

inline unsigned value_bits_for(const ReindexDictionary& rd) {
  return bit_width(rd.values.empty() ? 0 : rd.values.size() - 1);
}

namespace detail {

inline void reject_empty_maps(const JsonValue& v) {
  if (v.is_map()) {
    if (v.as_map().empty()) throw Error(Errc::kEmptyMap, "empty map");
    for (const auto& m : v.as_map()) reject_empty_maps(m.value);
  } else if (v.is_array()) {
    for (const auto& e : v.as_array()) reject_empty_maps(e);
  }
}

inline void collect_indices(const JsonValue& v, const TermIndexMaps& maps,
                            std::vector<IndexEntry>& out) {
  if (is_leaf(v)) return;
  if (v.is_map()) {
    for (const auto& m : v.as_map()) {
      const std::uint64_t key = maps.key_index(m.key);
      if (is_leaf(m.value)) {
        out.emplace_back(PairIndices{key, maps.value_index(m.value)});
      } else {
        out.emplace_back(KeyIndex{key});
        collect_indices(m.value, maps, out);
      }
    }
    return;
  }
  for (const auto& e : v.as_array()) {
    if (is_leaf(e)) {
      out.emplace_back(ElementIndex{maps.value_index(e)});
    } else {
      collect_indices(e, maps, out);
    }
  }
}

inline CborItem reindexed_tree(const JsonValue& v, const TermIndexMaps& maps) {
  if (is_leaf(v)) return CborItem::uint(maps.value_index(v));
  if (v.is_map()) {
    CborMap entries;
    for (const auto& m : v.as_map()) {
      entries.push_back(CborMapEntry{CborItem::uint(maps.key_index(m.key)),
                                     reindexed_tree(m.value, maps)});
    }
    return CborItem::map(std::move(entries));
  }
  CborArray items;
  for (const auto& e : v.as_array()) items.push_back(reindexed_tree(e, maps));
  return CborItem::array(std::move(items));
}

}  // namespace detail

/// Index list of doc in document order.
inline IndexList build_index_list(const JsonValue& doc, const TermIndexMaps& maps,
                                  const ReindexDictionary& rd) {
  IndexList list;
  list.key_bits = key_bits_for(rd);
  list.value_bits = value_bits_for(rd);
  if (is_leaf(doc)) {
    list.entries.emplace_back(ElementIndex{maps.value_index(doc)});
  } else {
    detail::collect_indices(doc, maps, list.entries);
  }
  return list;
}

/// Builds the standard message sections for doc.
inline CblMessage build_message(const JsonValue& doc, const StaticDictionary& dict,
                                const EncodeOptions& opts = {}) {
  detail::reject_empty_maps(doc);
  auto [rd, maps] =
      extract_terms(doc, dict, {opts.delta_encoding, opts.epoch_dates});
  CblMessage msg;
  msg.dict_bytes = serialize_reindex(rd, opts.delta_encoding);
  emit_structure(doc, msg.body);
  msg.bitmap_bits = msg.body.bit_size();
  pack_indices(build_index_list(doc, maps, rd), msg.body);
  msg.index_bits = msg.body.bit_size() - msg.bitmap_bits;
  return msg;
}

namespace detail {

inline std::uint8_t frame_flags(Variant v, bool delta) {
  return static_cast<std::uint8_t>((kFrameVersion << 4) | (delta ? 0 : 0x4) |
                                   static_cast<std::uint8_t>(v));
}

inline Bytes encode_unframed(const JsonValue& doc, const StaticDictionary& dict,
                             const EncodeOptions& opts) {
  if (opts.variant == Variant::kCborMap) {
    detail::reject_empty_maps(doc);
    auto [rd, maps] =
        extract_terms(doc, dict, {opts.delta_encoding, opts.epoch_dates});
    Bytes out = serialize_reindex(rd, opts.delta_encoding);
    encode_item(reindexed_tree(doc, maps), out);
    return out;
  }
  Bytes msg = build_message(doc, dict, opts).to_bytes();
  if (opts.variant == Variant::kGzipAfter) return compress_deflate(msg);
  return msg;
}

}  // namespace detail

/// Encodes doc. Throws kEmptyMap or kUnknownKeyTerm. Deterministic for a
/// given (doc, dict, opts).
inline Bytes cbl_encode(const JsonValue& doc, const StaticDictionary& dict,
                        const EncodeOptions& opts = {}) {
  Bytes body = detail::encode_unframed(doc, dict, opts);
  if (!opts.framed) return body;
  Bytes out{detail::frame_flags(opts.variant, opts.delta_encoding)};
  out.insert(out.end(), dict.fingerprint().begin(), dict.fingerprint().end());
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

namespace detail {

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::string>& keys,
              const std::vector<JsonValue>& values, const IndexList& list)
      : keys_(keys), values_(values), list_(list) {}

  JsonValue build(const Shape& s) {
    if (s.kind == Shape::Kind::kLeaf) {
      return value(std::get<ElementIndex>(next()).value);
    }
    return container(s);
  }

  bool exhausted() const { return pos_ == list_.entries.size(); }

 private:
  const IndexEntry& next() {
    if (pos_ >= list_.entries.size()) {
      throw Error(Errc::kMalformed, "index list shorter than structure");
    }
    return list_.entries[pos_++];
  }

  const std::string& key(std::uint64_t i) const {
    if (i >= keys_.size()) {
      throw Error(Errc::kIndexOutOfRange, "key index " + std::to_string(i));
    }
    return keys_[static_cast<std::size_t>(i)];
  }

  const JsonValue& value(std::uint64_t i) const {
    if (i >= values_.size()) {
      throw Error(Errc::kIndexOutOfRange, "value index " + std::to_string(i));
    }
    return values_[static_cast<std::size_t>(i)];
  }

  JsonValue container(const Shape& s) {
    if (s.kind == Shape::Kind::kArray) {
      JsonArray items;
      for (const auto& child : s.children) {
        if (child.kind == Shape::Kind::kLeaf) {
          items.push_back(value(std::get<ElementIndex>(next()).value));
        } else {
          items.push_back(container(child));
        }
      }
      return JsonValue(std::move(items));
    }
    JsonMap members;
    for (const auto& child : s.children) {
      const IndexEntry& e = next();
      std::string k;
      JsonValue v;
      if (child.kind == Shape::Kind::kLeaf) {
        const auto& p = std::get<PairIndices>(e);
        k = key(p.key);
        v = value(p.value);
      } else {
        k = key(std::get<KeyIndex>(e).key);
        v = container(child);
      }
      for (const auto& m : members) {
        if (m.key == k) throw Error(Errc::kMalformed, "duplicate key " + k);
      }
      members.push_back(JsonMember{std::move(k), std::move(v)});
    }
    return JsonValue(std::move(members));
  }

  const std::vector<std::string>& keys_;
  const std::vector<JsonValue>& values_;
  const IndexList& list_;
  std::size_t pos_ = 0;
};

inline JsonValue from_reindexed_tree(const CborItem& item,
                                     const std::vector<std::string>& keys,
                                     const std::vector<JsonValue>& values,
                                     int depth = 0) {
  if (depth > kMaxShapeDepth) throw Error(Errc::kMalformed, "nesting too deep");
  auto value = [&](const CborItem& i) -> const JsonValue& {
    if (i.as_uint() >= values.size()) {
      throw Error(Errc::kIndexOutOfRange, "value index " + std::to_string(i.as_uint()));
    }
    return values[static_cast<std::size_t>(i.as_uint())];
  };
  if (item.is_uint()) return value(item);
  if (item.is_array()) {
    JsonArray items;
    for (const auto& e : item.as_array()) {
      items.push_back(from_reindexed_tree(e, keys, values, depth + 1));
    }
    return JsonValue(std::move(items));
  }
  if (!item.is_map() || item.as_map().empty()) {
    throw Error(Errc::kMalformed, "unexpected item in document tree");
  }
  JsonMap members;
  for (const auto& e : item.as_map()) {
    if (!e.key.is_uint()) throw Error(Errc::kMalformed, "map key must be uint");
    if (e.key.as_uint() >= keys.size()) {
      throw Error(Errc::kIndexOutOfRange, "key index " + std::to_string(e.key.as_uint()));
    }
    const std::string& k = keys[static_cast<std::size_t>(e.key.as_uint())];
    for (const auto& m : members) {
      if (m.key == k) throw Error(Errc::kMalformed, "duplicate key " + k);
    }
    members.push_back(
        JsonMember{k, from_reindexed_tree(e.value, keys, values, depth + 1)});
  }
  return JsonValue(std::move(members));
}

inline bool is_gzip(std::span<const std::uint8_t> b) {
  return b.size() >= 2 && b[0] == 0x1F && b[1] == 0x8B;
}

inline JsonValue decode_unframed(std::span<const std::uint8_t> bytes,
                                 const StaticDictionary& dict,
                                 const DecodeOptions& opts) {
  if (bytes.empty()) throw Error(Errc::kTruncated, "empty message");
  if (is_gzip(bytes)) {
    const Bytes inner = decompress_deflate(bytes);
    DecodeOptions o = opts;
    o.variant = Variant::kStandard;
    return decode_unframed(inner, dict, o);
  }
  auto [rd, offset] = deserialize_reindex(bytes, 0, opts.delta_encoding);
  const std::vector<std::string> keys = resolve_keys(rd, dict);
  const std::vector<JsonValue> values = resolve_values(rd, dict);

  if (opts.variant == Variant::kCborMap) {
    CborDecoded tree = decode_item(bytes, offset);
    if (tree.next != bytes.size()) {
      throw Error(Errc::kMalformed, "trailing bytes after document tree");
    }
    return from_reindexed_tree(tree.item, keys, values);
  }

  CborDecoded len = decode_item(bytes, offset);
  if (!len.item.is_uint()) {
    throw Error(Errc::kMalformed, "bitmap length must be a uint");
  }
  const std::uint64_t bitmap_bits = len.item.as_uint();
  BitReader reader(bytes.subspan(len.next));
  if (bitmap_bits > reader.remaining()) {
    throw Error(Errc::kTruncated, "bitmap longer than message");
  }
  const Shape shape = parse_structure(reader);
  if (reader.position() != bitmap_bits) {
    throw Error(Errc::kMalformed, "bitmap length " + std::to_string(bitmap_bits) +
                                      " disagrees with structure (" +
                                      std::to_string(reader.position()) + " bits)");
  }
  const IndexList list =
      unpack_indices(reader, shape, key_bits_for(rd), value_bits_for(rd));
  if (reader.remaining() >= 8) {
    throw Error(Errc::kMalformed, "trailing bytes after index list");
  }
  if (reader.read_bits(static_cast<unsigned>(reader.remaining())) != 0) {
    throw Error(Errc::kMalformed, "non-zero padding");
  }
  TreeBuilder builder(keys, values, list);
  JsonValue doc = builder.build(shape);
  return doc;
}

}  // namespace detail

/// Decodes a message produced by cbl_encode with the same static dictionary.
/// Gzip and framing are recognized from the leading bytes.
inline JsonValue cbl_decode(std::span<const std::uint8_t> bytes,
                            const StaticDictionary& dict,
                            const DecodeOptions& opts = {}) {
  // Gzip's magic byte 0x1F also has a high nibble of 1, so test it first;
  // 0x1F is never a valid frame byte because flag bit 3 is reserved.
  if (!bytes.empty() && !detail::is_gzip(bytes) &&
      (bytes[0] >> 4) == kFrameVersion) {
    if (bytes.size() < kFrameHeaderBytes) {
      throw Error(Errc::kTruncated, "frame header");
    }
    const std::uint8_t flags = bytes[0] & 0x0F;
    if ((flags & 0x3) > 2 || (flags & 0x8)) {
      throw Error(Errc::kMalformed, "unknown frame flags");
    }
    if (!std::equal(dict.fingerprint().begin(), dict.fingerprint().end(),
                    bytes.begin() + 1)) {
      throw Error(Errc::kFingerprintMismatch,
                  "message was encoded with a different static dictionary");
    }
    DecodeOptions o;
    o.variant = static_cast<Variant>(flags & 0x3);
    o.delta_encoding = !(flags & 0x4);
    return detail::decode_unframed(bytes.subspan(kFrameHeaderBytes), dict, o);
  }
  return detail::decode_unframed(bytes, dict, opts);
}

struct SizeReport {
  std::size_t original_bytes = 0;
  std::size_t encoded_bytes = 0;
  std::size_t header_bytes = 0;
  std::size_t dict_bytes = 0;
  std::size_t length_bytes = 0;
  std::size_t body_bytes = 0;
  std::size_t bitmap_bits = 0;
  std::size_t index_bits = 0;
  std::size_t padding_bits = 0;
  // Encoded size minus the uncompressed message for kGzipAfter; can be
  // negative.
  std::int64_t container_delta = 0;
  double savings_percent = 0.0;
  EncodeOptions options;

  std::int64_t section_sum() const {
    return static_cast<std::int64_t>(header_bytes + dict_bytes + length_bytes +
                                     body_bytes) +
           container_delta;
  }
};

inline double savings_percent(std::size_t original, std::size_t encoded) {
  if (original == 0) return 0.0;
  return 100.0 * (static_cast<double>(original) - static_cast<double>(encoded)) /
         static_cast<double>(original);
}

/// Encodes doc and breaks the result down by section.
inline SizeReport measure(const JsonValue& doc, const StaticDictionary& dict,
                          const EncodeOptions& opts, std::size_t original_bytes) {
  SizeReport r;
  r.options = opts;
  r.original_bytes = original_bytes;
  r.header_bytes = opts.framed ? kFrameHeaderBytes : 0;
  const Bytes encoded = cbl_encode(doc, dict, opts);
  r.encoded_bytes = encoded.size();

  std::size_t unframed = 0;
  if (opts.variant == Variant::kCborMap) {
    auto [rd, maps] =
        extract_terms(doc, dict, {opts.delta_encoding, opts.epoch_dates});
    r.dict_bytes = serialize_reindex(rd, opts.delta_encoding).size();
    r.body_bytes = encoded.size() - r.header_bytes - r.dict_bytes;
    unframed = r.dict_bytes + r.body_bytes;
  } else {
    const CblMessage msg = build_message(doc, dict, opts);
    r.dict_bytes = msg.dict_bytes.size();
    r.length_bytes = msg.length_bytes().size();
    r.body_bytes = msg.body.bytes().size();
    r.bitmap_bits = msg.bitmap_bits;
    r.index_bits = msg.index_bits;
    r.padding_bits = r.body_bytes * 8 - msg.body.bit_size();
    unframed = r.dict_bytes + r.length_bytes + r.body_bytes;
  }
  r.container_delta = static_cast<std::int64_t>(r.encoded_bytes - r.header_bytes) -
                      static_cast<std::int64_t>(unframed);
  r.savings_percent = savings_percent(r.original_bytes, r.encoded_bytes);
  return r;
}

/// Measures JSON text, using its byte length as the original size.
inline SizeReport measure(std::string_view json_text, const StaticDictionary& dict,
                          const EncodeOptions& opts = {}) {
  return measure(parse_json(json_text), dict, opts, json_text.size());
}

}  // namespace cbl

#endif  // CBL_PIPELINE_HPP_
