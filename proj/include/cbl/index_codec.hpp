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

#ifndef CBL_INDEX_CODEC_HPP_
#define CBL_INDEX_CODEC_HPP_

// Fixed-width list of key and value indices, written in document order with
// no per-entry headers. Widths are not transmitted; both ends derive them
// from the re-indexation dictionary.

#include <bit>
#include <cstdint>
#include <variant>
#include <vector>

#include "cbl/bits.hpp"
#include "cbl/error.hpp"
#include "cbl/structure.hpp"

namespace cbl {

/// Smallest width (at least 1) able to hold max_index.
constexpr unsigned bit_width(std::uint64_t max_index) {
  return max_index == 0 ? 1u : static_cast<unsigned>(std::bit_width(max_index));
}

/// Map pair with a leaf value.
struct PairIndices {
  std::uint64_t key = 0;
  std::uint64_t value = 0;
  friend bool operator==(const PairIndices&, const PairIndices&) = default;
};

/// Map pair whose value is a map or array; only the key is listed.
struct KeyIndex {
  std::uint64_t key = 0;
  friend bool operator==(const KeyIndex&, const KeyIndex&) = default;
};

/// Leaf array element, or a lone top-level value.
struct ElementIndex {
  std::uint64_t value = 0;
  friend bool operator==(const ElementIndex&, const ElementIndex&) = default;
};

using IndexEntry = std::variant<PairIndices, KeyIndex, ElementIndex>;

struct IndexList {
  std::vector<IndexEntry> entries;
  unsigned key_bits = 1;
  unsigned value_bits = 1;
  friend bool operator==(const IndexList&, const IndexList&) = default;
};

namespace detail {

inline void put_index(BitWriter& w, std::uint64_t index, unsigned bits) {
  if (bits < 64 && (index >> bits) != 0) {
    throw Error(Errc::kIndexOutOfRange, "index " + std::to_string(index) +
                                            " does not fit " +
                                            std::to_string(bits) + " bits");
  }
  w.write_bits(index, bits);
}

}  // namespace detail

inline void pack_indices(const IndexList& list, BitWriter& w) {
  for (const auto& e : list.entries) {
    if (const auto* p = std::get_if<PairIndices>(&e)) {
      detail::put_index(w, p->key, list.key_bits);
      detail::put_index(w, p->value, list.value_bits);
    } else if (const auto* k = std::get_if<KeyIndex>(&e)) {
      detail::put_index(w, k->key, list.key_bits);
    } else {
      detail::put_index(w, std::get<ElementIndex>(e).value, list.value_bits);
    }
  }
}

inline BitWriter pack_indices(const IndexList& list) {
  BitWriter w;
  pack_indices(list, w);
  return w;
}

namespace detail {

inline void unpack_into(BitReader& r, const Shape& s, IndexList& out) {
  for (const auto& child : s.children) {
    const bool leaf = child.kind == Shape::Kind::kLeaf;
    if (s.kind == Shape::Kind::kMap) {
      const std::uint64_t key = r.read_bits(out.key_bits);
      if (leaf) {
        out.entries.emplace_back(PairIndices{key, r.read_bits(out.value_bits)});
      } else {
        out.entries.emplace_back(KeyIndex{key});
      }
    } else if (leaf) {
      out.entries.emplace_back(ElementIndex{r.read_bits(out.value_bits)});
    }
    if (!leaf) unpack_into(r, child, out);
  }
}

}  // namespace detail

/// Reads one entry per hole of the skeleton. Throws kTruncated.
inline IndexList unpack_indices(BitReader& r, const Shape& skeleton,
                                unsigned key_bits, unsigned value_bits) {
  IndexList out;
  out.key_bits = key_bits;
  out.value_bits = value_bits;
  if (skeleton.kind == Shape::Kind::kLeaf) {
    out.entries.emplace_back(ElementIndex{r.read_bits(value_bits)});
    return out;
  }
  detail::unpack_into(r, skeleton, out);
  return out;
}

/// Bits the list occupies for a given skeleton.
inline std::size_t index_bit_count(const HoleCounts& c, unsigned key_bits,
                                   unsigned value_bits) {
  return c.key_slots * key_bits + c.value_slots * value_bits;
}

}  // namespace cbl

#endif  // CBL_INDEX_CODEC_HPP_
