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

#ifndef CBL_STRUCTURE_HPP_
#define CBL_STRUCTURE_HPP_

// Structure bitmap: the shape of a document as a sequence of prefix-free
// codes.
//
//   0     key-value pair, or array element
//   10    start of map together with its first pair
//   110   end of map
//   1110  start of array
//   1111  end of array
//
// Every map pair has a code: the first one rides on the map's 10 and each
// later one emits 0. When a pair's value is itself a map or array, that
// container's start code follows the pair's code directly; a leaf value adds
// nothing. An array element emits 0 when it is a leaf and its own start code
// when it is a container. So {380:{2:106, 3:"2.24E1"}} becomes
// 10 10 0 110 110.

#include <array>
#include <cstdint>
#include <vector>

#include "cbl/bits.hpp"
#include "cbl/error.hpp"
#include "cbl/json.hpp"

namespace cbl {

enum class StructureSymbol : std::uint8_t {
  kPair,
  kStartMap,
  kEndMap,
  kStartArray,
  kEndArray,
};

struct StructureCode {
  std::uint8_t bits;
  std::uint8_t length;
};

inline constexpr std::array<StructureCode, 5> kStructureCodes = {{
    {0b0, 1},
    {0b10, 2},
    {0b110, 3},
    {0b1110, 4},
    {0b1111, 4},
}};

constexpr bool structure_codes_prefix_free() {
  for (const auto& a : kStructureCodes) {
    for (const auto& b : kStructureCodes) {
      if (&a == &b || a.length > b.length) continue;
      if ((b.bits >> (b.length - a.length)) == a.bits) return false;
    }
  }
  return true;
}
static_assert(structure_codes_prefix_free());

inline void write_symbol(BitWriter& w, StructureSymbol s) {
  const auto& code = kStructureCodes[static_cast<std::size_t>(s)];
  w.write_bits(code.bits, code.length);
}

inline StructureSymbol read_symbol(BitReader& r) {
  for (unsigned ones = 0; ones < 4; ++ones) {
    if (r.remaining() == 0) {
      throw Error(Errc::kInvalidCode,
                  "incomplete code at bit " + std::to_string(r.position()));
    }
    if (!r.read_bit()) {
      return static_cast<StructureSymbol>(ones);  // 0, 10, 110, 1110
    }
  }
  return StructureSymbol::kEndArray;
}

/// Document shape with every leaf value replaced by a hole.
struct Shape {
  enum class Kind : std::uint8_t { kLeaf, kMap, kArray };
  Kind kind = Kind::kLeaf;
  std::vector<Shape> children;  // map pair values or array elements

  friend bool operator==(const Shape&, const Shape&) = default;
};

inline Shape shape_of(const JsonValue& v) {
  Shape s;
  if (is_leaf(v)) return s;
  if (v.is_map()) {
    s.kind = Shape::Kind::kMap;
    for (const auto& m : v.as_map()) s.children.push_back(shape_of(m.value));
  } else {
    s.kind = Shape::Kind::kArray;
    for (const auto& e : v.as_array()) s.children.push_back(shape_of(e));
  }
  return s;
}

namespace detail {

inline void emit_container(const JsonValue& v, BitWriter& w) {
  if (v.is_map()) {
    const auto& members = v.as_map();
    if (members.empty()) throw Error(Errc::kEmptyMap, "empty map");
    write_symbol(w, StructureSymbol::kStartMap);
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i > 0) write_symbol(w, StructureSymbol::kPair);
      if (!is_leaf(members[i].value)) emit_container(members[i].value, w);
    }
    write_symbol(w, StructureSymbol::kEndMap);
    return;
  }
  write_symbol(w, StructureSymbol::kStartArray);
  for (const auto& e : v.as_array()) {
    if (is_leaf(e)) {
      write_symbol(w, StructureSymbol::kPair);
    } else {
      emit_container(e, w);
    }
  }
  write_symbol(w, StructureSymbol::kEndArray);
}

inline constexpr int kMaxShapeDepth = 512;

class ShapeParser {
 public:
  explicit ShapeParser(BitReader& r) : r_(r) {}

  Shape root() {
    switch (read_symbol(r_)) {
      case StructureSymbol::kPair: return Shape{};
      case StructureSymbol::kStartMap: return map(0);
      case StructureSymbol::kStartArray: return array(0);
      default: unbalanced("closing code at root");
    }
  }

 private:
  [[noreturn]] void unbalanced(const char* what) const {
    throw Error(Errc::kUnbalancedStructure,
                std::string(what) + " at bit " + std::to_string(r_.position()));
  }

  void check_depth(int depth) const {
    if (depth > kMaxShapeDepth) unbalanced("nesting too deep");
  }

  // Called after 10; the first pair's code is implied.
  Shape map(int depth) {
    check_depth(depth);
    Shape s{Shape::Kind::kMap, {}};
    for (;;) {
      StructureSymbol next = read_symbol(r_);
      if (next == StructureSymbol::kStartMap) {
        s.children.push_back(map(depth + 1));
        next = read_symbol(r_);
      } else if (next == StructureSymbol::kStartArray) {
        s.children.push_back(array(depth + 1));
        next = read_symbol(r_);
      } else {
        s.children.push_back(Shape{});
      }
      if (next == StructureSymbol::kPair) continue;
      if (next == StructureSymbol::kEndMap) return s;
      unbalanced("unexpected code inside map");
    }
  }

  Shape array(int depth) {
    check_depth(depth);
    Shape s{Shape::Kind::kArray, {}};
    for (;;) {
      switch (read_symbol(r_)) {
        case StructureSymbol::kPair: s.children.push_back(Shape{}); break;
        case StructureSymbol::kStartMap: s.children.push_back(map(depth + 1)); break;
        case StructureSymbol::kStartArray: s.children.push_back(array(depth + 1)); break;
        case StructureSymbol::kEndArray: return s;
        default: unbalanced("end of map inside array");
      }
    }
  }

  BitReader& r_;
};

}  // namespace detail

/// Appends the structure codes of doc to w. Throws kEmptyMap.
inline void emit_structure(const JsonValue& doc, BitWriter& w) {
  if (is_leaf(doc)) {
    write_symbol(w, StructureSymbol::kPair);  // lone top-level value
  } else {
    detail::emit_container(doc, w);
  }
}

inline BitWriter emit_structure(const JsonValue& doc) {
  BitWriter w;
  emit_structure(doc, w);
  return w;
}

/// Reads exactly one root value's codes.
inline Shape parse_structure(BitReader& r) {
  return detail::ShapeParser(r).root();
}

struct HoleCounts {
  std::size_t map_pairs = 0;
  std::size_t array_elements = 0;
  std::size_t value_slots = 0;  // holes that take a value index
  std::size_t key_slots = 0;    // == map_pairs

  friend bool operator==(const HoleCounts&, const HoleCounts&) = default;
};

namespace detail {

inline void count_into(const Shape& s, HoleCounts& c) {
  for (const auto& child : s.children) {
    if (s.kind == Shape::Kind::kMap) {
      ++c.map_pairs;
      ++c.key_slots;
    } else {
      ++c.array_elements;
    }
    if (child.kind == Shape::Kind::kLeaf) {
      ++c.value_slots;
    } else {
      count_into(child, c);
    }
  }
}

}  // namespace detail

inline HoleCounts count_holes(const Shape& s) {
  HoleCounts c;
  if (s.kind == Shape::Kind::kLeaf) {
    c.value_slots = 1;
    return c;
  }
  detail::count_into(s, c);
  return c;
}

}  // namespace cbl

#endif  // CBL_STRUCTURE_HPP_
