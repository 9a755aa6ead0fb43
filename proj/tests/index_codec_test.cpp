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

#include "cbl/index_codec.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "cbl/structure.hpp"

namespace {

using cbl::ElementIndex;
using cbl::IndexList;
using cbl::KeyIndex;
using cbl::PairIndices;

TEST(BitWidthTest, Values) {
  EXPECT_EQ(cbl::bit_width(0), 1u);
  EXPECT_EQ(cbl::bit_width(1), 1u);
  EXPECT_EQ(cbl::bit_width(2), 2u);
  EXPECT_EQ(cbl::bit_width(7), 3u);
  EXPECT_EQ(cbl::bit_width(8), 4u);
  EXPECT_EQ(cbl::bit_width(15), 4u);
  EXPECT_EQ(cbl::bit_width(16), 5u);
  EXPECT_EQ(cbl::bit_width(UINT64_MAX), 64u);
}

TEST(BitWidthTest, SmallestWidthHoldingEveryIndex) {
  for (std::uint64_t m = 0; m <= (1u << 20); ++m) {
    const unsigned w = cbl::bit_width(m);
    ASSERT_GE(w, 1u);
    ASSERT_EQ(m >> w, 0u) << m;
    if (w > 1) ASSERT_NE(m >> (w - 1), 0u) << m;
  }
}

TEST(PackTest, PairExample) {
  IndexList list;
  list.key_bits = 4;
  list.value_bits = 4;
  list.entries = {PairIndices{1, 0}, PairIndices{0, 5}, PairIndices{2, 0}};
  const auto w = cbl::pack_indices(list);
  EXPECT_EQ(w.to_string(), "0001" "0000" "0000" "0101" "0010" "0000");
  EXPECT_EQ(w.bytes(), (std::vector<std::uint8_t>{0x10, 0x05, 0x20}));
}

TEST(PackTest, MixedEntries) {
  IndexList list;
  list.key_bits = 3;
  list.value_bits = 2;
  list.entries = {KeyIndex{6}, ElementIndex{3}, PairIndices{1, 2}};
  EXPECT_EQ(cbl::pack_indices(list).to_string(), "110" "11" "001" "10");
}

TEST(PackTest, IndexTooWide) {
  IndexList list;
  list.key_bits = 3;
  list.value_bits = 2;
  list.entries = {PairIndices{8, 0}};
  EXPECT_THROW(cbl::pack_indices(list), cbl::Error);
  list.entries = {ElementIndex{4}};
  try {
    cbl::pack_indices(list);
    FAIL();
  } catch (const cbl::Error& e) {
    EXPECT_EQ(e.code(), cbl::Errc::kIndexOutOfRange);
  }
}

TEST(UnpackTest, FollowsSkeleton) {
  // {"a":1, "b":[2, {"c":3}], "d":4}
  cbl::Shape inner{cbl::Shape::Kind::kMap, {cbl::Shape{}}};
  cbl::Shape arr{cbl::Shape::Kind::kArray, {cbl::Shape{}, inner}};
  cbl::Shape root{cbl::Shape::Kind::kMap, {cbl::Shape{}, arr, cbl::Shape{}}};
  IndexList list;
  list.key_bits = 3;
  list.value_bits = 3;
  list.entries = {PairIndices{6, 1}, KeyIndex{7}, ElementIndex{2},
                  PairIndices{0, 3}, PairIndices{2, 4}};
  const auto w = cbl::pack_indices(list);
  EXPECT_EQ(w.bit_size(), cbl::index_bit_count(cbl::count_holes(root), 3, 3));
  cbl::BitReader r(w.bytes(), w.bit_size());
  EXPECT_EQ(cbl::unpack_indices(r, root, 3, 3), list);
  EXPECT_EQ(r.remaining(), 0u);
}

TEST(UnpackTest, RootLeafAndTruncation) {
  IndexList list;
  list.key_bits = 3;
  list.value_bits = 5;
  list.entries = {ElementIndex{17}};
  const auto w = cbl::pack_indices(list);
  cbl::BitReader r(w.bytes(), w.bit_size());
  EXPECT_EQ(cbl::unpack_indices(r, cbl::Shape{}, 3, 5), list);
  cbl::BitReader short_reader(w.bytes(), 4);
  try {
    cbl::unpack_indices(short_reader, cbl::Shape{}, 3, 5);
    FAIL();
  } catch (const cbl::Error& e) {
    EXPECT_EQ(e.code(), cbl::Errc::kTruncated);
  }
}

TEST(PackPropertyTest, RandomRoundTrip) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 2000; ++i) {
    IndexList list;
    list.key_bits = 1 + rng() % 12;
    list.value_bits = 1 + rng() % 20;
    cbl::Shape root{cbl::Shape::Kind::kMap, {}};
    const int n = 1 + static_cast<int>(rng() % 10);
    for (int j = 0; j < n; ++j) {
      const std::uint64_t key = rng() & ((1ull << list.key_bits) - 1);
      if (rng() % 4 == 0) {
        list.entries.push_back(KeyIndex{key});
        cbl::Shape arr{cbl::Shape::Kind::kArray, {}};
        for (int k = static_cast<int>(rng() % 3); k > 0; --k) {
          arr.children.push_back(cbl::Shape{});
          list.entries.push_back(ElementIndex{rng() & ((1ull << list.value_bits) - 1)});
        }
        root.children.push_back(arr);
      } else {
        list.entries.push_back(PairIndices{key, rng() & ((1ull << list.value_bits) - 1)});
        root.children.push_back(cbl::Shape{});
      }
    }
    const auto w = cbl::pack_indices(list);
    cbl::BitReader r(w.bytes(), w.bit_size());
    ASSERT_EQ(cbl::unpack_indices(r, root, list.key_bits, list.value_bits), list);
  }
}

}  // namespace
