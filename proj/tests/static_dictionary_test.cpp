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

#include "cbl/static_dictionary.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <filesystem>
#include <fstream>
#include <random>

#include "test_support.hpp"

namespace {

using cbl::build_static_dictionary;
using cbl::CustomTerms;
using cbl::Errc;
using cbl::OntologyTerms;
using cbl::StaticDictionary;
using cbl::VocabSpec;

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const cbl::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::kIo;
}

TEST(StaticDictionaryTest, PinnedReservedIds) {
  const StaticDictionary d = build_static_dictionary(VocabSpec{});
  EXPECT_EQ(d.lookup_id("@id"), 0u);
  EXPECT_EQ(d.lookup_id("@graph"), 1u);
  EXPECT_EQ(d.lookup_id("@type"), 2u);
  EXPECT_EQ(d.lookup_id("@value"), 3u);
  EXPECT_EQ(d.lookup_id("@context"), 4u);
  EXPECT_EQ(d.lookup_id("@language"), 5u);
  EXPECT_EQ(d.lookup_term(0), "@id");
  EXPECT_EQ(d.lookup_term(5), "@language");
  EXPECT_FALSE(d.lookup_id("unknownTerm").has_value());
  EXPECT_FALSE(d.lookup_term(21).has_value());
}

TEST(StaticDictionaryTest, KeywordsFollowAlphabetically) {
  const StaticDictionary d;
  EXPECT_EQ(d.size(), 21u);
  EXPECT_EQ(d.lookup_id("@base"), 6u);
  EXPECT_EQ(d.lookup_id("@container"), 7u);
  EXPECT_EQ(d.lookup_id("@vocab"), 20u);
  EXPECT_TRUE(std::is_sorted(cbl::kStandardKeywords.begin(), cbl::kStandardKeywords.end()));
}

TEST(StaticDictionaryTest, OntologyTermsSortedAfterKeywords) {
  const StaticDictionary d =
      build_static_dictionary(VocabSpec{{OntologyTerms{"o", {"b", "a", "b"}}}});
  EXPECT_EQ(d.lookup_id("a"), 21u);
  EXPECT_EQ(d.lookup_id("b"), 22u);
  EXPECT_EQ(d.size(), 23u);
}

TEST(StaticDictionaryTest, SourceOrderAndCustomOrderKept) {
  const StaticDictionary d = build_static_dictionary(VocabSpec{
      {OntologyTerms{"z", {"zz", "za"}}, OntologyTerms{"a", {"ab", "aa"}},
       CustomTerms{{"m", "c", "x"}}}});
  EXPECT_EQ(d.lookup_id("za"), 21u);
  EXPECT_EQ(d.lookup_id("zz"), 22u);
  EXPECT_EQ(d.lookup_id("aa"), 23u);
  EXPECT_EQ(d.lookup_id("ab"), 24u);
  EXPECT_EQ(d.lookup_id("m"), 25u);
  EXPECT_EQ(d.lookup_id("c"), 26u);
  EXPECT_EQ(d.lookup_id("x"), 27u);
  ASSERT_EQ(d.sections().size(), 5u);
  EXPECT_EQ(d.sections()[2].name, "z");
  EXPECT_EQ(d.sections()[4].first_id, 25u);
}

TEST(StaticDictionaryTest, ByteOrderSort) {
  const StaticDictionary d = build_static_dictionary(
      VocabSpec{{OntologyTerms{"o", {"b", "B", "\xC3\xA9", "a"}}}});
  EXPECT_EQ(d.lookup_id("B"), 21u);
  EXPECT_EQ(d.lookup_id("a"), 22u);
  EXPECT_EQ(d.lookup_id("b"), 23u);
  EXPECT_EQ(d.lookup_id("\xC3\xA9"), 24u);
}

TEST(StaticDictionaryTest, Collisions) {
  EXPECT_EQ(code_of([] {
              build_static_dictionary(
                  VocabSpec{{OntologyTerms{"a", {"x"}}, OntologyTerms{"b", {"x"}}}});
            }),
            Errc::kTermCollision);
  EXPECT_EQ(code_of([] { build_static_dictionary(VocabSpec{{CustomTerms{{"@type"}}}}); }),
            Errc::kTermCollision);
  EXPECT_EQ(code_of([] { build_static_dictionary(VocabSpec{{CustomTerms{{"q", "q"}}}}); }),
            Errc::kTermCollision);
  EXPECT_EQ(code_of([] { build_static_dictionary(VocabSpec{{CustomTerms{{""}}}}); }),
            Errc::kFormat);
}

TEST(StaticDictionaryTest, Bijective) {
  const StaticDictionary& d = cbl::testing::corpus_dictionary();
  for (cbl::TermId id = 0; id < d.size(); ++id) {
    auto term = d.lookup_term(id);
    ASSERT_TRUE(term.has_value());
    EXPECT_EQ(d.lookup_id(*term), id);
  }
}

TEST(StaticDictionaryTest, FixtureDictionaryPinsWalkthroughIds) {
  const StaticDictionary& d = cbl::testing::fixture_dictionary();
  for (const auto& [id, term] : cbl::testing::pinned_terms()) {
    EXPECT_EQ(d.lookup_id(term), id) << term;
  }
}

TEST(StaticDictionaryTest, DeterministicFingerprint) {
  VocabSpec spec{{OntologyTerms{"o", {"c", "a", "b"}}, CustomTerms{{"k"}}}};
  EXPECT_EQ(build_static_dictionary(spec).fingerprint(),
            build_static_dictionary(spec).fingerprint());
  VocabSpec other{{OntologyTerms{"o", {"c", "a", "b"}}, CustomTerms{{"k2"}}}};
  EXPECT_NE(build_static_dictionary(spec).fingerprint(),
            build_static_dictionary(other).fingerprint());
  // Section names are part of the table.
  VocabSpec renamed{{OntologyTerms{"p", {"c", "a", "b"}}, CustomTerms{{"k"}}}};
  EXPECT_NE(build_static_dictionary(spec).fingerprint(),
            build_static_dictionary(renamed).fingerprint());
}

TEST(StaticDictionaryTest, ShuffledOntologyInputSameFingerprint) {
  VocabSpec spec = cbl::testing::corpus_vocab_spec();
  const auto expected = build_static_dictionary(spec).fingerprint();
  std::mt19937 rng(11);
  for (int i = 0; i < 10; ++i) {
    for (auto& s : spec.sources) {
      if (auto* o = std::get_if<OntologyTerms>(&s)) {
        std::shuffle(o->terms.begin(), o->terms.end(), rng);
        o->terms.push_back(o->terms.front());  // duplicates collapse
      }
    }
    EXPECT_EQ(build_static_dictionary(spec).fingerprint(), expected);
  }
}

TEST(StaticDictionaryTest, FingerprintIsSha256OfCanonicalTable) {
  const StaticDictionary d;
  EXPECT_EQ(d.fingerprint(), cbl::sha256(cbl::encode_item(d.sections_item())));
  // SHA-256("abc") from FIPS 180-2.
  const std::string abc = "abc";
  EXPECT_EQ(cbl::to_hex(cbl::sha256(std::span(
                reinterpret_cast<const std::uint8_t*>(abc.data()), abc.size()))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(DictionaryFileTest, SaveLoadRoundTrip) {
  const StaticDictionary& d = cbl::testing::corpus_dictionary();
  const cbl::Bytes b = cbl::save_dictionary(d);
  EXPECT_EQ(b[0], cbl::kDictionaryFormatVersion);
  const StaticDictionary back = cbl::load_dictionary(b);
  EXPECT_EQ(back, d);
  EXPECT_EQ(back.fingerprint(), d.fingerprint());
  EXPECT_EQ(cbl::save_dictionary(back), b);
}

TEST(DictionaryFileTest, EmptyCustomSectionPersists) {
  const StaticDictionary d = build_static_dictionary(VocabSpec{{CustomTerms{}}});
  const StaticDictionary back = cbl::load_dictionary(cbl::save_dictionary(d));
  ASSERT_EQ(back.sections().size(), 3u);
  EXPECT_EQ(back.sections()[2].name, "custom");
  EXPECT_TRUE(back.sections()[2].terms.empty());
  EXPECT_EQ(back.fingerprint(), d.fingerprint());
  EXPECT_NE(d.fingerprint(), StaticDictionary().fingerprint());
}

TEST(DictionaryFileTest, TamperedPayloadDetected) {
  const StaticDictionary d =
      build_static_dictionary(VocabSpec{{CustomTerms{{"apartment/134"}}}});
  cbl::Bytes b = cbl::save_dictionary(d);
  auto it = std::search(b.begin(), b.end(), std::begin("apartment"),
                        std::begin("apartment") + 9);
  ASSERT_NE(it, b.end());
  *it = 'A';
  EXPECT_EQ(code_of([&] { cbl::load_dictionary(b); }), Errc::kFingerprintMismatch);
}

TEST(DictionaryFileTest, FormatErrors) {
  const cbl::Bytes good = cbl::save_dictionary(StaticDictionary());
  EXPECT_EQ(code_of([] { cbl::load_dictionary(cbl::Bytes{}); }), Errc::kFormat);
  cbl::Bytes bad_version = good;
  bad_version[0] = 9;
  EXPECT_EQ(code_of([&] { cbl::load_dictionary(bad_version); }), Errc::kFormat);
  cbl::Bytes trailing = good;
  trailing.push_back(0);
  EXPECT_EQ(code_of([&] { cbl::load_dictionary(trailing); }), Errc::kFormat);
  cbl::Bytes truncated(good.begin(), good.end() - 5);
  EXPECT_EQ(code_of([&] { cbl::load_dictionary(truncated); }), Errc::kFormat);
  cbl::Bytes not_array = {1, 0x05};
  EXPECT_EQ(code_of([&] { cbl::load_dictionary(not_array); }), Errc::kFormat);
}

TEST(DictionaryFileTest, ReservedSectionMustLead) {
  // A well-hashed file whose first section is not the reserved terms.
  cbl::CborItem sections = cbl::CborItem::array({cbl::CborItem::array(
      {cbl::CborItem::text("custom"), cbl::CborItem::array({cbl::CborItem::text("x")})})});
  cbl::Bytes b{1};
  cbl::encode_item(cbl::CborItem::array(
                       {sections, cbl::CborItem::text(cbl::to_hex(
                                      cbl::sha256(cbl::encode_item(sections))))}),
                   b);
  EXPECT_EQ(code_of([&] { cbl::load_dictionary(b); }), Errc::kFormat);
}

TEST(TermFileTest, SkipsCommentsAndBlankLines) {
  const auto path = std::filesystem::temp_directory_path() / "cbl_terms_test.txt";
  {
    std::ofstream out(path);
    out << "# header\n\n  sosa:Sensor  \r\nsosa:Platform\n   # indented comment\n\t\n";
  }
  EXPECT_EQ(cbl::read_term_file(path.string()),
            (std::vector<std::string>{"sosa:Sensor", "sosa:Platform"}));
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([&] { cbl::read_term_file(path.string()); }), Errc::kIo);
}

}  // namespace
