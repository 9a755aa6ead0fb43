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

#ifndef CBL_STATIC_DICTIONARY_HPP_
#define CBL_STATIC_DICTIONARY_HPP_

// The static dictionary maps every term both peers know in advance to a
// dense integer id. It is agreed out of band and never transmitted; peers
// compare fingerprints to make sure they hold the same table.
//
// Id layout:
//   0..5    JSON-LD terms pinned by the format (@id, @graph, @type, @value,
//           @context, @language)
//   6..20   the remaining JSON-LD keywords, alphabetical
//   21..    vocabulary sources in the order given: ontology term lists are
//           deduplicated and byte-sorted, custom terms keep their order

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cbl/cbor.hpp"
#include "cbl/error.hpp"

namespace cbl {

using TermId = std::uint64_t;
using Fingerprint = std::array<std::uint8_t, 32>;

inline constexpr std::array<std::string_view, 6> kReservedTerms = {
    "@id", "@graph", "@type", "@value", "@context", "@language"};

inline constexpr std::array<std::string_view, 15> kStandardKeywords = {
    "@base",   "@container", "@direction", "@index",     "@json",
    "@list",   "@nest",      "@none",      "@prefix",    "@propagate",
    "@protected", "@reverse", "@set",      "@version",   "@vocab"};

inline constexpr TermId kReservedCount = kReservedTerms.size();

inline constexpr std::string_view kReservedSection = "reserved";
inline constexpr std::string_view kKeywordSection = "keywords";
inline constexpr std::string_view kCustomSection = "custom";

struct ReservedKeywords {};

struct OntologyTerms {
  std::string name;
  std::vector<std::string> terms;
};

struct CustomTerms {
  std::vector<std::string> terms;
};

using VocabSource = std::variant<ReservedKeywords, OntologyTerms, CustomTerms>;

/// Ordered list of vocabulary sources. Source order is significant.
struct VocabSpec {
  std::vector<VocabSource> sources;
};

struct DictionarySection {
  std::string name;
  TermId first_id = 0;
  std::vector<std::string> terms;

  TermId end_id() const { return first_id + terms.size(); }
  friend bool operator==(const DictionarySection&,
                         const DictionarySection&) = default;
};

inline Fingerprint sha256(std::span<const std::uint8_t> data) {
  Fingerprint out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != out.size()) {
    throw Error(Errc::kIo, "SHA-256 digest failed");
  }
  return out;
}

inline std::string to_hex(std::span<const std::uint8_t> data) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  s.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    s += kHex[b >> 4];
    s += kHex[b & 0xF];
  }
  return s;
}

class StaticDictionary {
 public:
  StaticDictionary() : StaticDictionary(reserved_sections()) {}

  /// Assembles a dictionary from named sections laid out back to back.
  /// Throws kTermCollision when a term appears twice and kFormat when the
  /// leading section is not the pinned reserved terms.
  explicit StaticDictionary(std::vector<DictionarySection> sections) {
    TermId next = 0;
    for (auto& s : sections) {
      s.first_id = next;
      for (const auto& term : s.terms) {
        if (term.empty()) throw Error(Errc::kFormat, "empty term");
        auto [it, inserted] = ids_.emplace(term, next);
        if (!inserted) {
          throw Error(Errc::kTermCollision,
                      "term \"" + term + "\" already has id " +
                          std::to_string(it->second));
        }
        terms_.push_back(term);
        ++next;
      }
    }
    sections_ = std::move(sections);
    if (sections_.empty() || sections_.front().name != kReservedSection ||
        sections_.front().terms.size() != kReservedTerms.size() ||
        !std::equal(kReservedTerms.begin(), kReservedTerms.end(),
                    sections_.front().terms.begin())) {
      throw Error(Errc::kFormat, "first section must hold the reserved terms");
    }
    const Bytes canonical = encode_item(sections_item());
    fingerprint_ = sha256(canonical);
  }

  std::optional<TermId> lookup_id(std::string_view term) const {
    auto it = ids_.find(term);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::string_view> lookup_term(TermId id) const {
    if (id >= terms_.size()) return std::nullopt;
    return std::string_view(terms_[static_cast<std::size_t>(id)]);
  }

  std::size_t size() const { return terms_.size(); }
  const std::vector<DictionarySection>& sections() const { return sections_; }
  const Fingerprint& fingerprint() const { return fingerprint_; }
  std::string fingerprint_hex() const { return to_hex(fingerprint_); }

  /// Canonical table: [[name, [term...]], ...]. Hashed for the fingerprint.
  CborItem sections_item() const {
    CborArray out;
    for (const auto& s : sections_) {
      CborArray terms;
      for (const auto& t : s.terms) terms.push_back(CborItem::text(t));
      out.push_back(CborItem::array(
          {CborItem::text(s.name), CborItem::array(std::move(terms))}));
    }
    return CborItem::array(std::move(out));
  }

  friend bool operator==(const StaticDictionary& a, const StaticDictionary& b) {
    return a.sections_ == b.sections_ && a.fingerprint_ == b.fingerprint_;
  }

  static std::vector<DictionarySection> reserved_sections() {
    std::vector<DictionarySection> out;
    out.push_back({std::string(kReservedSection), 0,
                   {kReservedTerms.begin(), kReservedTerms.end()}});
    out.push_back({std::string(kKeywordSection), 0,
                   {kStandardKeywords.begin(), kStandardKeywords.end()}});
    return out;
  }

 private:
  std::vector<DictionarySection> sections_;
  std::vector<std::string> terms_;
  std::map<std::string, TermId, std::less<>> ids_;
  Fingerprint fingerprint_{};
};

/// Builds the table for a vocabulary. The reserved and keyword sections are
/// always first whether or not the vocabulary lists ReservedKeywords explicitly.
inline StaticDictionary build_static_dictionary(const VocabSpec& spec) {
  auto sections = StaticDictionary::reserved_sections();
  for (const auto& source : spec.sources) {
    if (const auto* onto = std::get_if<OntologyTerms>(&source)) {
      std::vector<std::string> terms = onto->terms;
      std::sort(terms.begin(), terms.end());
      terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
      sections.push_back({onto->name, 0, std::move(terms)});
    } else if (const auto* custom = std::get_if<CustomTerms>(&source)) {
      sections.push_back({std::string(kCustomSection), 0, custom->terms});
    }
  }
  return StaticDictionary(std::move(sections));
}

inline constexpr std::uint8_t kDictionaryFormatVersion = 1;

/// File layout: version byte, then CBOR [sections, fingerprint-hex].
inline Bytes save_dictionary(const StaticDictionary& d) {
  Bytes out{kDictionaryFormatVersion};
  encode_item(CborItem::array({d.sections_item(),
                               CborItem::text(d.fingerprint_hex())}),
              out);
  return out;
}

inline StaticDictionary load_dictionary(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw Error(Errc::kFormat, "empty dictionary file");
  if (bytes[0] != kDictionaryFormatVersion) {
    throw Error(Errc::kFormat, "unsupported dictionary format version " +
                                   std::to_string(bytes[0]));
  }
  CborDecoded top;
  try {
    top = decode_item(bytes, 1);
  } catch (const Error& e) {
    throw Error(Errc::kFormat, e.what());
  }
  if (top.next != bytes.size()) {
    throw Error(Errc::kFormat, "trailing bytes after dictionary");
  }
  const CborItem& root = top.item;
  if (!root.is_array() || root.as_array().size() != 2 ||
      !root.as_array()[0].is_array() || !root.as_array()[1].is_text()) {
    throw Error(Errc::kFormat, "dictionary must be [sections, fingerprint]");
  }
  std::vector<DictionarySection> sections;
  for (const auto& s : root.as_array()[0].as_array()) {
    if (!s.is_array() || s.as_array().size() != 2 ||
        !s.as_array()[0].is_text() || !s.as_array()[1].is_array()) {
      throw Error(Errc::kFormat, "section must be [name, [terms]]");
    }
    DictionarySection section{s.as_array()[0].as_text(), 0, {}};
    for (const auto& t : s.as_array()[1].as_array()) {
      if (!t.is_text()) throw Error(Errc::kFormat, "term must be text");
      section.terms.push_back(t.as_text());
    }
    sections.push_back(std::move(section));
  }
  // Hash what was stored before interpreting it so tampering is reported as
  // such rather than as a collision or layout error.
  const Fingerprint actual = sha256(encode_item(root.as_array()[0]));
  if (to_hex(actual) != root.as_array()[1].as_text()) {
    throw Error(Errc::kFingerprintMismatch,
                "stored " + root.as_array()[1].as_text() + ", computed " +
                    to_hex(actual));
  }
  return StaticDictionary(std::move(sections));
}

/// Reads a vocabulary file: one term per line, blank lines and lines
/// starting with '#' ignored, surrounding whitespace trimmed.
inline std::vector<std::string> read_term_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open " + path);
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    terms.push_back(line.substr(first, last - first + 1));
  }
  return terms;
}

}  // namespace cbl

#endif  // CBL_STATIC_DICTIONARY_HPP_
