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

// Builds a small dictionary in code, encodes one observation and prints the
// size breakdown and the decoded document.

#include <cstdio>
#include <iostream>

#include "cbl/cbl.hpp"

int main() {
  cbl::VocabSpec vocab;
  vocab.sources.emplace_back(cbl::OntologyTerms{
      "sosa", {"sosa:Observation", "sosa:hasSimpleResult", "sosa:madeBySensor",
               "sosa:resultTime"}});
  vocab.sources.emplace_back(cbl::CustomTerms{{"sensor/926"}});
  const cbl::StaticDictionary dict = cbl::build_static_dictionary(vocab);

  const std::string text = R"({
  "@id": "Observation/11",
  "@type": "sosa:Observation",
  "sosa:madeBySensor": {"@id": "sensor/926"},
  "sosa:hasSimpleResult": 21.5,
  "sosa:resultTime": "2017-06-06T12:36:12+02:00"
})";
  try {
    const cbl::JsonValue doc = cbl::parse_json(text);
    cbl::EncodeOptions opts;
    opts.epoch_dates = true;
    const cbl::Bytes wire = cbl::cbl_encode(doc, dict, opts);
    const cbl::SizeReport r = cbl::measure(doc, dict, opts, text.size());
    std::printf("dictionary %s\n", dict.fingerprint_hex().c_str());
    std::printf("%zu B -> %zu B (dictionary %zu, bitmap %zu bits, indices %zu bits)\n",
                r.original_bytes, r.encoded_bytes, r.dict_bytes, r.bitmap_bits,
                r.index_bits);
    std::cout << cbl::serialize_json(cbl::cbl_decode(wire, dict), 2) << '\n';
  } catch (const cbl::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
