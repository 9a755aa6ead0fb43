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

#ifndef CBL_TOOLS_CLI_HPP_
#define CBL_TOOLS_CLI_HPP_

// The `cbl` command line, kept in a header so tests can drive it without
// spawning processes.
//
//   cbl dict build --vocab sosa.txt [--vocab ...] [--custom terms.txt] -o d.cbld
//   cbl encode in.jsonld -d d.cbld -o out.cbl [--no-delta] [--variant V]
//              [--gzip-after] [--epoch-dates] [--framed]
//   cbl decode in.cbl -d d.cbld -o out.jsonld [--no-delta] [--variant V]
//   cbl bench corpus/ -d d.cbld [--variants all|none|a,b] [--csv out.csv]
//
// -d falls back to $CBL_DICT. Exit status: 0 success, 2 user error, 3 bad or
// corrupt input data.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cbl/cbl.hpp"

namespace cbl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFormat = 3;

/// Problems the user can fix by changing arguments or inputs they wrote map
/// to 2; damaged or mismatched encoded data maps to 3.
inline int exit_code_for(Errc code) {
  switch (code) {
    case Errc::kSyntax:
    case Errc::kDuplicateKey:
    case Errc::kTermCollision:
    case Errc::kUnknownKeyTerm:
    case Errc::kEmptyMap:
    case Errc::kIo:
      return kExitUsage;
    default:
      return kExitFormat;
  }
}

inline Bytes read_bytes(const std::string& path) {
  const std::string s = read_file(path);
  return Bytes(s.begin(), s.end());
}

inline void write_bytes(const std::string& path, std::span<const std::uint8_t> b) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(b.data()),
            static_cast<std::streamsize>(b.size()));
  if (!out) throw Error(Errc::kIo, "write failed: " + path);
}

inline void write_text(const std::string& path, const std::string& s) {
  write_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

struct DictBuildArgs {
  std::vector<std::string> vocab;
  std::string custom;
  std::string out;
};

/// Ontology name is the file stem, so sosa.txt becomes section "sosa".
inline int cmd_dict_build(const DictBuildArgs& a, std::ostream& out) {
  VocabSpec spec;
  for (const auto& path : a.vocab) {
    spec.sources.emplace_back(OntologyTerms{
        std::filesystem::path(path).stem().string(), read_term_file(path)});
  }
  if (!a.custom.empty()) {
    spec.sources.emplace_back(CustomTerms{read_term_file(a.custom)});
  }
  const StaticDictionary dict = build_static_dictionary(spec);
  write_bytes(a.out, save_dictionary(dict));
  for (const auto& s : dict.sections()) {
    if (s.name == kReservedSection) {
      for (std::size_t i = 0; i < s.terms.size(); ++i) {
        out << s.terms[i] << '=' << s.first_id + i << '\n';
      }
    } else {
      out << s.name << ": " << s.terms.size() << " terms, ids " << s.first_id
          << ".." << (s.end_id() == s.first_id ? s.first_id : s.end_id() - 1)
          << '\n';
    }
  }
  out << "terms " << dict.size() << '\n';
  out << "fingerprint " << dict.fingerprint_hex() << '\n';
  return kExitOk;
}

inline Variant parse_variant(const std::string& name) {
  if (name == "standard" || name == "default") return Variant::kStandard;
  if (name == "cbor-map") return Variant::kCborMap;
  if (name == "gzip-after") return Variant::kGzipAfter;
  throw CLI::ValidationError("--variant", "unknown variant " + name);
}

struct CodecArgs {
  std::string input;
  std::string dict;
  std::string out;
  bool no_delta = false;
  std::string variant = "standard";
  bool gzip_after = false;
  bool epoch_dates = false;
  bool framed = false;
};

inline void print_size_report(const SizeReport& r, std::ostream& err) {
  err << "original " << r.original_bytes << " B, cbl " << r.encoded_bytes
      << " B, savings " << format_percent(r.savings_percent) << "%\n";
  err << "  header " << r.header_bytes << " B, dictionary " << r.dict_bytes
      << " B, length " << r.length_bytes << " B, body " << r.body_bytes << " B";
  if (r.options.variant != Variant::kCborMap) {
    err << " (bitmap " << r.bitmap_bits << " bits, indices " << r.index_bits
        << " bits, padding " << r.padding_bits << " bits)";
  }
  if (r.container_delta != 0) err << ", gzip " << r.container_delta << " B";
  err << '\n';
}

inline int cmd_encode(const CodecArgs& a, std::ostream& err) {
  const StaticDictionary dict = load_dictionary(read_bytes(a.dict));
  EncodeOptions opts;
  opts.delta_encoding = !a.no_delta;
  opts.variant = a.gzip_after ? Variant::kGzipAfter : parse_variant(a.variant);
  opts.epoch_dates = a.epoch_dates;
  opts.framed = a.framed;
  const std::string text = read_file(a.input);
  const JsonValue doc = parse_json(text);
  const Bytes encoded = cbl_encode(doc, dict, opts);
  write_bytes(a.out, encoded);
  print_size_report(measure(doc, dict, opts, text.size()), err);
  return kExitOk;
}

inline int cmd_decode(const CodecArgs& a) {
  const StaticDictionary dict = load_dictionary(read_bytes(a.dict));
  DecodeOptions opts;
  opts.delta_encoding = !a.no_delta;
  opts.variant = parse_variant(a.variant);
  const JsonValue doc = cbl_decode(read_bytes(a.input), dict, opts);
  write_text(a.out, serialize_json(doc, 2) + "\n");
  return kExitOk;
}

struct BenchArgs {
  std::string corpus;
  std::string dict;
  std::string variants = "all";
  std::string csv;
  unsigned jobs = 1;
};

inline std::vector<BenchVariant> select_variants(const std::string& spec) {
  const auto all = all_bench_variants();
  if (spec == "all") return all;
  if (spec == "none") return {};
  std::vector<BenchVariant> out;
  std::stringstream ss(spec);
  std::string name;
  while (std::getline(ss, name, ',')) {
    auto it = std::find_if(all.begin(), all.end(),
                           [&](const BenchVariant& v) { return v.name == name; });
    if (it == all.end()) {
      throw CLI::ValidationError("--variants", "unknown variant " + name);
    }
    out.push_back(*it);
  }
  return out;
}

inline int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  const StaticDictionary dict = load_dictionary(read_bytes(a.dict));
  const auto variants = select_variants(a.variants);
  const auto rows = run_bench(a.corpus, dict, variants, a.jobs);
  out << render_bench_table(rows, variants);
  if (!a.csv.empty()) write_text(a.csv, render_bench_csv(rows, variants));
  for (const auto& r : rows) {
    if (!r.round_trip_ok) {
      err << r.example_name << ": round trip failed";
      if (!r.error.empty()) err << " (" << r.error << ")";
      err << '\n';
    }
  }
  return all_round_trips_ok(rows) ? kExitOk : kExitFormat;
}

/// Parses argv and runs one command. Never throws.
inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"CBL: compact binary JSON-LD codec", "cbl"};
  app.require_subcommand(1);
  std::string env_dict;
  if (const char* e = std::getenv("CBL_DICT")) env_dict = e;

  DictBuildArgs dict_args;
  auto* dict_cmd = app.add_subcommand("dict", "Static dictionary tools");
  dict_cmd->require_subcommand(1);
  auto* build = dict_cmd->add_subcommand("build", "Build a dictionary file");
  build->add_option("--vocab", dict_args.vocab, "Ontology term file, one term per line")
      ->check(CLI::ExistingFile);
  build->add_option("--custom", dict_args.custom, "Application terms, kept in file order")
      ->check(CLI::ExistingFile);
  build->add_option("-o,--out", dict_args.out, "Output path")->required();

  auto add_codec = [&](CLI::App* cmd, CodecArgs& a) {
    a.dict = env_dict;
    cmd->add_option("input", a.input)->required()->check(CLI::ExistingFile);
    auto* d = cmd->add_option("-d,--dict", a.dict, "Dictionary file (default $CBL_DICT)");
    if (env_dict.empty()) d->required();
    cmd->add_option("-o,--out", a.out, "Output path")->required();
    cmd->add_flag("--no-delta", a.no_delta, "Plain key/id lists, no string ops");
    cmd->add_option("--variant", a.variant, "standard | cbor-map | gzip-after");
  };
  CodecArgs enc_args;
  auto* enc = app.add_subcommand("encode", "JSON-LD to CBL");
  add_codec(enc, enc_args);
  enc->add_flag("--gzip-after", enc_args.gzip_after, "Gzip the message");
  enc->add_flag("--epoch-dates", enc_args.epoch_dates, "Timestamps as epoch seconds");
  enc->add_flag("--framed", enc_args.framed, "Prefix flags and dictionary fingerprint");
  CodecArgs dec_args;
  auto* dec = app.add_subcommand("decode", "CBL to JSON-LD");
  add_codec(dec, dec_args);

  BenchArgs bench_args;
  bench_args.dict = env_dict;
  auto* bench = app.add_subcommand("bench", "Size table over a corpus directory");
  bench->add_option("corpus", bench_args.corpus)->required()->check(CLI::ExistingDirectory);
  auto* bd = bench->add_option("-d,--dict", bench_args.dict, "Dictionary file (default $CBL_DICT)");
  if (env_dict.empty()) bd->required();
  bench->add_option("--variants", bench_args.variants, "all | none | comma list");
  bench->add_option("--csv", bench_args.csv, "Also write the table as CSV");
  bench->add_option("-j,--jobs", bench_args.jobs, "Files encoded concurrently")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (build->parsed()) return cmd_dict_build(dict_args, out);
    if (enc->parsed()) return cmd_encode(enc_args, err);
    if (dec->parsed()) return cmd_decode(dec_args);
    if (bench->parsed()) return cmd_bench(bench_args, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "cbl: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "cbl: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "cbl: " << e.what() << '\n';
    return kExitFormat;
  }
  return kExitUsage;
}

}  // namespace cbl::cli

#endif  // CBL_TOOLS_CLI_HPP_
