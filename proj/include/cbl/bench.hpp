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

#ifndef CBL_BENCH_HPP_
#define CBL_BENCH_HPP_

// Size comparison over a corpus of JSON-LD files. Every reported size comes
// from a message that was decoded again and compared with its input.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "cbl/deflate.hpp"
#include "cbl/error.hpp"
#include "cbl/json.hpp"
#include "cbl/pipeline.hpp"
#include "cbl/static_dictionary.hpp"

namespace cbl {

/// One encoder configuration measured by the bench.
struct BenchVariant {
  std::string name;
  EncodeOptions options;
};

/// The ablation set: the default followed by each single change to it.
inline std::vector<BenchVariant> all_bench_variants() {
  EncodeOptions no_delta;
  no_delta.delta_encoding = false;
  EncodeOptions cbor_map;
  cbor_map.variant = Variant::kCborMap;
  EncodeOptions gzip_after;
  gzip_after.variant = Variant::kGzipAfter;
  return {{"no-delta", no_delta},
          {"cbor-map", cbor_map},
          {"gzip-after", gzip_after}};
}

struct BenchRow {
  std::string example_name;
  std::size_t original_bytes = 0;
  std::size_t gzip_bytes = 0;
  std::size_t cbl_bytes = 0;
  std::vector<std::pair<std::string, std::size_t>> variant_bytes;
  double savings_percent = 0.0;
  bool round_trip_ok = true;
  std::string error;  // set when the file could not be encoded

  std::size_t variant(std::string_view name) const {
    for (const auto& [n, b] : variant_bytes) {
      if (n == name) return b;
    }
    throw std::out_of_range("no variant " + std::string(name));
  }
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Measures one document. Round-trip failures are recorded, not thrown.
inline BenchRow bench_document(std::string name, std::string_view text,
                               const StaticDictionary& dict,
                               const std::vector<BenchVariant>& variants) {
  BenchRow row;
  row.example_name = std::move(name);
  row.original_bytes = text.size();
  row.gzip_bytes = compress_deflate(std::span(
                       reinterpret_cast<const std::uint8_t*>(text.data()),
                       text.size()))
                       .size();
  try {
    const JsonValue doc = parse_json(text);
    auto encode_checked = [&](const EncodeOptions& opts) {
      const Bytes out = cbl_encode(doc, dict, opts);
      DecodeOptions d{opts.delta_encoding, opts.variant};
      if (!structural_equal(cbl_decode(out, dict, d), doc)) {
        row.round_trip_ok = false;
      }
      return out.size();
    };
    row.cbl_bytes = encode_checked(EncodeOptions{});
    for (const auto& v : variants) {
      row.variant_bytes.emplace_back(v.name, encode_checked(v.options));
    }
    row.savings_percent = cbl::savings_percent(row.original_bytes, row.cbl_bytes);
  } catch (const Error& e) {
    row.round_trip_ok = false;
    row.error = e.what();
  }
  return row;
}

/// Benchmarks every *.jsonld and *.json file directly under dir. Rows come
/// back sorted by file name regardless of `jobs`.
inline std::vector<BenchRow> run_bench(const std::filesystem::path& dir,
                                       const StaticDictionary& dict,
                                       const std::vector<BenchVariant>& variants,
                                       unsigned jobs = 1) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(Errc::kIo, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".jsonld" || ext == ".json")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::vector<BenchRow> rows(files.size());
  auto work = [&](std::size_t i) {
    rows[i] = bench_document(files[i].stem().string(), read_file(files[i]),
                             dict, variants);
  };
  if (jobs <= 1) {
    for (std::size_t i = 0; i < files.size(); ++i) work(i);
    return rows;
  }
  std::vector<std::future<void>> pending;
  for (std::size_t start = 0; start < files.size(); start += jobs) {
    pending.clear();
    for (std::size_t i = start; i < std::min(files.size(), start + jobs); ++i) {
      pending.push_back(std::async(std::launch::async, work, i));
    }
    for (auto& f : pending) f.get();
  }
  return rows;
}

inline bool all_round_trips_ok(const std::vector<BenchRow>& rows) {
  return std::all_of(rows.begin(), rows.end(),
                     [](const BenchRow& r) { return r.round_trip_ok; });
}

inline std::string format_percent(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", p);
  return buf;
}

namespace detail {

inline std::vector<std::string> bench_header(const std::vector<BenchVariant>& variants) {
  std::vector<std::string> h = {"example", "original", "gzip", "cbl"};
  for (const auto& v : variants) h.push_back(v.name);
  h.push_back("savings%");
  h.push_back("round_trip");
  return h;
}

inline std::vector<std::string> bench_cells(const BenchRow& r) {
  std::vector<std::string> c = {r.example_name, std::to_string(r.original_bytes),
                                std::to_string(r.gzip_bytes),
                                std::to_string(r.cbl_bytes)};
  for (const auto& [name, bytes] : r.variant_bytes) c.push_back(std::to_string(bytes));
  c.push_back(format_percent(r.savings_percent));
  c.push_back(r.round_trip_ok ? "ok" : "FAILED");
  return c;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Right-aligned plain text table.
inline std::string render_bench_table(const std::vector<BenchRow>& rows,
                                      const std::vector<BenchVariant>& variants) {
  std::vector<std::vector<std::string>> cells = {detail::bench_header(variants)};
  for (const auto& r : rows) cells.push_back(detail::bench_cells(r));
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], line[i].size());
    }
  }
  std::string out;
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out += "  ";
      const std::size_t pad = width[i] - line[i].size();
      if (i == 0) {
        out += line[i] + std::string(pad, ' ');
      } else {
        out += std::string(pad, ' ') + line[i];
      }
    }
    out += '\n';
  }
  return out;
}

/// RFC 4180 CSV with CRLF line ends.
inline std::string render_bench_csv(const std::vector<BenchRow>& rows,
                                    const std::vector<BenchVariant>& variants) {
  std::vector<std::vector<std::string>> lines = {detail::bench_header(variants)};
  for (const auto& r : rows) lines.push_back(detail::bench_cells(r));
  std::string out;
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out += ',';
      out += detail::csv_field(line[i]);
    }
    out += "\r\n";
  }
  return out;
}

}  // namespace cbl

#endif  // CBL_BENCH_HPP_
