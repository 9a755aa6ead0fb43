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

#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    unsetenv("CBL_DICT");
    dir_ = fs::temp_directory_path() /
           (std::string("cbl_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override {
    unsetenv("CBL_DICT");
    fs::remove_all(dir_);
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    args.insert(args.begin(), "cbl");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return cbl::cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::vector<std::string> vocab_args() const {
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(cbl::testing::data_dir() / "vocab")) {
      files.push_back(e.path().string());
    }
    std::sort(files.begin(), files.end());
    std::vector<std::string> args = {"dict", "build"};
    for (const auto& f : files) {
      args.push_back("--vocab");
      args.push_back(f);
    }
    args.push_back("--custom");
    args.push_back((cbl::testing::data_dir() / "custom-terms.txt").string());
    return args;
  }

  std::string build_dict() {
    auto args = vocab_args();
    args.push_back("-o");
    args.push_back(path("corpus.cbld"));
    EXPECT_EQ(run(args), 0) << err_.str();
    return path("corpus.cbld");
  }

  std::string fixture(const std::string& name) const {
    return (cbl::testing::data_dir() / "corpus" / (name + ".jsonld")).string();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, DictBuildMatchesLibrary) {
  const std::string d = build_dict();
  const auto& expected = cbl::testing::corpus_dictionary();
  EXPECT_NE(out_.str().find("@id=0\n@graph=1\n"), std::string::npos);
  EXPECT_NE(out_.str().find("fingerprint " + expected.fingerprint_hex()), std::string::npos);
  EXPECT_NE(out_.str().find("terms " + std::to_string(expected.size())), std::string::npos);
  EXPECT_NE(out_.str().find("custom: 27 terms, ids 200..226"), std::string::npos) << out_.str();
  const auto loaded = cbl::load_dictionary(cbl::cli::read_bytes(d));
  EXPECT_EQ(loaded.fingerprint(), expected.fingerprint());
}

TEST_F(CliTest, EncodeDecodeRoundTrip) {
  const std::string d = build_dict();
  for (const char* variant : {"standard", "cbor-map", "gzip-after"}) {
    ASSERT_EQ(run({"encode", fixture("ssn-12"), "-d", d, "-o", path("x.cbl"),
                   "--variant", variant}),
              0)
        << err_.str();
    EXPECT_NE(err_.str().find("savings"), std::string::npos);
    ASSERT_EQ(run({"decode", path("x.cbl"), "-d", d, "-o", path("x.jsonld"),
                   "--variant", variant}),
              0)
        << err_.str();
    const auto back = cbl::parse_json(cbl::read_file(path("x.jsonld")));
    EXPECT_EQ(back, cbl::testing::load_fixture("ssn-12").doc) << variant;
  }
}

TEST_F(CliTest, FlagsAndEnvironmentDictionary) {
  const std::string d = build_dict();
  setenv("CBL_DICT", d.c_str(), 1);
  ASSERT_EQ(run({"encode", fixture("ssn-01"), "-o", path("f.cbl"), "--framed",
                 "--no-delta", "--gzip-after", "--epoch-dates"}),
            0)
      << err_.str();
  EXPECT_EQ(cbl::cli::read_bytes(path("f.cbl"))[0], 0x16);
  // Framed messages need no decode flags.
  ASSERT_EQ(run({"decode", path("f.cbl"), "-o", path("f.jsonld")}), 0) << err_.str();
  EXPECT_EQ(cbl::parse_json(cbl::read_file(path("f.jsonld"))),
            cbl::testing::load_fixture("ssn-01").doc);
}

TEST_F(CliTest, EncodedFileMatchesLibrary) {
  const std::string d = build_dict();
  ASSERT_EQ(run({"encode", fixture("ssn-01"), "-d", d, "-o", path("a.cbl")}), 0);
  EXPECT_EQ(cbl::cli::read_bytes(path("a.cbl")),
            cbl::cbl_encode(cbl::testing::load_fixture("ssn-01").doc,
                            cbl::testing::corpus_dictionary()));
  EXPECT_NE(err_.str().find("original 883 B, cbl 108 B"), std::string::npos) << err_.str();
}

TEST_F(CliTest, Bench) {
  const std::string d = build_dict();
  ASSERT_EQ(run({"bench", (cbl::testing::data_dir() / "corpus").string(), "-d", d,
                 "--csv", path("b.csv"), "-j", "3"}),
            0)
      << err_.str();
  EXPECT_NE(out_.str().find("ssn-19"), std::string::npos);
  EXPECT_NE(out_.str().find("gzip-after"), std::string::npos);
  const std::string csv = cbl::read_file(path("b.csv"));
  EXPECT_EQ(csv.rfind("example,original,gzip,cbl,no-delta,cbor-map,gzip-after,savings%,round_trip\r\n", 0), 0u);
  ASSERT_EQ(run({"bench", (cbl::testing::data_dir() / "corpus").string(), "-d", d,
                 "--variants", "no-delta"}),
            0);
  EXPECT_EQ(out_.str().find("cbor-map"), std::string::npos);
}

TEST_F(CliTest, BenchFailureExitCode) {
  const std::string d = build_dict();
  fs::create_directories(dir_ / "bad");
  std::ofstream(dir_ / "bad" / "x.jsonld") << R"({"ex:unlisted":1})";
  EXPECT_EQ(run({"bench", (dir_ / "bad").string(), "-d", d}), 3);
  EXPECT_NE(err_.str().find("round trip failed"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  const std::string d = build_dict();
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"encode", fixture("ssn-01"), "-o", path("a.cbl")}), 2);  // no -d
  EXPECT_EQ(run({"encode", path("missing.jsonld"), "-d", d, "-o", path("a.cbl")}), 2);
  EXPECT_EQ(run({"encode", fixture("ssn-01"), "-d", d, "-o", path("a.cbl"),
                 "--variant", "zip"}),
            2);
  EXPECT_EQ(run({"bench", (cbl::testing::data_dir() / "corpus").string(), "-d", d,
                 "--variants", "bogus"}),
            2);
  std::ofstream(path("bad.jsonld")) << "{\"@id\": }";
  EXPECT_EQ(run({"encode", path("bad.jsonld"), "-d", d, "-o", path("a.cbl")}), 2);
  EXPECT_NE(err_.str().find("SyntaxError"), std::string::npos) << err_.str();
  std::ofstream(path("empty.jsonld")) << "{}";
  EXPECT_EQ(run({"encode", path("empty.jsonld"), "-d", d, "-o", path("a.cbl")}), 2);
  std::ofstream(path("unknown.jsonld")) << R"({"ex:unlisted":1})";
  EXPECT_EQ(run({"encode", path("unknown.jsonld"), "-d", d, "-o", path("a.cbl")}), 2);
  std::ofstream(path("t1.txt")) << "a\n";
  std::ofstream(path("t2.txt")) << "a\n";
  EXPECT_EQ(run({"dict", "build", "--vocab", path("t1.txt"), "--vocab", path("t2.txt"),
                 "-o", path("c.cbld")}),
            2);
}

TEST_F(CliTest, CorruptDataExitsThree) {
  const std::string d = build_dict();
  ASSERT_EQ(run({"encode", fixture("ssn-01"), "-d", d, "-o", path("a.cbl"), "--framed"}), 0);
  // A dictionary with different terms.
  std::ofstream(path("t.txt")) << "ex:a\n";
  ASSERT_EQ(run({"dict", "build", "--vocab", path("t.txt"), "-o", path("other.cbld")}), 0);
  EXPECT_EQ(run({"decode", path("a.cbl"), "-d", path("other.cbld"), "-o", path("o.jsonld")}), 3);
  EXPECT_NE(err_.str().find("FingerprintMismatch"), std::string::npos) << err_.str();
  auto bytes = cbl::cli::read_bytes(path("a.cbl"));
  bytes.resize(bytes.size() - 5);
  cbl::cli::write_bytes(path("cut.cbl"), bytes);
  EXPECT_EQ(run({"decode", path("cut.cbl"), "-d", d, "-o", path("o.jsonld")}), 3);
  std::ofstream(path("junk.cbld")) << "not a dictionary";
  EXPECT_EQ(run({"encode", fixture("ssn-01"), "-d", path("junk.cbld"), "-o", path("a.cbl")}), 3);
}

TEST(ExitCodeTest, Mapping) {
  using cbl::Errc;
  for (Errc c : {Errc::kSyntax, Errc::kDuplicateKey, Errc::kTermCollision,
                 Errc::kUnknownKeyTerm, Errc::kEmptyMap, Errc::kIo}) {
    EXPECT_EQ(cbl::cli::exit_code_for(c), 2) << cbl::errc_name(c);
  }
  for (Errc c : {Errc::kTruncated, Errc::kMalformed, Errc::kFingerprintMismatch,
                 Errc::kFormat, Errc::kIndexOutOfRange, Errc::kCorruptStream}) {
    EXPECT_EQ(cbl::cli::exit_code_for(c), 3) << cbl::errc_name(c);
  }
}

}  // namespace
