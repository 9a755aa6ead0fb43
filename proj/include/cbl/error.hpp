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

#ifndef CBL_ERROR_HPP_
#define CBL_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cbl {

/// Failure categories raised by the codec. Every throw site in the library
/// uses cbl::Error carrying one of these.
enum class Errc {
  kSyntax,
  kDuplicateKey,
  kTruncated,
  kMalformed,
  kNonCanonical,
  kUnsupportedItem,
  kTermCollision,
  kFormat,
  kFingerprintMismatch,
  kUnknownKeyTerm,
  kUnknownTermId,
  kNotSorted,
  kDropTooLong,
  kRegionOrderViolation,
  kEmptyMap,
  kInvalidCode,
  kUnbalancedStructure,
  kIndexOutOfRange,
  kCorruptStream,
  kIo,
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::kSyntax: return "SyntaxError";
    case Errc::kDuplicateKey: return "DuplicateKey";
    case Errc::kTruncated: return "Truncated";
    case Errc::kMalformed: return "Malformed";
    case Errc::kNonCanonical: return "NonCanonical";
    case Errc::kUnsupportedItem: return "UnsupportedItem";
    case Errc::kTermCollision: return "TermCollision";
    case Errc::kFormat: return "FormatError";
    case Errc::kFingerprintMismatch: return "FingerprintMismatch";
    case Errc::kUnknownKeyTerm: return "UnknownKeyTerm";
    case Errc::kUnknownTermId: return "UnknownTermId";
    case Errc::kNotSorted: return "NotSorted";
    case Errc::kDropTooLong: return "DropTooLong";
    case Errc::kRegionOrderViolation: return "RegionOrderViolation";
    case Errc::kEmptyMap: return "EmptyMap";
    case Errc::kInvalidCode: return "InvalidCode";
    case Errc::kUnbalancedStructure: return "UnbalancedStructure";
    case Errc::kIndexOutOfRange: return "IndexOutOfRange";
    case Errc::kCorruptStream: return "CorruptStream";
    case Errc::kIo: return "IOError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Malformed JSON text; offset is the byte position of the failure.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error(Errc::kSyntax,
              what + " at byte " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace cbl

#endif  // CBL_ERROR_HPP_
