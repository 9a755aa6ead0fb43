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

#ifndef CBL_DEFLATE_HPP_
#define CBL_DEFLATE_HPP_

// gzip (RFC 1952) wrappers over zlib. Output is deterministic: the header
// carries no timestamp or file name.

#include <zlib.h>

#include <cstdint>
#include <span>
#include <vector>

#include "cbl/error.hpp"

namespace cbl {

inline std::vector<std::uint8_t> compress_deflate(
    std::span<const std::uint8_t> in, int level = Z_BEST_COMPRESSION) {
  z_stream zs{};
  if (deflateInit2(&zs, level, Z_DEFLATED, 15 + 16, 9, Z_DEFAULT_STRATEGY) !=
      Z_OK) {
    throw Error(Errc::kIo, "deflateInit2 failed");
  }
  std::vector<std::uint8_t> out(deflateBound(&zs, static_cast<uLong>(in.size())));
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  const auto produced = zs.total_out;
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(Errc::kIo, "deflate did not finish");
  out.resize(produced);
  return out;
}

/// Inflates one gzip member; trailing bytes after it are an error.
inline std::vector<std::uint8_t> decompress_deflate(
    std::span<const std::uint8_t> in) {
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 16) != Z_OK) {
    throw Error(Errc::kIo, "inflateInit2 failed");
  }
  std::vector<std::uint8_t> out;
  std::uint8_t chunk[16384];
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = chunk;
    zs.avail_out = sizeof chunk;
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw Error(Errc::kCorruptStream,
                  zs.msg ? zs.msg : "truncated or corrupt gzip stream");
    }
    out.insert(out.end(), chunk, chunk + (sizeof chunk - zs.avail_out));
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw Error(Errc::kCorruptStream, "truncated gzip stream");
    }
  }
  const bool trailing = zs.avail_in != 0;
  inflateEnd(&zs);
  if (trailing) throw Error(Errc::kCorruptStream, "bytes after gzip member");
  return out;
}

}  // namespace cbl

#endif  // CBL_DEFLATE_HPP_
