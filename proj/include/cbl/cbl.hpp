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

#ifndef CBL_CBL_HPP_
#define CBL_CBL_HPP_

// Umbrella header.

#include "cbl/bench.hpp"
#include "cbl/bits.hpp"
#include "cbl/cbor.hpp"
#include "cbl/deflate.hpp"
#include "cbl/error.hpp"
#include "cbl/index_codec.hpp"
#include "cbl/json.hpp"
#include "cbl/pipeline.hpp"
#include "cbl/reindex.hpp"
#include "cbl/static_dictionary.hpp"
#include "cbl/structure.hpp"

#endif  // CBL_CBL_HPP_
