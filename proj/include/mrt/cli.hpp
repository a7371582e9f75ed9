// Copyright 2026 The mrtradeoff Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mrt::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;  // coverage failure or oracle mismatch
inline constexpr int kUsage = 2;  // bad parameters, unparsable input

// Runs `mrt <verify|execute|bounds|tradeoff|optimize> ...`. Results go to
// `out` (or --out) only when the exit code is 0 or 1; diagnostics go to
// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses an instance of b-bit strings: one string of '0'/'1' characters per
// line, '#' comments. Throws ParseError.
std::vector<std::uint64_t> read_bit_strings(std::istream& in, unsigned b);

}  // namespace mrt::cli
