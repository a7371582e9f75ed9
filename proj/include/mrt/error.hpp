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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mrt {

// Root of every error thrown by the library. The CLI maps InvalidParameter,
// DomainError and ParseError to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A constructor argument violates a documented precondition (divisibility,
// ranges, unknown tags).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// A numeric argument is outside the domain of a formula (zero input count,
// reducer size below the problem minimum, missing relation size).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A brute-force enumeration would exceed the configured ceiling.
class SizingError : public Error {
 public:
  SizingError(const std::string& what_count, unsigned long long value,
              unsigned long long ceiling)
      : Error(what_count + " = " + std::to_string(value) +
              " exceeds sizing ceiling " + std::to_string(ceiling)),
        count_name_(what_count) {}

  const std::string& count_name() const noexcept { return count_name_; }

 private:
  std::string count_name_;
};

// assign() produced a reducer id that the schema's enumerator never yields.
class SchemaIntegrityError : public Error {
 public:
  using Error::Error;
};

// No feasible solution exists (isolated hypergraph node, g(q)=0 with outputs).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mrt
