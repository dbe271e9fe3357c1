// Copyright 2026 The densecode Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace densecode {

// Base of every exception thrown by the library. `kind()` is a stable
// machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define DENSECODE_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(#Name, what) {}     \
  }

DENSECODE_DEFINE_ERROR(DimensionError);
DENSECODE_DEFINE_ERROR(NormalizationError);
DENSECODE_DEFINE_ERROR(NegativeCoefficient);
DENSECODE_DEFINE_ERROR(NotUnitary);
DENSECODE_DEFINE_ERROR(EmptySet);
DENSECODE_DEFINE_ERROR(BadArguments);
DENSECODE_DEFINE_ERROR(PolygonImpossible);
DENSECODE_DEFINE_ERROR(BadPartition);
DENSECODE_DEFINE_ERROR(Infeasible);
DENSECODE_DEFINE_ERROR(LetterOutOfRange);
DENSECODE_DEFINE_ERROR(DegenerateBasis);
DENSECODE_DEFINE_ERROR(MonotonicityViolation);
DENSECODE_DEFINE_ERROR(ParseError);

#undef DENSECODE_DEFINE_ERROR

}  // namespace densecode
