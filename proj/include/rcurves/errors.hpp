// Copyright 2026 the rcurves authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RCURVES_ERRORS_HPP
#define RCURVES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rcurves {

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DivisionByNonUnit : Error {
  explicit DivisionByNonUnit(const std::string& w = "series division by a non-unit")
      : Error(w) {}
};

struct AllZeroInput : Error {
  explicit AllZeroInput(const std::string& w = "all input forms are zero") : Error(w) {}
};

struct AllZeroFactor : Error {
  explicit AllZeroFactor(const std::string& w = "all components of a factor are zero")
      : Error(w) {}
};

struct MalformedPoint : Error {
  explicit MalformedPoint(const std::string& w = "projective point has all coordinates zero")
      : Error(w) {}
};

struct WrongArity : Error {
  explicit WrongArity(const std::string& w) : Error(w) {}
};

struct TowerError : Error {
  explicit TowerError(const std::string& w) : Error(w) {}
};

struct ClassMismatch : Error {
  explicit ClassMismatch(const std::string& w) : Error(w) {}
};

struct DiagonalViolation : Error {
  explicit DiagonalViolation(const std::string& w = "coincident domain points") : Error(w) {}
};

struct NotTransversal : Error {
  explicit NotTransversal(const std::string& w = "jet is not transversal to the center")
      : Error(w) {}
};

struct ProfileInconsistent : Error {
  explicit ProfileInconsistent(const std::string& w = "twist profile is inconsistent")
      : Error(w) {}
};

struct ImageInsideCenter : Error {
  explicit ImageInsideCenter(const std::string& w = "morphism image lies inside a center")
      : Error(w) {}
};

struct GenericSampleNotFound : Error {
  explicit GenericSampleNotFound(const std::string& w) : Error(w) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(w) {}
};

}  // namespace rcurves

#endif  // RCURVES_ERRORS_HPP
