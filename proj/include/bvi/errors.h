// Copyright 2026 The bvi Authors.
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

#ifndef BVI_ERRORS_H_
#define BVI_ERRORS_H_

#include <stdexcept>
#include <string>

namespace bvi {

// Root of all library errors. The CLI maps each subclass to a stable exit
// code, so new failure kinds should derive from one of the leaves below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes of vectors/matrices do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A point or parameter lies outside the set where the operation is defined
// (boundary of the simplex for entropy, eta <= 0, empty batch, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Theoretical parameters requested for a batch size above the admissible bound.
class FeasibilityError : public Error {
 public:
  FeasibilityError(const std::string& what, double bound)
      : Error(what), bound_(bound) {}
  double bound() const { return bound_; }

 private:
  double bound_;
};

// Invalid configuration key or value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// File could not be read, written or parsed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bvi

#endif  // BVI_ERRORS_H_
