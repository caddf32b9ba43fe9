// Copyright 2026 The dragfl Authors
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

#ifndef DRAGFL_ERRORS_H_
#define DRAGFL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dragfl {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Binary vector operation on operands of different lengths, or a parameter
// vector that does not match its model.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A norm fell below kDegenerateNorm where a direction was required.
class DegenerateVectorError : public Error {
 public:
  using Error::Error;
};

// An operation would produce (or was handed) a NaN or infinite entry.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// Argument outside the operation's domain (empty batch, q out of range...).
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Operation called on an object in the wrong state.
class StateError : public Error {
 public:
  using Error::Error;
};

// Configuration rejected. `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace dragfl

#endif  // DRAGFL_ERRORS_H_
