// Copyright 2026 The ppcauction Authors.
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

#include <stdexcept>
#include <string>

namespace ppcauction {

// Base of every error thrown by the library. The C API maps each subclass to a
// distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched or out-of-range vector lengths and indices.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A numeric argument outside its admissible domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Enumeration would exceed the configured predictor budget.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, unsigned long long required)
      : Error(what), required_(required) {}
  unsigned long long required() const { return required_; }

 private:
  unsigned long long required_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Learner state used in a way its protocol does not allow.
class StateError : public Error {
 public:
  using Error::Error;
};

// Ground-truth model fitting diverged.
class FitError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ppcauction
