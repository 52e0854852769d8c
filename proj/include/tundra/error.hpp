// Copyright 2026 The Tundra Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace tundra {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad invocation: unknown flag, invalid option value, missing argument.
/// The CLI maps this to exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (manifests, lexicons, WAV files,
/// feature containers). The CLI maps this to exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: divergence, non-finite values, ill-posed requests.
/// The CLI maps this to exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace tundra
