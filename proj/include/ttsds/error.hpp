// Copyright 2026 The TTSDS Authors. All Rights Reserved.
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

#ifndef TTSDS_ERROR_HPP_
#define TTSDS_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ttsds {

// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data: bad files, dangling paths, missing
// features, non-finite values.
class DataError : public Error {
 public:
  using Error::Error;
};

// A benchmark or registry configuration that cannot be satisfied.
class ConfigError : public DataError {
 public:
  using DataError::DataError;
};

// Too few observations to build a distribution.
class InsufficientDataError : public DataError {
 public:
  using DataError::DataError;
};

// Non-finite intermediate results, failed decompositions.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ttsds

#endif  // TTSDS_ERROR_HPP_
