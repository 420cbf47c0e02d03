/*
 * Copyright 2026 The SEAFL Simulator Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SEAFL_ERRORS_H_
#define SEAFL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace seafl {

// Base of every error raised by the simulator. Subclasses map one-to-one onto
// the failure categories callers are expected to distinguish.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand lengths disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Aggregation requested over zero updates.
class EmptyBufferError : public Error {
 public:
  using Error::Error;
};

// Every raw aggregation weight is zero, so normalization is impossible.
class DegenerateWeightsError : public Error {
 public:
  using Error::Error;
};

// Invalid or inconsistent configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A state-machine or round-ordering rule was violated.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Dataset is empty or otherwise unusable.
class DataError : public Error {
 public:
  using Error::Error;
};

// Malformed input file.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A computation produced NaN or Inf.
class NumericError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace seafl

#endif  // SEAFL_ERRORS_H_
