// Copyright 2026 The ropnet Authors
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

#ifndef ROPNET_ERRORS_HPP_
#define ROPNET_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ropnet {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid model, training, or run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Tensor shapes that do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Problems with input data: parse failures, schema violations, too few rows,
/// constant or unimputable columns, undefined metrics.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Batch-norm asked for batch statistics of a single sample.
class DegenerateBatchError : public DataError {
 public:
  using DataError::DataError;
};

/// Non-finite loss or gradient during training.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Unreadable, truncated, or incompatible checkpoint file.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

/// backward() called on a tape that no forward pass populated.
class TapeError : public Error {
 public:
  using Error::Error;
};

/// Ill-conditioned least-squares problem in the local surrogate.
class DegenerateNeighborhoodError : public Error {
 public:
  using Error::Error;
};

}  // namespace ropnet

#endif  // ROPNET_ERRORS_HPP_
