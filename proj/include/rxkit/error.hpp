// Copyright 2026 The rxkit Authors
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

#ifndef RXKIT_ERROR_HPP_
#define RXKIT_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rxkit
{

/// Input data that cannot be used: malformed files, mismatched shapes,
/// degenerate samples. Maps to CLI exit code 3.
class DataError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public DataError
{
public:
  using DataError::DataError;
};

/// Numeric failure, e.g. a matrix that stays indefinite after regularization.
/// Maps to CLI exit code 4.
class NumericError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class FactorizationError : public NumericError
{
public:
  FactorizationError(std::size_t pivot, double value)
  : NumericError("Cholesky factorization failed at pivot " + std::to_string(pivot) +
                 " (value " + std::to_string(value) + ")"),
    pivot_(pivot)
  {
  }

  std::size_t pivot() const noexcept { return pivot_; }

private:
  std::size_t pivot_;
};

// Precondition violations on arguments (sizes of zero, non-positive scales)
// are reported with std::invalid_argument.

}  // namespace rxkit

#endif  // RXKIT_ERROR_HPP_
