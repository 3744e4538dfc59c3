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

#include "rxkit/matrix.hpp"

#include <stdexcept>
#include <utility>

#include "rxkit/error.hpp"
#include "rxkit/simd/kernels.hpp"

namespace rxkit
{

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
: rows_(rows), cols_(cols), data_(std::move(data))
{
  if (data_.size() != rows * cols) {
    throw DimensionError(
      "matrix data has " + std::to_string(data_.size()) + " values, expected " +
      std::to_string(rows * cols));
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
: rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size())
{
  data_.reserve(rows_ * cols_);
  for (const auto & r : rows) {
    if (r.size() != cols_) {
      throw DimensionError("ragged matrix initializer");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n)
{
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

Matrix Matrix::transposed() const
{
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      t(j, i) = (*this)(i, j);
    }
  }
  return t;
}

Matrix Matrix::gather_rows(std::span<const std::size_t> indices) const
{
  Matrix out(indices.size(), cols_);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= rows_) {
      throw std::out_of_range("row index out of range");
    }
    const auto src = row(indices[k]);
    std::copy(src.begin(), src.end(), out.row(k).begin());
  }
  return out;
}

Matrix multiply(const Matrix & a, const Matrix & b)
{
  if (a.cols() != b.rows()) {
    throw DimensionError("multiply: inner dimensions differ");
  }
  const auto & k = simd::active();
  const Matrix bt = b.transposed();
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      out(i, j) = k.dot(a.row(i).data(), bt.row(j).data(), a.cols());
    }
  }
  return out;
}

}  // namespace rxkit
