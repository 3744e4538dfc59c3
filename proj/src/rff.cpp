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

#include "rxkit/rff.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "binary_io.hpp"
#include "rxkit/error.hpp"
#include "rxkit/numerics.hpp"
#include "rxkit/parallel.hpp"
#include "rxkit/simd/kernels.hpp"
#include "text_io.hpp"

namespace rxkit
{

std::string_view to_string(FeatureRepresentation r)
{
  return r == FeatureRepresentation::complex ? "complex" : "real-cos-sin";
}

FeatureRepresentation parse_representation(std::string_view s)
{
  if (s == "real-cos-sin") {
    return FeatureRepresentation::real_cos_sin;
  }
  if (s == "complex") {
    return FeatureRepresentation::complex;
  }
  throw std::invalid_argument("unknown feature representation '" + std::string(s) + "'");
}

RffBasis rff_sample(
  std::size_t bands, std::size_t features, double sigma, RngSpec rng,
  FeatureRepresentation representation)
{
  if (features == 0 || bands == 0) {
    throw std::invalid_argument("rff_sample: feature and band counts must be positive");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("rff_sample: sigma must be positive");
  }
  return RffBasis{gaussian_sample(rng, features, bands, sigma), sigma, rng, representation};
}

RffRowMapper::RffRowMapper(const RffBasis & basis)
: bands_(basis.bands()),
  features_(basis.features()),
  scale_(1.0 / std::sqrt(static_cast<double>(basis.features()))),
  freq_t_(basis.frequencies.transposed()),
  phase_(basis.features())
{
}

void RffRowMapper::map(std::span<const double> x, std::span<double> out)
{
  if (x.size() != bands_ || out.size() != 2 * features_) {
    throw DimensionError("RffRowMapper: size mismatch");
  }
  const auto & k = simd::active();
  std::fill(phase_.begin(), phase_.end(), 0.0);
  for (std::size_t b = 0; b < bands_; ++b) {
    k.axpy(x[b], freq_t_.row(b).data(), phase_.data(), features_);
  }
  double * c = out.data();
  double * s = out.data() + features_;
  k.sincos(phase_.data(), s, c, features_);
  for (auto & v : out) {
    v *= scale_;
  }
}

FeatureMatrix rff_map(const RffBasis & basis, const Matrix & x)
{
  if (x.cols() != basis.bands()) {
    throw DimensionError(
      "rff_map: samples have " + std::to_string(x.cols()) + " bands, basis has " +
      std::to_string(basis.bands()));
  }
  const std::size_t n = x.rows();
  const std::size_t dd = basis.features();
  FeatureMatrix out;
  out.representation = basis.representation;
  out.rows = n;
  out.features = dd;
  Matrix real(n, 2 * dd);
  parallel_for(n, 64, [&](std::size_t begin, std::size_t end) {
    RffRowMapper mapper(basis);
    for (std::size_t i = begin; i < end; ++i) {
      mapper.map(x.row(i), real.row(i));
    }
  });
  if (basis.representation == FeatureRepresentation::real_cos_sin) {
    out.real = std::move(real);
    return out;
  }
  out.complex_values.resize(n * dd);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = real.row(i);
    for (std::size_t j = 0; j < dd; ++j) {
      out.complex_values[i * dd + j] = {r[j], r[dd + j]};
    }
  }
  return out;
}

Matrix approx_gram(const RffBasis & basis, const Matrix & x)
{
  const FeatureMatrix z = rff_map(basis, x);
  if (z.representation == FeatureRepresentation::real_cos_sin) {
    return row_gram(z.real);
  }
  const std::size_t n = z.rows;
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      std::complex<double> acc = 0.0;
      for (std::size_t f = 0; f < z.features; ++f) {
        acc += z.at(i, f) * std::conj(z.at(j, f));
      }
      out(i, j) = acc.real();
      out(j, i) = acc.real();
    }
  }
  return out;
}

void write_basis(std::ostream & os, const RffBasis & basis)
{
  os << basis.features() << ' ' << basis.bands() << ' ' << detail::format_double(basis.sigma) << ' '
     << basis.rng_used.seed << ' ' << basis.rng_used.stream << ' '
     << to_string(basis.representation) << '\n';
  detail::write_le_doubles(os, basis.frequencies.values());
}

RffBasis read_basis(std::istream & is)
{
  std::string line;
  if (!std::getline(is, line)) {
    throw DataError("basis: missing header");
  }
  const auto fields = detail::split_ws(line);
  if (fields.size() != 6) {
    throw DataError("basis: header must have 6 fields, got '" + line + "'");
  }
  const auto features = detail::parse_uint(fields[0]);
  const auto bands = detail::parse_uint(fields[1]);
  const auto sigma = detail::parse_double(fields[2]);
  const auto seed = detail::parse_uint(fields[3]);
  const auto stream = detail::parse_uint(fields[4]);
  if (!features || !bands || !sigma || !seed || !stream || *features == 0 || *bands == 0 ||
      !(*sigma > 0.0) || *stream > 0xffffffffULL) {
    throw DataError("basis: malformed header '" + line + "'");
  }
  FeatureRepresentation rep{};
  try {
    rep = parse_representation(fields[5]);
  } catch (const std::invalid_argument & e) {
    throw DataError(std::string("basis: ") + e.what());
  }
  auto values = detail::read_le_doubles(is, *features * *bands, "basis");
  for (const double v : values) {
    if (!std::isfinite(v)) {
      throw DataError("basis: non-finite frequency");
    }
  }
  return RffBasis{
    Matrix(*features, *bands, std::move(values)), *sigma,
    RngSpec{*seed, static_cast<std::uint32_t>(*stream)}, rep};
}

void save_basis(const std::string & path, const RffBasis & basis)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw DataError("cannot open '" + path + "' for writing");
  }
  write_basis(os, basis);
  if (!os) {
    throw DataError("failed writing '" + path + "'");
  }
}

RffBasis load_basis(const std::string & path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw DataError("cannot open '" + path + "'");
  }
  RffBasis b = read_basis(is);
  if (!detail::at_end(is)) {
    throw DataError("basis: trailing data in '" + path + "'");
  }
  return b;
}

}  // namespace rxkit
