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

#include "rxkit/rrx.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "binary_io.hpp"
#include "rxkit/error.hpp"
#include "rxkit/parallel.hpp"
#include "text_io.hpp"

namespace rxkit
{

namespace
{
constexpr std::size_t kPanelWidth = 32;

void check_bands(const RrxModel & model, std::size_t bands, const char * who)
{
  if (bands != model.bands()) {
    throw DimensionError(
      std::string(who) + ": test pixels have " + std::to_string(bands) + " bands, model has " +
      std::to_string(model.bands()));
  }
}

// Maps rows [first, first + count) of x into block rows [0, count).
void map_block(const RffBasis & basis, const Matrix & x, std::size_t first, std::size_t count, Matrix & block)
{
  parallel_for(count, 64, [&](std::size_t begin, std::size_t end) {
    RffRowMapper mapper(basis);
    for (std::size_t i = begin; i < end; ++i) {
      mapper.map(x.row(first + i), block.row(i));
    }
  });
}

}  // namespace

RrxModel rrx_fit(const Matrix & x, const RrxOptions & options, PhaseTimer * timer, RrxFitStats * stats)
{
  const std::size_t n = x.rows();
  if (n == 0 || x.cols() == 0) {
    throw std::invalid_argument("rrx_fit: empty sample matrix");
  }
  if (options.features == 0) {
    throw std::invalid_argument("rrx_fit: feature count must be positive");
  }
  if (!(options.ridge >= 0.0)) {
    throw std::invalid_argument("rrx_fit: ridge must be >= 0");
  }
  const std::size_t block_rows = std::max<std::size_t>(1, options.block_rows);

  RffBasis basis;
  {
    PhaseScope scope(timer, Phase::transform);
    const double sigma = options.sigma.resolve(x, options.rng.with_stream(streams::pairs));
    basis = rff_sample(x.cols(), options.features, sigma, options.rng.with_stream(streams::basis));
  }
  const std::size_t width = basis.width();

  OuterProductAccumulator acc(width, block_rows);
  Matrix block(block_rows, width);
  std::vector<double> sum(options.center ? width : 0, 0.0);
  std::size_t peak = 0;

  for (std::size_t first = 0; first < n; first += block_rows) {
    const std::size_t count = std::min(block_rows, n - first);
    {
      PhaseScope scope(timer, Phase::transform);
      map_block(basis, x, first, count, block);
    }
    PhaseScope scope(timer, Phase::covariance);
    for (std::size_t i = 0; i < count; ++i) {
      const auto z = block.row(i);
      acc.add(z);
      for (std::size_t j = 0; j < sum.size(); ++j) {
        sum[j] += z[j];
      }
    }
    peak = std::max(peak, block.size() + acc.resident_values() + sum.size());
  }

  Matrix gram;
  std::vector<double> mean;
  {
    PhaseScope scope(timer, Phase::covariance);
    gram = acc.finish();
    if (options.center) {
      mean.resize(width);
      for (std::size_t j = 0; j < width; ++j) {
        mean[j] = sum[j] / static_cast<double>(n);
      }
      for (std::size_t a = 0; a < width; ++a) {
        for (std::size_t b = 0; b < width; ++b) {
          gram(a, b) -= static_cast<double>(n) * mean[a] * mean[b];
        }
      }
    }
  }
  if (stats != nullptr) {
    stats->rows = n;
    stats->peak_resident_values = peak;
  }

  PhaseScope scope(timer, Phase::inversion);
  SpdFactor factor = spd_factorize(gram, options.ridge);
  const double used = factor.ridge();
  const double sigma = basis.sigma;
  return RrxModel{std::move(basis), std::move(factor), used, n, sigma, options.center, std::move(mean)};
}

std::vector<double> rrx_score(const RrxModel & model, const Matrix & x, PhaseTimer * timer)
{
  check_bands(model, x.cols(), "rrx_score");
  const std::size_t n = x.rows();
  const std::size_t width = model.basis.width();
  std::vector<double> scores(n);
  PhaseScope scope(timer, Phase::detection);
  const std::size_t blocks = (n + kPanelWidth - 1) / kPanelWidth;
  parallel_for(blocks, 4, [&](std::size_t b0, std::size_t b1) {
    RffRowMapper mapper(model.basis);
    std::vector<double> z(width);
    for (std::size_t blk = b0; blk < b1; ++blk) {
      const std::size_t first = blk * kPanelWidth;
      const std::size_t cols = std::min(kPanelWidth, n - first);
      Matrix panel(width, cols);
      for (std::size_t c = 0; c < cols; ++c) {
        mapper.map(x.row(first + c), z);
        for (std::size_t j = 0; j < width; ++j) {
          panel(j, c) = model.centered ? z[j] - model.feature_mean[j] : z[j];
        }
      }
      const auto q = quadratic_forms(model.feat_factor, panel);
      std::copy(q.begin(), q.end(), scores.begin() + static_cast<std::ptrdiff_t>(first));
    }
  });
  return scores;
}

RrxStreamScorer::RrxStreamScorer(const RrxModel & model)
: model_(&model), mapper_(model.basis), features_(model.basis.width())
{
}

double RrxStreamScorer::score(std::span<const double> pixel)
{
  if (pixel.size() != model_->bands()) {
    throw DimensionError(
      "rrx stream: pixel " + std::to_string(position_) + " has " + std::to_string(pixel.size()) +
      " bands, model has " + std::to_string(model_->bands()));
  }
  mapper_.map(pixel, features_);
  const std::size_t width = features_.size();
  Matrix panel(width, 1);
  for (std::size_t j = 0; j < width; ++j) {
    panel(j, 0) = model_->centered ? features_[j] - model_->feature_mean[j] : features_[j];
  }
  ++position_;
  return quadratic_forms(model_->feat_factor, panel)[0];
}

void rrx_score_streaming(
  const RrxModel & model, const std::function<bool(std::vector<double> &)> & source,
  const std::function<void(double)> & sink)
{
  RrxStreamScorer scorer(model);
  std::vector<double> pixel;
  while (source(pixel)) {
    sink(scorer.score(pixel));
  }
}

void write_rrx_model(std::ostream & os, const RrxModel & model)
{
  os << "rxkit-rrx-model 1\n[basis]\n";
  write_basis(os, model.basis);
  os << "[meta]\n"
     << detail::format_double(model.ridge) << ' ' << model.n_fit << ' '
     << detail::format_double(model.sigma) << ' ' << (model.centered ? 1 : 0) << '\n';
  const std::size_t m = model.feat_factor.dim();
  os << "[factor] " << m << '\n';
  detail::write_le_doubles(os, model.feat_factor.lower().values());
  os << "[mean] " << model.feature_mean.size() << '\n';
  detail::write_le_doubles(os, model.feature_mean);
}

namespace
{

std::string expect_line(std::istream & is, const std::string & what)
{
  std::string line;
  if (!std::getline(is, line)) {
    throw DataError("rrx model: missing " + what);
  }
  return line;
}

std::size_t section_count(const std::string & line, const std::string & tag)
{
  const auto f = detail::split_ws(line);
  const auto v = f.size() == 2 && f[0] == tag ? detail::parse_uint(f[1]) : std::nullopt;
  if (!v) {
    throw DataError("rrx model: expected '" + tag + " <count>', got '" + line + "'");
  }
  return static_cast<std::size_t>(*v);
}

}  // namespace

RrxModel read_rrx_model(std::istream & is)
{
  if (expect_line(is, "magic") != "rxkit-rrx-model 1") {
    throw DataError("rrx model: bad magic line");
  }
  if (expect_line(is, "[basis]") != "[basis]") {
    throw DataError("rrx model: expected [basis]");
  }
  RffBasis basis = read_basis(is);
  if (expect_line(is, "[meta]") != "[meta]") {
    throw DataError("rrx model: expected [meta]");
  }
  const std::string meta = expect_line(is, "metadata");
  const auto f = detail::split_ws(meta);
  if (f.size() != 4) {
    throw DataError("rrx model: malformed metadata '" + meta + "'");
  }
  const auto ridge = detail::parse_double(f[0]);
  const auto n_fit = detail::parse_uint(f[1]);
  const auto sigma = detail::parse_double(f[2]);
  const auto centered = detail::parse_uint(f[3]);
  if (!ridge || !n_fit || !sigma || !centered || *centered > 1) {
    throw DataError("rrx model: malformed metadata '" + meta + "'");
  }
  const std::size_t m = section_count(expect_line(is, "[factor]"), "[factor]");
  if (m != basis.width()) {
    throw DataError("rrx model: factor size does not match basis");
  }
  Matrix lower(m, m, detail::read_le_doubles(is, m * m, "rrx model factor"));
  const std::size_t k = section_count(expect_line(is, "[mean]"), "[mean]");
  if (k != (*centered ? m : 0)) {
    throw DataError("rrx model: mean size does not match");
  }
  auto mean = detail::read_le_doubles(is, k, "rrx model mean");
  return RrxModel{
    std::move(basis), SpdFactor(std::move(lower), *ridge), *ridge, *n_fit, *sigma, *centered == 1,
    std::move(mean)};
}

}  // namespace rxkit
