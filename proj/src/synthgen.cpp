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

#include "rxkit/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rxkit/error.hpp"

namespace rxkit
{

namespace
{
constexpr double kPi = std::numbers::pi;
constexpr std::size_t kBlockSide = 4;

// Ring and disk geometry of the non-Gaussian background.
constexpr double kRingRadius = 1.0;
constexpr double kRingThickness = 0.25;
constexpr double kDiskRadius = 0.3;
constexpr double kDiskCentreY = -0.4;
constexpr double kDiskShare = 0.3;
constexpr double kExtraBandSd = 0.1;

std::size_t anomaly_count(std::size_t n, double fraction)
{
  if (!(fraction > 0.0) || !(fraction < 1.0)) {
    throw DataError("anomaly fraction must lie in (0, 1)");
  }
  const double k = std::round(fraction * static_cast<double>(n));
  if (k < 1.0) {
    throw DataError(
      "anomaly fraction " + std::to_string(fraction) + " gives no anomalous pixel in a " +
      std::to_string(n) + "-pixel scene");
  }
  if (k > static_cast<double>(n)) {
    throw DataError("anomaly count exceeds pixel count");
  }
  return static_cast<std::size_t>(k);
}

Mask paper_layout(std::size_t height, std::size_t width, std::size_t k)
{
  const std::size_t per_block = kBlockSide * kBlockSide;
  const std::size_t blocks = (k + per_block - 1) / per_block;
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(blocks))));
  const std::size_t rows = (blocks + cols - 1) / cols;
  const std::size_t cell_h = height / rows;
  const std::size_t cell_w = width / cols;
  if (cell_h < kBlockSide || cell_w < kBlockSide) {
    throw DataError(
      "paper-layout: " + std::to_string(blocks) + " blocks of 4x4 do not fit a " +
      std::to_string(height) + "x" + std::to_string(width) + " scene");
  }
  Mask mask(height, width);
  std::size_t placed = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t r0 = (b / cols) * cell_h + (cell_h - kBlockSide) / 2;
    const std::size_t c0 = (b % cols) * cell_w + (cell_w - kBlockSide) / 2;
    for (std::size_t i = 0; i < per_block && placed < k; ++i, ++placed) {
      mask.set((r0 + i / kBlockSide) * width + c0 + i % kBlockSide, true);
    }
  }
  return mask;
}

double gaussian(Rng & rng) { return rng.normal(); }

void check_spec(const SceneSpec & spec)
{
  if (spec.height == 0 || spec.width == 0 || spec.bands == 0) {
    throw std::invalid_argument("scene dimensions must be positive");
  }
  if (spec.background == Background::non_gaussian_mixture && spec.bands < 2) {
    throw std::invalid_argument("the non-gaussian-mixture background needs at least 2 bands");
  }
  if (!(spec.separation > 0.0) || !std::isfinite(spec.separation)) {
    throw std::invalid_argument("separation must be positive");
  }
  if (!(spec.anomaly_spread >= 0.0) || !std::isfinite(spec.anomaly_spread)) {
    throw std::invalid_argument("anomaly spread must be >= 0");
  }
}

void background_pixel(const SceneSpec & spec, Rng & rng, std::span<double> px)
{
  if (spec.background == Background::gaussian_blob) {
    for (auto & v : px) {
      v = gaussian(rng);
    }
    return;
  }
  if (rng.uniform() < kDiskShare) {
    const double rr = kDiskRadius * std::sqrt(rng.uniform());
    const double th = 2.0 * kPi * rng.uniform();
    px[0] = rr * std::cos(th);
    px[1] = kDiskCentreY + rr * std::sin(th);
  } else {
    const double t = kPi * rng.uniform();
    const double r = kRingRadius + kRingThickness * (rng.uniform() - 0.5);
    px[0] = r * std::cos(t);
    px[1] = r * std::sin(t);
  }
  for (std::size_t b = 2; b < px.size(); ++b) {
    px[b] = kExtraBandSd * gaussian(rng);
  }
}

void anomaly_pixel(const SceneSpec & spec, Rng & rng, std::span<double> px)
{
  if (spec.background == Background::gaussian_blob) {
    const double offset = spec.separation / std::sqrt(static_cast<double>(px.size()));
    for (auto & v : px) {
      v = offset + spec.anomaly_spread * gaussian(rng);
    }
    return;
  }
  px[0] = spec.anomaly_spread * gaussian(rng);
  px[1] = kRingRadius - spec.separation * kRingThickness + spec.anomaly_spread * gaussian(rng);
  for (std::size_t b = 2; b < px.size(); ++b) {
    px[b] = kExtraBandSd * gaussian(rng);
  }
}

}  // namespace

std::string_view to_string(Background b)
{
  return b == Background::gaussian_blob ? "gaussian-blob" : "non-gaussian-mixture";
}

Background parse_background(std::string_view s)
{
  if (s == "gaussian-blob") {
    return Background::gaussian_blob;
  }
  if (s == "non-gaussian-mixture") {
    return Background::non_gaussian_mixture;
  }
  throw std::invalid_argument("unknown background '" + std::string(s) + "'");
}

std::string_view to_string(AnomalyPattern p)
{
  switch (p) {
    case AnomalyPattern::paper_layout:
      return "paper-layout";
    case AnomalyPattern::random:
      return "random";
    case AnomalyPattern::explicit_mask:
      return "mask";
  }
  return "?";
}

AnomalyPattern parse_pattern(std::string_view s)
{
  if (s == "paper-layout") {
    return AnomalyPattern::paper_layout;
  }
  if (s == "random") {
    return AnomalyPattern::random;
  }
  if (s == "mask") {
    return AnomalyPattern::explicit_mask;
  }
  throw std::invalid_argument("unknown anomaly pattern '" + std::string(s) + "'");
}

Mask layout_mask(
  std::size_t height, std::size_t width, double fraction, AnomalyPattern pattern, RngSpec rng)
{
  const std::size_t n = height * width;
  const std::size_t k = anomaly_count(n, fraction);
  switch (pattern) {
    case AnomalyPattern::paper_layout:
      return paper_layout(height, width, k);
    case AnomalyPattern::random: {
      Mask mask(height, width);
      for (const auto i : sample_without_replacement(n, k, rng)) {
        mask.set(i, true);
      }
      return mask;
    }
    case AnomalyPattern::explicit_mask:
      break;
  }
  throw std::invalid_argument("layout_mask: explicit masks are supplied, not generated");
}

Scene generate_scene(const SceneSpec & spec)
{
  check_spec(spec);
  const std::size_t n = spec.height * spec.width;
  Mask mask = [&] {
    if (spec.pattern != AnomalyPattern::explicit_mask) {
      return layout_mask(
        spec.height, spec.width, spec.anomaly_fraction, spec.pattern,
        spec.rng.with_stream(streams::scene_layout));
    }
    if (!spec.mask) {
      throw std::invalid_argument("explicit anomaly pattern needs a mask");
    }
    if (spec.mask->height() != spec.height || spec.mask->width() != spec.width) {
      throw DimensionError("scene mask dimensions do not match the scene");
    }
    if (spec.mask->count() == 0) {
      throw DataError("scene mask marks no anomalous pixel");
    }
    return *spec.mask;
  }();

  Rng rng(spec.rng.with_stream(streams::scene));
  Matrix samples(n, spec.bands);
  for (std::size_t i = 0; i < n; ++i) {
    if (mask.at(i)) {
      anomaly_pixel(spec, rng, samples.row(i));
    } else {
      background_pixel(spec, rng, samples.row(i));
    }
  }
  return Scene{Raster(spec.height, spec.width, std::move(samples)), std::move(mask)};
}

Raster inject_targets(
  const Raster & patch, const Mask & mask, std::span<const double> target_spectrum, double blend)
{
  if (mask.height() != patch.height() || mask.width() != patch.width()) {
    throw DimensionError("inject_targets: mask dimensions do not match the patch");
  }
  if (target_spectrum.size() != patch.bands()) {
    throw DimensionError(
      "inject_targets: target has " + std::to_string(target_spectrum.size()) +
      " bands, patch has " + std::to_string(patch.bands()));
  }
  if (!(blend > 0.0) || !(blend <= 1.0)) {
    throw std::invalid_argument("inject_targets: blend must lie in (0, 1]");
  }
  Matrix out = patch.samples();
  for (std::size_t i = 0; i < out.rows(); ++i) {
    if (!mask.at(i)) {
      continue;
    }
    auto px = out.row(i);
    for (std::size_t b = 0; b < px.size(); ++b) {
      px[b] = blend * target_spectrum[b] + (1.0 - blend) * px[b];
    }
  }
  return Raster(patch.height(), patch.width(), std::move(out));
}

namespace
{

std::vector<double> smooth_spectrum(Rng & rng, std::size_t bands, double freq_lo, double freq_hi)
{
  const double base = 0.1 + 0.4 * rng.uniform();
  const double amp = 0.05 + 0.15 * rng.uniform();
  const double freq = freq_lo + (freq_hi - freq_lo) * rng.uniform();
  const double phase = 2.0 * kPi * rng.uniform();
  const double span = static_cast<double>(std::max<std::size_t>(1, bands - 1));
  std::vector<double> s(bands);
  for (std::size_t b = 0; b < bands; ++b) {
    s[b] = base + amp * std::sin(kPi * freq * static_cast<double>(b) / span + phase);
  }
  return s;
}

struct Wave
{
  double amp, u, v, phase;
};

}  // namespace

PatchScene generate_patch_scene(const PatchSceneSpec & spec)
{
  if (spec.patches_per_side == 0 || spec.patch_size == 0 || spec.bands == 0 || spec.endmembers == 0) {
    throw std::invalid_argument("patch scene dimensions must be positive");
  }
  if (!(spec.noise_sd >= 0.0)) {
    throw std::invalid_argument("noise sd must be >= 0");
  }
  const std::size_t side = spec.patches_per_side * spec.patch_size;
  const std::size_t n = side * side;
  const std::size_t m = spec.endmembers;
  Rng rng(spec.rng.with_stream(streams::scene));

  std::vector<std::vector<double>> endmember(m);
  for (auto & e : endmember) {
    e = smooth_spectrum(rng, spec.bands, 0.5, 2.5);
  }
  std::vector<double> target = smooth_spectrum(rng, spec.bands, 3.0, 4.0);

  constexpr std::size_t kWaves = 3;
  std::vector<Wave> waves(m * kWaves);
  for (auto & w : waves) {
    const double su = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double sv = rng.uniform() < 0.5 ? -1.0 : 1.0;
    w = Wave{
      0.5 + 0.5 * rng.uniform(), su * (0.5 + 2.0 * rng.uniform()), sv * (0.5 + 2.0 * rng.uniform()),
      2.0 * kPi * rng.uniform()};
  }

  Matrix samples(n, spec.bands);
  std::vector<double> logits(m);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      const double y = static_cast<double>(r) / static_cast<double>(side);
      const double x = static_cast<double>(c) / static_cast<double>(side);
      double top = -1e300;
      for (std::size_t k = 0; k < m; ++k) {
        double f = 0.0;
        for (std::size_t j = 0; j < kWaves; ++j) {
          const Wave & w = waves[k * kWaves + j];
          f += w.amp * std::cos(2.0 * kPi * (w.u * y + w.v * x) + w.phase);
        }
        logits[k] = 2.0 * f + 0.5 * rng.normal();
        top = std::max(top, logits[k]);
      }
      double z = 0.0;
      for (auto & l : logits) {
        l = std::exp(l - top);
        z += l;
      }
      auto px = samples.row(r * side + c);
      for (std::size_t b = 0; b < spec.bands; ++b) {
        double v = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          v += logits[k] / z * endmember[k][b];
        }
        px[b] = v + spec.noise_sd * rng.normal();
      }
    }
  }
  Raster clean(side, side, std::move(samples));

  const Mask patch_mask = layout_mask(
    spec.patch_size, spec.patch_size, spec.anomaly_fraction, AnomalyPattern::paper_layout, {});
  PatchGrid grid = PatchGrid::tiled(side, side, spec.patch_size, spec.patch_size);
  Mask targets(side, side);
  for (const auto & p : grid.patches) {
    for (std::size_t i = 0; i < spec.patch_size; ++i) {
      for (std::size_t j = 0; j < spec.patch_size; ++j) {
        if (patch_mask.at(i * spec.patch_size + j)) {
          targets.set((p.row + i) * side + p.col + j, true);
        }
      }
    }
  }
  Raster image = inject_targets(clean, targets, target, spec.blend);
  return PatchScene{std::move(clean), std::move(image), std::move(targets), std::move(grid), std::move(target)};
}

}  // namespace rxkit
