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


#ifndef RXKIT_SYNTHGEN_HPP_
#define RXKIT_SYNTHGEN_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rxkit/raster.hpp"
#include "rxkit/rng.hpp"

namespace rxkit
{

enum class Background
{
  /// Isotropic standard normal in every band.
  gaussian_blob,
  /// Bands 0-1: thick half ring (uniform annular sector, radius 1, thickness
  /// 0.25) plus a uniform disk (radius 0.3, centred at (0, -0.4)) holding 30%
  /// of the pixels. Further bands: N(0, 0.1^2) noise.
  non_gaussian_mixture,
};

std::string_view to_string(Background b);
Background parse_background(std::string_view s);

enum class AnomalyPattern
{
  /// 4x4 pixel blocks centred on a regular lattice, filled in row-major
  /// order; the last block may be partial.
  paper_layout,
  /// Pixels drawn uniformly without replacement.
  random,
  /// The mask given in SceneSpec::mask.
  explicit_mask,
};

std::string_view to_string(AnomalyPattern p);
AnomalyPattern parse_pattern(std::string_view s);

struct SceneSpec
{
  std::size_t height = 100;
  std::size_t width = 100;
  std::size_t bands = 2;
  Background background = Background::non_gaussian_mixture;
  double anomaly_fraction = 0.0272;
  AnomalyPattern pattern = AnomalyPattern::paper_layout;
  std::optional<Mask> mask;
  /// Seed; the stream id is ignored.
  RngSpec rng{};
  /// Offset of the anomaly cluster from the background, in background
  /// spread units (ring thickness for the mixture, unit sd for the blob).
  double separation = 2.2;
  /// Standard deviation of the anomaly cluster in bands 0-1.
  double anomaly_spread = 0.1;
};

struct Scene
{
  Raster raster;
  Mask mask;
};

/// round(fraction * height * width) pixels of the given pattern. Throws
/// DataError when the count is zero, exceeds the pixel count, or the layout
/// does not fit.
Mask layout_mask(
  std::size_t height, std::size_t width, double fraction, AnomalyPattern pattern, RngSpec rng);

/// Throws DataError for an infeasible anomaly count, std::invalid_argument
/// for other invalid fields.
Scene generate_scene(const SceneSpec & spec);

/// Masked pixels become blend * target + (1 - blend) * original; the rest
/// are copied unchanged.
Raster inject_targets(
  const Raster & patch, const Mask & mask, std::span<const double> target_spectrum, double blend);

/// Multiband land-cover replica of a patch-split scene.
struct PatchSceneSpec
{
  std::size_t patches_per_side = 4;
  std::size_t patch_size = 100;
  std::size_t bands = 12;
  std::size_t endmembers = 4;
  double anomaly_fraction = 0.0272;  // per patch
  double blend = 0.5;
  double noise_sd = 0.005;
  RngSpec rng{};
};

struct PatchScene
{
  Raster clean;
  Raster image;  // clean with targets injected
  Mask targets;
  PatchGrid grid;  // checkerboard train/validation
  std::vector<double> target_spectrum;
};

/// Pixels are softmax mixtures of smooth random endmember spectra, with
/// abundance fields that vary slowly across the scene. Every patch receives
/// the paper-layout target mask.
PatchScene generate_patch_scene(const PatchSceneSpec & spec);

}  // namespace rxkit

#endif  // RXKIT_SYNTHGEN_HPP_
