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

#ifndef RXKIT_RASTER_HPP_
#define RXKIT_RASTER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "rxkit/matrix.hpp"

namespace rxkit
{

/// n-pixel, d-band image. Samples are stored pixel-major (n x d, pixels in
/// row-major spatial order); the spatial shape is metadata only.
class Raster
{
public:
  /// Throws DataError on zero dimensions, a sample count that does not match
  /// height*width x bands, or any non-finite value.
  Raster(std::size_t height, std::size_t width, Matrix samples);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t bands() const noexcept { return samples_.cols(); }
  std::size_t pixels() const noexcept { return samples_.rows(); }
  const Matrix & samples() const noexcept { return samples_; }

  std::span<const double> pixel(std::size_t row, std::size_t col) const
  {
    return samples_.row(row * width_ + col);
  }

  friend bool operator==(const Raster &, const Raster &) = default;

private:
  std::size_t height_;
  std::size_t width_;
  Matrix samples_;
};

/// Per-pixel target flags (1 = anomaly).
class Mask
{
public:
  Mask(std::size_t height, std::size_t width, std::vector<std::uint8_t> labels);
  Mask(std::size_t height, std::size_t width) : Mask(height, width, std::vector<std::uint8_t>(height * width, 0)) {}

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t pixels() const noexcept { return labels_.size(); }
  std::span<const std::uint8_t> labels() const noexcept { return labels_; }
  bool at(std::size_t index) const { return labels_.at(index) != 0; }
  void set(std::size_t index, bool value) { labels_.at(index) = value ? 1 : 0; }
  std::size_t count() const noexcept;

  friend bool operator==(const Mask &, const Mask &) = default;

private:
  std::size_t height_;
  std::size_t width_;
  std::vector<std::uint8_t> labels_;
};

/// Per-pixel anomaly scores. Scores must be finite and non-negative.
class ScoreMap
{
public:
  ScoreMap(std::size_t height, std::size_t width, std::vector<double> scores);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::span<const double> scores() const noexcept { return scores_; }

  friend bool operator==(const ScoreMap &, const ScoreMap &) = default;

private:
  std::size_t height_;
  std::size_t width_;
  std::vector<double> scores_;
};

enum class Split { train, validation, test };

std::string_view to_string(Split split);

struct PatchAssignment
{
  std::size_t row;
  std::size_t col;
  Split split;
};

/// Fixed-size patches placed inside a parent raster.
struct PatchGrid
{
  std::size_t patch_height = 0;
  std::size_t patch_width = 0;
  std::vector<PatchAssignment> patches;

  /// Throws DataError if a patch leaves the height x width parent or two
  /// patches overlap.
  void validate(std::size_t height, std::size_t width) const;

  /// Full tiling in row-major patch order. Splits alternate train/validation
  /// in a checkerboard so each half covers the whole scene.
  static PatchGrid tiled(
    std::size_t height, std::size_t width, std::size_t patch_height, std::size_t patch_width);

  std::vector<std::size_t> indices_of(Split split) const;
};

enum class FileFormat { bsq, csv };

/// ".csv" (any case) selects csv, everything else bsq.
FileFormat format_for_path(const std::filesystem::path & path);
FileFormat parse_format(std::string_view name);

Raster read_raster(const std::filesystem::path & path, FileFormat format);
void write_raster(const Raster & raster, const std::filesystem::path & path, FileFormat format);

/// Masks use the raster formats with bands = 1 and values in {0, 1}.
Mask read_mask(const std::filesystem::path & path, FileFormat format);
void write_mask(const Mask & mask, const std::filesystem::path & path, FileFormat format);

/// bsq: raster layout with bands = 1. csv: one line per image row, values
/// comma separated, no header.
void write_scoremap(const ScoreMap & map, const std::filesystem::path & path, FileFormat format);
ScoreMap read_scoremap(const std::filesystem::path & path, FileFormat format);

std::vector<Raster> extract_patches(const Raster & raster, const PatchGrid & grid);
std::vector<Mask> extract_patches(const Mask & mask, const PatchGrid & grid);

/// Pixels of every raster stacked into one n x d sample matrix.
Matrix stack_samples(std::span<const Raster> rasters);

}  // namespace rxkit

#endif  // RXKIT_RASTER_HPP_
