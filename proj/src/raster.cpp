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

#include "rxkit/raster.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "binary_io.hpp"
#include "rxkit/error.hpp"
#include "text_io.hpp"

namespace rxkit
{

Raster::Raster(std::size_t height, std::size_t width, Matrix samples)
: height_(height), width_(width), samples_(std::move(samples))
{
  if (height_ == 0 || width_ == 0 || samples_.cols() == 0) {
    throw DataError("raster dimensions must be positive");
  }
  if (samples_.rows() != height_ * width_) {
    throw DimensionError(
      "raster has " + std::to_string(samples_.rows()) + " pixels, expected " +
      std::to_string(height_ * width_));
  }
  const auto values = samples_.values();
  const auto bad = std::find_if(values.begin(), values.end(), [](double v) { return !std::isfinite(v); });
  if (bad != values.end()) {
    throw DataError(
      "raster contains a non-finite value at sample " + std::to_string(bad - values.begin()));
  }
}

Mask::Mask(std::size_t height, std::size_t width, std::vector<std::uint8_t> labels)
: height_(height), width_(width), labels_(std::move(labels))
{
  if (labels_.size() != height_ * width_) {
    throw DimensionError("mask label count does not match height*width");
  }
  for (auto & v : labels_) {
    v = v != 0 ? 1 : 0;
  }
}

std::size_t Mask::count() const noexcept
{
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), std::uint8_t{1}));
}

ScoreMap::ScoreMap(std::size_t height, std::size_t width, std::vector<double> scores)
: height_(height), width_(width), scores_(std::move(scores))
{
  if (scores_.size() != height_ * width_) {
    throw DimensionError("score count does not match height*width");
  }
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    if (!std::isfinite(scores_[i]) || scores_[i] < 0.0) {
      throw DataError("score " + std::to_string(i) + " is not a finite non-negative value");
    }
  }
}

std::string_view to_string(Split split)
{
  switch (split) {
    case Split::train:
      return "train";
    case Split::validation:
      return "validation";
    case Split::test:
      return "test";
  }
  return "?";
}

void PatchGrid::validate(std::size_t height, std::size_t width) const
{
  if (patch_height == 0 || patch_width == 0) {
    throw DataError("patch size must be positive");
  }
  for (std::size_t a = 0; a < patches.size(); ++a) {
    const auto & p = patches[a];
    if (p.row + patch_height > height || p.col + patch_width > width) {
      throw DataError(
        "patch " + std::to_string(a) + " at (" + std::to_string(p.row) + "," +
        std::to_string(p.col) + ") is out of bounds");
    }
    for (std::size_t b = 0; b < a; ++b) {
      const auto & q = patches[b];
      const bool rows_overlap = p.row < q.row + patch_height && q.row < p.row + patch_height;
      const bool cols_overlap = p.col < q.col + patch_width && q.col < p.col + patch_width;
      if (rows_overlap && cols_overlap) {
        throw DataError("patches " + std::to_string(b) + " and " + std::to_string(a) + " overlap");
      }
    }
  }
}

PatchGrid PatchGrid::tiled(
  std::size_t height, std::size_t width, std::size_t patch_height, std::size_t patch_width)
{
  if (patch_height == 0 || patch_width == 0 || patch_height > height || patch_width > width) {
    throw DataError("patch size does not fit the raster");
  }
  PatchGrid grid{patch_height, patch_width, {}};
  const std::size_t rows = height / patch_height;
  const std::size_t cols = width / patch_width;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      grid.patches.push_back(
        {r * patch_height, c * patch_width, (r + c) % 2 == 0 ? Split::train : Split::validation});
    }
  }
  return grid;
}

std::vector<std::size_t> PatchGrid::indices_of(Split split) const
{
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < patches.size(); ++i) {
    if (patches[i].split == split) {
      out.push_back(i);
    }
  }
  return out;
}

FileFormat format_for_path(const std::filesystem::path & path)
{
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv" ? FileFormat::csv : FileFormat::bsq;
}

FileFormat parse_format(std::string_view name)
{
  if (name == "csv") {
    return FileFormat::csv;
  }
  if (name == "bsq" || name == "bsq-binary") {
    return FileFormat::bsq;
  }
  throw std::invalid_argument("unknown file format '" + std::string(name) + "'");
}

namespace
{

struct Header
{
  std::size_t height;
  std::size_t width;
  std::size_t bands;
};

std::ifstream open_input(const std::filesystem::path & path, std::ios::openmode mode)
{
  std::ifstream in(path, mode);
  if (!in) {
    throw DataError("cannot open '" + path.string() + "'");
  }
  return in;
}

std::ofstream open_output(const std::filesystem::path & path, std::ios::openmode mode)
{
  std::ofstream out(path, mode);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  }
  return out;
}

void check_written(std::ofstream & out, const std::filesystem::path & path)
{
  out.flush();
  if (!out) {
    throw std::runtime_error("write to '" + path.string() + "' failed");
  }
}

Header parse_header(std::string_view line, char sep, const std::string & where)
{
  const auto fields = sep == ' ' ? detail::split_ws(line) : detail::split(line, sep);
  if (fields.size() != 3) {
    throw DataError(where + ": malformed header '" + std::string(line) + "'");
  }
  std::size_t dims[3];
  for (int i = 0; i < 3; ++i) {
    const auto v = detail::parse_uint(fields[i]);
    if (!v || *v == 0) {
      throw DataError(where + ": malformed header '" + std::string(line) + "'");
    }
    dims[i] = static_cast<std::size_t>(*v);
  }
  return {dims[0], dims[1], dims[2]};
}

Raster read_bsq(const std::filesystem::path & path)
{
  auto in = open_input(path, std::ios::binary);
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(path.string() + ": missing header");
  }
  const Header h = parse_header(line, ' ', path.string());
  const std::size_t n = h.height * h.width;
  const auto planes = detail::read_le_doubles(in, n * h.bands, path.string() + ": dimension mismatch");
  if (!detail::at_end(in)) {
    throw DataError(path.string() + ": dimension mismatch, trailing data after " +
                    std::to_string(n * h.bands) + " values");
  }
  Matrix samples(n, h.bands);
  for (std::size_t b = 0; b < h.bands; ++b) {
    for (std::size_t p = 0; p < n; ++p) {
      samples(p, b) = planes[b * n + p];
    }
  }
  return Raster(h.height, h.width, std::move(samples));
}

void write_bsq(
  std::size_t height, std::size_t width, const Matrix & samples, const std::filesystem::path & path)
{
  auto out = open_output(path, std::ios::binary | std::ios::trunc);
  out << height << ' ' << width << ' ' << samples.cols() << '\n';
  const std::size_t n = samples.rows();
  std::vector<double> plane(n);
  for (std::size_t b = 0; b < samples.cols(); ++b) {
    for (std::size_t p = 0; p < n; ++p) {
      plane[p] = samples(p, b);
    }
    detail::write_le_doubles(out, plane);
  }
  check_written(out, path);
}

Raster read_csv(const std::filesystem::path & path)
{
  auto in = open_input(path, std::ios::in);
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError(path.string() + ": missing header");
  }
  const Header h = parse_header(line, ',', path.string());
  const std::size_t n = h.height * h.width;
  Matrix samples(n, h.bands);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) {
      continue;
    }
    if (row >= n) {
      throw DataError(path.string() + ": dimension mismatch, more than " + std::to_string(n) + " rows");
    }
    const auto fields = detail::split(line, ',');
    if (fields.size() != h.bands) {
      throw DataError(
        path.string() + ": dimension mismatch, row " + std::to_string(row) + " has " +
        std::to_string(fields.size()) + " values, expected " + std::to_string(h.bands));
    }
    for (std::size_t b = 0; b < h.bands; ++b) {
      const auto v = detail::parse_double(fields[b]);
      if (!v) {
        throw DataError(path.string() + ": unparsable value '" + std::string(fields[b]) + "'");
      }
      samples(row, b) = *v;
    }
    ++row;
  }
  if (row != n) {
    throw DataError(
      path.string() + ": dimension mismatch, " + std::to_string(row) + " rows, expected " +
      std::to_string(n));
  }
  return Raster(h.height, h.width, std::move(samples));
}

void write_csv(
  std::size_t height, std::size_t width, const Matrix & samples, const std::filesystem::path & path)
{
  auto out = open_output(path, std::ios::trunc);
  out << height << ',' << width << ',' << samples.cols() << '\n';
  for (std::size_t p = 0; p < samples.rows(); ++p) {
    for (std::size_t b = 0; b < samples.cols(); ++b) {
      if (b > 0) {
        out << ',';
      }
      out << detail::format_double(samples(p, b));
    }
    out << '\n';
  }
  check_written(out, path);
}

Mask mask_from_raster(const Raster & r, const std::filesystem::path & path)
{
  if (r.bands() != 1) {
    throw DataError(path.string() + ": mask must have exactly one band");
  }
  std::vector<std::uint8_t> labels(r.pixels());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double v = r.samples()(i, 0);
    if (v != 0.0 && v != 1.0) {
      throw DataError(path.string() + ": mask value at pixel " + std::to_string(i) + " is not 0 or 1");
    }
    labels[i] = v == 1.0 ? 1 : 0;
  }
  return Mask(r.height(), r.width(), std::move(labels));
}

}  // namespace

Raster read_raster(const std::filesystem::path & path, FileFormat format)
{
  return format == FileFormat::csv ? read_csv(path) : read_bsq(path);
}

void write_raster(const Raster & raster, const std::filesystem::path & path, FileFormat format)
{
  if (format == FileFormat::csv) {
    write_csv(raster.height(), raster.width(), raster.samples(), path);
  } else {
    write_bsq(raster.height(), raster.width(), raster.samples(), path);
  }
}

Mask read_mask(const std::filesystem::path & path, FileFormat format)
{
  return mask_from_raster(read_raster(path, format), path);
}

void write_mask(const Mask & mask, const std::filesystem::path & path, FileFormat format)
{
  Matrix values(mask.pixels(), 1);
  for (std::size_t i = 0; i < mask.pixels(); ++i) {
    values(i, 0) = mask.at(i) ? 1.0 : 0.0;
  }
  write_raster(Raster(mask.height(), mask.width(), std::move(values)), path, format);
}

void write_scoremap(const ScoreMap & map, const std::filesystem::path & path, FileFormat format)
{
  if (format == FileFormat::bsq) {
    const auto s = map.scores();
    write_bsq(map.height(), map.width(), Matrix(s.size(), 1, {s.begin(), s.end()}), path);
    return;
  }
  auto out = open_output(path, std::ios::trunc);
  for (std::size_t r = 0; r < map.height(); ++r) {
    for (std::size_t c = 0; c < map.width(); ++c) {
      if (c > 0) {
        out << ',';
      }
      out << detail::format_double(map.scores()[r * map.width() + c]);
    }
    out << '\n';
  }
  check_written(out, path);
}

ScoreMap read_scoremap(const std::filesystem::path & path, FileFormat format)
{
  if (format == FileFormat::bsq) {
    const Raster r = read_bsq(path);
    if (r.bands() != 1) {
      throw DataError(path.string() + ": score map must have exactly one band");
    }
    const auto v = r.samples().values();
    return ScoreMap(r.height(), r.width(), {v.begin(), v.end()});
  }
  auto in = open_input(path, std::ios::in);
  std::vector<double> scores;
  std::size_t width = 0;
  std::size_t height = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) {
      continue;
    }
    const auto fields = detail::split(line, ',');
    if (height == 0) {
      width = fields.size();
    } else if (fields.size() != width) {
      throw DataError(path.string() + ": ragged score map at line " + std::to_string(height + 1));
    }
    for (const auto f : fields) {
      const auto v = detail::parse_double(f);
      if (!v) {
        throw DataError(path.string() + ": unparsable value '" + std::string(f) + "'");
      }
      scores.push_back(*v);
    }
    ++height;
  }
  if (height == 0) {
    throw DataError(path.string() + ": empty score map");
  }
  return ScoreMap(height, width, std::move(scores));
}

std::vector<Raster> extract_patches(const Raster & raster, const PatchGrid & grid)
{
  grid.validate(raster.height(), raster.width());
  std::vector<Raster> out;
  out.reserve(grid.patches.size());
  const std::size_t d = raster.bands();
  for (const auto & p : grid.patches) {
    Matrix samples(grid.patch_height * grid.patch_width, d);
    for (std::size_t r = 0; r < grid.patch_height; ++r) {
      for (std::size_t c = 0; c < grid.patch_width; ++c) {
        const auto src = raster.pixel(p.row + r, p.col + c);
        std::copy(src.begin(), src.end(), samples.row(r * grid.patch_width + c).begin());
      }
    }
    out.emplace_back(grid.patch_height, grid.patch_width, std::move(samples));
  }
  return out;
}

std::vector<Mask> extract_patches(const Mask & mask, const PatchGrid & grid)
{
  grid.validate(mask.height(), mask.width());
  std::vector<Mask> out;
  out.reserve(grid.patches.size());
  for (const auto & p : grid.patches) {
    std::vector<std::uint8_t> labels(grid.patch_height * grid.patch_width);
    for (std::size_t r = 0; r < grid.patch_height; ++r) {
      for (std::size_t c = 0; c < grid.patch_width; ++c) {
        labels[r * grid.patch_width + c] = mask.labels()[(p.row + r) * mask.width() + p.col + c];
      }
    }
    out.emplace_back(grid.patch_height, grid.patch_width, std::move(labels));
  }
  return out;
}

Matrix stack_samples(std::span<const Raster> rasters)
{
  if (rasters.empty()) {
    return {};
  }
  const std::size_t d = rasters.front().bands();
  std::size_t n = 0;
  for (const auto & r : rasters) {
    if (r.bands() != d) {
      throw DimensionError("cannot stack rasters with different band counts");
    }
    n += r.pixels();
  }
  Matrix out(n, d);
  std::size_t at = 0;
  for (const auto & r : rasters) {
    const auto v = r.samples().values();
    std::copy(v.begin(), v.end(), out.data() + at);
    at += v.size();
  }
  return out;
}

}  // namespace rxkit
