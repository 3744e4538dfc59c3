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

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "rxkit/error.hpp"
#include "rxkit/raster.hpp"
#include "test_util.hpp"

using namespace rxkit;

namespace
{

void write_bsq_file(const std::filesystem::path & p, const std::string & header, const std::vector<double> & v)
{
  std::ofstream out(p, std::ios::binary);
  out << header << '\n';
  for (const double x : v) {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    char b[8];
    for (int i = 0; i < 8; ++i) {
      b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    }
    out.write(b, 8);
  }
}

Raster sample_raster(std::size_t h, std::size_t w, std::size_t d, std::uint32_t seed)
{
  return Raster(h, w, testutil::random_matrix(seed, h * w, d));
}

}  // namespace

TEST_CASE("bsq: 2x2x1 header and four values")
{
  testutil::TempDir dir("raster");
  write_bsq_file(dir / "a.bsq", "2 2 1", {0, 1, 2, 3});
  const Raster r = read_raster(dir / "a.bsq", FileFormat::bsq);
  CHECK(r.height() == 2);
  CHECK(r.width() == 2);
  CHECK(r.bands() == 1);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(r.samples()(i, 0) == static_cast<double>(i));
  }
}

TEST_CASE("bsq: single pixel with three bands")
{
  testutil::TempDir dir("raster");
  write_bsq_file(dir / "a.bsq", "1 1 3", {5, 6, 7});
  const Raster r = read_raster(dir / "a.bsq", FileFormat::bsq);
  CHECK(r.pixels() == 1);
  CHECK(r.bands() == 3);
  CHECK(r.pixel(0, 0)[0] == 5);
  CHECK(r.pixel(0, 0)[1] == 6);
  CHECK(r.pixel(0, 0)[2] == 7);
}

TEST_CASE("bsq: band-sequential order on disk")
{
  testutil::TempDir dir("raster");
  // Two pixels, two bands: plane 0 = {1, 2}, plane 1 = {10, 20}.
  write_bsq_file(dir / "a.bsq", "1 2 2", {1, 2, 10, 20});
  const Raster r = read_raster(dir / "a.bsq", FileFormat::bsq);
  CHECK(r.samples() == Matrix{{1, 10}, {2, 20}});
}

TEST_CASE("bsq: too few values is a dimension mismatch")
{
  testutil::TempDir dir("raster");
  write_bsq_file(dir / "a.bsq", "2 2 2", {0, 1, 2, 3, 4, 5, 6});
  CHECK_THROWS_WITH_AS(read_raster(dir / "a.bsq", FileFormat::bsq), doctest::Contains("mismatch"), DataError);
  write_bsq_file(dir / "b.bsq", "1 1 1", {0, 1});
  CHECK_THROWS_AS(read_raster(dir / "b.bsq", FileFormat::bsq), DataError);
}

TEST_CASE("ingestion rejects malformed headers and non-finite values")
{
  testutil::TempDir dir("raster");
  write_bsq_file(dir / "h.bsq", "2 x 1", {0, 1});
  CHECK_THROWS_WITH_AS(read_raster(dir / "h.bsq", FileFormat::bsq), doctest::Contains("header"), DataError);
  write_bsq_file(dir / "z.bsq", "0 1 1", {});
  CHECK_THROWS_AS(read_raster(dir / "z.bsq", FileFormat::bsq), DataError);
  write_bsq_file(dir / "n.bsq", "1 2 1", {1.0, std::numeric_limits<double>::quiet_NaN()});
  CHECK_THROWS_AS(read_raster(dir / "n.bsq", FileFormat::bsq), DataError);
  write_bsq_file(dir / "i.bsq", "1 1 1", {std::numeric_limits<double>::infinity()});
  CHECK_THROWS_AS(read_raster(dir / "i.bsq", FileFormat::bsq), DataError);
  testutil::spit(dir / "c.csv", "1,1,2\n1,nan\n");
  CHECK_THROWS_AS(read_raster(dir / "c.csv", FileFormat::csv), DataError);
  CHECK_THROWS_AS(read_raster(dir / "missing.bsq", FileFormat::bsq), DataError);
  testutil::spit(dir / "e.bsq", "");
  CHECK_THROWS_AS(read_raster(dir / "e.bsq", FileFormat::bsq), DataError);
}

TEST_CASE("csv raster: header plus one pixel per line")
{
  testutil::TempDir dir("raster");
  testutil::spit(dir / "a.csv", "1,2,2\n1.5,2\n-3,4e-3\n");
  const Raster r = read_raster(dir / "a.csv", FileFormat::csv);
  CHECK(r.samples() == Matrix{{1.5, 2}, {-3, 4e-3}});
  testutil::spit(dir / "b.csv", "1,2,2\n1.5,2\n");
  CHECK_THROWS_WITH_AS(read_raster(dir / "b.csv", FileFormat::csv), doctest::Contains("mismatch"), DataError);
  testutil::spit(dir / "c.csv", "1,2,2\n1.5,2\n1\n");
  CHECK_THROWS_AS(read_raster(dir / "c.csv", FileFormat::csv), DataError);
}

TEST_CASE("raster round trips are exact")
{
  testutil::TempDir dir("raster");
  for (std::uint32_t seed = 0; seed < 5; ++seed) {
    const Raster r = sample_raster(3 + seed, 4, 1 + seed, seed);
    write_raster(r, dir / "r.bsq", FileFormat::bsq);
    CHECK(read_raster(dir / "r.bsq", FileFormat::bsq) == r);
    write_raster(r, dir / "r.csv", FileFormat::csv);
    CHECK(read_raster(dir / "r.csv", FileFormat::csv) == r);
  }
  // Awkward values survive as well.
  const Raster odd(1, 4, Matrix{{5e-324}, {-0.0}, {1.7976931348623157e308}, {0.1}});
  write_raster(odd, dir / "o.csv", FileFormat::csv);
  const Raster back = read_raster(dir / "o.csv", FileFormat::csv);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::bit_cast<std::uint64_t>(back.samples()(i, 0)) == std::bit_cast<std::uint64_t>(odd.samples()(i, 0)));
  }
}

TEST_CASE("raster invariants are enforced at construction")
{
  CHECK_THROWS_AS(Raster(2, 2, Matrix(3, 1)), DimensionError);
  CHECK_THROWS_AS(Raster(0, 2, Matrix(0, 1)), DataError);
  CHECK_THROWS_AS(Raster(1, 1, Matrix(1, 0)), DataError);
  CHECK_THROWS_AS(Raster(1, 1, Matrix{{std::numeric_limits<double>::quiet_NaN()}}), DataError);
}

TEST_CASE("mask round trip and validation")
{
  testutil::TempDir dir("raster");
  Mask m(3, 4);
  m.set(0, true);
  m.set(7, true);
  CHECK(m.count() == 2);
  CHECK(m.at(7));
  for (const auto f : {FileFormat::bsq, FileFormat::csv}) {
    const auto p = dir / (f == FileFormat::bsq ? "m.bsq" : "m.csv");
    write_mask(m, p, f);
    CHECK(read_mask(p, f) == m);
  }
  write_bsq_file(dir / "bad.bsq", "1 2 1", {0.0, 0.5});
  CHECK_THROWS_AS(read_mask(dir / "bad.bsq", FileFormat::bsq), DataError);
  write_bsq_file(dir / "two.bsq", "1 1 2", {0.0, 1.0});
  CHECK_THROWS_AS(read_mask(dir / "two.bsq", FileFormat::bsq), DataError);
  CHECK_THROWS_AS(Mask(2, 2, std::vector<std::uint8_t>(3)), DimensionError);
}

TEST_CASE("score map: 1x1 round trip")
{
  testutil::TempDir dir("raster");
  const ScoreMap m(1, 1, {3.5});
  write_scoremap(m, dir / "s.bsq", FileFormat::bsq);
  CHECK(read_scoremap(dir / "s.bsq", FileFormat::bsq) == m);
  write_scoremap(m, dir / "s.csv", FileFormat::csv);
  CHECK(read_scoremap(dir / "s.csv", FileFormat::csv) == m);
}

TEST_CASE("score map: 2x2 csv has one line per image row")
{
  testutil::TempDir dir("raster");
  write_scoremap(ScoreMap(2, 2, {0, 1, 2, 3}), dir / "s.csv", FileFormat::csv);
  CHECK(testutil::slurp(dir / "s.csv") == "0,1\n2,3\n");
}

TEST_CASE("score map refuses NaN and negative scores")
{
  CHECK_THROWS_AS(ScoreMap(1, 2, {0.0, std::numeric_limits<double>::quiet_NaN()}), DataError);
  CHECK_THROWS_AS(ScoreMap(1, 1, {-1.0}), DataError);
  CHECK_THROWS_AS(ScoreMap(1, 2, {1.0}), DimensionError);
  testutil::TempDir dir("raster");
  testutil::spit(dir / "r.csv", "1,2\n3\n");
  CHECK_THROWS_AS(read_scoremap(dir / "r.csv", FileFormat::csv), DataError);
}

TEST_CASE("score map bsq round trip is bit exact")
{
  testutil::TempDir dir("raster");
  const auto v = testutil::random_matrix(3, 1, 35);
  std::vector<double> s;
  for (const double x : v.values()) {
    s.push_back(std::abs(x) * 1e-7);
  }
  const ScoreMap m(5, 7, s);
  write_scoremap(m, dir / "s.bsq", FileFormat::bsq);
  CHECK(read_scoremap(dir / "s.bsq", FileFormat::bsq) == m);
  write_scoremap(m, dir / "s.csv", FileFormat::csv);
  CHECK(read_scoremap(dir / "s.csv", FileFormat::csv) == m);
}

TEST_CASE("extract_patches: 2x2 grid on a 4x4 raster partitions the pixels")
{
  Matrix s(16, 1);
  for (std::size_t i = 0; i < 16; ++i) {
    s(i, 0) = static_cast<double>(i);
  }
  const Raster r(4, 4, s);
  const PatchGrid grid = PatchGrid::tiled(4, 4, 2, 2);
  CHECK(grid.patches.size() == 4);
  const auto patches = extract_patches(r, grid);
  std::multiset<double> seen;
  for (std::size_t k = 0; k < patches.size(); ++k) {
    CHECK(patches[k].height() == 2);
    CHECK(patches[k].width() == 2);
    for (const double v : patches[k].samples().values()) {
      seen.insert(v);
    }
  }
  CHECK(seen == std::multiset<double>(s.values().begin(), s.values().end()));
  // Top-left patch keeps the spatial layout.
  CHECK(patches[0].samples() == Matrix{{0}, {1}, {4}, {5}});
}

TEST_CASE("extract_patches: a full-size patch is the identity")
{
  const Raster r = sample_raster(100, 100, 2, 9);
  PatchGrid grid{100, 100, {{0, 0, Split::train}}};
  const auto p = extract_patches(r, grid);
  REQUIRE(p.size() == 1);
  CHECK(p[0] == r);
}

TEST_CASE("extract_patches: out-of-bounds and overlapping patches are rejected")
{
  const Raster r = sample_raster(4, 4, 1, 1);
  PatchGrid oob{2, 2, {{3, 3, Split::train}}};
  CHECK_THROWS_AS(extract_patches(r, oob), DataError);
  PatchGrid overlap{2, 2, {{0, 0, Split::train}, {1, 1, Split::validation}}};
  CHECK_THROWS_WITH_AS(overlap.validate(4, 4), doctest::Contains("overlap"), DataError);
  CHECK_THROWS_AS(PatchGrid::tiled(4, 4, 5, 1), DataError);
}

TEST_CASE("tiled grid alternates splits in a checkerboard")
{
  const PatchGrid g = PatchGrid::tiled(400, 400, 100, 100);
  CHECK(g.patches.size() == 16);
  CHECK(g.indices_of(Split::train).size() == 8);
  CHECK(g.indices_of(Split::validation).size() == 8);
  CHECK(g.indices_of(Split::test).empty());
  for (const auto & p : g.patches) {
    const bool even = ((p.row / 100) + (p.col / 100)) % 2 == 0;
    CHECK(p.split == (even ? Split::train : Split::validation));
  }
  Mask m(4, 4);
  m.set(5, true);
  const auto mp = extract_patches(m, PatchGrid::tiled(4, 4, 2, 2));
  CHECK(mp[0].count() == 1);
  CHECK(mp[0].at(3));
}

TEST_CASE("stack_samples and format helpers")
{
  const Raster a = sample_raster(1, 2, 3, 1);
  const Raster b = sample_raster(2, 1, 3, 2);
  const std::vector<Raster> both{a, b};
  const Matrix s = stack_samples(both);
  CHECK(s.rows() == 4);
  CHECK(s(2, 1) == b.samples()(0, 1));
  const std::vector<Raster> mixed{a, sample_raster(1, 1, 2, 3)};
  CHECK_THROWS_AS(stack_samples(mixed), DimensionError);
  CHECK(format_for_path("x/y.CSV") == FileFormat::csv);
  CHECK(format_for_path("x/y.bsq") == FileFormat::bsq);
  CHECK(format_for_path("x/y") == FileFormat::bsq);
  CHECK(parse_format("csv") == FileFormat::csv);
  CHECK_THROWS_AS(parse_format("tiff"), std::invalid_argument);
  CHECK(to_string(Split::validation) == "validation");
}
