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

#include "commands.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

#include "rxkit/detector.hpp"
#include "rxkit/error.hpp"
#include "rxkit/evalbench.hpp"
#include "rxkit/raster.hpp"
#include "rxkit/synthgen.hpp"
#include "rxkit_cli.hpp"

namespace rxkit::cli
{

namespace
{

namespace fs = std::filesystem;

std::string num(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T>
std::string join(const std::vector<T> & values)
{
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) {
      out += ',';
    }
    if constexpr (std::is_floating_point_v<T>) {
      out += num(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

/// Replayable key = value body; non-replayable facts go in '#' lines.
class Manifest
{
public:
  explicit Manifest(const std::string & command) : command_(command) {}

  void set(const std::string & key, const std::string & value) { body_.emplace_back(key, value); }
  void set(const std::string & key, double value) { set(key, num(value)); }
  void set(const std::string & key, std::size_t value) { set(key, std::to_string(value)); }
  void set(const std::string & key, std::uint64_t value, int) { set(key, std::to_string(value)); }
  void set(const std::string & key, bool value) { set(key, std::string(value ? "true" : "false")); }
  void note(const std::string & key, const std::string & value) { notes_.emplace_back(key, value); }
  void note(const std::string & key, double value) { note(key, num(value)); }

  std::string text() const
  {
    std::ostringstream os;
    os << "# rxkit " << command_ << " manifest; replay with: rxkit " << command_
       << " --config <this file>\n";
    for (const auto & [k, v] : body_) {
      os << k << " = " << v << '\n';
    }
    for (const auto & [k, v] : notes_) {
      os << "# " << k << " = " << v << '\n';
    }
    return os.str();
  }

private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> body_;
  std::vector<std::pair<std::string, std::string>> notes_;
};

/// Output files are written under temporary names and renamed only once
/// every one of them has been written; on failure the temporaries are
/// removed, so a failed run leaves nothing behind.
class StagedOutputs
{
public:
  StagedOutputs() = default;
  StagedOutputs(const StagedOutputs &) = delete;
  StagedOutputs & operator=(const StagedOutputs &) = delete;
  ~StagedOutputs()
  {
    if (!committed_) {
      for (const auto & [tmp, final] : entries_) {
        std::error_code ec;
        fs::remove(tmp, ec);
      }
    }
  }

  fs::path stage(const fs::path & final)
  {
    fs::path tmp = final;
    tmp += ".partial";
    entries_.emplace_back(tmp, final);
    return tmp;
  }

  void text(const fs::path & final, const std::string & content)
  {
    const fs::path tmp = stage(final);
    std::ofstream os(tmp, std::ios::binary);
    os << content;
    os.close();
    if (!os) {
      throw DataError("cannot write '" + final.string() + "'");
    }
  }

  void commit()
  {
    for (const auto & [tmp, final] : entries_) {
      fs::rename(tmp, final);
    }
    committed_ = true;
  }

private:
  std::vector<std::pair<fs::path, fs::path>> entries_;
  bool committed_ = false;
};

FileFormat resolve_format(const std::string & name, const std::string & path)
{
  return name == "auto" ? format_for_path(path) : parse_format(name);
}

std::string default_manifest(const std::string & explicit_path, const std::string & output)
{
  return explicit_path.empty() ? output + ".manifest.txt" : explicit_path;
}

void require(const std::string & value, const std::string & key)
{
  if (value.empty()) {
    throw UsageError("--" + key + " is required");
  }
}

void add_detector_options(CLI::App & app, DetectorSettings & d, bool with_point_params)
{
  app.add_option("--method", d.method, "rx, krx or rrx")->capture_default_str();
  if (with_point_params) {
    app.add_option("--lambda", d.lambda, "Ridge added to the inverted matrix")->capture_default_str();
    app.add_option("--sigma", d.sigma, "Kernel lengthscale, or 'median'")->capture_default_str();
    app.add_option("--c", d.c, "Multiplier applied to the lengthscale")->capture_default_str();
  }
  app.add_option("--subsample", d.subsample, "KRX background subsample size N")->capture_default_str();
  app.add_option("--features", d.features, "RRX random feature count D")->capture_default_str();
  app.add_option("--krx-ridge", d.krx_ridge, "feature-space or squared-gram")->capture_default_str();
  app.add_flag("--center", d.center, "RRX: remove the feature-space mean");
  app.add_option("--max-pairs", d.max_pairs, "Pair cap of the median heuristic")->capture_default_str();
}

void manifest_detector(Manifest & m, const DetectorSettings & d, bool with_point_params)
{
  m.set("method", d.method);
  if (with_point_params) {
    m.set("lambda", d.lambda);
    m.set("sigma", d.sigma);
    m.set("c", d.c);
  }
  m.set("subsample", d.subsample);
  m.set("features", d.features);
  m.set("krx-ridge", d.krx_ridge);
  m.set("center", d.center);
  m.set("max-pairs", d.max_pairs);
}

DetectorParams to_params(const DetectorSettings & d, std::uint64_t seed)
{
  DetectorParams p;
  p.method = parse_method(d.method);
  p.ridge = d.lambda;
  if (d.sigma == "median") {
    p.sigma = LengthscaleSpec::median(d.c);
  } else {
    double v = 0.0;
    const auto res = std::from_chars(d.sigma.data(), d.sigma.data() + d.sigma.size(), v);
    if (res.ec != std::errc() || res.ptr != d.sigma.data() + d.sigma.size() || !(v > 0.0)) {
      throw UsageError("--sigma must be 'median' or a positive number, got '" + d.sigma + "'");
    }
    p.sigma = LengthscaleSpec::fixed(v);
    p.sigma.factor = d.c;
  }
  p.sigma.max_pairs = d.max_pairs;
  if (d.krx_ridge == "feature-space") {
    p.krx_ridge = KrxRidge::feature_space;
  } else if (d.krx_ridge == "squared-gram") {
    p.krx_ridge = KrxRidge::squared_gram;
  } else {
    throw UsageError("--krx-ridge must be feature-space or squared-gram");
  }
  p.subsample = d.subsample;
  p.features = d.features;
  p.center = d.center;
  p.rng = RngSpec{seed, 0};
  return p;
}

void log(const Common & c, std::ostream & err, const std::string & msg)
{
  if (c.verbose) {
    err << "rxkit: " << msg << '\n';
  }
}

}  // namespace

// ---------------------------------------------------------------- detect

void register_detect(CLI::App & app, DetectSettings & s)
{
  app.add_option("--input,-i", s.input, "Raster to score (.csv or bsq)");
  app.add_option("--format", s.format, "auto, bsq or csv")->capture_default_str();
  app.add_option("--output,-o", s.output, "Score map path");
  app.add_option("--output-format", s.output_format, "auto, bsq or csv")->capture_default_str();
  app.add_option("--manifest", s.manifest, "Manifest path (default: <output>.manifest.txt)");
  add_detector_options(app, s.detector, true);
}

void run_detect(const Common & c, const DetectSettings & s, std::ostream & out, std::ostream & err)
{
  require(s.input, "input");
  require(s.output, "output");
  const DetectorParams params = to_params(s.detector, c.seed);
  const FileFormat in_fmt = resolve_format(s.format, s.input);
  const FileFormat out_fmt = resolve_format(s.output_format, s.output);
  const std::string manifest_path = default_manifest(s.manifest, s.output);

  log(c, err, "reading " + s.input);
  const Raster raster = read_raster(s.input, in_fmt);
  log(c, err, "fitting and scoring with " + s.detector.method);
  const Detection det = detect(raster.samples(), raster.samples(), params);
  const ScoreMap map(raster.height(), raster.width(), det.scores);

  Manifest m("detect");
  m.set("input", s.input);
  m.set("format", s.format);
  m.set("output", s.output);
  m.set("output-format", s.output_format);
  m.set("manifest", manifest_path);
  manifest_detector(m, s.detector, true);
  m.set("seed", c.seed, 0);
  m.note("resolved sigma", det.sigma);
  m.note("ridge used", det.ridge_used);
  for (const Phase p : kAllPhases) {
    if (det.timer.recorded(p)) {
      m.note("seconds." + std::string(to_string(p)), det.timer.seconds(p));
    }
  }

  StagedOutputs staged;
  write_scoremap(map, staged.stage(s.output), out_fmt);
  staged.text(manifest_path, m.text());
  staged.commit();
  out << "wrote " << s.output << " (" << raster.pixels() << " scores)\n";
}

// ---------------------------------------------------------------- synth

void register_synth(CLI::App & app, SynthSettings & s)
{
  app.add_option("--preset", s.preset, "paper (2-band curved scene) or patch12 (12-band patches)")
    ->capture_default_str();
  app.add_option("--output,-o", s.output, "Scene raster path");
  app.add_option("--mask-output", s.mask_output, "Target mask path");
  app.add_option("--format", s.format, "auto, bsq or csv")->capture_default_str();
  app.add_option("--manifest", s.manifest, "Manifest path (default: <output>.manifest.txt)");
  app.add_option("--height", s.height, "paper: rows")->capture_default_str();
  app.add_option("--width", s.width, "paper: columns")->capture_default_str();
  app.add_option("--bands", s.bands, "Bands (default 2 for paper, 12 for patch12)");
  app.add_option("--background", s.background, "paper: non-gaussian-mixture or gaussian-blob")
    ->capture_default_str();
  app.add_option("--fraction", s.fraction, "Anomalous fraction (per patch for patch12)")
    ->capture_default_str();
  app.add_option("--pattern", s.pattern, "paper: paper-layout, random or mask")->capture_default_str();
  app.add_option("--pattern-mask", s.pattern_mask, "paper: mask file used with --pattern mask");
  app.add_option("--separation", s.separation, "paper: anomaly offset in background spread units")
    ->capture_default_str();
  app.add_option("--spread", s.spread, "paper: anomaly cluster standard deviation")->capture_default_str();
  app.add_option("--patch-size", s.patch_size, "patch12: patch side")->capture_default_str();
  app.add_option("--patches-per-side", s.patches_per_side, "patch12: patches per image side")
    ->capture_default_str();
  app.add_option("--endmembers", s.endmembers, "patch12: land-cover spectra")->capture_default_str();
  app.add_option("--blend", s.blend, "patch12: target blend in (0, 1]")->capture_default_str();
  app.add_option("--noise-sd", s.noise_sd, "patch12: per-band noise")->capture_default_str();
}

void run_synth(const Common & c, const SynthSettings & s, std::ostream & out, std::ostream & err)
{
  require(s.output, "output");
  require(s.mask_output, "mask-output");
  const FileFormat fmt_img = resolve_format(s.format, s.output);
  const FileFormat fmt_mask = resolve_format(s.format, s.mask_output);
  const std::string manifest_path = default_manifest(s.manifest, s.output);

  Manifest m("synth");
  m.set("preset", s.preset);
  m.set("output", s.output);
  m.set("mask-output", s.mask_output);
  m.set("format", s.format);
  m.set("manifest", manifest_path);

  std::optional<Raster> image;
  std::optional<Mask> mask;
  if (s.preset == "paper") {
    SceneSpec spec;
    spec.height = s.height;
    spec.width = s.width;
    spec.bands = s.bands == 0 ? 2 : s.bands;
    spec.background = parse_background(s.background);
    spec.anomaly_fraction = s.fraction;
    spec.pattern = parse_pattern(s.pattern);
    if (spec.pattern == AnomalyPattern::explicit_mask) {
      require(s.pattern_mask, "pattern-mask");
      spec.mask = read_mask(s.pattern_mask, format_for_path(s.pattern_mask));
    }
    spec.rng = RngSpec{c.seed, 0};
    spec.separation = s.separation;
    spec.anomaly_spread = s.spread;
    log(c, err, "generating curved-background scene");
    Scene scene = generate_scene(spec);
    image = std::move(scene.raster);
    mask = std::move(scene.mask);
    m.set("height", s.height);
    m.set("width", s.width);
    m.set("bands", spec.bands);
    m.set("background", s.background);
    m.set("fraction", s.fraction);
    m.set("pattern", s.pattern);
    if (!s.pattern_mask.empty()) {
      m.set("pattern-mask", s.pattern_mask);
    }
    m.set("separation", s.separation);
    m.set("spread", s.spread);
  } else if (s.preset == "patch12") {
    PatchSceneSpec spec;
    spec.patch_size = s.patch_size;
    spec.patches_per_side = s.patches_per_side;
    spec.bands = s.bands == 0 ? 12 : s.bands;
    spec.endmembers = s.endmembers;
    spec.anomaly_fraction = s.fraction;
    spec.blend = s.blend;
    spec.noise_sd = s.noise_sd;
    spec.rng = RngSpec{c.seed, 0};
    log(c, err, "generating multiband patch scene");
    PatchScene scene = generate_patch_scene(spec);
    image = std::move(scene.image);
    mask = std::move(scene.targets);
    m.set("bands", spec.bands);
    m.set("fraction", s.fraction);
    m.set("patch-size", s.patch_size);
    m.set("patches-per-side", s.patches_per_side);
    m.set("endmembers", s.endmembers);
    m.set("blend", s.blend);
    m.set("noise-sd", s.noise_sd);
  } else {
    throw UsageError("--preset must be paper or patch12");
  }
  m.set("seed", c.seed, 0);
  m.note("anomalous pixels", std::to_string(mask->count()));

  StagedOutputs staged;
  write_raster(*image, staged.stage(s.output), fmt_img);
  write_mask(*mask, staged.stage(s.mask_output), fmt_mask);
  staged.text(manifest_path, m.text());
  staged.commit();
  out << "wrote " << s.output << " (" << image->height() << "x" << image->width() << "x"
      << image->bands() << ") and " << s.mask_output << " (" << mask->count()
      << " anomalous pixels)\n";
}

// ---------------------------------------------------------------- eval

void register_eval(CLI::App & app, EvalSettings & s)
{
  app.add_option("--scores,-s", s.scores, "Score map");
  app.add_option("--mask,-m", s.mask, "Target mask");
  app.add_option("--format", s.format, "Score map format: auto, bsq or csv")->capture_default_str();
  app.add_option("--mask-format", s.mask_format, "auto, bsq or csv")->capture_default_str();
  app.add_option("--output,-o", s.output, "ROC CSV path");
  app.add_option("--svg", s.svg, "ROC plot path");
  app.add_flag("--log-x", s.log_x, "Logarithmic false-positive-rate axis");
}

void run_eval(const Common & c, const EvalSettings & s, std::ostream & out, std::ostream & err)
{
  require(s.scores, "scores");
  require(s.mask, "mask");
  log(c, err, "reading " + s.scores + " and " + s.mask);
  const ScoreMap map = read_scoremap(s.scores, resolve_format(s.format, s.scores));
  const Mask mask = read_mask(s.mask, resolve_format(s.mask_format, s.mask));
  if (map.height() != mask.height() || map.width() != mask.width()) {
    throw DimensionError(
      "score map is " + std::to_string(map.height()) + "x" + std::to_string(map.width()) +
      " but mask is " + std::to_string(mask.height()) + "x" + std::to_string(mask.width()));
  }
  const RocResult roc = roc_auc(map.scores(), mask.labels());

  StagedOutputs staged;
  if (!s.output.empty()) {
    std::ostringstream os;
    write_roc_csv(os, roc);
    staged.text(s.output, os.str());
  }
  if (!s.svg.empty()) {
    staged.text(s.svg, roc_svg(roc, s.log_x));
  }
  staged.commit();
  out << "auc = " << num(roc.auc) << '\n'
      << "positives = " << roc.n_pos << '\n'
      << "negatives = " << roc.n_neg << '\n';
}

// ---------------------------------------------------------------- bench

void register_bench(CLI::App & app, BenchSettings & s)
{
  app.add_option("--input,-i", s.input, "Raster to benchmark (default: generated curved-background scene)");
  app.add_option("--format", s.format, "auto, bsq or csv")->capture_default_str();
  app.add_option("--side", s.side, "Side of the generated scene when no input is given")
    ->capture_default_str();
  app.add_option("--sweep", s.sweep, "Values of N (krx) or D (rrx), comma separated")->delimiter(',');
  app.add_option("--repeats", s.repeats, "Timed runs per configuration")->capture_default_str();
  app.add_option("--output,-o", s.output, "CSV of per-phase medians");
  app.add_option("--runs-output", s.runs_output, "CSV of every timed run");
  app.add_option("--manifest", s.manifest, "Manifest path (default: <output>.manifest.txt)");
  add_detector_options(app, s.detector, true);
}

void run_bench(const Common & c, const BenchSettings & s, std::ostream & out, std::ostream & err)
{
  require(s.output, "output");
  DetectorParams params = to_params(s.detector, c.seed);
  if (params.method == Method::rx && !s.sweep.empty()) {
    throw UsageError("rx has no size parameter to sweep");
  }
  const Raster data = [&] {
    if (!s.input.empty()) {
      return read_raster(s.input, resolve_format(s.format, s.input));
    }
    SceneSpec spec;
    spec.height = s.side;
    spec.width = s.side;
    spec.rng = RngSpec{c.seed, 0};
    return generate_scene(spec).raster;
  }();

  std::vector<std::size_t> values = s.sweep;
  if (values.empty()) {
    values.push_back(params.size_param());
  }
  std::vector<BenchRecord> medians;
  std::vector<BenchRecord> runs;
  for (const std::size_t v : values) {
    if (params.method == Method::krx) {
      params.subsample = v;
    } else if (params.method == Method::rrx) {
      params.features = v;
    }
    log(c, err, "benchmarking " + s.detector.method + " param " + std::to_string(v));
    const BenchResult r = bench_detector(data, params, s.repeats);
    medians.insert(medians.end(), r.medians.begin(), r.medians.end());
    runs.insert(runs.end(), r.runs.begin(), r.runs.end());
  }

  Manifest m("bench");
  if (!s.input.empty()) {
    m.set("input", s.input);
    m.set("format", s.format);
  } else {
    m.set("side", s.side);
  }
  if (!s.sweep.empty()) {
    m.set("sweep", join(s.sweep));
  }
  m.set("repeats", s.repeats);
  m.set("output", s.output);
  if (!s.runs_output.empty()) {
    m.set("runs-output", s.runs_output);
  }
  const std::string manifest_path = default_manifest(s.manifest, s.output);
  m.set("manifest", manifest_path);
  manifest_detector(m, s.detector, true);
  m.set("seed", c.seed, 0);

  std::ostringstream med_csv;
  write_bench_csv(med_csv, medians);
  StagedOutputs staged;
  staged.text(s.output, med_csv.str());
  if (!s.runs_output.empty()) {
    std::ostringstream runs_csv;
    write_bench_csv(runs_csv, runs);
    staged.text(s.runs_output, runs_csv.str());
  }
  staged.text(manifest_path, m.text());
  staged.commit();
  out << med_csv.str();
}

// ---------------------------------------------------------------- gridsearch

void register_grid(CLI::App & app, GridSettings & s)
{
  app.add_option("--input,-i", s.input, "Image with injected targets");
  app.add_option("--mask,-m", s.mask, "Target mask");
  app.add_option("--format", s.format, "auto, bsq or csv")->capture_default_str();
  app.add_option("--mask-format", s.mask_format, "auto, bsq or csv")->capture_default_str();
  app.add_option("--patch-size", s.patch_size, "Side of the square patches; splits alternate train/validation")
    ->capture_default_str();
  app.add_option("--preset", s.preset, "paper-grid: lambda 1e-5..1e0, c 0.05..5");
  app.add_option("--lambdas", s.lambdas, "Ridge values, comma separated")->delimiter(',');
  app.add_option("--cs", s.cs, "Lengthscale multipliers of the median, comma separated")->delimiter(',');
  app.add_option("--output,-o", s.output, "Grid CSV path");
  app.add_option("--manifest", s.manifest, "Manifest path (default: <output>.manifest.txt)");
  s.detector.features = 100;
  add_detector_options(app, s.detector, false);
}

void run_grid(const Common & c, const GridSettings & s, std::ostream & out, std::ostream & err)
{
  require(s.input, "input");
  require(s.mask, "mask");
  require(s.output, "output");
  std::vector<double> lambdas = s.lambdas;
  std::vector<double> cs = s.cs;
  if (!s.preset.empty()) {
    if (s.preset != "paper-grid") {
      throw UsageError("--preset must be paper-grid");
    }
    if (lambdas.empty()) {
      lambdas = paper_lambda_grid();
    }
    if (cs.empty()) {
      cs = paper_c_grid();
    }
  }
  if (lambdas.empty() || cs.empty()) {
    throw UsageError("give --lambdas and --cs, or --preset paper-grid");
  }
  const DetectorParams params = to_params(s.detector, c.seed);

  const Raster image = read_raster(s.input, resolve_format(s.format, s.input));
  const Mask mask = read_mask(s.mask, resolve_format(s.mask_format, s.mask));
  if (image.height() != mask.height() || image.width() != mask.width()) {
    throw DimensionError("image and mask dimensions differ");
  }
  const PatchGrid grid = PatchGrid::tiled(image.height(), image.width(), s.patch_size, s.patch_size);
  const std::vector<LabeledPatch> train = labeled_patches(image, mask, grid, Split::train);
  const std::vector<LabeledPatch> val = labeled_patches(image, mask, grid, Split::validation);
  log(
    c, err,
    std::to_string(train.size()) + " training and " + std::to_string(val.size()) +
      " validation patches, " + std::to_string(lambdas.size() * cs.size()) + " grid cells");
  const GridSearchResult result = grid_search(train, val, lambdas, cs, params);

  Manifest m("gridsearch");
  m.set("input", s.input);
  m.set("mask", s.mask);
  m.set("format", s.format);
  m.set("mask-format", s.mask_format);
  m.set("patch-size", s.patch_size);
  if (!s.preset.empty()) {
    m.set("preset", s.preset);
  }
  m.set("lambdas", join(lambdas));
  m.set("cs", join(cs));
  m.set("output", s.output);
  const std::string manifest_path = default_manifest(s.manifest, s.output);
  m.set("manifest", manifest_path);
  manifest_detector(m, s.detector, false);
  m.set("seed", c.seed, 0);
  m.note("median distance", result.median);
  m.note("best lambda", result.best_lambda());
  m.note("best c", result.best_c());
  m.note("best mean validation auc", result.best_auc());

  std::ostringstream csv;
  write_grid_csv(csv, result);
  StagedOutputs staged;
  staged.text(s.output, csv.str());
  staged.text(manifest_path, m.text());
  staged.commit();
  out << csv.str() << "best lambda = " << num(result.best_lambda()) << '\n'
      << "best c = " << num(result.best_c()) << '\n'
      << "best mean validation auc = " << num(result.best_auc()) << '\n';
}

}  // namespace rxkit::cli
