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


#ifndef RXKIT_TOOLS_COMMANDS_HPP_
#define RXKIT_TOOLS_COMMANDS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace CLI
{
class App;
}

namespace rxkit::cli
{

struct Common
{
  std::string config;
  bool verbose = false;
  std::size_t threads = 0;
  std::uint64_t seed_value = 0;  // as parsed
  std::uint64_t seed = 0;        // resolved
};

/// Detector options shared by detect, bench and gridsearch.
struct DetectorSettings
{
  std::string method = "rrx";
  double lambda = 1e-2;
  std::string sigma = "median";
  double c = 1.0;
  std::size_t subsample = 3000;
  std::size_t features = 50;
  std::string krx_ridge = "feature-space";
  bool center = false;
  std::size_t max_pairs = 1'000'000;
};

struct DetectSettings
{
  std::string input;
  std::string format = "auto";
  std::string output;
  std::string output_format = "auto";
  std::string manifest;
  DetectorSettings detector;
};

struct SynthSettings
{
  std::string preset = "paper";
  std::string output;
  std::string mask_output;
  std::string format = "auto";
  std::string manifest;
  // paper preset
  std::size_t height = 100;
  std::size_t width = 100;
  std::size_t bands = 0;  // 0: preset default
  std::string background = "non-gaussian-mixture";
  double fraction = 0.0272;
  std::string pattern = "paper-layout";
  std::string pattern_mask;
  double separation = 2.2;
  double spread = 0.1;
  // patch12 preset
  std::size_t patch_size = 100;
  std::size_t patches_per_side = 4;
  std::size_t endmembers = 4;
  double blend = 0.5;
  double noise_sd = 0.005;
};

struct EvalSettings
{
  std::string scores;
  std::string mask;
  std::string format = "auto";
  std::string mask_format = "auto";
  std::string output;
  std::string svg;
  bool log_x = false;
};

struct BenchSettings
{
  std::string input;
  std::string format = "auto";
  std::size_t side = 100;
  std::vector<std::size_t> sweep;
  std::size_t repeats = 3;
  std::string output;
  std::string runs_output;
  std::string manifest;
  DetectorSettings detector;
};

struct GridSettings
{
  std::string input;
  std::string mask;
  std::string format = "auto";
  std::string mask_format = "auto";
  std::size_t patch_size = 100;
  std::string preset;
  std::vector<double> lambdas;
  std::vector<double> cs;
  std::string output;
  std::string manifest;
  DetectorSettings detector;
};

void register_detect(CLI::App & app, DetectSettings & s);
void register_synth(CLI::App & app, SynthSettings & s);
void register_eval(CLI::App & app, EvalSettings & s);
void register_bench(CLI::App & app, BenchSettings & s);
void register_grid(CLI::App & app, GridSettings & s);

void run_detect(const Common & c, const DetectSettings & s, std::ostream & out, std::ostream & err);
void run_synth(const Common & c, const SynthSettings & s, std::ostream & out, std::ostream & err);
void run_eval(const Common & c, const EvalSettings & s, std::ostream & out, std::ostream & err);
void run_bench(const Common & c, const BenchSettings & s, std::ostream & out, std::ostream & err);
void run_grid(const Common & c, const GridSettings & s, std::ostream & out, std::ostream & err);

}  // namespace rxkit::cli

#endif  // RXKIT_TOOLS_COMMANDS_HPP_
