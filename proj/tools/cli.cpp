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

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "rxkit/error.hpp"
#include "rxkit/parallel.hpp"
#include "rxkit_cli.hpp"

namespace rxkit::cli
{

namespace
{

std::string_view strip(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Fills options that were not given on the command line from the config
// file named by `config`.
void apply_config(CLI::App & sub, const std::string & config)
{
  std::ifstream is(config);
  if (!is) {
    throw UsageError("cannot open config file '" + config + "'");
  }
  for (const auto & [key, value] : parse_config(is, config)) {
    CLI::Option * opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      throw UsageError("config file '" + config + "': unknown key '" + key + "' for " + sub.get_name());
    }
    if (opt->count() > 0) {
      continue;
    }
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error & e) {
      throw UsageError("config file '" + config + "': bad value for '" + key + "': " + e.what());
    }
  }
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config(
  std::istream & is, const std::string & origin)
{
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(is, line)) {
    ++number;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) {
      s = s.substr(0, hash);
    }
    s = strip(s);
    if (s.empty()) {
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(origin + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    const auto key = strip(s.substr(0, eq));
    const auto value = strip(s.substr(eq + 1));
    if (key.empty()) {
      throw UsageError(origin + ":" + std::to_string(number) + ": empty key");
    }
    out.emplace_back(std::string(key), std::string(value));
  }
  return out;
}

std::optional<std::uint64_t> seed_from_env()
{
  const char * v = std::getenv("RXKIT_SEED");
  if (v == nullptr || *v == '\0') {
    return std::nullopt;
  }
  const std::string_view s = strip(v);
  std::uint64_t seed = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw UsageError("RXKIT_SEED must be an unsigned integer, got '" + std::string(v) + "'");
  }
  return seed;
}

int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Global RX, kernel RX and randomized RX anomaly detection for multiband rasters", "rxkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Common common;
  DetectSettings detect;
  SynthSettings synth;
  EvalSettings eval;
  BenchSettings bench;
  GridSettings grid;

  struct Entry
  {
    CLI::App * app;
    std::function<void(const Common &, std::ostream &, std::ostream &)> body;
  };
  std::vector<Entry> entries;
  auto add_common = [&](CLI::App * sub) {
    sub->add_option("--config", common.config, "key = value file; flags override it");
    sub->add_flag("--verbose,-v", common.verbose, "Progress messages on stderr");
    sub->add_option("--threads", common.threads, "Worker threads (0 = all cores)");
    sub->add_option("--seed", common.seed_value, "RNG seed (default: RXKIT_SEED or 0)");
  };

  auto * d = app.add_subcommand("detect", "Score every pixel of a raster");
  add_common(d);
  register_detect(*d, detect);
  entries.push_back({d, [&](const Common & c, std::ostream & o, std::ostream & e) { run_detect(c, detect, o, e); }});

  auto * s = app.add_subcommand("synth", "Generate a synthetic scene and its target mask");
  add_common(s);
  register_synth(*s, synth);
  entries.push_back({s, [&](const Common & c, std::ostream & o, std::ostream & e) { run_synth(c, synth, o, e); }});

  auto * ev = app.add_subcommand("eval", "ROC curve and AUC of a score map against a mask");
  add_common(ev);
  register_eval(*ev, eval);
  entries.push_back({ev, [&](const Common & c, std::ostream & o, std::ostream & e) { run_eval(c, eval, o, e); }});

  auto * b = app.add_subcommand("bench", "Per-phase wall time of a detector over a parameter sweep");
  add_common(b);
  register_bench(*b, bench);
  entries.push_back({b, [&](const Common & c, std::ostream & o, std::ostream & e) { run_bench(c, bench, o, e); }});

  auto * g = app.add_subcommand("gridsearch", "Ridge and lengthscale selection on a patch split");
  add_common(g);
  register_grid(*g, grid);
  entries.push_back({g, [&](const Common & c, std::ostream & o, std::ostream & e) { run_grid(c, grid, o, e); }});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::ParseError & e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kOk : kUsage;
    }
    for (const auto & entry : entries) {
      if (!entry.app->parsed()) {
        continue;
      }
      if (!common.config.empty()) {
        apply_config(*entry.app, common.config);
      }
      const auto seed_opt = entry.app->get_option("--seed");
      if (seed_opt->count() > 0) {
        common.seed = common.seed_value;
      } else if (const auto env = seed_from_env()) {
        common.seed = *env;
      } else {
        common.seed = 0;
      }
      const ScopedThreadCount threads(common.threads == 0 ? thread_count() : common.threads);
      entry.body(common, out, err);
    }
    return kOk;
  } catch (const std::invalid_argument & e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError & e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::filesystem::filesystem_error & e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericError & e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace rxkit::cli
