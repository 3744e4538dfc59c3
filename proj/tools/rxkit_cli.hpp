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


#ifndef RXKIT_TOOLS_RXKIT_CLI_HPP_
#define RXKIT_TOOLS_RXKIT_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rxkit/evalbench.hpp"

namespace rxkit::cli
{

enum ExitCode : int
{
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kData = 3,
  kNumeric = 4,
};

/// Bad command line or config file.
class UsageError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Runs one subcommand. `args` excludes the program name. Messages go to
/// `err`, results and summaries to `out`.
int run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err);

/// "key = value" lines; blank lines and text after '#' are ignored.
std::vector<std::pair<std::string, std::string>> parse_config(
  std::istream & is, const std::string & origin);

/// RXKIT_SEED, if set. Throws UsageError when it is not an unsigned integer.
std::optional<std::uint64_t> seed_from_env();

/// Self-contained SVG line chart of the ROC curve.
std::string roc_svg(const RocResult & roc, bool log_x);

}  // namespace rxkit::cli

#endif  // RXKIT_TOOLS_RXKIT_CLI_HPP_
