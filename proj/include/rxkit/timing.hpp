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

#ifndef RXKIT_TIMING_HPP_
#define RXKIT_TIMING_HPP_

#include <array>
#include <chrono>
#include <cstddef>
#include <string_view>

namespace rxkit
{

/// Cost centres of a global detector: mapping into a nonlinear space,
/// building the covariance (or Gram) matrix, factorizing it, and scoring.
enum class Phase : std::size_t { transform = 0, covariance, inversion, detection };

inline constexpr std::array<Phase, 4> kAllPhases = {
  Phase::transform, Phase::covariance, Phase::inversion, Phase::detection};

std::string_view to_string(Phase phase);

/// Accumulates wall time per phase. A phase that was never entered reports
/// recorded() == false (e.g. RX has no transform).
class PhaseTimer
{
public:
  void add(Phase phase, double seconds)
  {
    seconds_[index(phase)] += seconds;
    recorded_[index(phase)] = true;
  }
  double seconds(Phase phase) const { return seconds_[index(phase)]; }
  bool recorded(Phase phase) const { return recorded_[index(phase)]; }
  double total() const
  {
    double t = 0.0;
    for (const double s : seconds_) {
      t += s;
    }
    return t;
  }

private:
  static std::size_t index(Phase p) { return static_cast<std::size_t>(p); }

  std::array<double, 4> seconds_{};
  std::array<bool, 4> recorded_{};
};

/// Adds the lifetime of the scope to `timer` (if not null).
class PhaseScope
{
public:
  PhaseScope(PhaseTimer * timer, Phase phase)
  : timer_(timer), phase_(phase), start_(std::chrono::steady_clock::now())
  {
  }
  ~PhaseScope()
  {
    if (timer_ != nullptr) {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
      timer_->add(phase_, dt.count());
    }
  }
  PhaseScope(const PhaseScope &) = delete;
  PhaseScope & operator=(const PhaseScope &) = delete;

private:
  PhaseTimer * timer_;
  Phase phase_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace rxkit

#endif  // RXKIT_TIMING_HPP_
