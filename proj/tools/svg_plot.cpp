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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "rxkit_cli.hpp"

namespace rxkit::cli
{

namespace
{

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string fixed(double v, int digits)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string roc_svg(const RocResult & roc, bool log_x)
{
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  // Log axis starts one decade at or below the smallest non-zero FPR.
  const double x_min_decade =
    log_x ? std::floor(std::log10(1.0 / static_cast<double>(std::max<std::size_t>(1, roc.n_neg)))) : 0.0;

  auto sx = [&](double fpr) {
    double t = fpr;
    if (log_x) {
      const double lo = std::pow(10.0, x_min_decade);
      t = (std::log10(std::max(fpr, lo)) - x_min_decade) / -x_min_decade;
    }
    return kLeft + t * plot_w;
  };
  auto sy = [&](double tpr) { return kTop + (1.0 - tpr) * plot_h; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"16\">ROC (AUC = " << fixed(roc.auc, 4) << ")</text>\n";

  // Frame and ticks.
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  std::vector<std::pair<double, std::string>> xticks;
  if (log_x) {
    for (double e = x_min_decade; e <= 0.0; e += 1.0) {
      xticks.emplace_back(std::pow(10.0, e), "1e" + std::to_string(static_cast<int>(e)));
    }
  } else {
    for (int i = 0; i <= 5; ++i) {
      xticks.emplace_back(i / 5.0, fixed(i / 5.0, 1));
    }
  }
  for (const auto & [v, label] : xticks) {
    const double x = sx(v);
    os << "<line x1=\"" << fixed(x, 2) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << fixed(x, 2)
       << "\" y2=\"" << kTop + plot_h + 5 << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << fixed(x, 2) << "\" y=\"" << kTop + plot_h + 20
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i) {
    const double y = sy(i / 5.0);
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fixed(y, 2) << "\" x2=\"" << kLeft << "\" y2=\""
       << fixed(y, 2) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << kLeft - 8 << "\" y=\"" << fixed(y + 4, 2)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << fixed(i / 5.0, 1)
       << "</text>\n";
  }
  os << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">false positive rate"
     << (log_x ? " (log scale)" : "") << "</text>\n"
     << "<text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " << kTop + plot_h / 2
     << ")\">true positive rate</text>\n";

  os << "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < roc.fpr.size(); ++i) {
    os << (i ? " " : "") << fixed(sx(roc.fpr[i]), 2) << ',' << fixed(sy(roc.tpr[i]), 2);
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

}  // namespace rxkit::cli
