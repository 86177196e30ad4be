// Copyright 2026 The expertgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EXPERTGAME_NUMERIC_H_
#define EXPERTGAME_NUMERIC_H_

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace expertgame {

inline constexpr double kPi = 3.14159265358979323846;

// Compensated (Kahan) accumulator for long sums.
class KahanSum {
 public:
  void Add(double v) {
    double y = v - compensation_;
    double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  double Value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Standard normal density and distribution function.
inline double NormalPdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}
inline double NormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Two-sided 95% normal quantile used for confidence intervals.
inline constexpr double kNormalQuantile95 = 1.959963984540054;

// Shortest text form that round-trips a double exactly (17 significant
// digits); used for every numeric field in CSV and JSON outputs.
inline std::string FormatG17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

// Least-squares straight line y ~ intercept + slope * x.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
};

inline LineFit FitLine(const std::vector<double>& x,
                       const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  KahanSum sx, sy, sxx, sxy;
  for (int i = 0; i < n; ++i) {
    sx.Add(x[i]);
    sy.Add(y[i]);
    sxx.Add(x[i] * x[i]);
    sxy.Add(x[i] * y[i]);
  }
  const double denom = n * sxx.Value() - sx.Value() * sx.Value();
  LineFit fit;
  fit.slope = (n * sxy.Value() - sx.Value() * sy.Value()) / denom;
  fit.intercept = (sy.Value() - fit.slope * sx.Value()) / n;
  return fit;
}

}  // namespace expertgame

#endif  // EXPERTGAME_NUMERIC_H_
