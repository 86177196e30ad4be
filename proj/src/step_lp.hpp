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

// Internal: the one-round adversary program shared by the backward
// induction and the myopic simulation policy.  Not installed.

#ifndef EXPERTGAME_SRC_STEP_LP_H_
#define EXPERTGAME_SRC_STEP_LP_H_

#include <stdexcept>
#include <utility>
#include <vector>

#include "expertgame/game.hpp"
#include "expertgame/simplex_lp.hpp"

namespace expertgame {
namespace internal {

// Mean gain of expert i under corruption event e (events 0..N-1 pin expert
// e to 0, events N..2N-1 pin it to 1).
inline double EventMeanGain(int i, int event, int n,
                            const ExpertModel& model) {
  const int pinned = event % n;
  if (i != pinned) return model.mu[i];
  return event < n ? 0.0 : 1.0;
}

// max_alpha { f . alpha - max_i c_i(alpha) } over the corruption simplex.
// The inner maximum is linearized through a bound variable, nonnegative
// because expected gains are.  Returns the optimum and the raw control.
inline std::pair<double, std::vector<double>> SolvePrimalStep(
    const std::vector<double>& f, const ExpertModel& model) {
  const int n = model.num_experts();
  const int num_events = 2 * n;
  LpProblem lp;
  lp.num_vars = num_events + 1;
  lp.eq_rows.emplace_back(lp.num_vars, 1.0);
  lp.eq_rows.back()[num_events] = 0.0;
  lp.eq_rhs.push_back(1.0);
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(lp.num_vars, 0.0);
    for (int e = 0; e < num_events; ++e) {
      row[e] = EventMeanGain(i, e, n, model);
    }
    row[num_events] = -1.0;
    lp.ub_rows.push_back(std::move(row));
    lp.ub_rhs.push_back(0.0);
  }
  lp.objective = f;
  lp.objective.push_back(-1.0);

  const LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw std::runtime_error(
        "one-step value program failed over the compact control simplex");
  }
  return {sol.objective,
          std::vector<double>(sol.x.begin(), sol.x.begin() + num_events)};
}

// Expected one-step continuation under each corruption event, evaluated
// through a caller-supplied continuation on integer lattice states.
template <typename NextValue>
std::vector<double> EventContinuations(const NextValue& next_value,
                                       const std::vector<int>& z,
                                       const ExpertModel& model) {
  const int n = model.num_experts();
  std::vector<double> f(2 * n, 0.0);
  std::vector<int> gains(n);
  std::vector<int> znext(n - 1);
  const uint32_t combos = static_cast<uint32_t>(1) << (n - 1);
  for (int k = 0; k < n; ++k) {
    for (int v = 0; v < 2; ++v) {
      double total = 0.0;
      for (uint32_t rest = 0; rest < combos; ++rest) {
        double prob = 1.0;
        int bit = 0;
        for (int i = 0; i < n; ++i) {
          if (i == k) {
            gains[i] = v;
            continue;
          }
          const bool up = (rest >> bit) & 1u;
          ++bit;
          gains[i] = up ? 1 : 0;
          prob *= up ? model.mu[i] : 1.0 - model.mu[i];
        }
        if (prob == 0.0) continue;
        for (int i = 0; i < n - 1; ++i) {
          znext[i] = z[i] + gains[i] - gains[n - 1];
        }
        total += prob * (next_value(znext) + gains[n - 1]);
      }
      f[v == 0 ? k : n + k] = total;
    }
  }
  return f;
}

}  // namespace internal
}  // namespace expertgame

#endif  // EXPERTGAME_SRC_STEP_LP_H_
