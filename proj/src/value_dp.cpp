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

#include "expertgame/value_dp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "expertgame/parallel.hpp"
#include "expertgame/rng.hpp"
#include "expertgame/simplex_lp.hpp"
#include "step_lp.hpp"

namespace expertgame {
namespace {

using internal::EventContinuations;
using internal::EventMeanGain;
using internal::SolvePrimalStep;

constexpr double kSupportSlack = 1e-9;  // optimality slack for support search
constexpr double kMaxTableStates = 5e7;

int RoundHalfTowardZero(double y) {
  return static_cast<int>(std::copysign(std::ceil(std::abs(y) - 0.5), y));
}

// Best guaranteed response restricted to weights on `support`: minimizes
// max_e [f_e - sum_i phi_i C_ie] by linear programming (the bound variable
// is split into two signed parts).  Accepts iff the restricted optimum is
// within kSupportSlack of `target`.
bool TrySupport(const std::vector<int>& support, const std::vector<double>& f,
                const ExpertModel& model, double target,
                std::vector<double>* phi_out, double* upper_out) {
  const int n = model.num_experts();
  const int num_events = 2 * n;
  const int k = static_cast<int>(support.size());
  LpProblem lp;
  lp.num_vars = k + 2;  // weights, then the positive/negative bound parts
  lp.eq_rows.emplace_back(lp.num_vars, 1.0);
  lp.eq_rows.back()[k] = 0.0;
  lp.eq_rows.back()[k + 1] = 0.0;
  lp.eq_rhs.push_back(1.0);
  for (int e = 0; e < num_events; ++e) {
    std::vector<double> row(lp.num_vars, 0.0);
    for (int s = 0; s < k; ++s) {
      row[s] = -EventMeanGain(support[s], e, n, model);
    }
    row[k] = -1.0;
    row[k + 1] = 1.0;
    lp.ub_rows.push_back(std::move(row));
    lp.ub_rhs.push_back(-f[e]);
  }
  lp.objective.assign(lp.num_vars, 0.0);
  lp.objective[k] = -1.0;
  lp.objective[k + 1] = 1.0;

  const LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) return false;
  const double upper = -sol.objective;
  if (upper > target + kSupportSlack) return false;
  std::vector<double> phi(n, 0.0);
  for (int s = 0; s < k; ++s) phi[support[s]] = std::max(sol.x[s], 0.0);
  *phi_out = std::move(phi);
  *upper_out = upper;
  return true;
}

void GuardTableSize(int num_rounds, int num_experts) {
  if (num_experts > 4) {
    throw std::invalid_argument(
        "backward induction is capped at four experts (the slice holds "
        "(2M+1)^(N-1) states); got N = " +
        std::to_string(num_experts));
  }
  double total = 0.0;
  for (int m = 0; m <= num_rounds; ++m) {
    total += std::pow(2.0 * m + 1.0, num_experts - 1);
  }
  if (total > kMaxTableStates) {
    throw std::invalid_argument(
        "value table would hold about " +
        std::to_string(static_cast<int64_t>(total)) +
        " lattice states, over the cap of " +
        std::to_string(static_cast<int64_t>(kMaxTableStates)) +
        "; reduce the horizon or the expert count");
  }
}

// The reduced lattice quotients out the all-ones direction, which is sound
// only when shifting every score by lambda shifts the payoff by lambda.
// Built-in payoffs have that symmetry by construction; user-supplied
// evaluators are spot-checked here before any slice is solved.
void RequireTranslationEquivariant(const FinalCondition& final_condition,
                                   int num_experts) {
  if (final_condition.kind != FinalCondition::Kind::kCustom) return;
  RandomStream rng(0x5eedf00d2026ull, 0);
  for (int trial = 0; trial < 64; ++trial) {
    std::vector<double> x(num_experts);
    for (double& v : x) v = 8.0 * rng.NextUniform() - 4.0;
    const double lambda = 6.0 * rng.NextUniform() - 3.0;
    std::vector<double> shifted = x;
    for (double& v : shifted) v += lambda;
    const double drift = final_condition.Value(shifted) -
                         final_condition.Value(x) - lambda;
    if (!(std::abs(drift) <= 1e-9)) {
      throw std::invalid_argument(
          "custom final condition is not translation-equivariant: shifting "
          "all scores by lambda must shift the payoff by lambda (residual " +
          std::to_string(drift) +
          "), so the reduced-lattice recursion would be unsound");
    }
  }
}

}  // namespace

ValueTable::ValueTable(int num_rounds, int num_experts, bool store_saddles)
    : num_rounds_(num_rounds), num_experts_(num_experts) {
  if (num_rounds < 0) {
    throw std::invalid_argument("round count must be >= 0");
  }
  if (num_experts < 2) {
    throw std::invalid_argument("value table needs at least two experts");
  }
  slices_.resize(num_rounds + 1);
  if (store_saddles) saddles_.resize(num_rounds + 1);
}

int64_t ValueTable::StateCount(int m) const {
  int64_t count = 1;
  for (int i = 0; i + 1 < num_experts_; ++i) count *= 2 * m + 1;
  return count;
}

std::vector<int> ValueTable::DecodeState(int m, int64_t index) const {
  const int64_t width = 2 * m + 1;
  std::vector<int> z(num_experts_ - 1);
  for (int i = 0; i + 1 < num_experts_; ++i) {
    z[i] = static_cast<int>(index % width) - m;
    index /= width;
  }
  return z;
}

int64_t ValueTable::StateIndex(int m, const std::vector<int>& z) const {
  if (static_cast<int>(z.size()) != num_experts_ - 1) {
    throw std::out_of_range("lattice state has wrong dimension");
  }
  const int64_t width = 2 * m + 1;
  int64_t index = 0;
  int64_t stride = 1;
  for (int i = 0; i + 1 < num_experts_; ++i) {
    if (z[i] < -m || z[i] > m) {
      throw std::out_of_range("lattice coordinate " + std::to_string(z[i]) +
                              " outside slice radius " + std::to_string(m));
    }
    index += (z[i] + m) * stride;
    stride *= width;
  }
  return index;
}

double ValueTable::Value(int m, const std::vector<int>& z) const {
  if (m < 0 || m > num_rounds_) {
    throw std::out_of_range("slice " + std::to_string(m) +
                            " outside horizon " + std::to_string(num_rounds_));
  }
  return slices_[m][StateIndex(m, z)];
}

const SaddleResult& ValueTable::Saddle(int m, const std::vector<int>& z) const {
  if (m < 0 || m >= num_rounds_) {
    throw std::out_of_range("no saddle stored at slice " + std::to_string(m));
  }
  return SaddleByIndex(m, StateIndex(m, z));
}

const SaddleResult& ValueTable::SaddleByIndex(int m, int64_t index) const {
  if (saddles_.empty()) {
    throw std::logic_error("value table was solved without saddle storage");
  }
  return saddles_[m][index];
}

SaddleResult StepValue(
    const std::function<double(const std::vector<int>&)>& next_value,
    const std::vector<int>& z, const ExpertModel& model) {
  ValidateModel(model);
  const int n = model.num_experts();
  if (static_cast<int>(z.size()) != n - 1) {
    throw std::invalid_argument("reduced state has " +
                                std::to_string(z.size()) + " coordinates, " +
                                "expected " + std::to_string(n - 1));
  }

  const std::vector<double> f = EventContinuations(next_value, z, model);
  auto [value, raw_alpha] = SolvePrimalStep(f, model);

  SaddleResult saddle;
  saddle.value = value;
  AdversaryControl alpha;
  alpha.a.assign(raw_alpha.begin(), raw_alpha.begin() + n);
  alpha.b.assign(raw_alpha.begin() + n, raw_alpha.end());
  saddle.alpha_star = SanitizeControl(std::move(alpha), 1e-6);

  // Certified lower bound from the adversary side.
  const std::vector<double> gains = ExpectedGains(saddle.alpha_star, model);
  double lower = -(*std::max_element(gains.begin(), gains.end()));
  for (int i = 0; i < n; ++i) {
    lower += f[i] * saddle.alpha_star.a[i] + f[n + i] * saddle.alpha_star.b[i];
  }

  // Canonical forecaster weights: walk supports in lexicographic sequence
  // order ({1} before {1,2} before {2}) and keep the first one whose best
  // guaranteed response is optimal.  The full support always qualifies by
  // duality, so the walk terminates.
  std::vector<int> support;
  std::vector<double> phi;
  double upper = std::numeric_limits<double>::infinity();
  bool found = false;
  auto dfs = [&](auto&& self, int next_min) -> void {
    for (int i = next_min; i < n && !found; ++i) {
      support.push_back(i);
      if (TrySupport(support, f, model, value, &phi, &upper)) {
        found = true;
      } else {
        self(self, i + 1);
      }
      if (!found) support.pop_back();
    }
  };
  dfs(dfs, 0);
  if (!found) {
    // Numerically the full support can miss the slack window; fall back to
    // it unconditionally so the reported gap stays honest.
    std::vector<int> full(n);
    for (int i = 0; i < n; ++i) full[i] = i;
    TrySupport(full, f, model, std::numeric_limits<double>::infinity(), &phi,
               &upper);
  }
  saddle.phi_star = SanitizeWeights({std::move(phi)}, 1e-6);
  saddle.duality_gap = upper - lower;
  return saddle;
}

ValueTable SolveValue(int num_rounds, const ExpertModel& model,
                      const FinalCondition& final_condition,
                      bool store_saddles) {
  ValidateModel(model);
  GuardTableSize(num_rounds, model.num_experts());
  RequireTranslationEquivariant(final_condition, model.num_experts());
  ValueTable table(num_rounds, model.num_experts(), store_saddles);

  {
    std::vector<double>& terminal = table.MutableSlice(num_rounds);
    const int64_t count = table.StateCount(num_rounds);
    terminal.resize(count);
    for (int64_t idx = 0; idx < count; ++idx) {
      const std::vector<int> z = table.DecodeState(num_rounds, idx);
      terminal[idx] = final_condition.ValueReduced(
          std::vector<double>(z.begin(), z.end()));
    }
  }

  constexpr int64_t kBlock = 256;
  for (int m = num_rounds - 1; m >= 0; --m) {
    const std::vector<double>& next_slice = table.MutableSlice(m + 1);
    std::vector<double>& slice = table.MutableSlice(m);
    const int64_t count = table.StateCount(m);
    slice.resize(count);
    std::vector<SaddleResult>* saddles = nullptr;
    if (store_saddles) {
      saddles = &table.MutableSaddles(m);
      saddles->resize(count);
    }
    const auto next_value = [&](const std::vector<int>& znext) {
      return next_slice[table.StateIndex(m + 1, znext)];
    };
    const int64_t num_blocks = (count + kBlock - 1) / kBlock;
    ParallelChunks(num_blocks, [&](int64_t block) {
      const int64_t begin = block * kBlock;
      const int64_t end = std::min(begin + kBlock, count);
      for (int64_t idx = begin; idx < end; ++idx) {
        const std::vector<int> z = table.DecodeState(m, idx);
        if (store_saddles) {
          SaddleResult saddle = StepValue(next_value, z, model);
          slice[idx] = saddle.value;
          (*saddles)[idx] = std::move(saddle);
        } else {
          const std::vector<double> f = EventContinuations(next_value, z, model);
          slice[idx] = SolvePrimalStep(f, model).first;
        }
      }
    });
  }
  return table;
}

ValueTable SolveFullAdversary(int num_rounds, int num_experts,
                              const FinalCondition& final_condition) {
  if (num_experts < 2) {
    throw std::invalid_argument("need at least two experts");
  }
  GuardTableSize(num_rounds, num_experts);
  RequireTranslationEquivariant(final_condition, num_experts);
  ValueTable table(num_rounds, num_experts, /*store_saddles=*/false);
  const int n = num_experts;
  const int num_outcomes = 1 << n;

  {
    std::vector<double>& terminal = table.MutableSlice(num_rounds);
    const int64_t count = table.StateCount(num_rounds);
    terminal.resize(count);
    for (int64_t idx = 0; idx < count; ++idx) {
      const std::vector<int> z = table.DecodeState(num_rounds, idx);
      terminal[idx] = final_condition.ValueReduced(
          std::vector<double>(z.begin(), z.end()));
    }
  }

  constexpr int64_t kBlock = 64;
  for (int m = num_rounds - 1; m >= 0; --m) {
    const std::vector<double>& next_slice = table.MutableSlice(m + 1);
    std::vector<double>& slice = table.MutableSlice(m);
    const int64_t count = table.StateCount(m);
    slice.resize(count);
    const int64_t num_blocks = (count + kBlock - 1) / kBlock;
    ParallelChunks(num_blocks, [&](int64_t block) {
      const int64_t begin = block * kBlock;
      const int64_t end = std::min(begin + kBlock, count);
      std::vector<int> znext(n - 1);
      for (int64_t idx = begin; idx < end; ++idx) {
        const std::vector<int> z = table.DecodeState(m, idx);

        // The adversary mixes freely over all joint gain vectors, so the
        // program has one column per outcome mask.
        LpProblem lp;
        lp.num_vars = num_outcomes + 1;
        lp.eq_rows.emplace_back(lp.num_vars, 1.0);
        lp.eq_rows.back()[num_outcomes] = 0.0;
        lp.eq_rhs.push_back(1.0);
        for (int i = 0; i < n; ++i) {
          std::vector<double> row(lp.num_vars, 0.0);
          for (int g = 0; g < num_outcomes; ++g) {
            row[g] = (g >> i) & 1 ? 1.0 : 0.0;
          }
          row[num_outcomes] = -1.0;
          lp.ub_rows.push_back(std::move(row));
          lp.ub_rhs.push_back(0.0);
        }
        lp.objective.assign(lp.num_vars, 0.0);
        lp.objective[num_outcomes] = -1.0;
        for (int g = 0; g < num_outcomes; ++g) {
          const int ref_gain = (g >> (n - 1)) & 1;
          for (int i = 0; i < n - 1; ++i) {
            znext[i] = z[i] + (((g >> i) & 1) - ref_gain);
          }
          lp.objective[g] =
              next_slice[table.StateIndex(m + 1, znext)] + ref_gain;
        }
        const LpSolution sol = SolveLp(lp);
        if (sol.status != LpStatus::kOptimal) {
          throw std::runtime_error(
              "unrestricted-adversary step program failed over the compact "
              "outcome simplex");
        }
        slice[idx] = sol.objective;
      }
    });
  }
  return table;
}

double ScaledValue(const ValueTable& table, double t,
                   const std::vector<double>& x) {
  const int n = table.num_experts();
  const int num_rounds = table.num_rounds();
  if (num_rounds < 1) {
    throw std::invalid_argument("diffusive scaling needs a positive horizon");
  }
  if (static_cast<int>(x.size()) != n) {
    throw std::invalid_argument("state has " + std::to_string(x.size()) +
                                " coordinates, expected " + std::to_string(n));
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("time " + std::to_string(t) +
                                " outside [0, 1]");
  }
  const double sqrt_m = std::sqrt(static_cast<double>(num_rounds));
  const int m = std::clamp(
      static_cast<int>(std::ceil(num_rounds * t - 1e-9)), 0, num_rounds);
  const double ref = sqrt_m * x[n - 1];
  std::vector<int> z(n - 1);
  for (int i = 0; i < n - 1; ++i) {
    z[i] = RoundHalfTowardZero(sqrt_m * x[i] - ref);
    if (z[i] < -m || z[i] > m) {
      throw std::invalid_argument(
          "scaled state rounds to lattice coordinate " + std::to_string(z[i]) +
          ", outside the radius-" + std::to_string(m) + " slice");
    }
  }
  return (table.Value(m, z) + ref) / sqrt_m;
}

AprioriBound CheckAprioriBound(const ValueTable& table,
                               const FinalCondition& final_condition) {
  const int num_rounds = table.num_rounds();
  AprioriBound bound;
  bound.deviation_by_slice.assign(num_rounds + 1, 0.0);
  if (num_rounds == 0) return bound;
  const double sqrt_m = std::sqrt(static_cast<double>(num_rounds));
  for (int m = 0; m <= num_rounds; ++m) {
    double worst = 0.0;
    const int64_t count = table.StateCount(m);
    for (int64_t idx = 0; idx < count; ++idx) {
      const std::vector<int> z = table.DecodeState(m, idx);
      const double terminal = final_condition.ValueReduced(
          std::vector<double>(z.begin(), z.end()));
      worst = std::max(worst, std::abs(table.ValueByIndex(m, idx) - terminal));
    }
    bound.deviation_by_slice[m] = worst / sqrt_m;
    const double t = static_cast<double>(m) / num_rounds;
    bound.linear_fit_c =
        std::max(bound.linear_fit_c, bound.deviation_by_slice[m] / (2.0 - t));
  }
  return bound;
}

}  // namespace expertgame
