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

#ifndef EXPERTGAME_VALUE_DP_H_
#define EXPERTGAME_VALUE_DP_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "expertgame/game.hpp"

namespace expertgame {

// One-round saddle point at a lattice state.  The adversary's optimal mixed
// corruption, the forecaster's optimal weights, and the gap between the
// certified upper and lower bounds on the value (zero up to solver
// tolerance at a true saddle).
struct SaddleResult {
  double value = 0.0;
  AdversaryControl alpha_star;
  ForecasterControl phi_star;
  double duality_gap = 0.0;
};

// Backward-induction table of the game value on the difference lattice.
// States at slice m are z in {-m..m}^(N-1), the cumulative gains relative
// to expert N; translation equivariance of the payoff makes this reduction
// exact.  Slice M holds the terminal payoff, slice 0 the value of the whole
// game.
class ValueTable {
 public:
  ValueTable(int num_rounds, int num_experts, bool store_saddles);

  int num_rounds() const { return num_rounds_; }
  int num_experts() const { return num_experts_; }
  bool has_saddles() const { return !saddles_.empty(); }

  // Number of lattice states in slice m.
  int64_t StateCount(int m) const;
  // Lattice coordinates of the index-th state of slice m (the inverse of
  // StateIndex).
  std::vector<int> DecodeState(int m, int64_t index) const;
  // Flat index of z within slice m; throws std::out_of_range if any
  // coordinate exceeds the slice radius.
  int64_t StateIndex(int m, const std::vector<int>& z) const;

  double Value(int m, const std::vector<int>& z) const;
  double ValueByIndex(int m, int64_t index) const { return slices_[m][index]; }
  const SaddleResult& Saddle(int m, const std::vector<int>& z) const;
  const SaddleResult& SaddleByIndex(int m, int64_t index) const;

  // Filled by the solvers.
  std::vector<double>& MutableSlice(int m) { return slices_[m]; }
  std::vector<SaddleResult>& MutableSaddles(int m) { return saddles_[m]; }

 private:
  int num_rounds_ = 0;
  int num_experts_ = 0;
  std::vector<std::vector<double>> slices_;
  std::vector<std::vector<SaddleResult>> saddles_;
};

// Value of one backward step at reduced state z: the adversary maximizes
// the expected continuation minus the forecaster's best expected gain,
//   max_alpha { sum_e alpha_e F_e - max_i c_i(alpha) } ,
// where F_e is the expected continuation (plus the reference expert's gain)
// under corruption event e.  Solved as a linear program; the forecaster
// weights are recovered with the lexicographically smallest support among
// optimal responses, making the reported saddle canonical.
SaddleResult StepValue(
    const std::function<double(const std::vector<int>&)>& next_value,
    const std::vector<int>& z, const ExpertModel& model);

// Full backward induction over M rounds.  With store_saddles the optimal
// controls and duality gaps are kept for every state (memory and time grow
// accordingly); values alone are enough for scaling studies.  Capped at
// four experts - the slice grows like (2M+1)^(N-1) - and custom final
// conditions are spot-checked for translation equivariance before solving,
// since the reduced lattice is sound only under that symmetry.
ValueTable SolveValue(int num_rounds, const ExpertModel& model,
                      const FinalCondition& final_condition,
                      bool store_saddles);

// Value against an unrestricted adversary who picks any joint distribution
// over the 2^N gain vectors each round.  The experts' success rates are
// irrelevant here - the adversary overwrites the whole gain law - so only
// the expert count enters.  Dominates the limited-adversary value
// statewise.  Same expert cap and final-condition screening as SolveValue.
ValueTable SolveFullAdversary(int num_rounds, int num_experts,
                              const FinalCondition& final_condition);

// Diffusive scaling of the table:
//   u^M(t, x) = V(ceil(M t), sqrt(M) x) / sqrt(M) ,
// evaluated by rounding sqrt(M) x to the lattice (halves toward zero) and
// correcting for the translation by the reference coordinate.  Throws
// std::invalid_argument when the rounded state lies outside the reachable
// lattice of its slice.
double ScaledValue(const ValueTable& table, double t,
                   const std::vector<double>& x);

// How far each slice of the table has drifted from the terminal payoff,
// measured in the diffusive scaling:
//   deviation_by_slice[m] = max_z |V(m, z) - phi(z, 0)| / sqrt(M) ,
// together with the smallest constant c making
//   deviation_by_slice[m] <= c * (2 - m / M)
// across all slices.  One step moves the value by a bounded amount, so c
// settles near a horizon-independent level as M grows.
struct AprioriBound {
  std::vector<double> deviation_by_slice;
  double linear_fit_c = 0.0;
};

AprioriBound CheckAprioriBound(const ValueTable& table,
                               const FinalCondition& final_condition);

}  // namespace expertgame

#endif  // EXPERTGAME_VALUE_DP_H_
