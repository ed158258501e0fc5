// Copyright 2026 The dpbayes Authors
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

#ifndef DPBAYES_VERIFY_H_
#define DPBAYES_VERIFY_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "calculus.h"
#include "dataset.h"
#include "families.h"
#include "metrics.h"
#include "rng.h"

namespace dpbayes {

// Theta_L: parameters whose likelihood is L-Lipschitz under `metric`.
struct ParameterRegion {
  FamilyPrior family;
  PseudoMetric metric;
  double level = 0.0;

  bool Contains(const Theta& theta) const;
};

struct CheckReport {
  std::string name;
  bool passed = false;
  double max_violation = 0.0;
  long long samples_used = 0;
  double tolerance = 0.0;
  std::string note;
};

inline constexpr double kExactTolerance = 1e-9;
// Slack for KL computed by quadrature on a grid posterior.
inline constexpr double kGridKlTolerance = 1e-6;

struct SearchBudget {
  int grid_points = 256;
  int refine_rounds = 3;
  // Cap on enumerated corner tables for networks; beyond it they are sampled.
  long long max_tables = 1 << 16;
};

// Largest log_ratio(p(x), p(y)) - L rho(x, y) over single observations.
// Finite families and networks are enumerated exhaustively (networks over
// the corner tables, where every row puts all free mass on one symbol).
// Continuous families are searched on theta in Theta_L.
CheckReport CheckAssumption1(const FamilyPrior& family, double L,
                             const PseudoMetric& metric,
                             const SearchBudget& budget = {},
                             std::uint64_t seed = 0);

// Monte Carlo estimate of xi(Theta_L) against 1 - exp(-cL), 3 sigma slack.
CheckReport CheckAssumption2(const FamilyPrior& family,
                             const Concentration& cert,
                             const std::vector<double>& L_grid,
                             int n_prior_samples, std::uint64_t seed);

using DatasetPair = std::pair<Dataset, Dataset>;

CheckReport CheckTheorem1(const FamilyPrior& family,
                          const SmoothnessCertificate& cert,
                          const std::vector<DatasetPair>& pairs);

// Finite families only: singleton log-ratio (Lipschitz) or total variation
// (concentration) against the privacy guarantee.
CheckReport CheckTheorem2(const FamilyPrior& family,
                          const SmoothnessCertificate& cert,
                          const std::vector<DatasetPair>& pairs);

struct KlEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
};

KlEstimate MonteCarloKl(const Posterior& p, const Posterior& q, int n,
                        RngStream& rng);

// Monte Carlo KL within 4 standard errors of the exact KL on every pair.
CheckReport CheckMonteCarloKl(const FamilyPrior& family,
                              const std::vector<DatasetPair>& pairs,
                              int samples, std::uint64_t seed);

// phi(y) <= exp(L rho(x, y)) phi(x) on a finite family.
CheckReport CheckMarginalRatio(const FamilyPrior& family, double L,
                               const PseudoMetric& metric,
                               const std::vector<DatasetPair>& pairs);

// TV^2 <= KL / 2 on a finite family.
CheckReport CheckPinsker(const FamilyPrior& family,
                         const std::vector<DatasetPair>& pairs);

double TotalVariation(const FiniteWeightsForm& p, const FiniteWeightsForm& q);

struct VerifyOptions {
  int prior_samples = 100000;
  int theorem1_pairs = 1000;
  int grid_theorem1_pairs = 100;
  int monte_carlo_samples = 20000;
};

// Every check that applies to the family, in a fixed order.
std::vector<CheckReport> VerifySuite(const FamilyPrior& family,
                                     std::uint64_t seed,
                                     const VerifyOptions& options = {});

}  // namespace dpbayes

#endif  // DPBAYES_VERIFY_H_
