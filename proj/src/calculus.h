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

#ifndef DPBAYES_CALCULUS_H_
#define DPBAYES_CALCULUS_H_

#include <string>
#include <utility>
#include <variant>

#include "families.h"
#include "metrics.h"

namespace dpbayes {

// omega is the positive root of e^w = 2w + 1; kappa = 2w / (1 - e^-w)^2.
struct KappaConstants {
  double omega;
  double kappa;
};

// Computed once on first use.
const KappaConstants& GetKappaConstants();

struct UniformLipschitz {
  double L = 0.0;
};

struct Concentration {
  double c = 1.0;
};

struct SmoothnessCertificate {
  std::variant<UniformLipschitz, Concentration> bound;
  PseudoMetric metric;
  // 1 for a single observation; n (or k) after lifting to product space.
  int product_arity = 1;

  bool IsLipschitz() const {
    return std::holds_alternative<UniformLipschitz>(bound);
  }
};

// Family certificate. `valid` is false when the constant is vacuous
// (non-positive c); the certificate still carries the computed value.
struct CertificateResult {
  SmoothnessCertificate certificate;
  bool valid = true;
  std::string note;
};

CertificateResult Certificate(const FamilyPrior& family);

// KL bound for datasets at distance rho.
double RobustnessBound(const SmoothnessCertificate& cert, double rho);

enum class MetricTransform { kIdentity, kSquareRoot };

struct PrivacyGuarantee {
  double epsilon_rate = 0.0;
  double delta_rate = 0.0;
  MetricTransform transform = MetricTransform::kIdentity;

  // epsilon and delta at dataset distance rho.
  double EpsilonAt(double rho) const;
  double DeltaAt(double rho) const;
};

PrivacyGuarantee DpGuarantee(const SmoothnessCertificate& cert);

// Certificate for n i.i.d. observations, or for datasets differing in at
// most k_differing of them. k_differing <= 0 means "not given".
SmoothnessCertificate LiftIid(const SmoothnessCertificate& cert, int n,
                              int k_differing = 0);

// Largest partition size m allowed for a given delta: floor(log2 sqrt(1/delta)).
int MaxPartitionSize(double delta);

// sqrt(3/n ln(1/delta)); throws InvalidArgument if m is too large.
double EmpiricalL1Bound(int n, double delta, int m);

struct DistinguishabilityBound {
  double rho_threshold = 0.0;
  int n_queries = 1;
  double delta = 0.05;
};

DistinguishabilityBound DistinguishabilityThreshold(
    const SmoothnessCertificate& cert, int n, double delta);

// {theta : lipschitz_at(theta) <= L} for BetaBinomial, an interval in (0, 1).
// Empty (first > second) when L < ln n.
std::pair<double, double> BetaBinomialSmoothInterval(int trials, double L);

// Largest c with xi(Theta_L) >= 1 - exp(-cL) for every L, computed from the
// exact step function of a finite family. Zero when no parameter has L = 0.
double FiniteThetaConcentration(const FiniteTheta& family,
                                const PseudoMetric& metric);

}  // namespace dpbayes

#endif  // DPBAYES_CALCULUS_H_
