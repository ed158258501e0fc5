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

// Acceptance checks. Prints one PASS/FAIL line per criterion; exits nonzero
// when any criterion fails. Tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "adversary.h"
#include "calculus.h"
#include "families.h"
#include "metrics.h"
#include "rng.h"
#include "runner.h"
#include "verify.h"

namespace dpbayes {
namespace {

constexpr double kExpectedOmega = 1.25643;
constexpr double kExpectedKappa = 4.91081;
constexpr double kConstTol = 1e-4;
constexpr double kBoundSlack = 1e-9;
constexpr double kL1Bound = 0.21462;
constexpr double kL1BoundTol = 1e-4;
constexpr double kL1MaxRate = 0.02;
constexpr double kAttackMinSuccess = 0.95;
constexpr double kChanceLo = 0.4;
constexpr double kChanceHi = 0.6;
constexpr double kBetaBinomialC = -4.397;
constexpr double kBetaBinomialCTol = 1e-2;
constexpr double kIntervalTol = 1e-12;
constexpr std::uint64_t kSeed = 20240501;

struct Outcome {
  bool passed;
  std::string detail;
};

double Millis(std::chrono::steady_clock::duration d) {
  return std::chrono::duration<double, std::milli>(d).count();
}

int failures = 0;

void Run(const char* id, const char* title, double budget_ms,
         const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out = body();
  const double ms = Millis(std::chrono::steady_clock::now() - start);
  const bool in_time = budget_ms <= 0 || ms < budget_ms;
  if (!in_time) out.detail += " [over time budget]";
  const bool ok = out.passed && in_time;
  failures += !ok;
  std::printf("%s %s %s: %s (%.1f ms", id, ok ? "PASS" : "FAIL", title,
              out.detail.c_str(), ms);
  if (budget_ms > 0) std::printf(", limit %.0f ms", budget_ms);
  std::printf(")\n");
  std::fflush(stdout);
}

std::string Fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome Constants() {
  const auto& k = GetKappaConstants();
  const bool ok = std::abs(k.omega - kExpectedOmega) <= kConstTol &&
                  std::abs(k.kappa - kExpectedKappa) <= kConstTol;
  return {ok, Fmt("omega=%.10f", k.omega) + Fmt(" kappa=%.10f", k.kappa)};
}

// Gamma(shape, r1) || Gamma(shape, r2) with a common shape.
double GammaKlSameShape(double shape, double r1, double r2) {
  return shape * (std::log(r1 / r2) + r2 / r1 - 1);
}

Outcome KlBound() {
  const ExponentialRate family{1};
  const auto cert = Certificate(family).certificate;
  const double kappa = GetKappaConstants().kappa;
  RngStream rng = RngStream::Derive(kSeed, "ac2");
  std::vector<DatasetPair> pairs;
  int violations = 0;
  double worst = -INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const double x = 10 * rng.Uniform(), y = 10 * rng.Uniform();
    pairs.emplace_back(Dataset::Scalars({x}), Dataset::Scalars({y}));
    // Posteriors are Gamma(2, 1 + x) and Gamma(2, 1 + y).
    const double v = GammaKlSameShape(2, 1 + x, 1 + y) - kappa * std::abs(x - y);
    worst = std::max(worst, v);
    violations += v > kBoundSlack;
  }
  const CheckReport r = CheckTheorem1(family, cert, pairs);
  return {violations == 0 && r.passed,
          "violations=" + std::to_string(violations) +
              Fmt(" max(KL-bound)=%.3e", worst) +
              Fmt(" library max_violation=%.3e", r.max_violation)};
}

FiniteTheta RandomFinite(RngStream& rng) {
  constexpr int kPoints = 5, kSymbols = 3;
  FiniteTheta f;
  for (int t = 0; t < kPoints; ++t) {
    std::vector<double> row(kSymbols);
    double sum = 0;
    for (double& v : row) sum += (v = 0.05 + rng.Uniform());
    for (double& v : row) v /= sum;
    f.likelihoods.push_back(row);
  }
  // One flat point keeps the concentration constant positive.
  f.likelihoods.back().assign(kSymbols, 1.0 / kSymbols);
  double sum = 0;
  for (int t = 0; t < kPoints; ++t) {
    f.prior_weights.push_back(0.1 + rng.Uniform());
    sum += f.prior_weights.back();
  }
  for (double& w : f.prior_weights) w /= sum;
  return f;
}

std::vector<double> DirectPosterior(const FiniteTheta& f, const Dataset& x) {
  std::vector<double> w = f.prior_weights;
  double total = 0;
  for (std::size_t t = 0; t < w.size(); ++t) {
    for (double v : x.scalars()) w[t] *= f.likelihoods[t][static_cast<int>(v)];
    total += w[t];
  }
  for (double& v : w) v /= total;
  return w;
}

Outcome PrivacyBound() {
  RngStream rng = RngStream::Derive(kSeed, "ac3");
  const double kappa = GetKappaConstants().kappa;
  double worst_eps = -INFINITY, worst_delta = -INFINITY;
  bool library_ok = true;
  for (int fam = 0; fam < 100; ++fam) {
    const FiniteTheta f = RandomFinite(rng);
    const auto lip = Certificate(f).certificate;
    const double L = std::get<UniformLipschitz>(lip.bound).L;
    const double c = FiniteThetaConcentration(f, Hamming{});
    for (int p = 0; p < 100; ++p) {
      const int len = 1 + static_cast<int>(rng.Uniform() * 3);
      std::vector<double> xs(len), ys(len);
      int k = 0;
      for (int i = 0; i < len; ++i) {
        xs[i] = static_cast<int>(rng.Uniform() * 3);
        ys[i] = static_cast<int>(rng.Uniform() * 3);
        k += xs[i] != ys[i];
      }
      const Dataset x = Dataset::Scalars(xs), y = Dataset::Scalars(ys);
      const double rho = Distance(Hamming{}, x, y);
      const int lift = std::max(k, 1);
      const double L_k = L * lift, c_k = c / lift;
      const auto wx = DirectPosterior(f, x), wy = DirectPosterior(f, y);
      double max_log = 0, tv = 0;
      for (std::size_t t = 0; t < wx.size(); ++t) {
        max_log = std::max(max_log, std::abs(std::log(wx[t] / wy[t])));
        tv += 0.5 * std::abs(wx[t] - wy[t]);
      }
      worst_eps = std::max(worst_eps, max_log - 2 * L_k * rho);
      worst_delta = std::max(worst_delta, tv - std::sqrt(kappa * rho / (2 * c_k)));
      const std::vector<DatasetPair> one{{x, y}};
      library_ok &= CheckTheorem2(f, LiftIid(lip, len, lift), one).passed;
      library_ok &= CheckTheorem2(
          f, LiftIid({Concentration{c}, Hamming{}}, len, lift), one).passed;
    }
  }
  return {worst_eps <= kBoundSlack && worst_delta <= kBoundSlack && library_ok,
          Fmt("max(logratio-2L*rho)=%.3e", worst_eps) +
              Fmt(" max(TV-sqrt(kappa*rho/2c))=%.3e", worst_delta) +
              (library_ok ? " library checks agree" : " library check failed")};
}

Outcome EmpiricalL1() {
  const double bound = EmpiricalL1Bound(300, 0.01, 3);
  const std::vector<double> p{0.2, 0.3, 0.5};
  const Partition cells = Partition::FromIndexCells({0, 1, 2}, 3);
  RngStream rng = RngStream::Derive(kSeed, "ac4");
  int exceed = 0;
  std::vector<Theta> s(300);
  for (int t = 0; t < 10000; ++t) {
    for (auto& v : s) v = FiniteIndex{rng.Categorical(p)};
    exceed += L1Distance(EmpiricalDistribution(s, cells), p) > bound;
  }
  const double rate = exceed / 10000.0;
  return {std::abs(bound - kL1Bound) <= kL1BoundTol &&
              rate <= kL1MaxRate,
          Fmt("bound=%.5f", bound) + Fmt(" violation rate=%.4f", rate)};
}

// Best success any test can reach from n draws of Gamma(2, r1) vs
// Gamma(2, r2): the sum of draws is sufficient and Gamma(2n, r).
double BayesOptimalSuccess(int n, double r1, double r2) {
  const double shape = 2.0 * n;
  if (r1 > r2) std::swap(r1, r2);
  const double t = shape * std::log(r2 / r1) / (r2 - r1);
  const double tv = boost::math::gamma_p(shape, r2 * t) -
                    boost::math::gamma_p(shape, r1 * t);
  return 0.5 * (1 + tv);
}

Outcome Distinguishing() {
  const ExponentialRate family{1};
  const int n = 500;
  const double delta = 0.05;
  const double threshold =
      DistinguishabilityThreshold(Certificate(family).certificate, n, delta)
          .rho_threshold;
  const double x = 1.0, y = x + 10 * threshold;
  const auto far = ThresholdExperiment(family, Dataset::Scalars({x}),
                                       Dataset::Scalars({y}), n, delta, 200,
                                       kSeed);
  const auto same = ThresholdExperiment(family, Dataset::Scalars({x}),
                                        Dataset::Scalars({x}), n, delta, 200,
                                        kSeed);
  const bool far_ok = far.empirical_success >= kAttackMinSuccess;
  const bool same_ok = same.empirical_success >= kChanceLo &&
                       same.empirical_success <= kChanceHi;
  return {far_ok && same_ok,
          Fmt("threshold=%.6g", threshold) + Fmt(" rho=%.6g", far.rho) +
              Fmt(" success=%.3f", far.empirical_success) +
              Fmt(" (Bayes-optimal ceiling %.3f)",
                  BayesOptimalSuccess(n, 1 + x, 1 + y)) +
              Fmt(" x=y success=%.3f", same.empirical_success)};
}

Outcome Lifting() {
  const ExponentialRate family{1};
  RngStream rng = RngStream::Derive(kSeed, "ac6");
  int violations = 0;
  double worst = -INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const double theta = std::get<double>(SamplePrior(family, rng));
    std::vector<double> xs(5), ys(5);
    for (int j = 0; j < 5; ++j) {
      xs[j] = 10 * rng.Uniform();
      ys[j] = 10 * rng.Uniform();
    }
    const Dataset x = Dataset::Scalars(xs), y = Dataset::Scalars(ys);
    const SmoothnessCertificate single{
        UniformLipschitz{LipschitzAt(family, theta, AbsDiffSum{})}, AbsDiffSum{}};
    const auto lifted = LiftIid(single, 5);
    const double ratio =
        LogRatioOfLogs(LogDensity(family, theta, x), LogDensity(family, theta, y));
    const double v = ratio - std::get<UniformLipschitz>(lifted.bound).L *
                                 ProductMetric(AbsDiffSum{}, x, y);
    worst = std::max(worst, v);
    violations += v > kBoundSlack;
  }
  return {violations == 0, "violations=" + std::to_string(violations) +
                               Fmt(" max(logratio-5L*rho)=%.3e", worst)};
}

Outcome Certificates() {
  const std::vector<double> grid{0.1, 0.25, 0.5, 1, 2, 4, 8};
  const auto exp_r = CheckAssumption2(ExponentialRate{1}, {1.0}, grid, 100000, kSeed);
  const auto lap_r = CheckAssumption2(LaplaceScale{0, 1}, {1.0}, grid, 100000, kSeed);
  const DiscreteBayesNet net{{2, 2, 2}, {{}, {0}, {1}}, 1.0, 0.1};
  const auto a1 = CheckAssumption1(net, std::log(10.0), CanonicalMetric(net));
  const auto a1_low =
      CheckAssumption1(net, 0.9 * std::log(10.0), CanonicalMetric(net));
  return {exp_r.passed && lap_r.passed && a1.passed && !a1_low.passed,
          std::string("exponential A2 ") + (exp_r.passed ? "pass" : "fail") +
              ", laplace A2 " + (lap_r.passed ? "pass" : "fail") +
              ", network A1 at ln10 " + (a1.passed ? "pass" : "fail") +
              Fmt(" (%.0f tables*pairs)", double(a1.samples_used)) +
              ", at 0.9 ln10 " + (a1_low.passed ? "pass" : "fail") +
              Fmt(" (violation %.4f)", a1_low.max_violation)};
}

Outcome BetaBinomialRegime() {
  const auto r = Certificate(BetaBinomial{10, 2});
  const double c = std::get<Concentration>(r.certificate.bound).c;
  const auto [lo, hi] = BetaBinomialSmoothInterval(10, std::log(100.0));
  const bool ok = !r.valid && std::abs(c - kBetaBinomialC) <= kBetaBinomialCTol &&
                  std::abs(lo - 1.0 / 11) <= kIntervalTol &&
                  std::abs(hi - 10.0 / 11) <= kIntervalTol;
  return {ok, std::string(r.valid ? "valid" : "invalid") + Fmt(" c=%.6f", c) +
                  Fmt(" interval=[%.15f,", lo) + Fmt(" %.15f]", hi)};
}

Outcome Determinism() {
  const FamilyPrior family = MakeFamily("exponential", {"lambda=1"}, false);
  VerifyOptions opts;
  const auto v1 = RunVerify(family, kSeed, opts).json;
  const auto v2 = RunVerify(family, kSeed, opts).json;
  const Dataset x = Dataset::Scalars({1}), y = Dataset::Scalars({6});
  const auto a1 = RunAttack(family, x, y, 500, 0.05, 200, 0, kSeed);
  const auto a2 = RunAttack(family, x, y, 500, 0.05, 200, 0, kSeed);
  return {v1 == v2 && a1 == a2,
          std::string("verify ") + (v1 == v2 ? "identical" : "differs") +
              Fmt(" (%.0f bytes)", double(v1.size())) + ", attack " +
              (a1 == a2 ? "identical" : "differs") +
              Fmt(" (%.0f bytes)", double(a1.size()))};
}

}  // namespace
}  // namespace dpbayes

int main() {
  using namespace dpbayes;
  Run("AC1", "constants", 1, Constants);
  Run("AC2", "kl robustness bound", 1000, KlBound);
  Run("AC3", "privacy bounds on finite families", 10000, PrivacyBound);
  Run("AC4", "empirical L1 concentration", 5000, EmpiricalL1);
  Run("AC5", "distinguishing attack", 30000, Distinguishing);
  Run("AC6", "iid lifting", 0, Lifting);
  Run("AC7", "family certificates", 0, Certificates);
  Run("AC8", "beta-binomial regime flag", 0, BetaBinomialRegime);
  Run("AC9", "determinism", 0, Determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
