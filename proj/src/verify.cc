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

#include "verify.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "errors.h"
#include "numerics.h"
#include "serialization.h"

namespace dpbayes {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kChunk = 10000;
// Substream indices for random pairs start here, clear of sample chunks.
constexpr std::uint64_t kPairStream = 1u << 20;

// log_ratio - L rho with the conventions for zero and infinite terms.
double Violation(double ratio, double L, double rho) {
  if (ratio == 0.0) return rho == 0.0 ? 0.0 : -L * rho;
  if (std::isinf(ratio)) return std::isinf(L) && rho > 0.0 ? 0.0 : kInf;
  if (std::isinf(L)) return rho > 0.0 ? -kInf : ratio;
  return ratio - L * rho;
}

using ScalarLogLik = std::function<double(double theta, double x)>;

ScalarLogLik MakeScalarLogLik(const FamilyPrior& family) {
  if (std::holds_alternative<ExponentialRate>(family)) {
    return [](double t, double x) {
      return x < 0.0 ? -kInf : std::log(t) - t * x;
    };
  }
  if (const auto* f = std::get_if<LaplaceScale>(&family)) {
    const double mu = f->location;
    return [mu](double t, double x) {
      return std::log(t) - std::numbers::ln2 - t * std::abs(x - mu);
    };
  }
  if (const auto* f = std::get_if<BetaBinomial>(&family)) {
    const int n = f->trials;
    return [n](double t, double k) {
      const int ki = static_cast<int>(k);
      return LogChoose(n, ki) + ki * std::log(t) + (n - ki) * std::log1p(-t);
    };
  }
  const double mu = std::get<NormalVariance>(family).mean;
  return [mu](double v, double x) {
    return -0.5 * std::log(2.0 * std::numbers::pi * v) -
           (x - mu) * (x - mu) / (2.0 * v);
  };
}

double ScalarRho(const PseudoMetric& metric, double a, double b) {
  if (std::holds_alternative<AbsDiffSum>(metric)) return std::abs(a - b);
  if (std::holds_alternative<NormalMetric>(metric)) {
    return std::abs(a * a - b * b) + 2.0 * std::abs(a - b);
  }
  if (std::holds_alternative<Hamming>(metric)) return a == b ? 0.0 : 1.0;
  return Distance(metric, Dataset::Scalars({a}), Dataset::Scalars({b}));
}

std::string Describe(const std::string& label, double a, const std::string& l2,
                     double b) {
  return label + "=" + FormatDouble(a) + " " + l2 + "=" + FormatDouble(b);
}

CheckReport Finish(CheckReport r) {
  r.passed = r.max_violation <= r.tolerance;
  return r;
}

CheckReport FiniteAssumption1(const FiniteTheta& f, double L,
                              const PseudoMetric& metric) {
  CheckReport r{"assumption1", false, 0.0, 0, kExactTolerance, ""};
  const std::size_t outcomes = f.likelihoods.front().size();
  for (std::size_t i = 0; i < f.likelihoods.size(); ++i) {
    const auto& table = f.likelihoods[i];
    for (std::size_t a = 0; a < outcomes; ++a) {
      for (std::size_t b = 0; b < outcomes; ++b) {
        const double rho = ScalarRho(metric, static_cast<double>(a),
                                     static_cast<double>(b));
        const double v = Violation(LogRatio(table[a], table[b]), L, rho);
        ++r.samples_used;
        if (v > r.max_violation) {
          r.max_violation = v;
          r.note = "worst at theta index " + std::to_string(i) + ", x=" +
                   std::to_string(a) + ", y=" + std::to_string(b);
        }
      }
    }
  }
  if (r.note.empty()) r.note = "exhaustive";
  return Finish(r);
}

CheckReport NetworkAssumption1(const DiscreteBayesNet& net, double L,
                               const PseudoMetric& metric,
                               const SearchBudget& budget,
                               std::uint64_t seed) {
  CheckReport r{"assumption1", false, 0.0, 0, kExactTolerance, ""};
  const auto outcomes = EnumerateOutcomes(net);
  const std::size_t count = outcomes.size();
  std::vector<double> rho(count * count);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      rho[i * count + j] = Distance(metric, Dataset::Rows({outcomes[i]}),
                                    Dataset::Rows({outcomes[j]}));
    }
  }
  // Rows of every conditional table, and the number of vertices of each.
  struct RowRef {
    std::size_t var;
    std::size_t config;
  };
  std::vector<RowRef> rows;
  long double total = 1.0L;
  for (std::size_t v = 0; v < net.alphabet_sizes.size(); ++v) {
    for (std::size_t c = 0; c < ParentConfigCount(net, v); ++c) {
      rows.push_back({v, c});
      total *= net.alphabet_sizes[v];
    }
  }
  const bool exhaustive = total <= static_cast<long double>(budget.max_tables);
  const long long tables =
      exhaustive ? static_cast<long long>(total) : budget.max_tables;
  RngStream rng = RngStream::Derive(seed, "verify-chunk", 0);

  std::vector<int> choice(rows.size(), 0);
  NetworkTables theta;
  theta.cpt.resize(net.alphabet_sizes.size());
  for (std::size_t v = 0; v < net.alphabet_sizes.size(); ++v) {
    theta.cpt[v].assign(ParentConfigCount(net, v),
                        std::vector<double>(net.alphabet_sizes[v]));
  }
  std::vector<double> log_p(count);
  for (long long t = 0; t < tables; ++t) {
    if (!exhaustive) {
      for (std::size_t i = 0; i < rows.size(); ++i) {
        choice[i] = static_cast<int>(std::uniform_int_distribution<int>(
            0, net.alphabet_sizes[rows[i].var] - 1)(rng.engine()));
      }
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const int a = net.alphabet_sizes[rows[i].var];
      auto& row = theta.cpt[rows[i].var][rows[i].config];
      std::fill(row.begin(), row.end(), net.floor);
      row[choice[i]] = 1.0 - (a - 1) * net.floor;
    }
    for (std::size_t i = 0; i < count; ++i) {
      log_p[i] = NetworkLogProbability(net, theta, outcomes[i]);
    }
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = i + 1; j < count; ++j) {
        const double v = Violation(LogRatioOfLogs(log_p[i], log_p[j]), L,
                                   rho[i * count + j]);
        if (v > r.max_violation) r.max_violation = v;
      }
    }
    r.samples_used += static_cast<long long>(count * count);
    if (exhaustive) {
      // Mixed-radix increment over the row vertices.
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (++choice[i] < net.alphabet_sizes[rows[i].var]) break;
        choice[i] = 0;
      }
    }
  }
  r.note = exhaustive ? "exhaustive over " + std::to_string(tables) +
                            " corner tables and all outcome pairs"
                      : "sampled " + std::to_string(tables) + " corner tables";
  return Finish(r);
}

CheckReport ContinuousAssumption1(const FamilyPrior& family, double L,
                                  const PseudoMetric& metric,
                                  const SearchBudget& budget) {
  CheckReport r{"assumption1", false, 0.0, 0, kExactTolerance, ""};
  const int g = std::max(budget.grid_points, 8);
  // Theta_L as an interval [t_lo, t_hi], optionally geometric.
  double t_lo = 0.0, t_hi = 0.0, x_lo = 0.0, x_hi = 0.0;
  bool geometric = false;
  bool integer_x = false;
  if (std::holds_alternative<ExponentialRate>(family)) {
    t_lo = L / g;
    t_hi = L;
    x_lo = 0.0;
    x_hi = 20.0;
  } else if (const auto* f = std::get_if<LaplaceScale>(&family)) {
    t_lo = L / g;
    t_hi = L;
    x_lo = f->location - 20.0;
    x_hi = f->location + 20.0;
  } else if (const auto* f = std::get_if<BetaBinomial>(&family)) {
    std::tie(t_lo, t_hi) = BetaBinomialSmoothInterval(f->trials, L);
    x_lo = 0.0;
    x_hi = f->trials;
    integer_x = true;
  } else {
    const auto& nv = std::get<NormalVariance>(family);
    const double m = std::max(std::abs(nv.mean), 1.0);
    t_lo = m / (2.0 * L);
    t_hi = t_lo * 1e3;
    geometric = true;
    const double span = 5.0 * m + std::abs(nv.mean);
    x_lo = -span;
    x_hi = span;
  }
  if (!(L > 0.0) || !(t_lo <= t_hi)) {
    r.note = "empty parameter region";
    return Finish(r);
  }
  const auto loglik = MakeScalarLogLik(family);
  auto theta_at = [&](double u) {  // u in [0, 1]
    return geometric ? t_lo * std::pow(t_hi / t_lo, u)
                     : t_lo + u * (t_hi - t_lo);
  };
  std::vector<double> xs;
  if (integer_x) {
    for (int k = 0; k <= static_cast<int>(x_hi); ++k) xs.push_back(k);
  } else {
    for (int i = 0; i < g; ++i) {
      xs.push_back(x_lo + (x_hi - x_lo) * i / (g - 1));
    }
  }
  double best_u = 0.0, best_x = xs[0], best_y = xs[0];
  auto eval = [&](double u, double x, double y) {
    const double theta = theta_at(std::clamp(u, 0.0, 1.0));
    const double v = Violation(
        LogRatioOfLogs(loglik(theta, x), loglik(theta, y)), L,
        ScalarRho(metric, x, y));
    ++r.samples_used;
    if (v > r.max_violation) {
      r.max_violation = v;
      best_u = u;
      best_x = x;
      best_y = y;
    }
  };
  std::vector<double> ll(xs.size());
  for (int i = 0; i < g; ++i) {
    const double u = static_cast<double>(i) / (g - 1);
    const double theta = theta_at(u);
    for (std::size_t a = 0; a < xs.size(); ++a) ll[a] = loglik(theta, xs[a]);
    for (std::size_t a = 0; a < xs.size(); ++a) {
      for (std::size_t b = a + 1; b < xs.size(); ++b) {
        const double v = Violation(LogRatioOfLogs(ll[a], ll[b]), L,
                                   ScalarRho(metric, xs[a], xs[b]));
        ++r.samples_used;
        if (v > r.max_violation) {
          r.max_violation = v;
          best_u = u;
          best_x = xs[a];
          best_y = xs[b];
        }
      }
    }
  }
  // Local refinement around the worst grid point.
  double du = 1.0 / (g - 1);
  double dx = integer_x ? 0.0 : (x_hi - x_lo) / (g - 1);
  for (int round = 0; round < budget.refine_rounds; ++round) {
    const double cu = best_u, cx = best_x, cy = best_y;
    for (int i = -4; i <= 4; ++i) {
      for (int j = -4; j <= 4; ++j) {
        for (int k = -4; k <= 4; ++k) {
          const double x = std::clamp(cx + j * dx / 4.0, x_lo, x_hi);
          const double y = std::clamp(cy + k * dx / 4.0, x_lo, x_hi);
          eval(cu + i * du / 4.0, x, y);
        }
      }
    }
    du /= 4.0;
    dx /= 4.0;
  }
  r.note = "grid search over the parameter region; worst at " +
           Describe("theta", theta_at(std::clamp(best_u, 0.0, 1.0)), "x",
                    best_x) +
           " y=" + FormatDouble(best_y);
  return Finish(r);
}

std::vector<double> LipschitzSample(const FamilyPrior& family, int n,
                                    std::uint64_t seed) {
  const PseudoMetric metric = CanonicalMetric(family);
  std::vector<double> levels;
  levels.reserve(n);
  for (int chunk = 0; chunk * kChunk < n; ++chunk) {
    RngStream rng = RngStream::Derive(seed, "verify-chunk", chunk);
    const int end = std::min(n, (chunk + 1) * kChunk);
    for (int i = chunk * kChunk; i < end; ++i) {
      levels.push_back(LipschitzAt(family, SamplePrior(family, rng), metric));
    }
  }
  std::sort(levels.begin(), levels.end());
  return levels;
}

bool IsGrid(const Posterior& p) {
  return std::holds_alternative<GridForm>(p.form);
}

const FiniteTheta& RequireFinite(const FamilyPrior& family) {
  const auto* f = std::get_if<FiniteTheta>(&family);
  if (f == nullptr) {
    throw InvalidArgument("this check needs a finite family");
  }
  return *f;
}

}  // namespace

bool ParameterRegion::Contains(const Theta& theta) const {
  return LipschitzAt(family, theta, metric) <= level;
}

CheckReport CheckAssumption1(const FamilyPrior& family, double L,
                             const PseudoMetric& metric,
                             const SearchBudget& budget, std::uint64_t seed) {
  Validate(family);
  if (!(L >= 0.0)) throw InvalidArgument("L must be nonnegative");
  if (const auto* f = std::get_if<FiniteTheta>(&family)) {
    return FiniteAssumption1(*f, L, metric);
  }
  if (const auto* f = std::get_if<DiscreteBayesNet>(&family)) {
    return NetworkAssumption1(*f, L, metric, budget, seed);
  }
  return ContinuousAssumption1(family, L, metric, budget);
}

CheckReport CheckAssumption2(const FamilyPrior& family,
                             const Concentration& cert,
                             const std::vector<double>& L_grid,
                             int n_prior_samples, std::uint64_t seed) {
  Validate(family);
  if (n_prior_samples < 1) throw InvalidArgument("need prior samples");
  CheckReport r{"assumption2", false, -kInf, n_prior_samples, 0.0, ""};
  const auto levels = LipschitzSample(family, n_prior_samples, seed);
  const double n = static_cast<double>(n_prior_samples);
  double worst_L = 0.0, worst_est = 0.0, worst_bound = 0.0;
  for (double L : L_grid) {
    const double inside = static_cast<double>(
        std::upper_bound(levels.begin(), levels.end(), L) - levels.begin());
    const double estimate = inside / n;
    const double bound = -std::expm1(-cert.c * L);
    const double se = std::sqrt(std::max(bound * (1.0 - bound), 0.0) / n);
    const double v = bound - estimate - 3.0 * se;
    if (v > r.max_violation) {
      r.max_violation = v;
      worst_L = L;
      worst_est = estimate;
      worst_bound = bound;
    }
  }
  if (L_grid.empty()) r.max_violation = 0.0;
  r.note = "c=" + FormatDouble(cert.c) + "; tightest at L=" +
           FormatDouble(worst_L) + ": mass " + FormatDouble(worst_est) +
           " vs bound " + FormatDouble(worst_bound) +
           " (violation includes 3 standard errors of slack)";
  return Finish(r);
}

CheckReport CheckTheorem1(const FamilyPrior& family,
                          const SmoothnessCertificate& cert,
                          const std::vector<DatasetPair>& pairs) {
  CheckReport r{"theorem1", false, -kInf, 0, kExactTolerance, ""};
  if (pairs.empty()) r.max_violation = 0.0;
  double worst_kl = 0.0, worst_bound = 0.0;
  for (const auto& [x, y] : pairs) {
    const Posterior p = ComputePosterior(family, x);
    const Posterior q = ComputePosterior(family, y);
    if (IsGrid(p)) r.tolerance = kGridKlTolerance;
    const double kl = PosteriorKl(p, q);
    const double bound = RobustnessBound(cert, Distance(cert.metric, x, y));
    ++r.samples_used;
    if (kl - bound > r.max_violation) {
      r.max_violation = kl - bound;
      worst_kl = kl;
      worst_bound = bound;
    }
  }
  r.note = "worst pair: KL " + FormatDouble(worst_kl) + " vs bound " +
           FormatDouble(worst_bound);
  if (r.tolerance == kGridKlTolerance) {
    r.note += "; KL by quadrature on the posterior grid";
  }
  return Finish(r);
}

double TotalVariation(const FiniteWeightsForm& p, const FiniteWeightsForm& q) {
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    l1 += std::abs(p.weights[i] - q.weights[i]);
  }
  return 0.5 * l1;
}

CheckReport CheckTheorem2(const FamilyPrior& family,
                          const SmoothnessCertificate& cert,
                          const std::vector<DatasetPair>& pairs) {
  RequireFinite(family);
  CheckReport r{cert.IsLipschitz() ? "theorem2-epsilon" : "theorem2-delta",
                false, 0.0, 0, kExactTolerance, ""};
  const PrivacyGuarantee g = DpGuarantee(cert);
  for (const auto& [x, y] : pairs) {
    const auto p = std::get<FiniteWeightsForm>(ComputePosterior(family, x).form);
    const auto q = std::get<FiniteWeightsForm>(ComputePosterior(family, y).form);
    const double rho = Distance(cert.metric, x, y);
    ++r.samples_used;
    if (cert.IsLipschitz()) {
      for (std::size_t i = 0; i < p.weights.size(); ++i) {
        r.max_violation = std::max(
            r.max_violation,
            Violation(LogRatio(p.weights[i], q.weights[i]), g.epsilon_rate,
                      rho));
      }
    } else {
      r.max_violation =
          std::max(r.max_violation, TotalVariation(p, q) - g.DeltaAt(rho));
    }
  }
  r.note = cert.IsLipschitz()
               ? "max singleton log-ratio minus 2L rho"
               : "total variation minus sqrt(kappa rho / 2c)";
  return Finish(r);
}

KlEstimate MonteCarloKl(const Posterior& p, const Posterior& q, int n,
                        RngStream& rng) {
  if (n < 2) throw InvalidArgument("Monte Carlo KL needs n >= 2");
  // Dirichlet densities are the untruncated ones, so draw without the floor.
  Posterior sampler = p;
  if (auto* d = std::get_if<DirichletForm>(&sampler.form)) d->floor = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Theta theta = SamplePosterior(sampler, rng);
    const double lp = PosteriorLogDensity(p, theta);
    const double lq = PosteriorLogDensity(q, theta);
    if (lq == -kInf && lp > -kInf) {
      throw DomainError("q vanishes where p does not");
    }
    const double v = lp == lq ? 0.0 : lp - lq;
    const double d = v - mean;
    mean += d / (i + 1);
    m2 += d * (v - mean);
  }
  return {mean, std::sqrt(m2 / (n - 1) / n)};
}

CheckReport CheckMonteCarloKl(const FamilyPrior& family,
                              const std::vector<DatasetPair>& pairs,
                              int samples, std::uint64_t seed) {
  CheckReport r{"monte-carlo-kl", false, -kInf, 0, 0.0, ""};
  if (pairs.empty()) r.max_violation = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Posterior p = ComputePosterior(family, pairs[i].first);
    const Posterior q = ComputePosterior(family, pairs[i].second);
    RngStream rng = RngStream::Derive(seed, "verify-chunk", kPairStream + i);
    const KlEstimate mc = MonteCarloKl(p, q, samples, rng);
    const double exact = PosteriorKl(p, q);
    r.max_violation = std::max(r.max_violation, std::abs(mc.estimate - exact) -
                                                    4.0 * mc.stderr_ - 1e-12);
    r.samples_used += samples;
  }
  r.note = "|Monte Carlo - exact KL| minus 4 standard errors";
  return Finish(r);
}

CheckReport CheckMarginalRatio(const FamilyPrior& family, double L,
                               const PseudoMetric& metric,
                               const std::vector<DatasetPair>& pairs) {
  RequireFinite(family);
  CheckReport r{"marginal-ratio", false, 0.0, 0, kExactTolerance, ""};
  for (const auto& [x, y] : pairs) {
    const double mx = ComputePosterior(family, x).marginal_log;
    const double my = ComputePosterior(family, y).marginal_log;
    r.max_violation = std::max(
        r.max_violation,
        Violation(LogRatioOfLogs(mx, my), L, Distance(metric, x, y)));
    ++r.samples_used;
  }
  r.note = "|ln phi(x) - ln phi(y)| minus L rho";
  return Finish(r);
}

CheckReport CheckPinsker(const FamilyPrior& family,
                         const std::vector<DatasetPair>& pairs) {
  RequireFinite(family);
  CheckReport r{"pinsker", false, -kInf, 0, 1e-12, ""};
  if (pairs.empty()) r.max_violation = 0.0;
  for (const auto& [x, y] : pairs) {
    const Posterior p = ComputePosterior(family, x);
    const Posterior q = ComputePosterior(family, y);
    const double tv = TotalVariation(std::get<FiniteWeightsForm>(p.form),
                                     std::get<FiniteWeightsForm>(q.form));
    double kl = kInf;
    try {
      kl = PosteriorKl(p, q);
    } catch (const DomainError&) {
      // Not dominated: KL is infinite and the inequality holds.
    }
    r.max_violation = std::max(r.max_violation, tv * tv - 0.5 * kl);
    ++r.samples_used;
  }
  r.note = "TV^2 minus KL/2";
  return Finish(r);
}

namespace {

std::vector<DatasetPair> ScalarPairs(int count, double lo, double hi,
                                     std::uint64_t seed) {
  RngStream rng = RngStream::Derive(seed, "verify-chunk", kPairStream - 1);
  std::vector<DatasetPair> pairs;
  for (int i = 0; i < count; ++i) {
    const double a = lo + (hi - lo) * rng.Uniform();
    const double b = lo + (hi - lo) * rng.Uniform();
    pairs.emplace_back(Dataset::Scalars({a}), Dataset::Scalars({b}));
  }
  return pairs;
}

std::vector<DatasetPair> IntegerPairs(int count, int outcomes, int max_length,
                                      std::uint64_t seed) {
  RngStream rng = RngStream::Derive(seed, "verify-chunk", kPairStream - 2);
  std::uniform_int_distribution<int> symbol(0, outcomes - 1);
  std::uniform_int_distribution<int> length(1, max_length);
  std::vector<DatasetPair> pairs;
  for (int i = 0; i < count; ++i) {
    const int len = length(rng.engine());
    std::vector<double> a, b;
    for (int j = 0; j < len; ++j) {
      a.push_back(symbol(rng.engine()));
      b.push_back(symbol(rng.engine()));
    }
    pairs.emplace_back(Dataset::Scalars(a), Dataset::Scalars(b));
  }
  return pairs;
}

std::vector<DatasetPair> RowPairs(const DiscreteBayesNet& net, int count,
                                  std::uint64_t seed) {
  RngStream rng = RngStream::Derive(seed, "verify-chunk", kPairStream - 3);
  auto draw = [&] {
    Categorical row;
    for (int a : net.alphabet_sizes) {
      row.push_back(std::uniform_int_distribution<int>(0, a - 1)(rng.engine()));
    }
    return row;
  };
  std::vector<DatasetPair> pairs;
  for (int i = 0; i < count; ++i) {
    auto a = draw();
    auto b = draw();
    pairs.emplace_back(Dataset::Rows({a}), Dataset::Rows({b}));
  }
  return pairs;
}

const std::vector<double> kLevelGrid{0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

}  // namespace

std::vector<CheckReport> VerifySuite(const FamilyPrior& family,
                                     std::uint64_t seed,
                                     const VerifyOptions& options) {
  Validate(family);
  std::vector<CheckReport> reports;
  const CertificateResult cert = Certificate(family);
  const SmoothnessCertificate& c = cert.certificate;
  reports.push_back(CheckReport{"certificate", cert.valid, cert.valid ? 0.0 : 1.0,
                                0, 0.0,
                                cert.note.empty() ? "certificate is usable"
                                                  : cert.note});

  if (const auto* f = std::get_if<FiniteTheta>(&family)) {
    const double L = std::get<UniformLipschitz>(c.bound).L;
    const auto pairs = IntegerPairs(options.theorem1_pairs,
                                    static_cast<int>(f->likelihoods[0].size()),
                                    3, seed);
    reports.push_back(CheckAssumption1(family, L, c.metric));
    if (cert.valid) {
      reports.push_back(CheckTheorem1(family, c, pairs));
      reports.push_back(CheckTheorem2(family, c, pairs));
      reports.push_back(CheckMarginalRatio(family, L, c.metric, pairs));
    }
    const double conc = FiniteThetaConcentration(*f, c.metric);
    if (conc > 0.0 && std::isfinite(conc)) {
      const SmoothnessCertificate cc{Concentration{conc}, c.metric, 1};
      reports.push_back(CheckTheorem2(family, cc, pairs));
    }
    reports.push_back(CheckPinsker(family, pairs));
    const std::vector<DatasetPair> few(
        pairs.begin(), pairs.begin() + std::min<std::size_t>(pairs.size(), 5));
    reports.push_back(
        CheckMonteCarloKl(family, few, options.monte_carlo_samples, seed));
    return reports;
  }

  if (const auto* f = std::get_if<DiscreteBayesNet>(&family)) {
    const double L = std::get<UniformLipschitz>(c.bound).L;
    reports.push_back(CheckAssumption1(family, L, c.metric, {}, seed));
    const auto pairs = RowPairs(*f, options.grid_theorem1_pairs, seed);
    CheckReport t1 = CheckTheorem1(family, c, pairs);
    t1.note += "; Dirichlet KL ignores the eps_min truncation";
    reports.push_back(t1);
    const std::vector<DatasetPair> few(
        pairs.begin(), pairs.begin() + std::min<std::size_t>(pairs.size(), 5));
    reports.push_back(
        CheckMonteCarloKl(family, few, options.monte_carlo_samples, seed));
    return reports;
  }

  // One-dimensional families with a concentration certificate.
  const double conc = std::get<Concentration>(c.bound).c;
  std::vector<DatasetPair> pairs;
  double region_level = 1.0;
  bool conjugate = false;
  if (std::holds_alternative<ExponentialRate>(family)) {
    pairs = ScalarPairs(options.theorem1_pairs, 0.0, 10.0, seed);
    conjugate = true;
  } else if (const auto* f = std::get_if<LaplaceScale>(&family)) {
    pairs = ScalarPairs(options.grid_theorem1_pairs, f->location - 10.0,
                        f->location + 10.0, seed);
  } else if (const auto* f = std::get_if<BetaBinomial>(&family)) {
    const auto ints = IntegerPairs(options.theorem1_pairs, f->trials + 1, 1,
                                   seed);
    pairs = ints;
    region_level = std::log(static_cast<double>(f->trials)) + 2.0;
    conjugate = true;
  } else {
    const auto& nv = std::get<NormalVariance>(family);
    const double m = std::max(std::abs(nv.mean), 1.0);
    pairs = ScalarPairs(options.grid_theorem1_pairs, nv.mean - 5.0 * m,
                        nv.mean + 5.0 * m, seed);
  }
  reports.push_back(CheckAssumption1(family, region_level, c.metric));
  if (cert.valid) {
    reports.push_back(CheckAssumption2(family, Concentration{conc}, kLevelGrid,
                                       options.prior_samples, seed));
    reports.push_back(CheckTheorem1(family, c, pairs));
  }
  if (conjugate) {
    const std::vector<DatasetPair> few(
        pairs.begin(), pairs.begin() + std::min<std::size_t>(pairs.size(), 5));
    reports.push_back(
        CheckMonteCarloKl(family, few, options.monte_carlo_samples, seed));
  }
  return reports;
}

}  // namespace dpbayes
