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

#include "families.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "errors.h"
#include "numerics.h"

namespace dpbayes {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Cells farther than this many nats below the mode are outside the grid.
constexpr double kGridSpanNats = 40.0;
constexpr int kCoarseScanPoints = 20001;
// The coarse scan covers u in [1e-40, 1e40] / prior_rate.
constexpr double kScanLogRange = 40.0 * 2.302585092994046;
constexpr int kMaxRejectionAttempts = 100000;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool PositiveFinite(double v) { return v > 0.0 && std::isfinite(v); }

void RequireKind(const Dataset& x, ObservationKind kind,
                 const std::string& family) {
  if (!x.empty() && x.kind() != kind) {
    throw InvalidArgument(family + " expects " +
                          (kind == ObservationKind::kScalar ? "scalar"
                                                            : "categorical") +
                          " observations");
  }
}

double ScalarTheta(const Theta& theta, const std::string& family) {
  const double* value = std::get_if<double>(&theta);
  if (value == nullptr) {
    throw InvalidArgument(family + " takes a scalar parameter point");
  }
  return *value;
}

bool IsInteger(double v) { return std::isfinite(v) && v == std::floor(v); }

// ---------------------------------------------------------------------------
// Gridded posteriors. All three gridded families put Exp(rate) on a positive
// grid variable u and have a log-likelihood that is a function of u alone.
// ---------------------------------------------------------------------------

struct GridModel {
  double prior_rate;
  GridVariable variable;
  std::function<double(double u)> log_likelihood;
};

GridModel MakeGridModel(const LaplaceScale& f, const Dataset& x) {
  double spread = 0.0;
  for (double v : x.scalars()) spread += std::abs(v - f.location);
  const double n = static_cast<double>(x.size());
  return {f.prior_rate, GridVariable::kIdentity, [n, spread](double u) {
            return n * (std::log(u) - std::numbers::ln2) - u * spread;
          }};
}

GridModel MakeGridModel(const NormalVariance& f, const Dataset& x) {
  double squares = 0.0;
  for (double v : x.scalars()) squares += (v - f.mean) * (v - f.mean);
  const double n = static_cast<double>(x.size());
  const double log_two_pi = std::log(2.0 * std::numbers::pi);
  if (f.prior_on_variance) {
    return {f.prior_rate, GridVariable::kIdentity,
            [n, squares, log_two_pi](double u) {
              return -0.5 * n * (log_two_pi + std::log(u)) -
                     squares / (2.0 * u);
            }};
  }
  return {f.prior_rate, GridVariable::kReciprocal,
          [n, squares, log_two_pi](double u) {
            return 0.5 * n * (std::log(u) - log_two_pi) - 0.5 * u * squares;
          }};
}

Posterior GridPosterior(const GridModel& model) {
  const double rate = model.prior_rate;
  // Unnormalised log posterior density in s = ln u (Jacobian included).
  auto log_post = [&](double s) {
    const double u = std::exp(s);
    if (u <= 0.0 || !std::isfinite(u)) return kNegInf;
    return model.log_likelihood(u) + std::log(rate) - rate * u + s;
  };

  const double scan_lo = -kScanLogRange - std::log(rate);
  const double scan_hi = kScanLogRange - std::log(rate);
  const double scan_step = (scan_hi - scan_lo) / (kCoarseScanPoints - 1);
  std::vector<double> coarse(kCoarseScanPoints);
  for (int i = 0; i < kCoarseScanPoints; ++i) {
    coarse[i] = log_post(scan_lo + i * scan_step);
  }
  const auto top_it = std::max_element(coarse.begin(), coarse.end());
  const double top = *top_it;
  if (!std::isfinite(top)) {
    throw DomainError("posterior has empty support on the grid");
  }
  if (coarse.front() > top - kGridSpanNats ||
      coarse.back() > top - kGridSpanNats) {
    throw DomainError(
        "posterior mass does not vanish at the edge of the parameter range "
        "(improper posterior)");
  }
  int first = static_cast<int>(top_it - coarse.begin());
  int last = first;
  while (first > 0 && coarse[first] > top - kGridSpanNats) --first;
  while (last < kCoarseScanPoints - 1 && coarse[last] > top - kGridSpanNats) {
    ++last;
  }
  first = std::max(first - 1, 0);
  last = std::min(last + 1, kCoarseScanPoints - 1);

  GridForm grid;
  grid.variable = model.variable;
  grid.log_lo = scan_lo + first * scan_step;
  grid.step = (last - first) * scan_step / static_cast<double>(kGridCells);
  grid.log_density.resize(kGridCells);
  for (std::size_t i = 0; i < kGridCells; ++i) {
    grid.log_density[i] = log_post(grid.node(i));
  }
  const double log_norm = LogSumExp(grid.log_density) + std::log(grid.step);
  grid.mass.resize(kGridCells);
  grid.cumulative.resize(kGridCells);
  double running = 0.0;
  for (std::size_t i = 0; i < kGridCells; ++i) {
    grid.log_density[i] -= log_norm;
    grid.mass[i] = std::exp(grid.log_density[i]) * grid.step;
    running += grid.mass[i];
    grid.cumulative[i] = running;
  }
  // Absorb the rounding residue so the last cumulative value is exactly 1.
  for (std::size_t i = 0; i < kGridCells; ++i) {
    grid.mass[i] /= running;
    grid.cumulative[i] /= running;
  }
  grid.cumulative.back() = 1.0;
  grid.exact_log_density = [model, log_norm](double s) {
    const double u = std::exp(s);
    if (u <= 0.0 || !std::isfinite(u)) return kNegInf;
    return model.log_likelihood(u) + std::log(model.prior_rate) -
           model.prior_rate * u + s - log_norm;
  };
  return Posterior{std::move(grid), log_norm};
}

// Log-density of a grid in s. Falls back to cubic Lagrange through the four
// nearest nodes (linear past either end) when no closed form is attached.
double GridLogDensityAt(const GridForm& g, double s) {
  if (g.exact_log_density) return g.exact_log_density(s);
  const double pos = (s - g.log_lo) / g.step - 0.5;
  const std::size_t n = g.size();
  const auto& d = g.log_density;
  if (pos <= 0.0) return d[0] + pos * (d[1] - d[0]);
  if (pos >= static_cast<double>(n - 1)) {
    return d[n - 1] + (pos - static_cast<double>(n - 1)) * (d[n - 1] - d[n - 2]);
  }
  const std::size_t i = std::clamp<std::size_t>(
      static_cast<std::size_t>(pos), 1, n - 3);
  const double t = pos - static_cast<double>(i);
  const double y0 = d[i - 1], y1 = d[i], y2 = d[i + 1], y3 = d[i + 2];
  if (!std::isfinite(y0) || !std::isfinite(y3)) {
    return y1 + t * (y2 - y1);
  }
  return -t * (t - 1) * (t - 2) / 6 * y0 + (t + 1) * (t - 1) * (t - 2) / 2 * y1 -
         (t + 1) * t * (t - 2) / 2 * y2 + (t + 1) * t * (t - 1) / 6 * y3;
}

double GridUFromTheta(const GridForm& g, double theta) {
  return g.variable == GridVariable::kIdentity ? theta : 1.0 / theta;
}

double GridThetaFromU(const GridForm& g, double u) {
  return g.variable == GridVariable::kIdentity ? u : 1.0 / u;
}

// P(U <= u) for the gridded variable.
double GridCdfU(const GridForm& g, double u) {
  if (u <= 0.0) return 0.0;
  const double pos = (std::log(u) - g.log_lo) / g.step;
  if (pos <= 0.0) return 0.0;
  if (pos >= static_cast<double>(g.size())) return 1.0;
  const auto i = static_cast<std::size_t>(pos);
  const double before = i == 0 ? 0.0 : g.cumulative[i - 1];
  return before + (pos - static_cast<double>(i)) * g.mass[i];
}

double GridQuantileU(const GridForm& g, double p) {
  const auto it = std::upper_bound(g.cumulative.begin(), g.cumulative.end(), p);
  const std::size_t i = std::min<std::size_t>(it - g.cumulative.begin(),
                                              g.size() - 1);
  const double before = i == 0 ? 0.0 : g.cumulative[i - 1];
  double frac = g.mass[i] > 0.0 ? (p - before) / g.mass[i] : 0.5;
  frac = std::clamp(frac, 0.0, 1.0);
  return std::exp(g.log_lo + (static_cast<double>(i) + frac) * g.step);
}

// ---------------------------------------------------------------------------
// Bayesian networks.
// ---------------------------------------------------------------------------

void ValidateNetwork(const DiscreteBayesNet& net) {
  const std::size_t k = net.alphabet_sizes.size();
  if (k == 0) throw InvalidArgument("network needs at least one variable");
  if (net.parents.size() != k) {
    throw InvalidArgument("network needs one parent list per variable");
  }
  for (std::size_t v = 0; v < k; ++v) {
    if (net.alphabet_sizes[v] < 2) {
      throw InvalidArgument("every alphabet needs at least two symbols");
    }
    if (!(net.floor > 0.0) || !(net.floor < 1.0 / net.alphabet_sizes[v])) {
      throw InvalidArgument(
          "eps_min must lie in (0, 1/alphabet size) for every variable");
    }
    for (int p : net.parents[v]) {
      if (p < 0 || static_cast<std::size_t>(p) >= k ||
          static_cast<std::size_t>(p) == v) {
        throw InvalidArgument("invalid parent index for variable " +
                              std::to_string(v));
      }
    }
  }
  if (!PositiveFinite(net.pseudo_count)) {
    throw InvalidArgument("Dirichlet pseudo-count must be positive");
  }
  // Kahn's algorithm: the parent graph must be acyclic.
  std::vector<int> indegree(k, 0);
  std::vector<std::vector<int>> children(k);
  for (std::size_t v = 0; v < k; ++v) {
    for (int p : net.parents[v]) {
      children[p].push_back(static_cast<int>(v));
      ++indegree[v];
    }
  }
  std::vector<int> ready;
  for (std::size_t v = 0; v < k; ++v) {
    if (indegree[v] == 0) ready.push_back(static_cast<int>(v));
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const int v = ready.back();
    ready.pop_back();
    ++seen;
    for (int c : children[v]) {
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  if (seen != k) throw InvalidArgument("network parent graph has a cycle");
}

void ValidateRow(const DiscreteBayesNet& net, const Categorical& row) {
  if (row.size() != net.alphabet_sizes.size()) {
    throw InvalidArgument("observation arity does not match the network");
  }
  for (std::size_t v = 0; v < row.size(); ++v) {
    if (row[v] >= net.alphabet_sizes[v]) {
      throw InvalidArgument("symbol outside the alphabet of variable " +
                            std::to_string(v));
    }
  }
}

const NetworkTables& CheckedTables(const DiscreteBayesNet& net,
                                   const Theta& theta) {
  const auto* tables = std::get_if<NetworkTables>(&theta);
  if (tables == nullptr) {
    throw InvalidArgument("network families take NetworkTables parameters");
  }
  if (tables->cpt.size() != net.alphabet_sizes.size()) {
    throw DomainError("tables do not match the network shape");
  }
  for (std::size_t v = 0; v < tables->cpt.size(); ++v) {
    if (tables->cpt[v].size() != ParentConfigCount(net, v)) {
      throw DomainError("tables do not match the network shape");
    }
    for (const auto& row : tables->cpt[v]) {
      if (row.size() != static_cast<std::size_t>(net.alphabet_sizes[v])) {
        throw DomainError("tables do not match the network shape");
      }
      double sum = 0.0;
      for (double p : row) {
        if (!(p >= 0.0)) throw DomainError("negative table entry");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw DomainError("conditional probability row does not sum to 1");
      }
    }
  }
  return *tables;
}

std::vector<double> SampleDirichletRow(std::span<const double> alpha,
                                       double floor, RngStream& rng) {
  std::vector<double> row(alpha.size());
  for (int attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
    double total = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      row[i] = rng.Gamma(alpha[i], 1.0);
      total += row[i];
    }
    bool accepted = total > 0.0;
    for (double& p : row) {
      p /= total;
      accepted = accepted && p >= floor;
    }
    if (accepted) return row;
  }
  throw DomainError(
      "Dirichlet row rejection sampling exhausted its attempt budget; the "
      "posterior puts almost no mass above eps_min");
}

// ---------------------------------------------------------------------------
// Finite families.
// ---------------------------------------------------------------------------

std::size_t CheckedIndex(const FiniteTheta& f, const Theta& theta) {
  const auto* index = std::get_if<FiniteIndex>(&theta);
  if (index == nullptr) {
    throw InvalidArgument("finite families take FiniteIndex parameters");
  }
  if (index->index >= f.likelihoods.size()) {
    throw DomainError("finite parameter index out of range");
  }
  return index->index;
}

double FiniteLogLikelihood(const FiniteTheta& f, std::size_t i,
                           const Dataset& x) {
  double total = 0.0;
  const auto& table = f.likelihoods[i];
  for (double v : x.scalars()) {
    if (!IsInteger(v) || v < 0.0 || v >= static_cast<double>(table.size())) {
      return kNegInf;
    }
    const double p = table[static_cast<std::size_t>(v)];
    if (p == 0.0) return kNegInf;
    total += std::log(p);
  }
  return total;
}

// Exhaustive max of LogRatio / rho over pairs of outcomes of one table.
double FiniteLipschitz(const std::vector<double>& table,
                       const PseudoMetric& metric) {
  double best = 0.0;
  for (std::size_t a = 0; a < table.size(); ++a) {
    for (std::size_t b = a + 1; b < table.size(); ++b) {
      const double ratio = LogRatio(table[a], table[b]);
      if (ratio == 0.0) continue;
      const double rho =
          Distance(metric, Dataset::Scalars({static_cast<double>(a)}),
                   Dataset::Scalars({static_cast<double>(b)}));
      if (rho == 0.0) return kInf;
      best = std::max(best, ratio / rho);
    }
  }
  return best;
}

double BetaBinomialLogLikelihood(const BetaBinomial& f, double theta,
                                 const Dataset& x) {
  double total = 0.0;
  for (double k : x.scalars()) {
    if (!IsInteger(k) || k < 0.0 || k > f.trials) return kNegInf;
    const int ki = static_cast<int>(k);
    total += LogChoose(f.trials, ki);
    if (ki > 0) total += ki * std::log(theta);
    if (f.trials - ki > 0) total += (f.trials - ki) * std::log1p(-theta);
  }
  return total;
}

double KlGamma(const GammaForm& p, const GammaForm& q) {
  return (p.shape - q.shape) * Digamma(p.shape) - std::lgamma(p.shape) +
         std::lgamma(q.shape) + q.shape * (std::log(p.rate) - std::log(q.rate)) +
         p.shape * (q.rate - p.rate) / p.rate;
}

double KlBeta(const BetaForm& p, const BetaForm& q) {
  return LogBeta(q.a, q.b) - LogBeta(p.a, p.b) +
         (p.a - q.a) * Digamma(p.a) + (p.b - q.b) * Digamma(p.b) +
         (q.a - p.a + q.b - p.b) * Digamma(p.a + p.b);
}

double KlDirichletRow(std::span<const double> p, std::span<const double> q) {
  const double p0 = std::accumulate(p.begin(), p.end(), 0.0);
  const double q0 = std::accumulate(q.begin(), q.end(), 0.0);
  double kl = std::lgamma(p0) - std::lgamma(q0);
  const double psi0 = Digamma(p0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    kl += std::lgamma(q[i]) - std::lgamma(p[i]) +
          (p[i] - q[i]) * (Digamma(p[i]) - psi0);
  }
  return kl;
}

}  // namespace

// ---------------------------------------------------------------------------

double ExponentialFamilyDescriptor::LogDensity(double theta, double x) const {
  const double log_h = log_base_measure(x);
  if (log_h == kNegInf) return kNegInf;
  const auto eta = natural_parameter(theta);
  const auto t = sufficient_statistic(x);
  double inner = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) inner += eta[i] * t[i];
  return log_h + inner - log_partition(eta);
}

void Validate(const FamilyPrior& family) {
  std::visit(
      Overloaded{
          [](const ExponentialRate& f) {
            if (!PositiveFinite(f.prior_rate)) {
              throw InvalidArgument("exponential: lambda must be positive");
            }
          },
          [](const LaplaceScale& f) {
            if (!PositiveFinite(f.prior_rate) || !std::isfinite(f.location)) {
              throw InvalidArgument(
                  "laplace: lambda must be positive and mu finite");
            }
          },
          [](const BetaBinomial& f) {
            if (f.trials < 1) {
              throw InvalidArgument("beta-binomial: trials must be >= 1");
            }
            if (!(f.prior_shape > 1.0) || !std::isfinite(f.prior_shape)) {
              throw InvalidArgument("beta-binomial: alpha must exceed 1");
            }
          },
          [](const NormalVariance& f) {
            if (!PositiveFinite(f.prior_rate) || !std::isfinite(f.mean)) {
              throw InvalidArgument(
                  "normal: lambda must be positive and mu finite");
            }
          },
          [](const DiscreteBayesNet& f) { ValidateNetwork(f); },
          [](const FiniteTheta& f) {
            if (f.likelihoods.empty()) {
              throw InvalidArgument("finite: needs at least one parameter");
            }
            if (f.prior_weights.size() != f.likelihoods.size()) {
              throw InvalidArgument(
                  "finite: one prior weight per likelihood table");
            }
            double total = 0.0;
            for (double w : f.prior_weights) {
              if (!(w >= 0.0)) {
                throw InvalidArgument("finite: negative prior weight");
              }
              total += w;
            }
            if (std::abs(total - 1.0) > 1e-9) {
              throw InvalidArgument("finite: prior weights must sum to 1");
            }
            const std::size_t outcomes = f.likelihoods.front().size();
            if (outcomes == 0) {
              throw InvalidArgument("finite: empty likelihood table");
            }
            for (const auto& table : f.likelihoods) {
              if (table.size() != outcomes) {
                throw InvalidArgument(
                    "finite: likelihood tables must share an outcome space");
              }
              double sum = 0.0;
              for (double p : table) {
                if (!(p >= 0.0)) {
                  throw InvalidArgument("finite: negative likelihood");
                }
                sum += p;
              }
              if (std::abs(sum - 1.0) > 1e-9) {
                throw InvalidArgument("finite: likelihood rows must sum to 1");
              }
            }
          }},
      family);
}

std::string FamilyName(const FamilyPrior& family) {
  return std::visit(
      Overloaded{[](const ExponentialRate&) { return std::string("exponential"); },
                 [](const LaplaceScale&) { return std::string("laplace"); },
                 [](const BetaBinomial&) { return std::string("beta-binomial"); },
                 [](const NormalVariance&) { return std::string("normal"); },
                 [](const DiscreteBayesNet&) { return std::string("bayesnet"); },
                 [](const FiniteTheta&) { return std::string("finite"); }},
      family);
}

PseudoMetric CanonicalMetric(const FamilyPrior& family) {
  return std::visit(
      Overloaded{
          [](const ExponentialRate&) -> PseudoMetric { return AbsDiffSum{}; },
          [](const LaplaceScale&) -> PseudoMetric { return AbsDiffSum{}; },
          [](const BetaBinomial&) -> PseudoMetric { return AbsDiffSum{}; },
          [](const NormalVariance&) -> PseudoMetric { return NormalMetric{}; },
          [](const DiscreteBayesNet& f) -> PseudoMetric {
            WeightedCategorical m;
            for (int d : NetworkDegrees(f)) m.weights.push_back(1.0 + d);
            return m;
          },
          [](const FiniteTheta&) -> PseudoMetric { return Hamming{}; }},
      family);
}

double LogDensity(const FamilyPrior& family, const Theta& theta,
                  const Dataset& x) {
  return std::visit(
      Overloaded{
          [&](const ExponentialRate&) {
            RequireKind(x, ObservationKind::kScalar, "exponential");
            const double rate = ScalarTheta(theta, "exponential");
            if (!PositiveFinite(rate)) {
              throw DomainError("exponential rate must be positive");
            }
            double total = 0.0;
            for (double v : x.scalars()) {
              if (v < 0.0) return kNegInf;
              total += std::log(rate) - rate * v;
            }
            return total;
          },
          [&](const LaplaceScale& f) {
            RequireKind(x, ObservationKind::kScalar, "laplace");
            const double inv_scale = ScalarTheta(theta, "laplace");
            if (!PositiveFinite(inv_scale)) {
              throw DomainError("laplace inverse scale must be positive");
            }
            double total = 0.0;
            for (double v : x.scalars()) {
              total += std::log(inv_scale) - std::numbers::ln2 -
                       inv_scale * std::abs(v - f.location);
            }
            return total;
          },
          [&](const BetaBinomial& f) {
            RequireKind(x, ObservationKind::kScalar, "beta-binomial");
            const double p = ScalarTheta(theta, "beta-binomial");
            if (!(p > 0.0 && p < 1.0)) {
              throw DomainError("binomial proportion must lie in (0, 1)");
            }
            return BetaBinomialLogLikelihood(f, p, x);
          },
          [&](const NormalVariance& f) {
            RequireKind(x, ObservationKind::kScalar, "normal");
            const double variance = ScalarTheta(theta, "normal");
            if (!PositiveFinite(variance)) {
              throw DomainError("normal variance must be positive");
            }
            double total = 0.0;
            for (double v : x.scalars()) {
              total += -0.5 * std::log(2.0 * std::numbers::pi * variance) -
                       (v - f.mean) * (v - f.mean) / (2.0 * variance);
            }
            return total;
          },
          [&](const DiscreteBayesNet& f) {
            RequireKind(x, ObservationKind::kCategorical, "bayesnet");
            const auto& tables = CheckedTables(f, theta);
            double total = 0.0;
            for (const auto& row : x.rows()) {
              ValidateRow(f, row);
              total += NetworkLogProbability(f, tables, row);
            }
            return total;
          },
          [&](const FiniteTheta& f) {
            RequireKind(x, ObservationKind::kScalar, "finite");
            return FiniteLogLikelihood(f, CheckedIndex(f, theta), x);
          }},
      family);
}

Posterior ComputePosterior(const FamilyPrior& family, const Dataset& x) {
  Validate(family);
  return std::visit(
      Overloaded{
          [&](const ExponentialRate& f) {
            RequireKind(x, ObservationKind::kScalar, "exponential");
            double sum = 0.0;
            for (double v : x.scalars()) {
              if (v < 0.0) {
                throw DomainError(
                    "negative observation has zero likelihood under every "
                    "exponential rate");
              }
              sum += v;
            }
            const double n = static_cast<double>(x.size());
            GammaForm g{1.0 + n, f.prior_rate + sum};
            const double marginal = std::log(f.prior_rate) +
                                    std::lgamma(n + 1.0) -
                                    (n + 1.0) * std::log(g.rate);
            return Posterior{g, marginal};
          },
          [&](const LaplaceScale& f) {
            RequireKind(x, ObservationKind::kScalar, "laplace");
            return GridPosterior(MakeGridModel(f, x));
          },
          [&](const BetaBinomial& f) {
            RequireKind(x, ObservationKind::kScalar, "beta-binomial");
            double successes = 0.0;
            double log_choose = 0.0;
            for (double k : x.scalars()) {
              if (!IsInteger(k) || k < 0.0 || k > f.trials) {
                throw DomainError("binomial count outside {0..trials}");
              }
              successes += k;
              log_choose += LogChoose(f.trials, static_cast<int>(k));
            }
            const double failures =
                static_cast<double>(x.size()) * f.trials - successes;
            BetaForm b{f.prior_shape + successes, f.prior_shape + failures};
            const double marginal = log_choose + LogBeta(b.a, b.b) -
                                    LogBeta(f.prior_shape, f.prior_shape);
            return Posterior{b, marginal};
          },
          [&](const NormalVariance& f) {
            RequireKind(x, ObservationKind::kScalar, "normal");
            return GridPosterior(MakeGridModel(f, x));
          },
          [&](const DiscreteBayesNet& f) {
            RequireKind(x, ObservationKind::kCategorical, "bayesnet");
            DirichletForm d;
            d.floor = f.floor;
            d.alpha.resize(f.alphabet_sizes.size());
            for (std::size_t v = 0; v < f.alphabet_sizes.size(); ++v) {
              d.alpha[v].assign(
                  ParentConfigCount(f, v),
                  std::vector<double>(f.alphabet_sizes[v], f.pseudo_count));
            }
            for (const auto& row : x.rows()) {
              ValidateRow(f, row);
              for (std::size_t v = 0; v < row.size(); ++v) {
                d.alpha[v][ParentConfigIndex(f, v, row)][row[v]] += 1.0;
              }
            }
            // Dirichlet-multinomial evidence, row by row.
            double marginal = 0.0;
            for (std::size_t v = 0; v < d.alpha.size(); ++v) {
              const double prior_total = f.pseudo_count * f.alphabet_sizes[v];
              for (const auto& row : d.alpha[v]) {
                const double total =
                    std::accumulate(row.begin(), row.end(), 0.0);
                marginal += std::lgamma(prior_total) - std::lgamma(total);
                for (double a : row) {
                  marginal += std::lgamma(a) - std::lgamma(f.pseudo_count);
                }
              }
            }
            return Posterior{std::move(d), marginal};
          },
          [&](const FiniteTheta& f) {
            RequireKind(x, ObservationKind::kScalar, "finite");
            std::vector<double> log_joint(f.likelihoods.size());
            for (std::size_t i = 0; i < log_joint.size(); ++i) {
              log_joint[i] = f.prior_weights[i] > 0.0
                                 ? std::log(f.prior_weights[i]) +
                                       FiniteLogLikelihood(f, i, x)
                                 : kNegInf;
            }
            const double marginal = LogSumExp(log_joint);
            if (marginal == kNegInf) {
              throw DomainError(
                  "every parameter assigns zero probability to the data");
            }
            FiniteWeightsForm w;
            w.weights.resize(log_joint.size());
            for (std::size_t i = 0; i < log_joint.size(); ++i) {
              w.weights[i] = std::exp(log_joint[i] - marginal);
            }
            return Posterior{std::move(w), marginal};
          }},
      family);
}

Theta SamplePosterior(const Posterior& posterior, RngStream& rng) {
  return std::visit(
      Overloaded{
          [&](const GammaForm& g) -> Theta { return rng.Gamma(g.shape, g.rate); },
          [&](const BetaForm& b) -> Theta { return rng.Beta(b.a, b.b); },
          [&](const DirichletForm& d) -> Theta {
            NetworkTables tables;
            tables.cpt.resize(d.alpha.size());
            for (std::size_t v = 0; v < d.alpha.size(); ++v) {
              for (const auto& row : d.alpha[v]) {
                tables.cpt[v].push_back(SampleDirichletRow(row, d.floor, rng));
              }
            }
            return tables;
          },
          [&](const GridForm& g) -> Theta {
            return GridThetaFromU(g, GridQuantileU(g, rng.Uniform()));
          },
          [&](const FiniteWeightsForm& w) -> Theta {
            return FiniteIndex{rng.Categorical(w.weights)};
          }},
      posterior.form);
}

Theta SamplePrior(const FamilyPrior& family, RngStream& rng) {
  Validate(family);
  return std::visit(
      Overloaded{
          [&](const ExponentialRate& f) -> Theta {
            return rng.Exponential(f.prior_rate);
          },
          [&](const LaplaceScale& f) -> Theta {
            return rng.Exponential(f.prior_rate);
          },
          [&](const BetaBinomial& f) -> Theta {
            return rng.Beta(f.prior_shape, f.prior_shape);
          },
          [&](const NormalVariance& f) -> Theta {
            const double u = rng.Exponential(f.prior_rate);
            return f.prior_on_variance ? u : 1.0 / u;
          },
          [&](const DiscreteBayesNet& f) -> Theta {
            NetworkTables tables;
            tables.cpt.resize(f.alphabet_sizes.size());
            for (std::size_t v = 0; v < f.alphabet_sizes.size(); ++v) {
              const std::vector<double> alpha(f.alphabet_sizes[v],
                                              f.pseudo_count);
              for (std::size_t c = 0; c < ParentConfigCount(f, v); ++c) {
                tables.cpt[v].push_back(SampleDirichletRow(alpha, f.floor, rng));
              }
            }
            return tables;
          },
          [&](const FiniteTheta& f) -> Theta {
            return FiniteIndex{rng.Categorical(f.prior_weights)};
          }},
      family);
}

double PosteriorKl(const Posterior& p, const Posterior& q) {
  if (p.form.index() != q.form.index()) {
    throw InvalidArgument("KL needs posteriors of the same representation");
  }
  return std::visit(
      Overloaded{
          [&](const GammaForm& a) { return KlGamma(a, std::get<GammaForm>(q.form)); },
          [&](const BetaForm& a) { return KlBeta(a, std::get<BetaForm>(q.form)); },
          [&](const DirichletForm& a) {
            const auto& b = std::get<DirichletForm>(q.form);
            if (a.alpha.size() != b.alpha.size()) {
              throw InvalidArgument("Dirichlet posteriors differ in shape");
            }
            double kl = 0.0;
            for (std::size_t v = 0; v < a.alpha.size(); ++v) {
              if (a.alpha[v].size() != b.alpha[v].size()) {
                throw InvalidArgument("Dirichlet posteriors differ in shape");
              }
              for (std::size_t c = 0; c < a.alpha[v].size(); ++c) {
                if (a.alpha[v][c].size() != b.alpha[v][c].size()) {
                  throw InvalidArgument("Dirichlet posteriors differ in shape");
                }
                kl += KlDirichletRow(a.alpha[v][c], b.alpha[v][c]);
              }
            }
            return kl;
          },
          [&](const GridForm& a) {
            const auto& b = std::get<GridForm>(q.form);
            if (a.variable != b.variable) {
              throw InvalidArgument("grid posteriors on different variables");
            }
            const bool same_grid = a.log_lo == b.log_lo && a.step == b.step &&
                                   a.size() == b.size();
            double kl = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
              if (a.mass[i] == 0.0) continue;
              const double log_q = same_grid ? b.log_density[i]
                                             : GridLogDensityAt(b, a.node(i));
              kl += a.mass[i] * (a.log_density[i] - log_q);
            }
            return std::max(kl, 0.0);
          },
          [&](const FiniteWeightsForm& a) {
            const auto& b = std::get<FiniteWeightsForm>(q.form);
            if (a.weights.size() != b.weights.size()) {
              throw InvalidArgument("finite posteriors differ in size");
            }
            double kl = 0.0;
            for (std::size_t i = 0; i < a.weights.size(); ++i) {
              if (a.weights[i] == 0.0) continue;
              if (b.weights[i] == 0.0) {
                throw DomainError("KL undefined: q does not dominate p");
              }
              kl += a.weights[i] * std::log(a.weights[i] / b.weights[i]);
            }
            return std::max(kl, 0.0);
          }},
      p.form);
}

double PosteriorLogDensity(const Posterior& posterior, const Theta& theta) {
  return std::visit(
      Overloaded{
          [&](const GammaForm& g) {
            const double t = ScalarTheta(theta, "gamma posterior");
            if (!(t > 0.0)) return kNegInf;
            return g.shape * std::log(g.rate) - std::lgamma(g.shape) +
                   (g.shape - 1.0) * std::log(t) - g.rate * t;
          },
          [&](const BetaForm& b) {
            const double t = ScalarTheta(theta, "beta posterior");
            if (!(t > 0.0 && t < 1.0)) return kNegInf;
            return (b.a - 1.0) * std::log(t) + (b.b - 1.0) * std::log1p(-t) -
                   LogBeta(b.a, b.b);
          },
          [&](const DirichletForm& d) {
            const auto* tables = std::get_if<NetworkTables>(&theta);
            if (tables == nullptr || tables->cpt.size() != d.alpha.size()) {
              throw InvalidArgument("Dirichlet density needs matching tables");
            }
            // Untruncated Dirichlet density; the truncation constant cancels
            // in every ratio of posteriors with the same floor.
            double total = 0.0;
            for (std::size_t v = 0; v < d.alpha.size(); ++v) {
              for (std::size_t c = 0; c < d.alpha[v].size(); ++c) {
                const auto& a = d.alpha[v][c];
                const auto& p = tables->cpt[v][c];
                total += std::lgamma(std::accumulate(a.begin(), a.end(), 0.0));
                for (std::size_t i = 0; i < a.size(); ++i) {
                  if (p[i] <= 0.0) return kNegInf;
                  total += (a[i] - 1.0) * std::log(p[i]) - std::lgamma(a[i]);
                }
              }
            }
            return total;
          },
          [&](const GridForm& g) {
            const double t = ScalarTheta(theta, "grid posterior");
            if (!(t > 0.0) || !std::isfinite(t)) return kNegInf;
            const double s = std::log(GridUFromTheta(g, t));
            return GridLogDensityAt(g, s) - std::log(t);
          },
          [&](const FiniteWeightsForm& w) {
            const auto* index = std::get_if<FiniteIndex>(&theta);
            if (index == nullptr || index->index >= w.weights.size()) {
              throw InvalidArgument("finite density needs a valid index");
            }
            return w.weights[index->index] > 0.0
                       ? std::log(w.weights[index->index])
                       : kNegInf;
          }},
      posterior.form);
}

double PosteriorCdf(const Posterior& posterior, double theta) {
  return std::visit(
      Overloaded{
          [&](const GammaForm& g) {
            return theta <= 0.0 ? 0.0
                                : boost::math::gamma_p(g.shape, g.rate * theta);
          },
          [&](const BetaForm& b) {
            if (theta <= 0.0) return 0.0;
            if (theta >= 1.0) return 1.0;
            return boost::math::ibeta(b.a, b.b, theta);
          },
          [&](const DirichletForm&) -> double {
            throw DomainError("no distribution function for network tables");
          },
          [&](const GridForm& g) {
            if (g.variable == GridVariable::kIdentity) return GridCdfU(g, theta);
            if (theta <= 0.0) return 0.0;
            return 1.0 - GridCdfU(g, 1.0 / theta);
          },
          [&](const FiniteWeightsForm& w) {
            double total = 0.0;
            for (std::size_t i = 0; i < w.weights.size(); ++i) {
              if (static_cast<double>(i) <= theta) total += w.weights[i];
            }
            return std::min(total, 1.0);
          }},
      posterior.form);
}

double PosteriorQuantile(const Posterior& posterior, double probability) {
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw InvalidArgument("quantile probability must lie in [0, 1]");
  }
  return std::visit(
      Overloaded{
          [&](const GammaForm& g) {
            if (probability >= 1.0) return kInf;
            return boost::math::gamma_p_inv(g.shape, probability) / g.rate;
          },
          [&](const BetaForm& b) {
            return boost::math::ibeta_inv(b.a, b.b, probability);
          },
          [&](const DirichletForm&) -> double {
            throw DomainError("no quantile function for network tables");
          },
          [&](const GridForm& g) {
            if (g.variable == GridVariable::kIdentity) {
              return GridQuantileU(g, probability);
            }
            return 1.0 / GridQuantileU(g, 1.0 - probability);
          },
          [&](const FiniteWeightsForm& w) {
            double total = 0.0;
            for (std::size_t i = 0; i < w.weights.size(); ++i) {
              total += w.weights[i];
              if (total >= probability && w.weights[i] > 0.0) {
                return static_cast<double>(i);
              }
            }
            return static_cast<double>(w.weights.size() - 1);
          }},
      posterior.form);
}

double LipschitzAt(const FamilyPrior& family, const Theta& theta,
                   const PseudoMetric& metric) {
  auto require = [&](bool ok, const std::string& family_name) {
    if (!ok) {
      throw DomainError(family_name + " has no Lipschitz result under metric " +
                        MetricName(metric));
    }
  };
  return std::visit(
      Overloaded{
          [&](const ExponentialRate&) {
            require(std::holds_alternative<AbsDiffSum>(metric), "exponential");
            const double rate = ScalarTheta(theta, "exponential");
            if (!PositiveFinite(rate)) throw DomainError("rate must be positive");
            return rate;
          },
          [&](const LaplaceScale&) {
            require(std::holds_alternative<AbsDiffSum>(metric), "laplace");
            const double inv_scale = ScalarTheta(theta, "laplace");
            if (!PositiveFinite(inv_scale)) {
              throw DomainError("inverse scale must be positive");
            }
            return inv_scale;
          },
          [&](const BetaBinomial& f) {
            require(std::holds_alternative<AbsDiffSum>(metric), "beta-binomial");
            const double p = ScalarTheta(theta, "beta-binomial");
            if (!(p > 0.0 && p < 1.0)) {
              throw DomainError("binomial proportion must lie in (0, 1)");
            }
            return std::log(static_cast<double>(f.trials)) +
                   std::abs(std::log(p) - std::log1p(-p));
          },
          [&](const NormalVariance& f) {
            require(std::holds_alternative<NormalMetric>(metric), "normal");
            const double variance = ScalarTheta(theta, "normal");
            if (!PositiveFinite(variance)) {
              throw DomainError("variance must be positive");
            }
            return std::max(std::abs(f.mean), 1.0) / (2.0 * variance);
          },
          [&](const DiscreteBayesNet& f) {
            const auto* weighted = std::get_if<WeightedCategorical>(&metric);
            const auto degrees = NetworkDegrees(f);
            bool ok = weighted != nullptr &&
                      weighted->weights.size() == degrees.size();
            for (std::size_t k = 0; ok && k < degrees.size(); ++k) {
              ok = weighted->weights[k] >= 1.0 + degrees[k];
            }
            require(ok, "bayesnet");
            const auto& tables = CheckedTables(f, theta);
            for (const auto& var : tables.cpt) {
              for (const auto& row : var) {
                for (double p : row) {
                  if (p < f.floor) {
                    throw DomainError("table entry below eps_min");
                  }
                }
              }
            }
            return std::log(1.0 / f.floor);
          },
          [&](const FiniteTheta& f) {
            require(!std::holds_alternative<WeightedCategorical>(metric),
                    "finite");
            return FiniteLipschitz(f.likelihoods[CheckedIndex(f, theta)],
                                   metric);
          }},
      family);
}

std::optional<ExponentialFamilyDescriptor> DescribeExponentialFamily(
    const FamilyPrior& family) {
  using Vec = std::vector<double>;
  return std::visit(
      Overloaded{
          [](const ExponentialRate&) -> std::optional<ExponentialFamilyDescriptor> {
            return ExponentialFamilyDescriptor{
                [](double theta) { return Vec{-theta}; },
                [](double x) { return Vec{x}; },
                [](double x) { return x >= 0.0 ? 0.0 : kNegInf; },
                [](const Vec& eta) { return -std::log(-eta[0]); }};
          },
          [](const LaplaceScale& f) -> std::optional<ExponentialFamilyDescriptor> {
            const double mu = f.location;
            return ExponentialFamilyDescriptor{
                [](double theta) { return Vec{-theta}; },
                [mu](double x) { return Vec{std::abs(x - mu)}; },
                [](double) { return -std::numbers::ln2; },
                [](const Vec& eta) { return -std::log(-eta[0]); }};
          },
          [](const BetaBinomial& f) -> std::optional<ExponentialFamilyDescriptor> {
            const int n = f.trials;
            return ExponentialFamilyDescriptor{
                [](double theta) {
                  return Vec{std::log(theta) - std::log1p(-theta)};
                },
                [](double k) { return Vec{k}; },
                [n](double k) {
                  return IsInteger(k) ? LogChoose(n, static_cast<int>(k))
                                      : kNegInf;
                },
                [n](const Vec& eta) {
                  // n ln(1 + e^eta), stable for large |eta|.
                  return n * (std::max(eta[0], 0.0) +
                              std::log1p(std::exp(-std::abs(eta[0]))));
                }};
          },
          [](const NormalVariance& f) -> std::optional<ExponentialFamilyDescriptor> {
            const double mu = f.mean;
            return ExponentialFamilyDescriptor{
                [](double variance) { return Vec{-0.5 / variance}; },
                [mu](double x) { return Vec{(x - mu) * (x - mu)}; },
                [](double) { return -0.5 * std::log(2.0 * std::numbers::pi); },
                [](const Vec& eta) { return -0.5 * std::log(-2.0 * eta[0]); }};
          },
          [](const DiscreteBayesNet&) -> std::optional<ExponentialFamilyDescriptor> {
            return std::nullopt;
          },
          [](const FiniteTheta&) -> std::optional<ExponentialFamilyDescriptor> {
            return std::nullopt;
          }},
      family);
}

std::size_t ParentConfigCount(const DiscreteBayesNet& net, std::size_t var) {
  std::size_t count = 1;
  for (int p : net.parents[var]) count *= net.alphabet_sizes[p];
  return count;
}

std::size_t ParentConfigIndex(const DiscreteBayesNet& net, std::size_t var,
                              const Categorical& row) {
  std::size_t index = 0;
  for (int p : net.parents[var]) {
    index = index * net.alphabet_sizes[p] + row[p];
  }
  return index;
}

std::vector<int> NetworkDegrees(const DiscreteBayesNet& net) {
  std::vector<int> degree(net.alphabet_sizes.size(), 0);
  for (std::size_t v = 0; v < net.parents.size(); ++v) {
    for (int p : net.parents[v]) {
      ++degree[v];
      ++degree[p];
    }
  }
  return degree;
}

double NetworkLogProbability(const DiscreteBayesNet& net,
                             const NetworkTables& tables,
                             const Categorical& row) {
  double total = 0.0;
  for (std::size_t v = 0; v < row.size(); ++v) {
    const double p = tables.cpt[v][ParentConfigIndex(net, v, row)][row[v]];
    if (p <= 0.0) return kNegInf;
    total += std::log(p);
  }
  return total;
}

std::vector<Categorical> EnumerateOutcomes(const DiscreteBayesNet& net) {
  std::size_t total = 1;
  for (int a : net.alphabet_sizes) {
    total *= static_cast<std::size_t>(a);
    if (total > (1u << 22)) {
      throw DomainError("network joint space too large to enumerate");
    }
  }
  std::vector<Categorical> outcomes;
  outcomes.reserve(total);
  Categorical row(net.alphabet_sizes.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    outcomes.push_back(row);
    for (std::size_t v = row.size(); v-- > 0;) {
      if (++row[v] < net.alphabet_sizes[v]) break;
      row[v] = 0;
    }
  }
  return outcomes;
}

}  // namespace dpbayes
