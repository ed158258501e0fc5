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

#ifndef DPBAYES_FAMILIES_H_
#define DPBAYES_FAMILIES_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dataset.h"
#include "metrics.h"
#include "rng.h"

namespace dpbayes {

// ---------------------------------------------------------------------------
// Likelihood families paired with their priors.
// ---------------------------------------------------------------------------

// x ~ Exp(theta), theta ~ Exp(prior_rate). Parameter point: the rate theta.
struct ExponentialRate {
  double prior_rate = 1.0;
};

// x ~ Laplace(location, 1/theta), theta ~ Exp(prior_rate). Parameter point:
// the inverse scale theta = 1/s.
struct LaplaceScale {
  double location = 0.0;
  double prior_rate = 1.0;
};

// k ~ Binomial(trials, theta), theta ~ Beta(prior_shape, prior_shape) with
// prior_shape > 1. Parameter point: the success probability theta.
struct BetaBinomial {
  int trials = 1;
  double prior_shape = 2.0;
};

// x ~ N(mean, sigma^2). By default the precision 1/sigma^2 ~ Exp(prior_rate);
// with prior_on_variance, sigma^2 ~ Exp(prior_rate) instead. Parameter point:
// the variance sigma^2 in both cases.
struct NormalVariance {
  double mean = 0.0;
  double prior_rate = 1.0;
  bool prior_on_variance = false;
};

// Discrete Bayesian network over K categorical variables. Every conditional
// probability row has a symmetric Dirichlet(pseudo_count) prior truncated to
// entries >= floor. Parameter point: NetworkTables.
struct DiscreteBayesNet {
  std::vector<int> alphabet_sizes;
  std::vector<std::vector<int>> parents;
  double pseudo_count = 1.0;
  double floor = 0.1;
};

// Finitely many parameters; likelihoods[i][x] = P_i(X = x) over outcomes
// x = 0..K-1, prior ξ(i) = prior_weights[i]. Parameter point: FiniteIndex.
struct FiniteTheta {
  std::vector<std::vector<double>> likelihoods;
  std::vector<double> prior_weights;
};

using FamilyPrior = std::variant<ExponentialRate, LaplaceScale, BetaBinomial,
                                 NormalVariance, DiscreteBayesNet, FiniteTheta>;

// ---------------------------------------------------------------------------
// Parameter points.
// ---------------------------------------------------------------------------

struct FiniteIndex {
  std::size_t index = 0;
  bool operator==(const FiniteIndex&) const = default;
};

// cpt[k][c][v] = P(X_k = v | parents of k in configuration c).
struct NetworkTables {
  std::vector<std::vector<std::vector<double>>> cpt;
  bool operator==(const NetworkTables&) const = default;
};

using Theta = std::variant<double, FiniteIndex, NetworkTables>;

// ---------------------------------------------------------------------------
// Posterior representations.
// ---------------------------------------------------------------------------

struct GammaForm {
  double shape = 1.0;
  double rate = 1.0;
};

struct BetaForm {
  double a = 1.0;
  double b = 1.0;
};

// Raw Dirichlet pseudo-counts per conditional probability row; samples are
// rejected until every entry is >= floor.
struct DirichletForm {
  std::vector<std::vector<std::vector<double>>> alpha;
  double floor = 0.0;
};

// How a grid node u maps to the parameter point.
enum class GridVariable { kIdentity, kReciprocal };

// Piecewise-constant density in s = ln u on `size()` equal cells starting at
// log_lo. log_density is w.r.t. s and normalised so that sum(mass) == 1.
struct GridForm {
  double log_lo = 0.0;
  double step = 0.0;
  std::vector<double> log_density;
  std::vector<double> mass;
  std::vector<double> cumulative;
  GridVariable variable = GridVariable::kIdentity;
  // Normalised log-density in s, valid off the grid as well.
  std::function<double(double s)> exact_log_density;

  std::size_t size() const { return mass.size(); }
  double node(std::size_t i) const { return log_lo + (i + 0.5) * step; }
};

struct FiniteWeightsForm {
  std::vector<double> weights;
};

using PosteriorForm = std::variant<GammaForm, BetaForm, DirichletForm,
                                   GridForm, FiniteWeightsForm>;

struct Posterior {
  PosteriorForm form;
  // ln of the marginal density of the conditioning data.
  double marginal_log = 0.0;
};

// Number of cells in a GridForm posterior.
inline constexpr std::size_t kGridCells = 4096;

// Exponential-family view h(x) exp{eta(theta)' T(x) - A(eta)} of a scalar
// family.
struct ExponentialFamilyDescriptor {
  std::function<std::vector<double>(double theta)> natural_parameter;
  std::function<std::vector<double>(double x)> sufficient_statistic;
  std::function<double(double x)> log_base_measure;
  std::function<double(const std::vector<double>& eta)> log_partition;

  double LogDensity(double theta, double x) const;
};

// ---------------------------------------------------------------------------
// Operations.
// ---------------------------------------------------------------------------

// Throws InvalidArgument when a prior parameter violates its constraint.
void Validate(const FamilyPrior& family);
std::string FamilyName(const FamilyPrior& family);

// The metric under which the family's smoothness result is stated.
PseudoMetric CanonicalMetric(const FamilyPrior& family);

// ln p_theta(x) for the i.i.d. product over the records of x; -inf where the
// density vanishes. Throws DomainError for theta outside the parameter space.
double LogDensity(const FamilyPrior& family, const Theta& theta,
                  const Dataset& x);

// ξ(· | x) in conjugate form where one exists, otherwise gridded.
Posterior ComputePosterior(const FamilyPrior& family, const Dataset& x);

Theta SamplePosterior(const Posterior& posterior, RngStream& rng);
// Exact draw from the prior, independent of the posterior machinery.
Theta SamplePrior(const FamilyPrior& family, RngStream& rng);

// KL(p || q). Closed form except for grids (midpoint quadrature).
double PosteriorKl(const Posterior& p, const Posterior& q);

// Log-density of the posterior at theta w.r.t. the natural base measure of
// its representation (Lebesgue for 1-D, counting for finite).
double PosteriorLogDensity(const Posterior& posterior, const Theta& theta);

// Distribution function and its inverse for one-dimensional and finite
// posteriors (FiniteWeights indices are treated as the points 0..m-1).
double PosteriorCdf(const Posterior& posterior, double theta);
double PosteriorQuantile(const Posterior& posterior, double probability);

// Smallest L with |ln p_theta(x) - ln p_theta(y)| <= L rho(x, y) over single
// observations. Throws DomainError for metrics the family has no result for.
double LipschitzAt(const FamilyPrior& family, const Theta& theta,
                   const PseudoMetric& metric);

std::optional<ExponentialFamilyDescriptor> DescribeExponentialFamily(
    const FamilyPrior& family);

// Bayesian-network helpers.
std::size_t ParentConfigCount(const DiscreteBayesNet& net, std::size_t var);
std::size_t ParentConfigIndex(const DiscreteBayesNet& net, std::size_t var,
                              const Categorical& row);
// Undirected degree (parents + children) of every variable.
std::vector<int> NetworkDegrees(const DiscreteBayesNet& net);
double NetworkLogProbability(const DiscreteBayesNet& net,
                             const NetworkTables& tables,
                             const Categorical& row);
// Every joint outcome of the network, in lexicographic order.
std::vector<Categorical> EnumerateOutcomes(const DiscreteBayesNet& net);

}  // namespace dpbayes

#endif  // DPBAYES_FAMILIES_H_
