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

#include "mechanism.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "errors.h"
#include "numerics.h"
#include "serialization.h"

namespace dpbayes {
namespace {

std::vector<double> Flatten(const Theta& theta) {
  if (const auto* v = std::get_if<double>(&theta)) return {*v};
  if (const auto* i = std::get_if<FiniteIndex>(&theta)) {
    return {static_cast<double>(i->index)};
  }
  std::vector<double> out;
  for (const auto& var : std::get<NetworkTables>(theta).cpt) {
    for (const auto& row : var) out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

std::vector<double> ConditionalExpectation(
    const DiscreteBayesNet& net, const NetworkTables& tables,
    const ConditionalExpectationQuery& q) {
  const int k = static_cast<int>(net.alphabet_sizes.size());
  if (q.targets.empty()) throw InvalidArgument("query needs a target");
  if (q.given.size() != q.given_values.size()) {
    throw InvalidArgument("one conditioning value per conditioning variable");
  }
  std::set<int> seen;
  for (int t : q.targets) {
    if (t < 0 || t >= k) throw InvalidArgument("target variable out of range");
    if (!seen.insert(t).second) throw InvalidArgument("repeated variable");
  }
  for (std::size_t i = 0; i < q.given.size(); ++i) {
    const int z = q.given[i];
    if (z < 0 || z >= k) {
      throw InvalidArgument("conditioning variable out of range");
    }
    if (!seen.insert(z).second) {
      throw InvalidArgument("targets and conditioning variables must be "
                            "disjoint");
    }
    if (q.given_values[i] < 0 || q.given_values[i] >= net.alphabet_sizes[z]) {
      throw InvalidArgument("conditioning value outside the alphabet");
    }
  }
  std::vector<double> weighted(q.targets.size(), 0.0);
  double evidence = 0.0;
  for (const auto& row : EnumerateOutcomes(net)) {
    bool match = true;
    for (std::size_t i = 0; match && i < q.given.size(); ++i) {
      match = row[q.given[i]] == q.given_values[i];
    }
    if (!match) continue;
    const double p = std::exp(NetworkLogProbability(net, tables, row));
    evidence += p;
    for (std::size_t j = 0; j < q.targets.size(); ++j) {
      weighted[j] += p * row[q.targets[j]];
    }
  }
  if (!(evidence > 0.0)) {
    throw DomainError("conditioning event has zero probability");
  }
  for (double& w : weighted) w /= evidence;
  return weighted;
}

double FunctionalValue(const FamilyPrior& family, const Theta& theta,
                       const FunctionalQuery& q) {
  const double t = q.threshold;
  if (const auto* f = std::get_if<FiniteTheta>(&family)) {
    const auto& table = f->likelihoods[std::get<FiniteIndex>(theta).index];
    double mean = 0.0;
    double second = 0.0;
    double tail = 0.0;
    for (std::size_t x = 0; x < table.size(); ++x) {
      const double v = static_cast<double>(x);
      mean += v * table[x];
      second += v * v * table[x];
      if (v > t) tail += table[x];
    }
    switch (q.kind) {
      case FunctionalKind::kMean: return mean;
      case FunctionalKind::kVariance: return second - mean * mean;
      case FunctionalKind::kTail: return tail;
    }
  }
  if (std::holds_alternative<DiscreteBayesNet>(family)) {
    throw DomainError("functional queries need a scalar family; use a "
                      "conditional expectation query on networks");
  }
  const double p = std::get<double>(theta);
  if (std::holds_alternative<ExponentialRate>(family)) {
    switch (q.kind) {
      case FunctionalKind::kMean: return 1.0 / p;
      case FunctionalKind::kVariance: return 1.0 / (p * p);
      case FunctionalKind::kTail: return t <= 0.0 ? 1.0 : std::exp(-p * t);
    }
  }
  if (const auto* f = std::get_if<LaplaceScale>(&family)) {
    switch (q.kind) {
      case FunctionalKind::kMean: return f->location;
      case FunctionalKind::kVariance: return 2.0 / (p * p);
      case FunctionalKind::kTail:
        return t >= f->location ? 0.5 * std::exp(-p * (t - f->location))
                                : 1.0 - 0.5 * std::exp(-p * (f->location - t));
    }
  }
  if (const auto* f = std::get_if<BetaBinomial>(&family)) {
    const double n = f->trials;
    switch (q.kind) {
      case FunctionalKind::kMean: return n * p;
      case FunctionalKind::kVariance: return n * p * (1.0 - p);
      case FunctionalKind::kTail: {
        double tail = 0.0;
        for (int k = 0; k <= f->trials; ++k) {
          if (k > t) {
            tail += std::exp(LogChoose(f->trials, k) + k * std::log(p) +
                             (f->trials - k) * std::log1p(-p));
          }
        }
        return std::min(tail, 1.0);
      }
    }
  }
  const auto& f = std::get<NormalVariance>(family);
  switch (q.kind) {
    case FunctionalKind::kMean: return f.mean;
    case FunctionalKind::kVariance: return p;
    case FunctionalKind::kTail:
      return 0.5 * std::erfc((t - f.mean) / std::sqrt(2.0 * p));
  }
  throw Error("unhandled functional");
}

}  // namespace

Answer EvaluateQuery(const FamilyPrior& family, const Theta& theta,
                     const Query& query) {
  if (std::holds_alternative<IdentityQuery>(query)) {
    return Answer{Flatten(theta)};
  }
  if (const auto* q = std::get_if<ConditionalExpectationQuery>(&query)) {
    const auto* net = std::get_if<DiscreteBayesNet>(&family);
    if (net == nullptr) {
      throw DomainError(
          "conditional expectation needs a family with coordinate structure");
    }
    return Answer{
        ConditionalExpectation(*net, std::get<NetworkTables>(theta), *q)};
  }
  return Answer{
      {FunctionalValue(family, theta, std::get<FunctionalQuery>(query))}};
}

QuerySession::QuerySession(FamilyPrior family, Posterior posterior,
                           std::uint64_t seed)
    : family_(std::move(family)),
      posterior_(std::move(posterior)),
      rng_(RngStream::Derive(seed, "session")) {}

QuerySession QuerySession::Open(const FamilyPrior& family, const Dataset& x,
                                std::uint64_t seed) {
  return QuerySession(family, ComputePosterior(family, x), seed);
}

Answer QuerySession::Respond(const Query& query) {
  // Validate the query shape before consuming randomness.
  if (std::holds_alternative<ConditionalExpectationQuery>(query) &&
      !std::holds_alternative<DiscreteBayesNet>(family_)) {
    throw DomainError(
        "conditional expectation needs a family with coordinate structure");
  }
  if (std::holds_alternative<FunctionalQuery>(query) &&
      std::holds_alternative<DiscreteBayesNet>(family_)) {
    throw DomainError("functional queries need a scalar family");
  }
  Theta theta = SamplePosterior(posterior_, rng_);
  Answer answer = EvaluateQuery(family_, theta, query);
  log_.push_back(LogEntry{log_.size() + 1, query, std::move(theta), answer});
  return answer;
}

std::string QuerySession::TranscriptJsonl(bool include_theta) const {
  std::ostringstream out;
  for (const auto& entry : log_) {
    nlohmann::ordered_json line;
    line["k"] = entry.k;
    line["query"] = ToJson(entry.query);
    if (include_theta) line["theta"] = ToJson(entry.theta);
    line["answer"] = ToJson(entry.answer);
    out << line.dump() << '\n';
  }
  return out.str();
}

Budget BudgetCheck(const SmoothnessCertificate& cert, double rho_target,
                   double delta, const QuerySession* session) {
  if (!(rho_target > 0.0)) throw InvalidArgument("rho_target must be positive");
  const double t1 = DistinguishabilityThreshold(cert, 1, delta).rho_threshold;
  constexpr long long kUnbounded = std::numeric_limits<int>::max();
  long long n = 0;
  if (!std::isfinite(t1) || t1 / rho_target >= kUnbounded) {
    n = kUnbounded;
  } else {
    // threshold(n) = t1 / n; the estimate is corrected against the exact
    // threshold to absorb rounding.
    n = static_cast<long long>(std::ceil(t1 / rho_target)) - 1;
    auto above = [&](long long m) {
      return m >= 1 && DistinguishabilityThreshold(cert, static_cast<int>(m),
                                                   delta)
                               .rho_threshold > rho_target;
    };
    n = std::max(n, 0LL);
    while (n > 0 && !above(n)) --n;
    while (n + 1 < kUnbounded && above(n + 1)) ++n;
  }
  Budget budget{n, n};
  if (session != nullptr) {
    budget.remaining =
        std::max(0LL, n - static_cast<long long>(session->log().size()));
  }
  return budget;
}

bool ReplayMatches(const FamilyPrior& family, const Dataset& x,
                   std::uint64_t seed, const std::vector<LogEntry>& log) {
  QuerySession replay = QuerySession::Open(family, x, seed);
  for (const auto& entry : log) {
    const Answer answer = replay.Respond(entry.query);
    const LogEntry& redo = replay.log().back();
    if (redo.k != entry.k || !(redo.theta == entry.theta) ||
        !(answer == entry.answer)) {
      return false;
    }
  }
  return true;
}

}  // namespace dpbayes
