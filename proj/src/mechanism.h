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

#ifndef DPBAYES_MECHANISM_H_
#define DPBAYES_MECHANISM_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "calculus.h"
#include "dataset.h"
#include "families.h"
#include "rng.h"

namespace dpbayes {

struct IdentityQuery {
  bool operator==(const IdentityQuery&) const = default;
};

// E_theta[X_targets | X_given = given_values] on a Bayesian network.
struct ConditionalExpectationQuery {
  std::vector<int> targets;
  std::vector<int> given;
  std::vector<int> given_values;
  bool operator==(const ConditionalExpectationQuery&) const = default;
};

enum class FunctionalKind { kMean, kVariance, kTail };

// A fixed function of theta: the mean or variance of one observation, or
// P_theta(X > threshold).
struct FunctionalQuery {
  FunctionalKind kind = FunctionalKind::kMean;
  double threshold = 0.0;
  bool operator==(const FunctionalQuery&) const = default;
};

using Query =
    std::variant<IdentityQuery, ConditionalExpectationQuery, FunctionalQuery>;

struct Answer {
  std::vector<double> values;
  bool operator==(const Answer&) const = default;
};

struct LogEntry {
  std::size_t k = 0;  // 1-based
  Query query;
  Theta theta;
  Answer answer;
};

// q(theta) for one sampled parameter.
Answer EvaluateQuery(const FamilyPrior& family, const Theta& theta,
                     const Query& query);

// Posterior sampling query model: every answer uses a fresh posterior draw.
class QuerySession {
 public:
  static QuerySession Open(const FamilyPrior& family, const Dataset& x,
                           std::uint64_t seed);

  Answer Respond(const Query& query);

  const FamilyPrior& family() const { return family_; }
  const Posterior& posterior() const { return posterior_; }
  const std::vector<LogEntry>& log() const { return log_; }

  // One JSON object per line: {"k", "query", "answer"} and, on request,
  // "theta". Never contains the seed or the data.
  std::string TranscriptJsonl(bool include_theta) const;

 private:
  QuerySession(FamilyPrior family, Posterior posterior, std::uint64_t seed);

  FamilyPrior family_;
  Posterior posterior_;
  RngStream rng_;
  std::vector<LogEntry> log_;
};

struct Budget {
  long long max_safe_queries = 0;
  long long remaining = 0;
};

// Largest n whose distinguishability threshold still exceeds rho_target.
// `remaining` subtracts the queries already answered in `session`.
Budget BudgetCheck(const SmoothnessCertificate& cert, double rho_target,
                   double delta, const QuerySession* session = nullptr);

// Re-runs the logged queries from a fresh session with the same seed and
// compares draws and answers exactly.
bool ReplayMatches(const FamilyPrior& family, const Dataset& x,
                   std::uint64_t seed, const std::vector<LogEntry>& log);

}  // namespace dpbayes

#endif  // DPBAYES_MECHANISM_H_
