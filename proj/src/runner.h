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

#ifndef DPBAYES_RUNNER_H_
#define DPBAYES_RUNNER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "calculus.h"
#include "dataset.h"
#include "families.h"
#include "metrics.h"
#include "verify.h"

namespace dpbayes {

// Builds a family from its name and "key=value" prior parameters:
//   exponential    lambda
//   laplace        mu, lambda
//   beta-binomial  trials, alpha
//   normal         mu, lambda
//   bayesnet       alphabets=2,2,2  parents=;0;1  pseudo_count  eps_min
//   finite         likelihoods=0.5,0.5;0.9,0.1  weights=0.5,0.5
FamilyPrior MakeFamily(const std::string& name,
                       const std::vector<std::string>& params,
                       bool paper_normal_variant);

// Certificate under an explicit metric. Finite families are recomputed for
// the metric; other families accept only metrics their derivation covers.
CertificateResult CertificateUnder(const FamilyPrior& family,
                                   const std::optional<PseudoMetric>& metric);

struct ReportArtifacts {
  std::string json;
  std::string curve_csv;
};

// iid_n <= 0: single observation.
ReportArtifacts RunReport(const FamilyPrior& family,
                          const std::optional<PseudoMetric>& metric,
                          int iid_n);

// queries_json: an array of query objects (or a single one).
std::string RunRespond(const FamilyPrior& family, const Dataset& x,
                       std::uint64_t seed, const std::string& queries_json,
                       bool include_theta);

std::string RunAttack(const FamilyPrior& family, const Dataset& x,
                      const Dataset& y, int n, double delta, int trials,
                      int partition_size, std::uint64_t seed);

struct VerifyArtifacts {
  bool all_passed = false;
  std::string json;
};

VerifyArtifacts RunVerify(const FamilyPrior& family, std::uint64_t seed,
                          const VerifyOptions& options = {});

}  // namespace dpbayes

#endif  // DPBAYES_RUNNER_H_
