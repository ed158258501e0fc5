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

#ifndef DPBAYES_METRICS_H_
#define DPBAYES_METRICS_H_

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dataset.h"

namespace dpbayes {

// Number of records that differ.
struct Hamming {
  bool operator==(const Hamming&) const = default;
};
// Sum of |x_i - y_i| over scalar records.
struct AbsDiffSum {
  bool operator==(const AbsDiffSum&) const = default;
};
// Sum of |x_i^2 - y_i^2| + 2|x_i - y_i| over scalar records; the metric under
// which the Normal likelihood with known mean is Lipschitz.
struct NormalMetric {
  bool operator==(const NormalMetric&) const = default;
};
// Sum over records t and coordinates k of v_k * [x_tk != y_tk].
struct WeightedCategorical {
  std::vector<double> weights;
  bool operator==(const WeightedCategorical&) const = default;
};

using PseudoMetric =
    std::variant<Hamming, AbsDiffSum, NormalMetric, WeightedCategorical>;

// rho(x, y). Throws InvalidArgument when the datasets have different lengths
// or kinds, or the metric does not apply to their kind.
double Distance(const PseudoMetric& metric, const Dataset& x,
                const Dataset& y);

// Sum over i of rho(x_i, y_i), evaluating the base metric on one-element
// datasets. Agrees with Distance for every variant; kept separate because it
// is the lifted metric of the i.i.d. product family.
double ProductMetric(const PseudoMetric& base, const Dataset& xs,
                     const Dataset& ys);

// Absolute log-ratio |ln(a/b)| with d(0, 0) = 0 and d(a, 0) = +inf for a > 0.
// Throws InvalidArgument on negative or NaN input.
double LogRatio(double a, double b);

// LogRatio evaluated from log-densities; -inf encodes a zero density.
double LogRatioOfLogs(double log_a, double log_b);

std::string MetricName(const PseudoMetric& metric);

// Accepts "hamming", "absdiff", "normal" and "weighted:v1,v2,...".
PseudoMetric ParseMetric(std::string_view text);

}  // namespace dpbayes

#endif  // DPBAYES_METRICS_H_
