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

#include "metrics.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "errors.h"
#include "numerics.h"

namespace dpbayes {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void RequireScalars(const Dataset& x, std::string_view metric) {
  if (x.kind() == ObservationKind::kCategorical) {
    throw InvalidArgument(std::string(metric) +
                          " applies to scalar datasets only");
  }
}

struct DistanceVisitor {
  const Dataset& x;
  const Dataset& y;

  double operator()(const Hamming&) const {
    double count = 0.0;
    if (x.kind() == ObservationKind::kScalar) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        count += x.scalars()[i] != y.scalars()[i] ? 1.0 : 0.0;
      }
    } else if (x.kind() == ObservationKind::kCategorical) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        count += x.rows()[i] != y.rows()[i] ? 1.0 : 0.0;
      }
    }
    return count;
  }

  double operator()(const AbsDiffSum&) const {
    RequireScalars(x, "absdiff");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sum += std::abs(x.scalars()[i] - y.scalars()[i]);
    }
    return sum;
  }

  double operator()(const NormalMetric&) const {
    RequireScalars(x, "normal");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double a = x.scalars()[i];
      const double b = y.scalars()[i];
      sum += std::abs(a * a - b * b) + 2.0 * std::abs(a - b);
    }
    return sum;
  }

  double operator()(const WeightedCategorical& m) const {
    if (x.kind() == ObservationKind::kScalar) {
      throw InvalidArgument("weighted metric applies to categorical datasets");
    }
    if (x.empty()) return 0.0;
    if (x.arity() != m.weights.size()) {
      throw InvalidArgument("weighted metric has " +
                            std::to_string(m.weights.size()) +
                            " weights but rows have arity " +
                            std::to_string(x.arity()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t k = 0; k < m.weights.size(); ++k) {
        if (x.rows()[i][k] != y.rows()[i][k]) sum += m.weights[k];
      }
    }
    return sum;
  }
};

}  // namespace

double Distance(const PseudoMetric& metric, const Dataset& x,
                const Dataset& y) {
  if (x.size() != y.size()) {
    throw InvalidArgument("datasets have unequal lengths (" +
                          std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()) + ")");
  }
  if (!Comparable(x, y)) {
    throw InvalidArgument("datasets hold incompatible observation kinds");
  }
  if (const auto* w = std::get_if<WeightedCategorical>(&metric)) {
    for (double v : w->weights) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidArgument("metric weights must be finite and >= 0");
      }
    }
  }
  return std::visit(DistanceVisitor{x, y}, metric);
}

double ProductMetric(const PseudoMetric& base, const Dataset& xs,
                     const Dataset& ys) {
  if (xs.size() != ys.size()) {
    throw InvalidArgument("product metric needs equal lengths");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sum += Distance(base, xs.element(i), ys.element(i));
  }
  return sum;
}

double LogRatio(double a, double b) {
  if (std::isnan(a) || std::isnan(b) || a < 0.0 || b < 0.0) {
    throw InvalidArgument("log-ratio needs nonnegative arguments");
  }
  if (a == b) return 0.0;
  if (a == 0.0 || b == 0.0) return kInf;
  return std::abs(std::log(a) - std::log(b));
}

double LogRatioOfLogs(double log_a, double log_b) {
  if (std::isnan(log_a) || std::isnan(log_b)) {
    throw InvalidArgument("log-ratio of NaN");
  }
  if (log_a == log_b) return 0.0;
  if (std::isinf(log_a) || std::isinf(log_b)) return kInf;
  return std::abs(log_a - log_b);
}

std::string MetricName(const PseudoMetric& metric) {
  struct {
    std::string operator()(const Hamming&) const { return "hamming"; }
    std::string operator()(const AbsDiffSum&) const { return "absdiff"; }
    std::string operator()(const NormalMetric&) const { return "normal"; }
    std::string operator()(const WeightedCategorical& m) const {
      std::ostringstream out;
      out << "weighted:";
      for (std::size_t k = 0; k < m.weights.size(); ++k) {
        if (k > 0) out << ',';
        out << m.weights[k];
      }
      return out.str();
    }
  } namer;
  return std::visit(namer, metric);
}

PseudoMetric ParseMetric(std::string_view text) {
  if (text == "hamming") return Hamming{};
  if (text == "absdiff") return AbsDiffSum{};
  if (text == "normal") return NormalMetric{};
  constexpr std::string_view kWeighted = "weighted:";
  if (text.substr(0, kWeighted.size()) == kWeighted) {
    WeightedCategorical m;
    m.weights = ParseDoubleList(text.substr(kWeighted.size()), ',');
    for (double v : m.weights) {
      if (v < 0.0) throw ParseError("metric weights must be >= 0");
    }
    return m;
  }
  throw ParseError("unknown metric '" + std::string(text) + "'");
}

}  // namespace dpbayes
