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

#ifndef DPBAYES_DATASET_H_
#define DPBAYES_DATASET_H_

#include <cstddef>
#include <span>
#include <vector>

namespace dpbayes {

// One categorical observation: a tuple of symbol indices, coordinate k drawn
// from {0, ..., alphabet_k - 1}.
using Categorical = std::vector<int>;

enum class ObservationKind { kEmpty, kScalar, kCategorical };

// An ordered, homogeneous sequence of observations. An empty dataset has kind
// kEmpty and is compatible with every family and metric.
class Dataset {
 public:
  Dataset() = default;

  // Throws InvalidArgument on non-finite values.
  static Dataset Scalars(std::vector<double> values);
  // Throws InvalidArgument on negative symbols or rows of differing arity.
  static Dataset Rows(std::vector<Categorical> rows);

  ObservationKind kind() const { return kind_; }
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  // Number of coordinates per categorical row; 0 for other kinds.
  std::size_t arity() const;

  std::span<const double> scalars() const { return scalars_; }
  std::span<const Categorical> rows() const { return rows_; }

  // The i-th observation as a one-element dataset.
  Dataset element(std::size_t i) const;

  bool operator==(const Dataset&) const = default;

 private:
  ObservationKind kind_ = ObservationKind::kEmpty;
  std::vector<double> scalars_;
  std::vector<Categorical> rows_;
};

// True when both datasets can be compared element-wise (same kind or either
// empty) and have equal length.
bool Comparable(const Dataset& x, const Dataset& y);

}  // namespace dpbayes

#endif  // DPBAYES_DATASET_H_
