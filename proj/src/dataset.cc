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

#include "dataset.h"

#include <cmath>
#include <string>
#include <utility>

#include "errors.h"

namespace dpbayes {

Dataset Dataset::Scalars(std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw InvalidArgument("observation " + std::to_string(i) +
                            " is not a finite scalar");
    }
  }
  Dataset d;
  if (!values.empty()) d.kind_ = ObservationKind::kScalar;
  d.scalars_ = std::move(values);
  return d;
}

Dataset Dataset::Rows(std::vector<Categorical> rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      throw InvalidArgument("categorical row " + std::to_string(i) +
                            " has arity " + std::to_string(rows[i].size()) +
                            ", expected " +
                            std::to_string(rows.front().size()));
    }
    for (int symbol : rows[i]) {
      if (symbol < 0) {
        throw InvalidArgument("categorical row " + std::to_string(i) +
                              " has a negative symbol");
      }
    }
  }
  Dataset d;
  if (!rows.empty()) d.kind_ = ObservationKind::kCategorical;
  d.rows_ = std::move(rows);
  return d;
}

std::size_t Dataset::size() const {
  switch (kind_) {
    case ObservationKind::kScalar:
      return scalars_.size();
    case ObservationKind::kCategorical:
      return rows_.size();
    case ObservationKind::kEmpty:
      break;
  }
  return 0;
}

std::size_t Dataset::arity() const {
  return kind_ == ObservationKind::kCategorical ? rows_.front().size() : 0;
}

Dataset Dataset::element(std::size_t i) const {
  if (i >= size()) throw InvalidArgument("dataset index out of range");
  if (kind_ == ObservationKind::kScalar) return Scalars({scalars_[i]});
  return Rows({rows_[i]});
}

bool Comparable(const Dataset& x, const Dataset& y) {
  if (x.size() != y.size()) return false;
  if (x.empty()) return true;
  return x.kind() == y.kind() && x.arity() == y.arity();
}

}  // namespace dpbayes
