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

#ifndef DPBAYES_ADVERSARY_H_
#define DPBAYES_ADVERSARY_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dataset.h"
#include "families.h"
#include "rng.h"

namespace dpbayes {

// Cells of the parameter space. Scalar parameters use sorted interior cut
// points (cell j is (cuts[j-1], cuts[j]]); finite parameters map each index
// to a cell.
class Partition {
 public:
  static Partition FromCuts(std::vector<double> cuts);
  static Partition FromIndexCells(std::vector<int> index_cell, int cells);

  int size() const { return cells_; }
  const std::vector<double>& cuts() const { return cuts_; }
  const std::vector<int>& index_cells() const { return index_cell_; }

  // Throws DomainError for points outside every cell.
  int CellOf(const Theta& theta) const;

 private:
  std::vector<double> cuts_;
  std::vector<int> index_cell_;
  int cells_ = 0;
};

// m cells of (approximately, for finite posteriors) equal posterior mass.
Partition EqualMassPartition(const Posterior& posterior, int m);

// Exact posterior mass of every cell.
std::vector<double> CellMasses(const Posterior& posterior,
                               const Partition& partition);

std::vector<double> EmpiricalDistribution(const std::vector<Theta>& samples,
                                          const Partition& partition);

double L1Distance(const std::vector<double>& p, const std::vector<double>& q);

enum class TieBreak { kLowestIndex, kUniform };

struct AttackResult {
  std::size_t guess = 0;
  std::vector<double> l1_to_candidates;
  int n_used = 0;
  bool tie = false;
  std::optional<bool> success;
};

using AnswerOracle = std::function<Theta()>;

// Draws n answers and picks the candidate posterior nearest in L1 on the
// partition. tie_rng is required for TieBreak::kUniform.
AttackResult Attack(const AnswerOracle& oracle,
                    const std::vector<Posterior>& candidates, int n,
                    const Partition& partition,
                    TieBreak tie_break = TieBreak::kLowestIndex,
                    RngStream* tie_rng = nullptr,
                    std::optional<std::size_t> truth = std::nullopt);

AttackResult Attack(const AnswerOracle& oracle,
                    const std::vector<std::pair<FamilyPrior, Dataset>>&
                        candidates,
                    int n, const Partition& partition,
                    TieBreak tie_break = TieBreak::kLowestIndex,
                    RngStream* tie_rng = nullptr,
                    std::optional<std::size_t> truth = std::nullopt);

struct ExperimentOptions {
  int partition_size = 0;  // 0: largest m allowed for delta, at least 2
  // Unset: uniform ties when x == y, lowest index otherwise.
  std::optional<TieBreak> tie_break;
};

struct ExperimentResult {
  std::string family;
  double rho = 0.0;
  int n = 0;
  double delta = 0.0;
  double threshold = 0.0;
  double empirical_success = 0.0;
  int trials = 0;
  int ties = 0;
  int partition_size = 0;
};

// Attacks with truth x against the alternative y, `trials` times, each trial
// on its own substream of `seed`.
ExperimentResult ThresholdExperiment(const FamilyPrior& family,
                                     const Dataset& x, const Dataset& y,
                                     int n, double delta, int trials,
                                     std::uint64_t seed,
                                     const ExperimentOptions& options = {});

std::string ExperimentCsvHeader();
std::string ExperimentCsvRow(const ExperimentResult& result);

}  // namespace dpbayes

#endif  // DPBAYES_ADVERSARY_H_
