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

#include "adversary.h"

#include <algorithm>
#include <cmath>

#include "calculus.h"
#include "errors.h"
#include "serialization.h"

namespace dpbayes {

Partition Partition::FromCuts(std::vector<double> cuts) {
  if (cuts.empty()) throw InvalidArgument("partition needs at least 2 cells");
  for (double c : cuts) {
    if (std::isnan(c)) throw InvalidArgument("partition cut is NaN");
  }
  if (!std::is_sorted(cuts.begin(), cuts.end())) {
    throw InvalidArgument("partition cuts must be sorted");
  }
  Partition p;
  p.cells_ = static_cast<int>(cuts.size()) + 1;
  p.cuts_ = std::move(cuts);
  return p;
}

Partition Partition::FromIndexCells(std::vector<int> index_cell, int cells) {
  if (cells < 2) throw InvalidArgument("partition needs at least 2 cells");
  for (int c : index_cell) {
    if (c < 0 || c >= cells) throw InvalidArgument("cell index out of range");
  }
  Partition p;
  p.cells_ = cells;
  p.index_cell_ = std::move(index_cell);
  return p;
}

int Partition::CellOf(const Theta& theta) const {
  if (const auto* v = std::get_if<double>(&theta)) {
    if (!index_cell_.empty() || std::isnan(*v)) {
      throw DomainError("sample outside every cell");
    }
    return static_cast<int>(std::lower_bound(cuts_.begin(), cuts_.end(), *v) -
                            cuts_.begin());
  }
  if (const auto* i = std::get_if<FiniteIndex>(&theta)) {
    if (i->index >= index_cell_.size()) {
      throw DomainError("sample outside every cell");
    }
    return index_cell_[i->index];
  }
  throw DomainError("network tables cannot be placed in a 1-D partition");
}

Partition EqualMassPartition(const Posterior& posterior, int m) {
  if (m < 2) throw InvalidArgument("partition needs at least 2 cells");
  if (const auto* w = std::get_if<FiniteWeightsForm>(&posterior.form)) {
    if (w->weights.size() < 2) {
      throw InvalidArgument("finite family too small to partition");
    }
    std::vector<int> cell(w->weights.size());
    double before = 0.0;
    for (std::size_t i = 0; i < cell.size(); ++i) {
      const double centre = before + 0.5 * w->weights[i];
      cell[i] = std::min(m - 1, static_cast<int>(std::floor(centre * m)));
      before += w->weights[i];
    }
    return Partition::FromIndexCells(std::move(cell), m);
  }
  if (std::holds_alternative<DirichletForm>(posterior.form)) {
    throw DomainError("no 1-D partition for network posteriors");
  }
  std::vector<double> cuts;
  for (int j = 1; j < m; ++j) {
    cuts.push_back(PosteriorQuantile(posterior, static_cast<double>(j) / m));
  }
  return Partition::FromCuts(std::move(cuts));
}

std::vector<double> CellMasses(const Posterior& posterior,
                               const Partition& partition) {
  std::vector<double> mass(partition.size(), 0.0);
  if (const auto* w = std::get_if<FiniteWeightsForm>(&posterior.form)) {
    if (partition.index_cells().size() != w->weights.size()) {
      throw InvalidArgument("partition does not match the finite family");
    }
    for (std::size_t i = 0; i < w->weights.size(); ++i) {
      mass[partition.index_cells()[i]] += w->weights[i];
    }
    return mass;
  }
  double below = 0.0;
  for (int j = 0; j + 1 < partition.size(); ++j) {
    const double cdf = PosteriorCdf(posterior, partition.cuts()[j]);
    mass[j] = std::max(cdf - below, 0.0);
    below = cdf;
  }
  mass.back() = std::max(1.0 - below, 0.0);
  return mass;
}

std::vector<double> EmpiricalDistribution(const std::vector<Theta>& samples,
                                          const Partition& partition) {
  if (samples.empty()) throw InvalidArgument("no samples");
  std::vector<double> freq(partition.size(), 0.0);
  for (const auto& s : samples) freq[partition.CellOf(s)] += 1.0;
  for (double& f : freq) f /= static_cast<double>(samples.size());
  return freq;
}

double L1Distance(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw InvalidArgument("L1 of unequal lengths");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += std::abs(p[i] - q[i]);
  return total;
}

AttackResult Attack(const AnswerOracle& oracle,
                    const std::vector<Posterior>& candidates, int n,
                    const Partition& partition, TieBreak tie_break,
                    RngStream* tie_rng, std::optional<std::size_t> truth) {
  if (n < 1) throw InvalidArgument("attack needs n >= 1 answers");
  if (candidates.empty()) throw InvalidArgument("attack needs candidates");
  if (tie_break == TieBreak::kUniform && tie_rng == nullptr) {
    throw InvalidArgument("uniform tie-breaking needs a random stream");
  }
  std::vector<Theta> samples;
  samples.reserve(n);
  for (int i = 0; i < n; ++i) samples.push_back(oracle());
  const auto empirical = EmpiricalDistribution(samples, partition);

  AttackResult result;
  result.n_used = n;
  for (const auto& c : candidates) {
    result.l1_to_candidates.push_back(
        L1Distance(empirical, CellMasses(c, partition)));
  }
  const double best = *std::min_element(result.l1_to_candidates.begin(),
                                        result.l1_to_candidates.end());
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (result.l1_to_candidates[i] == best) tied.push_back(i);
  }
  result.tie = tied.size() > 1;
  result.guess = tied.front();
  if (result.tie && tie_break == TieBreak::kUniform) {
    const std::vector<double> equal(tied.size(), 1.0);
    result.guess = tied[tie_rng->Categorical(equal)];
  }
  if (truth) result.success = result.guess == *truth;
  return result;
}

AttackResult Attack(const AnswerOracle& oracle,
                    const std::vector<std::pair<FamilyPrior, Dataset>>&
                        candidates,
                    int n, const Partition& partition, TieBreak tie_break,
                    RngStream* tie_rng, std::optional<std::size_t> truth) {
  std::vector<Posterior> posteriors;
  for (const auto& [family, data] : candidates) {
    posteriors.push_back(ComputePosterior(family, data));
  }
  return Attack(oracle, posteriors, n, partition, tie_break, tie_rng, truth);
}

ExperimentResult ThresholdExperiment(const FamilyPrior& family,
                                     const Dataset& x, const Dataset& y,
                                     int n, double delta, int trials,
                                     std::uint64_t seed,
                                     const ExperimentOptions& options) {
  if (trials < 1) throw InvalidArgument("trials must be positive");
  if (!Comparable(x, y) || x.size() != y.size()) {
    throw InvalidArgument("candidate datasets must have equal length and kind");
  }
  const CertificateResult cert = Certificate(family);
  if (!cert.valid) {
    throw DomainError("no usable certificate: " + cert.note);
  }
  const PseudoMetric& metric = cert.certificate.metric;

  // Lift over the items that actually differ.
  int differing = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x.element(i) == y.element(i))) ++differing;
  }
  const int length = std::max<int>(static_cast<int>(x.size()), 1);
  const SmoothnessCertificate lifted =
      LiftIid(cert.certificate, length, std::max(differing, 1));

  ExperimentResult result;
  result.family = FamilyName(family);
  result.rho = Distance(metric, x, y);
  result.n = n;
  result.delta = delta;
  result.threshold = DistinguishabilityThreshold(lifted, n, delta).rho_threshold;
  result.trials = trials;

  const std::vector<Posterior> candidates{ComputePosterior(family, x),
                                          ComputePosterior(family, y)};
  const int m = options.partition_size > 0
                    ? options.partition_size
                    : std::max(2, MaxPartitionSize(delta));
  result.partition_size = m;
  const Partition partition = EqualMassPartition(candidates[0], m);
  const TieBreak tie_break = options.tie_break.value_or(
      x == y ? TieBreak::kUniform : TieBreak::kLowestIndex);

  int wins = 0;
  for (int t = 0; t < trials; ++t) {
    RngStream answers = RngStream::Derive(seed, "attack-trial", t);
    RngStream ties = RngStream::Derive(seed, "attack-tie", t);
    const AnswerOracle oracle = [&] {
      return SamplePosterior(candidates[0], answers);
    };
    const AttackResult r =
        Attack(oracle, candidates, n, partition, tie_break, &ties, 0);
    if (r.tie) ++result.ties;
    if (*r.success) ++wins;
  }
  result.empirical_success = static_cast<double>(wins) / trials;
  return result;
}

std::string ExperimentCsvHeader() {
  return "family,rho,n,delta,threshold,empirical_success,trials";
}

std::string ExperimentCsvRow(const ExperimentResult& r) {
  return r.family + "," + FormatDouble(r.rho) + "," + std::to_string(r.n) +
         "," + FormatDouble(r.delta) + "," + FormatDouble(r.threshold) + "," +
         FormatDouble(r.empirical_success) + "," + std::to_string(r.trials);
}

}  // namespace dpbayes
