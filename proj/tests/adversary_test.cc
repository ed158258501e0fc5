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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "adversary.h"
#include "calculus.h"
#include "errors.h"

namespace dpbayes {
namespace {

double GammaCdf(double shape, double rate, double t) {
  return t <= 0 ? 0.0 : boost::math::gamma_p(shape, rate * t);
}

double Median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

TEST(Empirical, Counting) {
  const Partition p = Partition::FromIndexCells({0, 1}, 2);
  const std::vector<Theta> s{FiniteIndex{0}, FiniteIndex{0}, FiniteIndex{1}};
  const auto e = EmpiricalDistribution(s, p);
  EXPECT_DOUBLE_EQ(e[0], 2.0 / 3);
  EXPECT_DOUBLE_EQ(e[1], 1.0 / 3);
  const auto one = EmpiricalDistribution({Theta{0.2}, Theta{0.3}},
                                         Partition::FromCuts({1.0}));
  EXPECT_EQ(one, (std::vector<double>{1.0, 0.0}));
}

TEST(Empirical, OutsideEveryCell) {
  const Partition p = Partition::FromIndexCells({0, 1}, 2);
  EXPECT_THROW(EmpiricalDistribution({Theta{FiniteIndex{5}}}, p), DomainError);
}

TEST(Partition, NeedsTwoCells) {
  EXPECT_THROW(Partition::FromCuts({}), InvalidArgument);
  EXPECT_THROW(Partition::FromCuts({2.0, 1.0}), InvalidArgument);
  EXPECT_THROW(Partition::FromIndexCells({0, 0}, 1), InvalidArgument);
}

TEST(Empirical, GammaCellMasses) {
  const Posterior post{GammaForm{3, 4}, 0};
  const Partition p = Partition::FromCuts({0.5, 1.0});
  const std::vector<double> exact{GammaCdf(3, 4, 0.5),
                                  GammaCdf(3, 4, 1.0) - GammaCdf(3, 4, 0.5),
                                  1 - GammaCdf(3, 4, 1.0)};
  const auto masses = CellMasses(post, p);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(masses[i], exact[i], 1e-14);
  RngStream rng(3);
  std::vector<Theta> s(100000);
  for (auto& t : s) t = SamplePosterior(post, rng);
  EXPECT_LT(L1Distance(EmpiricalDistribution(s, p), exact), 0.01);
}

TEST(Partition, EqualMass) {
  const Posterior post{GammaForm{2, 3}, 0};
  const auto masses = CellMasses(post, EqualMassPartition(post, 4));
  for (double m : masses) EXPECT_NEAR(m, 0.25, 1e-9);
}

TEST(Attack, FarApartCandidates) {
  const Posterior a{GammaForm{2, 2}, 0}, b{GammaForm{2, 25}, 0};
  const Partition p = EqualMassPartition(a, 3);
  int wins = 0;
  for (int trial = 0; trial < 200; ++trial) {
    RngStream rng = RngStream::Derive(5, "trial", trial);
    const auto r = Attack([&] { return SamplePosterior(a, rng); }, {a, b}, 1000,
                          p, TieBreak::kLowestIndex, nullptr, 0);
    EXPECT_EQ(r.n_used, 1000);
    EXPECT_EQ(r.l1_to_candidates.size(), 2u);
    EXPECT_EQ(r.guess, static_cast<std::size_t>(std::min_element(
                           r.l1_to_candidates.begin(), r.l1_to_candidates.end()) -
                       r.l1_to_candidates.begin()));
    wins += *r.success;
  }
  EXPECT_GE(wins / 200.0, 0.99);
}

TEST(Attack, IdenticalCandidatesTie) {
  const Posterior a{GammaForm{2, 2}, 0};
  const Partition p = EqualMassPartition(a, 2);
  RngStream rng(1);
  const auto r = Attack([&] { return SamplePosterior(a, rng); }, {a, a}, 10, p);
  EXPECT_TRUE(r.tie);
  EXPECT_EQ(r.guess, 0u);
  EXPECT_FALSE(r.success.has_value());
}

TEST(Attack, RejectsZeroQueries) {
  const Posterior a{GammaForm{2, 2}, 0};
  RngStream rng(1);
  EXPECT_THROW(Attack([&] { return SamplePosterior(a, rng); }, {a, a}, 0,
                      EqualMassPartition(a, 2)),
               InvalidArgument);
}

TEST(Attack, SingleQueryIsNearChance) {
  const auto r = ThresholdExperiment(ExponentialRate{1}, Dataset::Scalars({1.0}),
                                     Dataset::Scalars({1.1}), 1, 0.05, 2000, 4);
  EXPECT_NEAR(r.empirical_success, 0.5, 0.06);
}

TEST(Experiment, SeparatedPair) {
  const auto r = ThresholdExperiment(ExponentialRate{1}, Dataset::Scalars({1.0}),
                                     Dataset::Scalars({6.0}), 500, 0.05, 200, 1);
  EXPECT_EQ(r.rho, 5.0);
  EXPECT_NEAR(r.threshold, 0.00183, 1e-5);
  EXPECT_GE(r.empirical_success, 0.95);
  EXPECT_EQ(r.trials, 200);
  EXPECT_EQ(r.family, "exponential");
}

TEST(Experiment, IdenticalPairIsChance) {
  const Dataset x = Dataset::Scalars({2.0});
  const auto r = ThresholdExperiment(ExponentialRate{1}, x, x, 100, 0.05, 2000, 2);
  EXPECT_EQ(r.rho, 0.0);
  EXPECT_EQ(r.ties, 2000);
  EXPECT_NEAR(r.empirical_success, 0.5, 0.05);
}

TEST(Experiment, SuccessGrowsWithQueries) {
  const Dataset x = Dataset::Scalars({1.0}), y = Dataset::Scalars({1.6});
  double prev = 0;
  for (int n : {10, 100, 1000}) {
    const auto r = ThresholdExperiment(ExponentialRate{1}, x, y, n, 0.05, 400, 7);
    EXPECT_GE(r.empirical_success, prev - 0.02) << n;
    prev = r.empirical_success;
  }
  EXPECT_GT(prev, 0.9);
}

TEST(Experiment, CsvRow) {
  EXPECT_EQ(ExperimentCsvHeader(),
            "family,rho,n,delta,threshold,empirical_success,trials");
  ExperimentResult r;
  r.family = "exponential";
  r.rho = 5;
  r.n = 500;
  r.delta = 0.05;
  r.threshold = 0.25;
  r.empirical_success = 1;
  r.trials = 200;
  EXPECT_EQ(ExperimentCsvRow(r), "exponential,5,500,0.05,0.25,1,200");
}

// Concentration of the empirical measure on three cells.
TEST(EmpiricalConcentration, DeviationProbability) {
  const std::vector<double> p{0.2, 0.3, 0.5};
  const Partition cells = Partition::FromIndexCells({0, 1, 2}, 3);
  const double bound = EmpiricalL1Bound(300, 0.01, 3);
  RngStream rng(99);
  int exceed = 0;
  const int trials = 10000;
  std::vector<Theta> s(300);
  for (int t = 0; t < trials; ++t) {
    for (auto& v : s) v = FiniteIndex{rng.Categorical(p)};
    exceed += L1Distance(EmpiricalDistribution(s, cells), p) > bound;
  }
  EXPECT_LE(exceed / double(trials), 2 * 0.01);
}

TEST(DataProcessing, RestrictionNeverIncreasesL1) {
  const FiniteTheta f{{{0.1, 0.9}, {0.3, 0.7}, {0.5, 0.5}, {0.6, 0.4},
                       {0.8, 0.2}, {0.95, 0.05}},
                      {0.1, 0.2, 0.2, 0.2, 0.2, 0.1}};
  const Posterior a = ComputePosterior(f, Dataset::Scalars({0, 0, 1}));
  const Posterior b = ComputePosterior(f, Dataset::Scalars({1, 1, 0}));
  const auto& wa = std::get<FiniteWeightsForm>(a.form).weights;
  const auto& wb = std::get<FiniteWeightsForm>(b.form).weights;
  const double full = L1Distance(wa, wb);
  RngStream rng(4);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 2 + trial % 4;
    std::vector<int> cell(6);
    for (int i = 0; i < 6; ++i) cell[i] = i < m ? i : int(rng.Uniform() * m);
    const Partition p = Partition::FromIndexCells(cell, m);
    EXPECT_LE(L1Distance(CellMasses(a, p), CellMasses(b, p)), full + 1e-15);
  }
}

TEST(Empirical, ConvergesWithSampleSize) {
  const Posterior post{GammaForm{3, 4}, 0};
  const Partition p = EqualMassPartition(post, 3);
  const auto exact = CellMasses(post, p);
  RngStream rng(8);
  auto error = [&](int n) {
    std::vector<Theta> s(n);
    for (auto& t : s) t = SamplePosterior(post, rng);
    return L1Distance(EmpiricalDistribution(s, p), exact);
  };
  std::vector<double> small, large;
  for (int t = 0; t < 100; ++t) {
    small.push_back(error(250));
    large.push_back(error(1000));
  }
  EXPECT_LT(Median(large), Median(small));
}

}  // namespace
}  // namespace dpbayes
