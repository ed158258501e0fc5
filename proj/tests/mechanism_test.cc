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
#include <set>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "errors.h"
#include "mechanism.h"

namespace dpbayes {
namespace {

const Query kIdentity = IdentityQuery{};

double Scalar(const Answer& a) {
  EXPECT_EQ(a.values.size(), 1u);
  return a.values.at(0);
}

TEST(Session, OpenComputesPosterior) {
  auto s = QuerySession::Open(ExponentialRate{1}, Dataset::Scalars({1, 2}), 1);
  const auto& g = std::get<GammaForm>(s.posterior().form);
  EXPECT_EQ(g.shape, 3.0);
  EXPECT_EQ(g.rate, 4.0);
  EXPECT_TRUE(s.log().empty());

  auto prior = QuerySession::Open(BetaBinomial{4, 3}, Dataset(), 1);
  const auto& b = std::get<BetaForm>(prior.posterior().form);
  EXPECT_EQ(b.a, 3.0);
  EXPECT_EQ(b.b, 3.0);
}

TEST(Session, SameInputsSameAnswers) {
  const Dataset x = Dataset::Scalars({0.5, 1.5});
  auto a = QuerySession::Open(LaplaceScale{0, 1}, x, 77);
  auto b = QuerySession::Open(LaplaceScale{0, 1}, x, 77);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(a.Respond(kIdentity), b.Respond(kIdentity));
  EXPECT_EQ(a.TranscriptJsonl(true), b.TranscriptJsonl(true));
  auto c = QuerySession::Open(LaplaceScale{0, 1}, x, 78);
  EXPECT_NE(Scalar(c.Respond(kIdentity)), Scalar(
      QuerySession::Open(LaplaceScale{0, 1}, x, 77).Respond(kIdentity)));
}

TEST(Session, DegenerateFinitePosterior) {
  // Likelihood zero for the first point pins the posterior on the second.
  const FiniteTheta f{{{1.0, 0.0}, {0.5, 0.5}}, {0.5, 0.5}};
  auto s = QuerySession::Open(f, Dataset::Scalars({1}), 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(Scalar(s.Respond(kIdentity)), 1.0);
}

TEST(Session, FreshDrawPerQuery) {
  auto s = QuerySession::Open(ExponentialRate{1}, Dataset::Scalars({1, 2}), 5);
  std::set<double> seen;
  for (int i = 0; i < 10000; ++i) seen.insert(Scalar(s.Respond(kIdentity)));
  EXPECT_EQ(seen.size(), 10000u);
}

TEST(Session, LogIndicesAndReplay) {
  const Dataset x = Dataset::Scalars({2.0, 0.1});
  auto s = QuerySession::Open(NormalVariance{0, 1}, x, 11);
  s.Respond(kIdentity);
  s.Respond(FunctionalQuery{FunctionalKind::kTail, 1.0});
  s.Respond(FunctionalQuery{FunctionalKind::kMean});
  for (std::size_t i = 0; i < s.log().size(); ++i) EXPECT_EQ(s.log()[i].k, i + 1);
  EXPECT_TRUE(ReplayMatches(NormalVariance{0, 1}, x, 11, s.log()));
  EXPECT_FALSE(ReplayMatches(NormalVariance{0, 1}, x, 12, s.log()));
}

TEST(Session, TranscriptOmitsSeedAndData) {
  auto s = QuerySession::Open(ExponentialRate{1}, Dataset::Scalars({123.25}), 987654);
  s.Respond(kIdentity);
  s.Respond(kIdentity);
  const std::string t = s.TranscriptJsonl(false);
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 2);
  EXPECT_EQ(t.find("theta"), std::string::npos);
  EXPECT_EQ(t.find("987654"), std::string::npos);
  EXPECT_EQ(t.find("123.25"), std::string::npos);
  EXPECT_NE(s.TranscriptJsonl(true).find("theta"), std::string::npos);
}

TEST(Session, IdentityAnswersFollowPosterior) {
  auto s = QuerySession::Open(ExponentialRate{1}, Dataset::Scalars({1, 2}), 19);
  const int n = 100000;
  std::vector<double> v(n);
  for (double& d : v) d = Scalar(s.Respond(kIdentity));
  std::sort(v.begin(), v.end());
  double ks = 0;
  for (int i = 0; i < n; ++i) {
    const double f = boost::math::gamma_p(3.0, 4.0 * v[i]);
    ks = std::max({ks, f - double(i) / n, double(i + 1) / n - f});
  }
  EXPECT_LT(ks, 0.01);
}

TEST(Query, ConditionalExpectationMatchesBruteForce) {
  // X0 -> X1 with three symbols for X1.
  const DiscreteBayesNet net{{2, 3}, {{}, {0}}, 1.0, 0.05};
  auto s = QuerySession::Open(net, Dataset::Rows({{0, 2}, {1, 1}, {0, 0}}), 4);
  for (int trial = 0; trial < 200; ++trial) {
    const int z = trial % 2;
    s.Respond(ConditionalExpectationQuery{{1}, {0}, {z}});
    const auto& entry = s.log().back();
    const auto& t = std::get<NetworkTables>(entry.theta);
    double expected = 0;
    for (int y = 0; y < 3; ++y) expected += y * t.cpt[1][z][y];
    EXPECT_NEAR(entry.answer.values.at(0), expected, 1e-12);

    // Reverse direction through Bayes' rule.
    s.Respond(ConditionalExpectationQuery{{0}, {1}, {2}});
    const auto& t2 = std::get<NetworkTables>(s.log().back().theta);
    const double p0 = t2.cpt[0][0][0] * t2.cpt[1][0][2];
    const double p1 = t2.cpt[0][0][1] * t2.cpt[1][1][2];
    EXPECT_NEAR(s.log().back().answer.values.at(0), p1 / (p0 + p1), 1e-12);
  }
}

TEST(Query, ConditionalExpectationErrors) {
  const DiscreteBayesNet net{{2, 2}, {{}, {0}}, 1.0, 0.1};
  auto s = QuerySession::Open(net, Dataset(), 1);
  EXPECT_THROW(s.Respond(ConditionalExpectationQuery{{0}, {0}, {1}}),
               InvalidArgument);
  EXPECT_THROW(s.Respond(ConditionalExpectationQuery{{1}, {0}, {2}}),
               InvalidArgument);
  auto e = QuerySession::Open(ExponentialRate{1}, Dataset(), 1);
  EXPECT_THROW(e.Respond(ConditionalExpectationQuery{{0}, {}, {}}), Error);
}

TEST(Query, Functionals) {
  const Theta theta = 2.0;
  EXPECT_DOUBLE_EQ(
      EvaluateQuery(ExponentialRate{1}, theta, FunctionalQuery{FunctionalKind::kMean})
          .values[0],
      0.5);
  EXPECT_DOUBLE_EQ(EvaluateQuery(ExponentialRate{1}, theta,
                                 FunctionalQuery{FunctionalKind::kVariance})
                       .values[0],
                   0.25);
  EXPECT_DOUBLE_EQ(EvaluateQuery(ExponentialRate{1}, theta,
                                 FunctionalQuery{FunctionalKind::kTail, 1.0})
                       .values[0],
                   std::exp(-2.0));
  EXPECT_DOUBLE_EQ(EvaluateQuery(NormalVariance{1, 1}, theta,
                                 FunctionalQuery{FunctionalKind::kVariance})
                       .values[0],
                   2.0);
  EXPECT_DOUBLE_EQ(EvaluateQuery(BetaBinomial{10, 2}, Theta{0.3},
                                 FunctionalQuery{FunctionalKind::kMean})
                       .values[0],
                   3.0);
}

TEST(Budget, Examples) {
  const SmoothnessCertificate lip{UniformLipschitz{1}, AbsDiffSum{}};
  EXPECT_EQ(BudgetCheck(lip, 0.022468, 0.05).max_safe_queries, 99);
  const double t1 = DistinguishabilityThreshold(lip, 1, 0.05).rho_threshold;
  EXPECT_EQ(BudgetCheck(lip, t1, 0.05).max_safe_queries, 0);
  EXPECT_EQ(BudgetCheck(lip, 2 * t1, 0.05).max_safe_queries, 0);
  EXPECT_THROW(BudgetCheck(lip, 0.0, 0.05), InvalidArgument);
}

TEST(Budget, DoublingTargetHalvesBudget) {
  const SmoothnessCertificate conc{Concentration{1.5}, AbsDiffSum{}};
  for (double rho = 1e-5; rho < 1e-2; rho *= 1.37) {
    const auto a = BudgetCheck(conc, rho, 0.05).max_safe_queries;
    const auto b = BudgetCheck(conc, 2 * rho, 0.05).max_safe_queries;
    EXPECT_LE(std::abs(2 * b - a), 2) << rho;
    // Largest n whose threshold still exceeds the target.
    EXPECT_GT(DistinguishabilityThreshold(conc, a, 0.05).rho_threshold, rho);
    EXPECT_LE(DistinguishabilityThreshold(conc, a + 1, 0.05).rho_threshold, rho);
  }
}

TEST(Budget, RemainingCountsSessionQueries) {
  const SmoothnessCertificate lip{UniformLipschitz{1}, AbsDiffSum{}};
  auto s = QuerySession::Open(ExponentialRate{1}, Dataset(), 1);
  for (int i = 0; i < 10; ++i) s.Respond(kIdentity);
  const Budget b = BudgetCheck(lip, 0.022468, 0.05, &s);
  EXPECT_EQ(b.max_safe_queries, 99);
  EXPECT_EQ(b.remaining, 89);
}

}  // namespace
}  // namespace dpbayes
