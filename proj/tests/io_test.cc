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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "adversary.h"
#include "dataset_io.h"
#include "errors.h"
#include "runner.h"
#include "serialization.h"

namespace dpbayes {
namespace {

std::string TempFile(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << contents;
  return path.string();
}

TEST(Csv, Scalars) {
  const Dataset d = ParseCsvDataset("1\n2\n");
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.scalars()[0], 1.0);
  EXPECT_EQ(d.scalars()[1], 2.0);
  EXPECT_TRUE(ParseCsvDataset("").empty());
  EXPECT_EQ(ParseCsvDataset("1.5\n\n  -2e3 \n").size(), 2u);
}

TEST(Csv, ErrorsCarryLineNumbers) {
  try {
    ParseCsvDataset("abc\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
  try {
    ParseCsvDataset("1\n2\nx\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(ParseCsvDataset("1\n0,1\n"), ParseError);
}

TEST(Csv, CategoricalRows) {
  const Dataset d = ParseCsvDataset("0,1,1\n1,0,0\n");
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.rows()[0], (Categorical{0, 1, 1}));
}

TEST(Json, BothKinds) {
  EXPECT_EQ(ParseJsonDataset("[1, 2.5]").scalars()[1], 2.5);
  EXPECT_EQ(ParseJsonDataset("[[0, 1], [1, 1]]").rows()[1], (Categorical{1, 1}));
  EXPECT_TRUE(ParseJsonDataset("[]").empty());
  EXPECT_THROW(ParseJsonDataset("[1, [0]]"), ParseError);
  EXPECT_THROW(ParseJsonDataset("{"), ParseError);
  EXPECT_THROW(ParseJsonDataset("[[0.5]]"), ParseError);
}

TEST(Load, FormatsAndMissingFile) {
  EXPECT_EQ(LoadDataset(TempFile("dpb_io.csv", "3\n4\n"), "csv").size(), 2u);
  EXPECT_EQ(LoadDataset(TempFile("dpb_io.json", "[[1,0]]"), "auto").size(), 1u);
  EXPECT_EQ(LoadDataset(TempFile("dpb_io2.csv", "7\n"), "auto").scalars()[0], 7.0);
  EXPECT_THROW(LoadDataset("/nonexistent/dpb.csv", "csv"), IoError);
  EXPECT_THROW(LoadDataset(TempFile("dpb_io3.csv", "1\n"), "xml"),
               InvalidArgument);
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatDouble(5), "5");
  EXPECT_EQ(std::stod(FormatDouble(std::log(10.0))), std::log(10.0));
  EXPECT_EQ(Number(INFINITY).get<std::string>(), "inf");
}

TEST(Query, JsonRoundTrip) {
  const std::vector<Query> queries{
      IdentityQuery{}, ConditionalExpectationQuery{{1}, {0, 2}, {1, 0}},
      FunctionalQuery{FunctionalKind::kTail, 2.5},
      FunctionalQuery{FunctionalKind::kVariance}};
  for (const auto& q : queries) EXPECT_EQ(QueryFromJson(ToJson(q)), q);
  EXPECT_THROW(QueryFromJson(Json::parse(R"({"type":"nope"})")), ParseError);
}

TEST(Runner, MakeFamilyDefaultsAndErrors) {
  const auto f = MakeFamily("exponential", {}, false);
  EXPECT_EQ(std::get<ExponentialRate>(f).prior_rate, 1.0);
  const auto n = MakeFamily("normal", {"mu=2", "lambda=0.5"}, true);
  EXPECT_TRUE(std::get<NormalVariance>(n).prior_on_variance);
  EXPECT_EQ(std::get<NormalVariance>(n).mean, 2.0);
  EXPECT_THROW(MakeFamily("exponential", {"lambda=-1"}, false), InvalidArgument);
  EXPECT_THROW(MakeFamily("exponential", {"bogus=1"}, false), InvalidArgument);
  EXPECT_THROW(MakeFamily("weibull", {}, false), InvalidArgument);
  const auto fin = MakeFamily(
      "finite", {"likelihoods=0.2,0.8;0.5,0.5", "weights=0.4,0.6"}, false);
  EXPECT_EQ(std::get<FiniteTheta>(fin).likelihoods.size(), 2u);
}

TEST(Runner, ReportForNetwork) {
  const auto f = MakeFamily("bayesnet", {"alphabets=2,2", "parents=;0"}, false);
  const Json j = Json::parse(RunReport(f, std::nullopt, 0).json);
  EXPECT_NEAR(j["guarantee"]["epsilon_rate"].get<double>(), 2 * std::log(10.0),
              1e-12);
  EXPECT_EQ(j["certificate"]["valid"], true);
}

TEST(Runner, LiftedReportMatchesArithmetic) {
  const auto f = MakeFamily("exponential", {"lambda=2"}, false);
  const auto art = RunReport(f, std::nullopt, 4);
  const Json j = Json::parse(art.json);
  const auto lifted = LiftIid(Certificate(f).certificate, 4);
  EXPECT_EQ(j["lifted_certificate"]["c"].get<double>(),
            std::get<Concentration>(lifted.bound).c);
  EXPECT_EQ(j["lifted_guarantee"]["delta_rate"].get<double>(),
            DpGuarantee(lifted).delta_rate);
  EXPECT_EQ(art.curve_csv.substr(0, 12), "rho,kl_bound");
}

TEST(Runner, ReportInvalidBetaBinomial) {
  const auto f = MakeFamily("beta-binomial", {}, false);
  const Json j = Json::parse(RunReport(f, std::nullopt, 0).json);
  EXPECT_EQ(j["certificate"]["valid"], false);
  EXPECT_TRUE(j["guarantee"].is_null());
}

TEST(Runner, RespondIsDeterministic) {
  const auto f = MakeFamily("exponential", {}, false);
  const std::string q = R"([{"type":"identity"},{"type":"functional","name":"mean"}])";
  const auto a = RunRespond(f, Dataset::Scalars({1, 2}), 3, q, false);
  EXPECT_EQ(a, RunRespond(f, Dataset::Scalars({1, 2}), 3, q, false));
  EXPECT_NE(a, RunRespond(f, Dataset::Scalars({1, 2}), 4, q, false));
}

TEST(Runner, AttackCsv) {
  const auto f = MakeFamily("exponential", {}, false);
  const auto csv = RunAttack(f, Dataset::Scalars({1}), Dataset::Scalars({6}), 100,
                             0.05, 20, 0, 1);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), ExperimentCsvHeader());
}

}  // namespace
}  // namespace dpbayes
