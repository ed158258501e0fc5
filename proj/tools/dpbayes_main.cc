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

// dpbayes command-line front end. Thin layer over the C API.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpbayes/dpbayes.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerifyFailed = 2;

struct FamilyFree {
  void operator()(dpb_family* f) const { dpb_family_free(f); }
};
struct DatasetFree {
  void operator()(dpb_dataset* d) const { dpb_dataset_free(d); }
};
struct StringFree {
  void operator()(char* s) const { dpb_string_free(s); }
};
using FamilyPtr = std::unique_ptr<dpb_family, FamilyFree>;
using DatasetPtr = std::unique_ptr<dpb_dataset, DatasetFree>;
using StringPtr = std::unique_ptr<char, StringFree>;

// Carries a message and exit code up to main.
struct Failure {
  int code;
  std::string message;
};

void Check(dpb_status status, const std::string& context) {
  if (status != DPB_OK) {
    throw Failure{kExitConfig, context + ": " + dpb_last_error_message()};
  }
}

struct Common {
  std::string family;
  std::vector<std::string> prior_params;
  bool paper_normal_variant = false;
  std::uint64_t seed = 0;
  std::string out = "-";
};

void AddCommon(CLI::App* cmd, Common& c) {
  cmd->add_option("--family", c.family,
                  "exponential, laplace, beta-binomial, normal, bayesnet, "
                  "finite")
      ->required();
  cmd->add_option("--prior-params", c.prior_params,
                  "prior parameters as key=value (repeatable)");
  cmd->add_flag("--paper-normal-variant", c.paper_normal_variant,
                "normal: exponential prior on the variance instead of the "
                "precision");
  cmd->add_option("--seed", c.seed, "master random seed");
  cmd->add_option("--out", c.out, "output path ('-' for stdout)");
}

FamilyPtr MakeFamily(const Common& c) {
  std::vector<const char*> params;
  for (const auto& p : c.prior_params) params.push_back(p.c_str());
  dpb_family* family = nullptr;
  Check(dpb_family_create(c.family.c_str(), params.data(), params.size(),
                          c.paper_normal_variant ? 1 : 0, &family),
        "family");
  return FamilyPtr(family);
}

DatasetPtr LoadData(const std::string& path, const std::string& format) {
  dpb_dataset* data = nullptr;
  Check(dpb_dataset_load(path.c_str(), format.c_str(), &data),
        "dataset '" + path + "'");
  return DatasetPtr(data);
}

void WriteArtifact(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Failure{kExitConfig, "cannot write '" + path + "'"};
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitConfig, "cannot open '" + path + "'"};
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust, differentially private Bayesian inference by "
               "posterior sampling"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(dpb_version()));

  Common report_opts;
  std::string report_metric;
  int iid_n = 0;
  std::string curve_out;
  auto* report = app.add_subcommand(
      "report", "certificate, privacy guarantee and robustness curve");
  AddCommon(report, report_opts);
  report->add_option("--metric", report_metric,
                     "hamming, absdiff, normal or weighted:v1,v2,...");
  report->add_option("--iid-n", iid_n, "lift to n i.i.d. observations");
  report->add_option("--curve-out", curve_out,
                     "write the (rho, KL bound) curve as CSV");

  Common respond_opts;
  std::string respond_data;
  std::string respond_format = "auto";
  std::string queries_path;
  bool include_theta = false;
  auto* respond =
      app.add_subcommand("respond", "answer queries by posterior sampling");
  AddCommon(respond, respond_opts);
  respond->add_option("--data", respond_data, "dataset path")->required();
  respond->add_option("--format", respond_format, "csv, json or auto");
  respond->add_option("--queries", queries_path, "JSON array of queries")
      ->required();
  respond->add_flag("--include-theta", include_theta,
                    "include the sampled parameters in the transcript");

  Common attack_opts;
  std::vector<std::string> attack_data;
  std::string attack_format = "auto";
  int n = 500;
  double delta = 0.05;
  int trials = 200;
  int partition_size = 0;
  auto* attack = app.add_subcommand(
      "attack", "distinguishing experiment between two datasets");
  AddCommon(attack, attack_opts);
  attack->add_option("--data", attack_data,
                     "two dataset paths: the true one, then the alternative")
      ->required()
      ->expected(1, 2);
  attack->add_option("--format", attack_format, "csv, json or auto");
  attack->add_option("--n", n, "answers observed per trial");
  attack->add_option("--delta", delta, "failure probability");
  attack->add_option("--trials", trials, "number of trials");
  attack->add_option("--partition-size", partition_size,
                     "cells in the adversary's partition (default from delta)");

  Common verify_opts;
  auto* verify = app.add_subcommand("verify", "run every numerical check");
  AddCommon(verify, verify_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (report->parsed()) {
      const FamilyPtr family = MakeFamily(report_opts);
      char* json = nullptr;
      char* curve = nullptr;
      Check(dpb_report(family.get(),
                       report_metric.empty() ? nullptr : report_metric.c_str(),
                       iid_n, &json, &curve),
            "report");
      const StringPtr json_owner(json), curve_owner(curve);
      WriteArtifact(report_opts.out, json);
      if (!curve_out.empty()) WriteArtifact(curve_out, curve);
    } else if (respond->parsed()) {
      const FamilyPtr family = MakeFamily(respond_opts);
      const DatasetPtr data = LoadData(respond_data, respond_format);
      const std::string queries = ReadFile(queries_path);
      char* transcript = nullptr;
      Check(dpb_respond(family.get(), data.get(), respond_opts.seed,
                        queries.c_str(), include_theta ? 1 : 0, &transcript),
            "respond");
      const StringPtr owner(transcript);
      WriteArtifact(respond_opts.out, transcript);
    } else if (attack->parsed()) {
      if (attack_data.size() != 2) {
        throw Failure{kExitConfig,
                      "attack needs --data twice: the true dataset and the "
                      "alternative"};
      }
      const FamilyPtr family = MakeFamily(attack_opts);
      const DatasetPtr x = LoadData(attack_data[0], attack_format);
      const DatasetPtr y = LoadData(attack_data[1], attack_format);
      char* csv = nullptr;
      Check(dpb_attack(family.get(), x.get(), y.get(), n, delta, trials,
                       partition_size, attack_opts.seed, &csv),
            "attack");
      const StringPtr owner(csv);
      WriteArtifact(attack_opts.out, csv);
    } else if (verify->parsed()) {
      const FamilyPtr family = MakeFamily(verify_opts);
      char* json = nullptr;
      int all_passed = 0;
      Check(dpb_verify(family.get(), verify_opts.seed, &all_passed, &json),
            "verify");
      const StringPtr owner(json);
      WriteArtifact(verify_opts.out, json);
      if (!all_passed) {
        std::cerr << "dpbayes: verification failed\n";
        return kExitVerifyFailed;
      }
    }
  } catch (const Failure& f) {
    std::cerr << "dpbayes: " << f.message << "\n";
    return f.code;
  }
  return kExitOk;
}
