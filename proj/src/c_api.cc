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

#include "dpbayes/dpbayes.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "calculus.h"
#include "dataset_io.h"
#include "errors.h"
#include "mechanism.h"
#include "runner.h"
#include "serialization.h"

struct dpb_family {
  dpbayes::FamilyPrior family;
};

struct dpb_dataset {
  dpbayes::Dataset data;
};

struct dpb_session {
  dpbayes::QuerySession session;
};

namespace {

thread_local std::string last_error;

template <class F>
dpb_status Guard(F&& body) {
  try {
    body();
    last_error.clear();
    return DPB_OK;
  } catch (const dpbayes::ParseError& e) {
    last_error = e.what();
    return DPB_PARSE_ERROR;
  } catch (const dpbayes::IoError& e) {
    last_error = e.what();
    return DPB_IO_ERROR;
  } catch (const dpbayes::DomainError& e) {
    last_error = e.what();
    return DPB_DOMAIN_ERROR;
  } catch (const dpbayes::InvalidArgument& e) {
    last_error = e.what();
    return DPB_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return DPB_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DPB_INTERNAL_ERROR;
  }
}

void Require(bool condition, const char* what) {
  if (!condition) throw dpbayes::InvalidArgument(what);
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* dpb_version(void) { return "0.1.0"; }

const char* dpb_last_error_message(void) { return last_error.c_str(); }

void dpb_string_free(char* s) { std::free(s); }

dpb_status dpb_kappa_constants(double* omega, double* kappa) {
  return Guard([&] {
    Require(omega != nullptr && kappa != nullptr, "null output pointer");
    const auto& k = dpbayes::GetKappaConstants();
    *omega = k.omega;
    *kappa = k.kappa;
  });
}

dpb_status dpb_family_create(const char* name, const char* const* params,
                             size_t n_params, int paper_normal_variant,
                             dpb_family** out) {
  return Guard([&] {
    Require(name != nullptr && out != nullptr, "null argument");
    Require(n_params == 0 || params != nullptr, "null parameter list");
    std::vector<std::string> items;
    for (size_t i = 0; i < n_params; ++i) {
      Require(params[i] != nullptr, "null parameter");
      items.emplace_back(params[i]);
    }
    *out = new dpb_family{
        dpbayes::MakeFamily(name, items, paper_normal_variant != 0)};
  });
}

void dpb_family_free(dpb_family* family) { delete family; }

dpb_status dpb_dataset_load(const char* path, const char* format,
                            dpb_dataset** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    *out = new dpb_dataset{
        dpbayes::LoadDataset(path, format != nullptr ? format : "auto")};
  });
}

dpb_status dpb_dataset_from_scalars(const double* values, size_t n,
                                    dpb_dataset** out) {
  return Guard([&] {
    Require(out != nullptr, "null output pointer");
    Require(n == 0 || values != nullptr, "null values");
    *out = new dpb_dataset{
        dpbayes::Dataset::Scalars(std::vector<double>(values, values + n))};
  });
}

size_t dpb_dataset_size(const dpb_dataset* dataset) {
  return dataset == nullptr ? 0 : dataset->data.size();
}

void dpb_dataset_free(dpb_dataset* dataset) { delete dataset; }

dpb_status dpb_distance(const char* metric, const dpb_dataset* x,
                        const dpb_dataset* y, double* out) {
  return Guard([&] {
    Require(metric && x && y && out, "null argument");
    *out = dpbayes::Distance(dpbayes::ParseMetric(metric), x->data, y->data);
  });
}

dpb_status dpb_report(const dpb_family* family, const char* metric, int iid_n,
                      char** json_out, char** curve_csv_out) {
  return Guard([&] {
    Require(family && json_out, "null argument");
    std::optional<dpbayes::PseudoMetric> m;
    if (metric != nullptr && *metric != '\0') m = dpbayes::ParseMetric(metric);
    const auto artifacts = dpbayes::RunReport(family->family, m, iid_n);
    char* json = Dup(artifacts.json);
    if (curve_csv_out != nullptr) {
      try {
        *curve_csv_out = Dup(artifacts.curve_csv);
      } catch (...) {
        std::free(json);
        throw;
      }
    }
    *json_out = json;
  });
}

dpb_status dpb_budget_check(const dpb_family* family, double rho_target,
                            double delta, long long* max_safe_queries) {
  return Guard([&] {
    Require(family && max_safe_queries, "null argument");
    const auto cert = dpbayes::Certificate(family->family);
    if (!cert.valid) throw dpbayes::DomainError(cert.note);
    *max_safe_queries =
        dpbayes::BudgetCheck(cert.certificate, rho_target, delta)
            .max_safe_queries;
  });
}

dpb_status dpb_respond(const dpb_family* family, const dpb_dataset* data,
                       uint64_t seed, const char* queries_json,
                       int include_theta, char** transcript_out) {
  return Guard([&] {
    Require(family && data && queries_json && transcript_out,
            "null argument");
    *transcript_out = Dup(dpbayes::RunRespond(
        family->family, data->data, seed, queries_json, include_theta != 0));
  });
}

dpb_status dpb_attack(const dpb_family* family, const dpb_dataset* x,
                      const dpb_dataset* y, int n, double delta, int trials,
                      int partition_size, uint64_t seed, char** csv_out) {
  return Guard([&] {
    Require(family && x && y && csv_out, "null argument");
    *csv_out = Dup(dpbayes::RunAttack(family->family, x->data, y->data, n,
                                      delta, trials, partition_size, seed));
  });
}

dpb_status dpb_verify(const dpb_family* family, uint64_t seed,
                      int* all_passed, char** json_out) {
  return Guard([&] {
    Require(family && all_passed && json_out, "null argument");
    const auto artifacts = dpbayes::RunVerify(family->family, seed);
    *json_out = Dup(artifacts.json);
    *all_passed = artifacts.all_passed ? 1 : 0;
  });
}

dpb_status dpb_session_open(const dpb_family* family, const dpb_dataset* data,
                            uint64_t seed, dpb_session** out) {
  return Guard([&] {
    Require(family && data && out, "null argument");
    *out = new dpb_session{
        dpbayes::QuerySession::Open(family->family, data->data, seed)};
  });
}

dpb_status dpb_session_answer(dpb_session* session, const char* query_json,
                              char** answer_json_out) {
  return Guard([&] {
    Require(session && query_json && answer_json_out, "null argument");
    dpbayes::Json doc;
    try {
      doc = dpbayes::Json::parse(query_json);
    } catch (const dpbayes::Json::parse_error& e) {
      throw dpbayes::ParseError(std::string("invalid query JSON: ") + e.what());
    }
    const auto answer = session->session.Respond(dpbayes::QueryFromJson(doc));
    *answer_json_out = Dup(dpbayes::ToJson(answer).dump());
  });
}

dpb_status dpb_session_transcript(const dpb_session* session,
                                  int include_theta, char** out) {
  return Guard([&] {
    Require(session && out, "null argument");
    *out = Dup(session->session.TranscriptJsonl(include_theta != 0));
  });
}

void dpb_session_free(dpb_session* session) { delete session; }

}  // extern "C"
