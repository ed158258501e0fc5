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

#include "runner.h"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "adversary.h"
#include "errors.h"
#include "mechanism.h"
#include "numerics.h"
#include "serialization.h"

namespace dpbayes {
namespace {

class Params {
 public:
  Params(const std::string& family, const std::vector<std::string>& items)
      : family_(family) {
    for (const auto& item : items) {
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw InvalidArgument("prior parameter '" + item +
                              "' is not of the form key=value");
      }
      const std::string key(Trim(std::string_view(item).substr(0, eq)));
      if (!values_.emplace(key, item.substr(eq + 1)).second) {
        throw InvalidArgument("prior parameter '" + key + "' given twice");
      }
    }
  }

  template <class F>
  auto Wrap(const std::string& key, F&& parse) {
    try {
      return parse();
    } catch (const Error& e) {
      throw InvalidArgument("prior parameter '" + key + "': " + e.what());
    }
  }

  std::optional<std::string> Get(const std::string& key) {
    used_.insert(key);
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  double Double(const std::string& key, double fallback) {
    const auto v = Get(key);
    return v ? Wrap(key, [&] { return ParseDouble(*v); }) : fallback;
  }

  int Int(const std::string& key, int fallback) {
    const auto v = Get(key);
    return v ? static_cast<int>(Wrap(key, [&] { return ParseInteger(*v); }))
             : fallback;
  }

  std::string Required(const std::string& key) {
    const auto v = Get(key);
    if (!v) {
      throw InvalidArgument(family_ + " needs prior parameter '" + key + "'");
    }
    return *v;
  }

  // Rejects keys the family does not know, after all Get calls.
  void CheckAllUsed() const {
    for (const auto& [key, value] : values_) {
      if (!used_.count(key)) {
        throw InvalidArgument("unknown prior parameter '" + key + "' for " +
                              family_);
      }
    }
  }

 private:
  std::string family_;
  std::map<std::string, std::string> values_;
  std::set<std::string> used_;
};

std::string CurveCsv(const std::optional<SmoothnessCertificate>& cert) {
  std::string csv = "rho,kl_bound\n";
  if (!cert) return csv;
  for (int i = 0; i <= 20; ++i) {
    const double rho = i / 10.0;
    csv += FormatDouble(rho) + "," + FormatDouble(RobustnessBound(*cert, rho)) +
           "\n";
  }
  return csv;
}

}  // namespace

FamilyPrior MakeFamily(const std::string& name,
                       const std::vector<std::string>& params,
                       bool paper_normal_variant) {
  Params p(name, params);
  FamilyPrior family;
  if (paper_normal_variant && name != "normal") {
    throw InvalidArgument("--paper-normal-variant applies only to normal");
  }
  if (name == "exponential") {
    family = ExponentialRate{p.Double("lambda", 1.0)};
  } else if (name == "laplace") {
    family = LaplaceScale{p.Double("mu", 0.0), p.Double("lambda", 1.0)};
  } else if (name == "beta-binomial") {
    family = BetaBinomial{p.Int("trials", 10), p.Double("alpha", 2.0)};
  } else if (name == "normal") {
    family = NormalVariance{p.Double("mu", 0.0), p.Double("lambda", 1.0),
                            paper_normal_variant};
  } else if (name == "bayesnet") {
    DiscreteBayesNet net;
    const std::string alphabets = p.Required("alphabets");
    net.alphabet_sizes =
        p.Wrap("alphabets", [&] { return ParseIntList(alphabets, ','); });
    if (const auto parents = p.Get("parents")) {
      for (auto part : Split(*parents, ';')) {
        net.parents.push_back(
            p.Wrap("parents", [&] { return ParseIntList(part, ','); }));
      }
    } else {
      net.parents.assign(net.alphabet_sizes.size(), {});
    }
    net.pseudo_count = p.Double("pseudo_count", 1.0);
    net.floor = p.Double("eps_min", 0.1);
    family = net;
  } else if (name == "finite") {
    FiniteTheta f;
    const std::string tables = p.Required("likelihoods");
    for (auto row : Split(tables, ';')) {
      f.likelihoods.push_back(
          p.Wrap("likelihoods", [&] { return ParseDoubleList(row, ','); }));
    }
    if (const auto w = p.Get("weights")) {
      f.prior_weights =
          p.Wrap("weights", [&] { return ParseDoubleList(*w, ','); });
    } else {
      f.prior_weights.assign(f.likelihoods.size(),
                             1.0 / static_cast<double>(f.likelihoods.size()));
    }
    family = f;
  } else {
    throw InvalidArgument("unknown family '" + name +
                          "' (expected exponential, laplace, beta-binomial, "
                          "normal, bayesnet or finite)");
  }
  p.CheckAllUsed();
  Validate(family);
  return family;
}

CertificateResult CertificateUnder(const FamilyPrior& family,
                                   const std::optional<PseudoMetric>& metric) {
  CertificateResult result = Certificate(family);
  if (!metric || *metric == result.certificate.metric) return result;
  if (const auto* f = std::get_if<FiniteTheta>(&family)) {
    double L = 0.0;
    for (std::size_t i = 0; i < f->likelihoods.size(); ++i) {
      L = std::max(L, LipschitzAt(family, FiniteIndex{i}, *metric));
    }
    result.certificate = {UniformLipschitz{L}, *metric, 1};
    result.valid = std::isfinite(L);
    result.note = result.valid ? "" : "some likelihood separates outcomes at "
                                      "distance zero";
    return result;
  }
  if (const auto* net = std::get_if<DiscreteBayesNet>(&family)) {
    // Larger coordinate weights only enlarge rho, so L stays valid.
    const auto* w = std::get_if<WeightedCategorical>(&*metric);
    const auto degrees = NetworkDegrees(*net);
    bool ok = w != nullptr && w->weights.size() == degrees.size();
    for (std::size_t k = 0; ok && k < degrees.size(); ++k) {
      ok = w->weights[k] >= 1.0 + degrees[k];
    }
    if (ok) {
      result.certificate.metric = *metric;
      return result;
    }
  }
  throw DomainError("the " + FamilyName(family) +
                    " certificate is stated under metric " +
                    MetricName(result.certificate.metric) + ", not " +
                    MetricName(*metric));
}

ReportArtifacts RunReport(const FamilyPrior& family,
                          const std::optional<PseudoMetric>& metric,
                          int iid_n) {
  const CertificateResult cert = CertificateUnder(family, metric);
  const KappaConstants& k = GetKappaConstants();
  Json out;
  out["family"] = FamilyName(family);
  out["kappa"] = Json{{"omega", k.omega}, {"kappa", k.kappa}};
  Json c = ToJson(cert.certificate);
  c["valid"] = cert.valid;
  if (!cert.note.empty()) c["note"] = cert.note;
  out["certificate"] = c;
  out["guarantee"] =
      cert.valid ? ToJson(DpGuarantee(cert.certificate)) : Json(nullptr);

  std::optional<SmoothnessCertificate> curve_cert;
  if (cert.valid) curve_cert = cert.certificate;
  if (iid_n > 0) {
    const SmoothnessCertificate lifted = LiftIid(cert.certificate, iid_n);
    out["iid_n"] = iid_n;
    out["lifted_certificate"] = ToJson(lifted);
    out["lifted_guarantee"] =
        cert.valid ? ToJson(DpGuarantee(lifted)) : Json(nullptr);
    if (cert.valid) curve_cert = lifted;
  }
  Json curve = Json::array();
  if (curve_cert) {
    for (int i = 0; i <= 20; ++i) {
      const double rho = i / 10.0;
      curve.push_back(Json{{"rho", rho},
                           {"kl_bound",
                            Number(RobustnessBound(*curve_cert, rho))}});
    }
  }
  out["robustness_curve"] = curve;
  return {out.dump(2) + "\n", CurveCsv(curve_cert)};
}

std::string RunRespond(const FamilyPrior& family, const Dataset& x,
                       std::uint64_t seed, const std::string& queries_json,
                       bool include_theta) {
  Json doc;
  try {
    doc = Json::parse(queries_json);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("invalid query JSON: ") + e.what());
  }
  std::vector<Query> queries;
  if (doc.is_array()) {
    for (const auto& q : doc) queries.push_back(QueryFromJson(q));
  } else {
    queries.push_back(QueryFromJson(doc));
  }
  QuerySession session = QuerySession::Open(family, x, seed);
  for (const auto& q : queries) session.Respond(q);
  return session.TranscriptJsonl(include_theta);
}

std::string RunAttack(const FamilyPrior& family, const Dataset& x,
                      const Dataset& y, int n, double delta, int trials,
                      int partition_size, std::uint64_t seed) {
  ExperimentOptions options;
  options.partition_size = partition_size;
  const ExperimentResult r =
      ThresholdExperiment(family, x, y, n, delta, trials, seed, options);
  return ExperimentCsvHeader() + "\n" + ExperimentCsvRow(r) + "\n";
}

VerifyArtifacts RunVerify(const FamilyPrior& family, std::uint64_t seed,
                          const VerifyOptions& options) {
  const auto reports = VerifySuite(family, seed, options);
  VerifyArtifacts out;
  out.all_passed = true;
  Json checks = Json::array();
  for (const auto& r : reports) {
    out.all_passed = out.all_passed && r.passed;
    checks.push_back(ToJson(r));
  }
  Json doc;
  doc["family"] = FamilyName(family);
  doc["seed"] = seed;
  doc["all_passed"] = out.all_passed;
  doc["checks"] = checks;
  out.json = doc.dump(2) + "\n";
  return out;
}

}  // namespace dpbayes
