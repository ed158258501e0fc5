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

#include "serialization.h"

#include <charconv>
#include <cmath>

#include "errors.h"

namespace dpbayes {

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto res = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, res.ptr);
}

Json Number(double value) {
  if (std::isfinite(value)) return value;
  return FormatDouble(value);
}

Json ToJson(const Theta& theta) {
  if (const auto* v = std::get_if<double>(&theta)) return Number(*v);
  if (const auto* i = std::get_if<FiniteIndex>(&theta)) {
    return Json{{"index", i->index}};
  }
  Json tables = Json::array();
  for (const auto& var : std::get<NetworkTables>(theta).cpt) {
    Json rows = Json::array();
    for (const auto& row : var) {
      Json r = Json::array();
      for (double p : row) r.push_back(Number(p));
      rows.push_back(std::move(r));
    }
    tables.push_back(std::move(rows));
  }
  return Json{{"cpt", std::move(tables)}};
}

Json ToJson(const Query& query) {
  if (std::holds_alternative<IdentityQuery>(query)) {
    return Json{{"type", "identity"}};
  }
  if (const auto* q = std::get_if<ConditionalExpectationQuery>(&query)) {
    return Json{{"type", "conditional_expectation"},
                {"targets", q->targets},
                {"given", q->given},
                {"given_values", q->given_values}};
  }
  const auto& f = std::get<FunctionalQuery>(query);
  Json out{{"type", "functional"}};
  switch (f.kind) {
    case FunctionalKind::kMean: out["name"] = "mean"; break;
    case FunctionalKind::kVariance: out["name"] = "variance"; break;
    case FunctionalKind::kTail:
      out["name"] = "tail";
      out["threshold"] = Number(f.threshold);
      break;
  }
  return out;
}

Json ToJson(const Answer& answer) {
  Json out = Json::array();
  for (double v : answer.values) out.push_back(Number(v));
  return out;
}

Json ToJson(const Posterior& posterior) {
  Json out;
  std::visit(
      [&](const auto& form) {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, GammaForm>) {
          out["kind"] = "gamma";
          out["shape"] = Number(form.shape);
          out["rate"] = Number(form.rate);
        } else if constexpr (std::is_same_v<T, BetaForm>) {
          out["kind"] = "beta";
          out["a"] = Number(form.a);
          out["b"] = Number(form.b);
        } else if constexpr (std::is_same_v<T, DirichletForm>) {
          out["kind"] = "dirichlet";
          out["alpha"] = form.alpha;
          out["floor"] = Number(form.floor);
        } else if constexpr (std::is_same_v<T, GridForm>) {
          out["kind"] = "grid";
          out["variable"] = form.variable == GridVariable::kIdentity
                                ? "identity"
                                : "reciprocal";
          out["log_lo"] = Number(form.log_lo);
          out["step"] = Number(form.step);
          out["cells"] = form.size();
        } else {
          out["kind"] = "finite";
          out["weights"] = form.weights;
        }
      },
      posterior.form);
  out["marginal_log"] = Number(posterior.marginal_log);
  return out;
}

Json ToJson(const SmoothnessCertificate& cert) {
  Json out;
  if (const auto* u = std::get_if<UniformLipschitz>(&cert.bound)) {
    out["type"] = "uniform_lipschitz";
    out["L"] = Number(u->L);
  } else {
    out["type"] = "concentration";
    out["c"] = Number(std::get<Concentration>(cert.bound).c);
  }
  out["metric"] = MetricName(cert.metric);
  out["product_arity"] = cert.product_arity;
  return out;
}

Json ToJson(const PrivacyGuarantee& g) {
  return Json{{"epsilon_rate", Number(g.epsilon_rate)},
              {"delta_rate", Number(g.delta_rate)},
              {"metric_transform", g.transform == MetricTransform::kIdentity
                                       ? "identity"
                                       : "square_root"}};
}

Json ToJson(const CheckReport& r) {
  return Json{{"name", r.name},
              {"passed", r.passed},
              {"max_violation", Number(r.max_violation)},
              {"samples_used", r.samples_used},
              {"tolerance", Number(r.tolerance)},
              {"note", r.note}};
}

namespace {

std::vector<int> IntArray(const Json& json, const char* key) {
  if (!json.contains(key)) return {};
  const Json& v = json.at(key);
  if (!v.is_array()) {
    throw ParseError(std::string("query field '") + key + "' must be an array");
  }
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) {
      throw ParseError(std::string("query field '") + key +
                       "' must hold integers");
    }
    out.push_back(e.get<int>());
  }
  return out;
}

}  // namespace

Query QueryFromJson(const Json& json) {
  if (!json.is_object() || !json.contains("type") ||
      !json.at("type").is_string()) {
    throw ParseError("query must be an object with a string 'type'");
  }
  const std::string type = json.at("type").get<std::string>();
  if (type == "identity") return IdentityQuery{};
  if (type == "conditional_expectation") {
    return ConditionalExpectationQuery{IntArray(json, "targets"),
                                       IntArray(json, "given"),
                                       IntArray(json, "given_values")};
  }
  if (type == "functional") {
    if (!json.contains("name") || !json.at("name").is_string()) {
      throw ParseError("functional query needs a 'name'");
    }
    const std::string name = json.at("name").get<std::string>();
    FunctionalQuery q;
    if (name == "mean") {
      q.kind = FunctionalKind::kMean;
    } else if (name == "variance") {
      q.kind = FunctionalKind::kVariance;
    } else if (name == "tail") {
      q.kind = FunctionalKind::kTail;
      if (!json.contains("threshold") || !json.at("threshold").is_number()) {
        throw ParseError("tail query needs a numeric 'threshold'");
      }
      q.threshold = json.at("threshold").get<double>();
    } else {
      throw ParseError("unknown functional '" + name +
                       "' (expected mean, variance or tail)");
    }
    return q;
  }
  throw ParseError("unknown query type '" + type + "'");
}

}  // namespace dpbayes
