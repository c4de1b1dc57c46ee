// Copyright 2026 The fairprice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "fairprice/audit.hpp"
#include "fairprice/decomposition.hpp"
#include "fairprice/demand.hpp"
#include "fairprice/error.hpp"
#include "fairprice/parity.hpp"
#include "fairprice/record.hpp"
#include "fairprice/share.hpp"
#include "fairprice/sim.hpp"
#include <json.hpp>

namespace fairprice::io {

using Json = nlohmann::ordered_json;

/// Non-finite values are written as the strings "inf", "-inf" and "nan".
inline Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double read_number(const Json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return NAN;
  }
  fail(ErrorCode::parse, "'" + what + "' must be a number");
}

inline std::vector<double> read_vector(const Json& j, const std::string& what) {
  if (!j.is_array()) fail(ErrorCode::parse, "'" + what + "' must be an array of numbers");
  std::vector<double> v;
  for (const auto& e : j) v.push_back(read_number(e, what));
  return v;
}

inline const Json& field(const Json& j, const std::string& key) {
  if (!(j.is_object() && j.contains(key))) fail(ErrorCode::parse, "missing field '" + key + "'");
  return j.at(key);
}

inline Json vector_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

template <typename V, typename F>
Json map_json(const GroupMap<V>& m, F conv) {
  Json o = Json::object();
  for (const auto& [k, v] : m) o[k] = conv(v);
  return o;
}

inline GroupMap<double> read_number_map(const Json& j, const std::string& what) {
  if (!j.is_object()) fail(ErrorCode::parse, "'" + what + "' must be an object");
  GroupMap<double> m;
  for (const auto& [k, v] : j.items()) m[k] = read_number(v, what + "." + k);
  return m;
}

inline GroupMap<std::vector<double>> read_vector_map(const Json& j, const std::string& what) {
  if (!j.is_object()) fail(ErrorCode::parse, "'" + what + "' must be an object");
  GroupMap<std::vector<double>> m;
  for (const auto& [k, v] : j.items()) m[k] = read_vector(v, what + "." + k);
  return m;
}

inline Json model_to_json(const DemandModel& model) {
  Json j;
  j["family"] = std::string(family_name(model));
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, PartiallyLinearDemand>) {
          j["beta"] = map_json(m.beta, number);
          Json b;
          if (const auto* lin = std::get_if<LinearBaseline>(&m.baseline)) {
            b["kind"] = "linear";
            b["intercept"] = map_json(lin->intercept, number);
            b["coef"] = map_json(lin->coef, vector_json);
          } else {
            const auto& t = std::get<TableBaseline>(m.baseline);
            b["kind"] = "table";
            Json pts = Json::array();
            for (const auto& p : t.points) pts.push_back(vector_json(p));
            b["points"] = pts;
            b["values"] = map_json(t.values, vector_json);
          }
          j["baseline"] = b;
        } else if constexpr (std::is_same_v<M, LogisticDemand>) {
          j["intercept"] = number(m.intercept);
          j["gamma"] = vector_json(m.gamma);
          j["beta"] = number(m.beta);
          j["group_offsets"] = map_json(m.group_offsets, number);
        } else {
          j["intercept"] = map_json(m.intercept, number);
          j["coef"] = map_json(m.coef, vector_json);
          j["noise"] = Json{{"family", std::string(to_string(m.noise.family))}, {"scale", number(m.noise.scale)}};
        }
      },
      model);
  return j;
}

inline DemandModel model_from_json(const Json& j) {
  const auto family = field(j, "family").get<std::string>();
  if (family == "logistic") {
    LogisticDemand m;
    m.intercept = j.contains("intercept") ? read_number(j["intercept"], "intercept") : 0.0;
    m.gamma = read_vector(field(j, "gamma"), "gamma");
    m.beta = read_number(field(j, "beta"), "beta");
    if (j.contains("group_offsets")) m.group_offsets = read_number_map(j["group_offsets"], "group_offsets");
    return m;
  }
  if (family == "partially_linear") {
    PartiallyLinearDemand m;
    m.beta = read_number_map(field(j, "beta"), "beta");
    const Json& b = field(j, "baseline");
    const auto kind = field(b, "kind").get<std::string>();
    if (kind == "linear") {
      LinearBaseline lin;
      lin.intercept = read_number_map(field(b, "intercept"), "baseline.intercept");
      lin.coef = b.contains("coef") ? read_vector_map(b["coef"], "baseline.coef") : GroupMap<std::vector<double>>{};
      for (const auto& [g, _] : lin.intercept)
        if (!lin.coef.count(g)) lin.coef[g] = {};
      m.baseline = lin;
    } else if (kind == "table") {
      TableBaseline t;
      for (const auto& p : field(b, "points")) t.points.push_back(read_vector(p, "baseline.points"));
      t.values = read_vector_map(field(b, "values"), "baseline.values");
      for (const auto& [g, v] : t.values)
        if (v.size() != t.points.size()) fail(ErrorCode::parse, "baseline table for '" + g + "' has the wrong length");
      m.baseline = t;
    } else {
      fail(ErrorCode::parse, "unknown baseline kind '" + kind + "'");
    }
    return m;
  }
  if (family == "latent") {
    LatentValuationModel m;
    m.intercept = read_number_map(field(j, "intercept"), "intercept");
    m.coef = j.contains("coef") ? read_vector_map(j["coef"], "coef") : GroupMap<std::vector<double>>{};
    for (const auto& [g, _] : m.intercept)
      if (!m.coef.count(g)) m.coef[g] = {};
    const Json& n = field(j, "noise");
    m.noise.family = parse_noise_family(field(n, "family").get<std::string>());
    m.noise.scale = read_number(field(n, "scale"), "noise.scale");
    m.noise.validate();
    return m;
  }
  fail(ErrorCode::parse, "unknown model family '" + family + "'");
}

inline Json population_to_json(const Population& pop) {
  Json j;
  j["groups"] = pop.groups;
  j["rho"] = vector_json(pop.rho);
  Json s = Json::array();
  for (const auto& pt : pop.support)
    s.push_back(Json{{"x", vector_json(pt.x)}, {"mass", number(pt.mass)}, {"membership", vector_json(pt.membership)}});
  j["support"] = s;
  if (pop.unit_cost) j["unit_cost"] = number(*pop.unit_cost);
  return j;
}

/// Population over a discrete support; rho is derived when absent.
inline Population population_from_json(const Json& j) {
  Population pop;
  for (const auto& g : field(j, "groups")) pop.groups.push_back(g.get<std::string>());
  for (const auto& s : field(j, "support")) {
    SupportPoint pt;
    pt.x = read_vector(field(s, "x"), "support.x");
    pt.mass = read_number(field(s, "mass"), "support.mass");
    pt.membership = read_vector(field(s, "membership"), "support.membership");
    pop.support.push_back(std::move(pt));
  }
  pop.rho = j.contains("rho") ? read_vector(j["rho"], "rho") : pop.implied_rho();
  if (j.contains("unit_cost")) pop.unit_cost = read_number(j["unit_cost"], "unit_cost");
  pop.validate();
  return pop;
}

inline Json parity_to_json(const ParitySolution& s) {
  Json j;
  j["mode"] = std::string(to_string(s.mode));
  j["gamma"] = number(s.gamma);
  j["lambda_star"] = number(s.lambda_star);
  j["xi"] = map_json(s.xi, number);
  Json prices = Json::array();
  for (const auto& e : s.prices) {
    Json p;
    p["x_index"] = e.x_index;
    p["group"] = e.group ? Json(*e.group) : Json(nullptr);
    p["price"] = number(e.price);
    prices.push_back(p);
  }
  j["prices"] = prices;
  j["active"] = s.active;
  j["disparity"] = number(s.disparity);
  return j;
}

inline Json audit_to_json(const AuditReport& rep) {
  Json metrics = Json::array();
  for (const auto& m : rep.metrics) {
    Json e;
    e["name"] = m.name;
    e["definition"] = m.definition;
    Json v = Json::object();
    for (const auto& [k, x] : m.values) v[k] = number(x);
    e["values"] = v;
    Json g = Json::object();
    for (const auto& [k, x] : m.by_group) g[k] = number(x);
    e["by_group"] = g;
    Json c = Json::object();
    for (const auto& [k, x] : m.counts) c[k] = x;
    e["counts"] = c;
    metrics.push_back(e);
  }
  return Json{{"metrics", metrics}, {"warnings", rep.warnings}};
}

inline Json sensitivity_to_json(const SensitivityEntry& e) {
  return Json{{"price", number(e.price)},
              {"curvature", number(e.curvature)},
              {"demand", number(e.demand)},
              {"analytic", number(e.analytic)},
              {"printed", number(e.printed)},
              {"finite_difference", number(e.finite_difference)},
              {"discrepancy", number(e.discrepancy)}};
}

inline Json decomposition_to_json(const DecompositionReport& r) {
  return Json{{"p_star", number(r.p_star)},
              {"p_hat_star", number(r.p_hat_star)},
              {"term1", number(r.term1)},
              {"term2", number(r.term2)},
              {"term3", number(r.term3)},
              {"first_order_prediction", number(r.first_order_prediction)},
              {"printed_prediction", number(r.printed_prediction)},
              {"actual_gap", number(r.actual_gap)},
              {"residual", number(r.residual)},
              {"sign", r.sign}};
}

inline Json table_json(const TablePolicy& t) {
  Json rows = Json::array();
  for (const auto& r : t.prices) rows.push_back(vector_json(r));
  return Json{{"attribute_based", t.attribute_based}, {"prices", rows}};
}

inline Json policy_to_json(const PricingPolicy& policy) {
  return std::visit(
      [](const auto& p) -> Json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ConstantPolicy>) {
          return Json{{"kind", "constant"}, {"price", number(p.price)}};
        } else if constexpr (std::is_same_v<P, GroupPolicy>) {
          return Json{{"kind", "group"}, {"prices", map_json(p.prices, number)}};
        } else if constexpr (std::is_same_v<P, LinearPolicy>) {
          return Json{{"kind", "linear"},
                      {"intercept", number(p.intercept)},
                      {"theta", vector_json(p.theta)},
                      {"clip", Json::array({number(p.clip_lo), number(p.clip_hi)})}};
        } else {
          Json t = table_json(p);
          t["kind"] = "table";
          return t;
        }
      },
      policy);
}

/// Policy file, or any output document carrying a "policy" entry.
inline PricingPolicy policy_from_json(const Json& j) {
  if (j.is_object() && j.contains("policy") && !j.contains("kind")) return policy_from_json(j["policy"]);
  const auto kind = field(j, "kind").get<std::string>();
  if (kind == "constant") return ConstantPolicy{read_number(field(j, "price"), "price")};
  if (kind == "group") return GroupPolicy{read_number_map(field(j, "prices"), "prices")};
  if (kind == "linear") {
    LinearPolicy p;
    p.intercept = read_number(field(j, "intercept"), "intercept");
    p.theta = read_vector(field(j, "theta"), "theta");
    const auto clip = read_vector(field(j, "clip"), "clip");
    require(clip.size() == 2 && clip[0] <= clip[1], ErrorCode::parse, "'clip' must be [lo, hi]");
    p.clip_lo = clip[0];
    p.clip_hi = clip[1];
    return p;
  }
  if (kind == "table") {
    TablePolicy t;
    t.attribute_based = field(j, "attribute_based").get<bool>();
    for (const auto& row : field(j, "prices")) t.prices.push_back(read_vector(row, "prices"));
    return t;
  }
  fail(ErrorCode::parse, "unknown policy kind '" + kind + "'");
}

inline Json frontier_to_json(const std::vector<FrontierRow>& rows, const std::vector<std::string>& groups) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["lambda"] = number(r.lambda);
    j["revenue"] = number(r.revenue);
    j["total_access"] = number(r.total_access);
    Json acc = Json::object(), pm = Json::object();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      acc[groups[g]] = number(r.access[g]);
      pm[groups[g]] = number(r.price_mean[g]);
    }
    j["access"] = acc;
    j["price_mean"] = pm;
    j["prices"] = table_json(r.prices);
    out.push_back(j);
  }
  return out;
}

inline Json experiment_to_json(const ExperimentResult& ex, bool include_prices = false) {
  Json j;
  j["groups"] = ex.groups;
  j["histogram_range"] = Json::array({number(ex.bin_lo), number(ex.bin_hi)});
  Json schemes = Json::array();
  for (const auto& s : ex.schemes) {
    Json e;
    e["scheme"] = s.scheme;
    e["revenue"] = number(s.revenue);
    e["total_access"] = number(s.total_access);
    Json acc = Json::object(), pm = Json::object(), h = Json::object();
    for (std::size_t g = 0; g < ex.groups.size(); ++g) {
      acc[ex.groups[g]] = number(s.access[g]);
      pm[ex.groups[g]] = number(s.mean_price[g]);
      h[ex.groups[g]] = vector_json(s.histogram[g]);
    }
    e["access"] = acc;
    e["mean_price"] = pm;
    e["histogram"] = h;
    if (include_prices) e["prices"] = table_json(s.policy);
    schemes.push_back(e);
  }
  j["schemes"] = schemes;
  return j;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) fail(ErrorCode::io, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse, "'" + path + "': " + e.what());
  }
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace fairprice::io
