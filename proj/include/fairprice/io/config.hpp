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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fairprice/demand.hpp"
#include "fairprice/error.hpp"
#include "fairprice/io/csv.hpp"
#include "fairprice/sim.hpp"

namespace fairprice::io {

struct ConfigValue {
  std::string text;
  std::size_t line = 0;
};

/// Flat `key = value` file; '#' starts a comment, blank lines are skipped.
class FlatConfig {
 public:
  static FlatConfig parse(std::istream& in) {
    FlatConfig c;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
      ++lineno;
      const auto hash = raw.find('#');
      const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (line.empty() || line == "\r") continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail(ErrorCode::parse, "line " + std::to_string(lineno) + ": expected key = value");
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (!value.empty() && value.back() == '\r') value.pop_back();
      if (key.empty()) fail(ErrorCode::parse, "line " + std::to_string(lineno) + ": empty key");
      if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
      if (c.values_.count(key)) {
        fail(ErrorCode::parse, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
      }
      c.values_[key] = {value, lineno};
      c.order_.push_back(key);
    }
    return c;
  }

  static FlatConfig parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) fail(ErrorCode::io, "cannot open '" + path + "'");
    return parse(in);
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  const ConfigValue& at(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) fail(ErrorCode::parse, "missing key '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  std::string str(const std::string& key) const { return at(key).text; }

  std::string str(const std::string& key, const std::string& fallback) const {
    return has(key) ? str(key) : fallback;
  }

  double num(const std::string& key) const {
    const auto& v = at(key);
    return parse_number(v.text, v.line, key);
  }

  double num(const std::string& key, double fallback) const { return has(key) ? num(key) : fallback; }

  std::uint64_t integer(const std::string& key) const {
    const auto& v = at(key);
    if (!(!v.text.empty() && v.text.find_first_not_of("0123456789") == std::string::npos)) {
      fail(ErrorCode::parse, "line " + std::to_string(v.line) + ": '" + key + "' must be a nonnegative integer");
    }
    try {
      return std::stoull(v.text);
    } catch (const std::exception&) {
      fail(ErrorCode::parse, "line " + std::to_string(v.line) + ": '" + key + "' is out of range");
    }
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  std::vector<double> list(const std::string& key) const {
    const auto& v = at(key);
    std::vector<double> out;
    if (trim(v.text).empty()) return out;
    for (const auto& cell : split_csv_line(v.text)) out.push_back(parse_number(cell, v.line, key));
    return out;
  }

  std::vector<std::string> words(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& cell : split_csv_line(at(key).text)) out.push_back(trim(cell));
    return out;
  }

  /// Keys under `prefix.` (prefix stripped), in file order.
  std::vector<std::string> children(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& k : order_)
      if (k.size() > prefix.size() + 1 && k.compare(0, prefix.size() + 1, prefix + ".") == 0)
        out.push_back(k.substr(prefix.size() + 1));
    return out;
  }

  /// Rejects keys never read, except those under the given namespaces.
  void check_unused(const std::set<std::string>& ignored_prefixes) const {
    for (const auto& k : order_) {
      if (used_.count(k)) continue;
      const auto dot = k.find('.');
      if (dot != std::string::npos && ignored_prefixes.count(k.substr(0, dot))) continue;
      fail(ErrorCode::parse, "line " + std::to_string(values_.at(k).line) + ": unknown key '" + k + "'");
    }
  }

  const std::vector<std::string>& keys() const { return order_; }

 private:
  std::map<std::string, ConfigValue> values_;
  std::vector<std::string> order_;
  mutable std::set<std::string> used_;
};

inline CovariateSpec parse_covariate(const std::string& text, std::size_t line) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (!(open != std::string::npos && close == text.size() - 1)) {
    fail(ErrorCode::parse, "line " + std::to_string(line) + ": covariate '" + text + "' must look like normal(0,1)");
  }
  const std::string kind = trim(text.substr(0, open));
  std::vector<double> args;
  std::stringstream ss(text.substr(open + 1, close - open - 1));
  std::string cell;
  while (std::getline(ss, cell, ',')) args.push_back(parse_number(cell, line, "covariates"));
  CovariateSpec c;
  if (kind == "normal") c.kind = CovariateSpec::Kind::normal;
  else if (kind == "uniform") c.kind = CovariateSpec::Kind::uniform;
  else if (kind == "bernoulli") c.kind = CovariateSpec::Kind::bernoulli;
  else fail(ErrorCode::parse, "line " + std::to_string(line) + ": unknown covariate distribution '" + kind + "'");
  const std::size_t want = c.kind == CovariateSpec::Kind::bernoulli ? 1 : 2;
  if (args.size() != want) {
    fail(ErrorCode::parse, "line " + std::to_string(line) + ": '" + kind + "' takes " + std::to_string(want) +
                               " parameters");
  }
  c.a = args[0];
  if (want == 2) c.b = args[1];
  try {
    c.validate();
  } catch (const Error& e) {
    fail(ErrorCode::parse, "line " + std::to_string(line) + ": " + e.what());
  }
  return c;
}

/// Scenario plus the keys left for the caller (experiment.*, ope.*, sweep.*).
struct ScenarioFile {
  ScenarioConfig config;
  FlatConfig raw;
};

inline ScenarioFile parse_scenario(const FlatConfig& c) {
  ScenarioFile f;
  f.raw = c;
  ScenarioConfig& s = f.config;
  s.n = c.integer("n");
  s.seed = c.integer("seed", 1);
  if (c.has("covariates")) {
    const auto& v = c.at("covariates");
    std::string cur;
    int depth = 0;
    for (char ch : v.text + ",") {
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (ch == ',' && depth == 0) {
        s.covariates.push_back(parse_covariate(trim(cur), v.line));
        cur.clear();
      } else {
        cur += ch;
      }
    }
  }
  if (c.has("groups")) s.groups = c.words("groups");
  const std::string mech = c.str("group.mechanism", "logit");
  if (mech == "logit") {
    s.mechanism = GroupMechanism::logit;
    if (c.has("group.prior")) {
      const double p = c.num("group.prior");
      if (!(p > 0 && p < 1)) fail(ErrorCode::parse, "line " + std::to_string(c.at("group.prior").line) +
                                                    ": group.prior must lie in (0,1)");
      s.logit_intercept = std::log(p / (1.0 - p));
    }
    s.logit_intercept = c.num("group.logit_intercept", s.logit_intercept);
    if (c.has("group.logit_coef")) s.logit_coef = c.list("group.logit_coef");
  } else if (mech == "threshold") {
    s.mechanism = GroupMechanism::threshold;
    const auto& v = c.at("group.threshold_covariate");
    if (!(v.text.size() > 1 && v.text[0] == 'x')) {
      fail(ErrorCode::parse, "line " + std::to_string(v.line) +
                                 ": group.threshold_covariate must name a covariate like x1");
    }
    const double idx = parse_number(v.text.substr(1), v.line, "group.threshold_covariate");
    if (!(idx >= 1 && idx == std::floor(idx))) {
      fail(ErrorCode::parse, "line " + std::to_string(v.line) + ": covariate index must be a positive integer");
    }
    s.threshold_index = static_cast<std::size_t>(idx) - 1;
    s.threshold = c.num("group.threshold");
  } else {
    fail(ErrorCode::parse, "line " + std::to_string(c.at("group.mechanism").line) + ": unknown group mechanism '" +
                               mech + "'");
  }

  const std::string family = c.str("demand.family");
  auto per_group = [&](const std::string& prefix, double fallback) {
    GroupMap<double> m;
    for (const auto& g : s.groups) m[g] = c.num(prefix + "." + g, fallback);
    return m;
  };
  auto per_group_vec = [&](const std::string& prefix) {
    GroupMap<std::vector<double>> m;
    for (const auto& g : s.groups)
      m[g] = c.has(prefix + "." + g) ? c.list(prefix + "." + g) : std::vector<double>(s.dim(), 0.0);
    return m;
  };
  if (family == "logistic") {
    LogisticDemand m;
    m.intercept = c.num("demand.intercept", 0.0);
    m.gamma = c.has("demand.gamma") ? c.list("demand.gamma") : std::vector<double>(s.dim(), 0.0);
    m.beta = c.num("demand.beta");
    for (const auto& g : s.groups)
      if (c.has("demand.offset." + g)) m.group_offsets[g] = c.num("demand.offset." + g);
    s.model = m;
  } else if (family == "latent") {
    LatentValuationModel m;
    m.intercept = per_group("demand.location", c.num("demand.location", 0.0));
    m.coef = per_group_vec("demand.coef");
    m.noise.family = parse_noise_family(c.str("noise.family", "normal"));
    m.noise.scale = c.num("noise.scale", 1.0);
    s.model = m;
  } else if (family == "linear" || family == "partially_linear") {
    PartiallyLinearDemand m;
    m.beta = per_group("demand.slope", c.num("demand.slope", -1.0));
    LinearBaseline b;
    b.intercept = per_group("demand.baseline", c.num("demand.baseline", 1.0));
    b.coef = per_group_vec("demand.coef");
    m.baseline = b;
    s.model = m;
  } else {
    fail(ErrorCode::parse, "line " + std::to_string(c.at("demand.family").line) + ": unknown demand family '" +
                               family + "'");
  }

  if (c.has("prices.levels")) s.price_levels = c.list("prices.levels");
  if (c.has("prices.range")) {
    const auto r = c.list("prices.range");
    if (r.size() != 2) {
      fail(ErrorCode::parse, "line " + std::to_string(c.at("prices.range").line) + ": prices.range takes lo, hi");
    }
    s.price_range = std::make_pair(r[0], r[1]);
  }
  if (c.has("outcome.takeup_effect") || c.has("outcome.intercept") || c.has("outcome.coef")) {
    OutcomeModel o;
    o.intercept = c.num("outcome.intercept", 0.0);
    o.takeup_effect = c.num("outcome.takeup_effect", 0.0);
    if (c.has("outcome.coef")) o.coef = c.list("outcome.coef");
    s.outcome = o;
  }
  s.outcome_noise = c.num("outcome.noise", 0.0);
  c.check_unused({"experiment", "ope", "sweep"});
  try {
    s.validate();
  } catch (const Error& e) {
    fail(ErrorCode::parse, std::string("invalid scenario: ") + e.what());
  }
  return f;
}

inline ScenarioFile parse_scenario_file(const std::string& path) {
  return parse_scenario(FlatConfig::parse_file(path));
}

}  // namespace fairprice::io
