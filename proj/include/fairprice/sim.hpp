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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairprice/demand.hpp"
#include "fairprice/error.hpp"
#include "fairprice/optimize.hpp"
#include "fairprice/parallel.hpp"
#include "fairprice/policy.hpp"
#include "fairprice/record.hpp"
#include "fairprice/rng.hpp"

namespace fairprice {

struct CovariateSpec {
  enum class Kind { normal, uniform, bernoulli };
  Kind kind = Kind::normal;
  double a = 0.0;  // mean / lower bound / success probability
  double b = 1.0;  // standard deviation / upper bound / unused

  void validate() const {
    switch (kind) {
      case Kind::normal:
        require(std::isfinite(a) && std::isfinite(b) && b >= 0, ErrorCode::invalid_argument,
                "normal covariate needs a finite mean and sd >= 0");
        break;
      case Kind::uniform:
        require(std::isfinite(a) && std::isfinite(b) && a < b, ErrorCode::invalid_argument,
                "uniform covariate needs lo < hi");
        break;
      case Kind::bernoulli:
        require(a >= 0 && a <= 1, ErrorCode::invalid_argument, "bernoulli covariate needs p in [0,1]");
        break;
    }
  }

  double draw(Rng& rng) const {
    switch (kind) {
      case Kind::normal: return a + b * rng.normal();
      case Kind::uniform: return rng.uniform(a, b);
      case Kind::bernoulli: return rng.bernoulli(a) ? 1.0 : 0.0;
    }
    return 0.0;
  }
};

/// logit: P(A = groups[0] | x) = sigmoid(logit_intercept + logit_coef . x).
/// threshold: A = groups[0] exactly when x[threshold_index] < threshold.
enum class GroupMechanism { logit, threshold };

struct ScenarioConfig {
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::vector<CovariateSpec> covariates;
  std::vector<std::string> groups{"a", "b"};
  GroupMechanism mechanism = GroupMechanism::logit;
  double logit_intercept = 0.0;
  std::vector<double> logit_coef;
  std::size_t threshold_index = 0;
  double threshold = 0.0;
  DemandModel model = LogisticDemand{};
  std::vector<double> price_levels;                   // randomized offer set
  std::optional<std::pair<double, double>> price_range;  // continuous uniform offers instead
  std::optional<OutcomeModel> outcome;
  double outcome_noise = 0.0;

  std::size_t dim() const { return covariates.size(); }

  void validate() const {
    require(n >= 2, ErrorCode::invalid_argument, "scenario needs n >= 2");
    require(groups.size() == 2 && groups[0] != groups[1], ErrorCode::invalid_argument,
            "scenario needs two distinct group labels");
    for (const auto& c : covariates) c.validate();
    if (mechanism == GroupMechanism::logit) {
      require(logit_coef.empty() || logit_coef.size() == dim(), ErrorCode::dimension_mismatch,
              "membership coefficients must match the covariate dimension");
    } else {
      require(threshold_index < dim(), ErrorCode::invalid_argument, "threshold covariate index out of range");
    }
    require(price_levels.empty() != !price_range.has_value(), ErrorCode::invalid_argument,
            "scenario needs exactly one of price levels or a price range");
    if (price_range) {
      require(price_range->first >= 0 && price_range->first < price_range->second, ErrorCode::invalid_argument,
              "price range needs 0 <= lo < hi");
    }
    for (std::size_t i = 0; i < price_levels.size(); ++i) {
      require(price_levels[i] > 0 && std::isfinite(price_levels[i]), ErrorCode::invalid_argument,
              "price levels must be positive");
      for (std::size_t j = 0; j < i; ++j)
        require(price_levels[i] != price_levels[j], ErrorCode::invalid_argument, "price levels must be distinct");
    }
    require(outcome_noise >= 0, ErrorCode::invalid_argument, "outcome noise must be nonnegative");
    if (const auto* lat = std::get_if<LatentValuationModel>(&model)) {
      require(std::isfinite(lat->noise.scale) && lat->noise.scale >= 0, ErrorCode::invalid_argument,
              "noise scale must be nonnegative");
    } else if (const auto* pl = std::get_if<PartiallyLinearDemand>(&model)) {
      pl->validate();
    } else {
      require(std::get<LogisticDemand>(model).beta < 0, ErrorCode::invalid_argument,
              "logistic scenario needs a negative price coefficient");
    }
  }

  /// P(A = groups[0] | x).
  double membership_a(const std::vector<double>& x) const {
    if (mechanism == GroupMechanism::threshold) return x.at(threshold_index) < threshold ? 1.0 : 0.0;
    double z = logit_intercept;
    if (!logit_coef.empty()) z += detail::dot(logit_coef, x);
    return sigmoid(z);
  }

  /// Offer-range width used to standardize prices.
  std::pair<double, double> offer_range() const {
    if (price_range) return *price_range;
    const auto [lo, hi] = std::minmax_element(price_levels.begin(), price_levels.end());
    return {*lo, *hi};
  }
};

/// Records carry the latent valuation (except for the partially linear family)
/// and the population's support is the sample itself with mass 1/n and the
/// true membership probabilities.
inline Population generate_population(const ScenarioConfig& cfg) {
  cfg.validate();
  const Rng root(cfg.seed);
  const std::size_t width = std::to_string(cfg.n).size();
  auto make = [&](std::size_t i, SupportPoint& pt) {
    Rng rng = root.split(i);
    Record r;
    std::string id = std::to_string(i + 1);
    r.id = std::string(width - std::min(width, id.size()), '0') + id;
    r.covariates.reserve(cfg.dim());
    for (const auto& c : cfg.covariates) r.covariates.push_back(c.draw(rng));
    const double pa = cfg.membership_a(r.covariates);
    r.group = rng.uniform() < pa ? cfg.groups[0] : cfg.groups[1];
    const double price = cfg.price_range ? rng.uniform(cfg.price_range->first, cfg.price_range->second)
                                         : cfg.price_levels[rng.index(cfg.price_levels.size())];
    r.price = price;
    if (std::holds_alternative<PartiallyLinearDemand>(cfg.model)) {
      r.demand = sample_demand(cfg.model, r.covariates, r.group, price, rng);
    } else {
      r.valuation = draw_valuation(cfg.model, r.covariates, r.group, rng);
      r.demand = *r.valuation >= price ? 1.0 : 0.0;
    }
    if (cfg.outcome) {
      r.outcome = cfg.outcome->expected(r.covariates, *r.demand) + cfg.outcome_noise * rng.normal();
    }
    pt.x = r.covariates;
    pt.mass = 1.0 / static_cast<double>(cfg.n);
    pt.membership = {pa, 1.0 - pa};
    return r;
  };
  struct Chunk {
    std::vector<Record> records;
    std::vector<SupportPoint> support;
  };
  const auto chunks = parallel_chunks<Chunk>(cfg.n, [&](std::size_t lo, std::size_t hi) {
    Chunk c;
    for (std::size_t i = lo; i < hi; ++i) {
      SupportPoint pt;
      c.records.push_back(make(i, pt));
      c.support.push_back(std::move(pt));
    }
    return c;
  });
  Population pop;
  pop.groups = cfg.groups;
  for (const auto& c : chunks) {
    pop.records.insert(pop.records.end(), c.records.begin(), c.records.end());
    pop.support.insert(pop.support.end(), c.support.begin(), c.support.end());
  }
  // Masses are renormalized so they sum to 1 in floating point.
  double total = 0.0;
  for (const auto& s : pop.support) total += s.mass;
  for (auto& s : pop.support) s.mass /= total;
  pop.rho = pop.implied_rho();
  return pop;
}

struct ExperimentOptions {
  PriceInterval interval{0.0, 1.0, 256};
  int bins = 25;
};

struct SchemeResult {
  std::string scheme;
  TablePolicy policy;
  double revenue = 0.0;
  double total_access = 0.0;
  std::vector<double> access;
  std::vector<double> mean_price;
  std::vector<std::vector<double>> histogram;  // [group][bin], mass fractions within group
};

struct ExperimentResult {
  std::vector<std::string> groups;
  double bin_lo = 0.0;
  double bin_hi = 0.0;
  std::vector<SchemeResult> schemes;  // uniform, group, personalized, personalized_attribute

  const SchemeResult& scheme(std::string_view name) const {
    for (const auto& s : schemes)
      if (s.scheme == name) return s;
    fail(ErrorCode::invalid_argument, "unknown scheme '" + std::string(name) + "'");
  }
};

/// Revenue-optimal prices for four policy classes under one model: a uniform
/// price, one price per group p*(A), attribute-blind personalized p*(X) and
/// attribute-based personalized p*(X, A).
inline ExperimentResult run_pricing_experiment(const DemandModel& model, const Population& pop,
                                               const ExperimentOptions& opt = {}) {
  require(pop.has_support(), ErrorCode::missing_data, "experiment needs a discrete support");
  require(opt.bins >= 1, ErrorCode::invalid_argument, "histogram needs at least one bin");
  pop.validate();
  const std::size_t G = pop.groups.size();
  const std::size_t N = pop.support.size();
  std::vector<double> gm(G, 0.0);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t g = 0; g < G; ++g) gm[g] += pop.joint(i, g);
  for (std::size_t g = 0; g < G; ++g)
    if (gm[g] <= 0) fail(ErrorCode::empty_group, "group '" + pop.groups[g] + "' has no mass");

  ExperimentResult out;
  out.groups = pop.groups;
  out.bin_lo = opt.interval.lo;
  out.bin_hi = opt.interval.hi;

  auto finish = [&](std::string name, TablePolicy table) {
    SchemeResult s;
    s.scheme = std::move(name);
    // Held as the variant once; passing the table directly would copy it per lookup.
    PricingPolicy policy = std::move(table);
    const ObjectiveValue v = scalarized_objective(policy, model, pop, ScalarizationWeights{});
    s.revenue = v.revenue;
    s.total_access = v.total_access;
    s.access = v.access;
    s.mean_price = v.mean_price;
    s.histogram.assign(G, std::vector<double>(opt.bins, 0.0));
    const double w = (out.bin_hi - out.bin_lo) / opt.bins;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t g = 0; g < G; ++g) {
        const double m = pop.joint(i, g);
        if (m == 0.0) continue;
        const double p = policy_price(policy, pop, i, g);
        const int bin = std::clamp(static_cast<int>(std::floor((p - out.bin_lo) / w)), 0, opt.bins - 1);
        s.histogram[g][bin] += m / gm[g];
      }
    s.policy = std::get<TablePolicy>(std::move(policy));
    out.schemes.push_back(std::move(s));
  };

  const double uniform = maximize_revenue_1d(aggregate_demand(model, pop), opt.interval).price;
  finish("uniform", TablePolicy{false, std::vector<std::vector<double>>(N, {uniform})});

  std::vector<double> per_group(G);
  for (std::size_t g = 0; g < G; ++g)
    per_group[g] = maximize_revenue_1d(aggregate_demand(model, pop, g), opt.interval).price;
  finish("group", TablePolicy{true, std::vector<std::vector<double>>(N, per_group)});

  using Rows = std::vector<std::vector<double>>;
  const auto blind_chunks = parallel_chunks<Rows>(N, [&](std::size_t lo, std::size_t hi) {
    Rows rows;
    for (std::size_t i = lo; i < hi; ++i) {
      const DemandCurve c = DemandCurve::blind(model, pop.support[i].x, pop.groups, pop.support[i].membership);
      rows.push_back({maximize_revenue_1d([&c](double p) { return c(p); }, opt.interval).price});
    }
    return rows;
  });
  TablePolicy blind{false, {}};
  for (const auto& c : blind_chunks) blind.prices.insert(blind.prices.end(), c.begin(), c.end());
  finish("personalized", std::move(blind));

  const auto based_chunks = parallel_chunks<Rows>(N, [&](std::size_t lo, std::size_t hi) {
    Rows rows;
    for (std::size_t i = lo; i < hi; ++i) {
      std::vector<double> row(G, NAN);
      for (std::size_t g = 0; g < G; ++g) {
        if (pop.support[i].membership[g] == 0.0) continue;
        const auto& x = pop.support[i].x;
        const auto& label = pop.groups[g];
        row[g] = maximize_revenue_1d([&](double p) { return eval_demand(model, x, label, p); }, opt.interval).price;
      }
      rows.push_back(std::move(row));
    }
    return rows;
  });
  TablePolicy based{true, {}};
  for (const auto& c : based_chunks) based.prices.insert(based.prices.end(), c.begin(), c.end());
  finish("personalized_attribute", std::move(based));
  return out;
}

}  // namespace fairprice
