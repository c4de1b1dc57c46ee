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
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "fairprice/demand.hpp"
#include "fairprice/error.hpp"
#include "fairprice/policy.hpp"
#include "fairprice/record.hpp"

namespace fairprice {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct PriceInterval {
  double lo = 0.0;
  double hi = 1.0;
  int grid_n = 4096;

  void validate() const {
    require(std::isfinite(lo) && std::isfinite(hi) && lo >= 0 && lo < hi, ErrorCode::invalid_argument,
            "price interval needs 0 <= lo < hi");
    require(grid_n >= 16, ErrorCode::invalid_argument, "price grid needs at least 16 points");
  }
};

/// Weights of the scalarized welfare objective.
struct ScalarizationWeights {
  double lambda1 = 0.0;  // on sum_a E[D(P) | A=a]
  double lambda2 = 0.0;  // on E[Y(P)]
  double gamma = kInf;   // parity cap
  double cost = 0.0;     // unit cost in the break-even constraint
};

/// Revenue-maximizing price for D = dbar + beta p.
inline double monopoly_price_linear(double dbar, double beta) {
  require(beta < 0, ErrorCode::upward_sloping_demand, "linear demand needs a negative price slope");
  return -dbar / (2.0 * beta);
}

/// Golden-section maximization of a unimodal function on [lo, hi].
template <typename F>
double golden_section_max(F&& f, double lo, double hi, double tol = 1e-8) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct RevenueSearch {
  double tol = 1e-8;
  double shift = 0.0;      // maximize (p + shift) D(p)
  bool unimodal = false;   // log-concave demand: skip the grid
};

struct RevenueOptimum {
  double price = 0.0;
  double objective = 0.0;  // (p + shift) D(p)
  double revenue = 0.0;    // p D(p)
};

/// Maximizes (p + shift) D(p) over the interval. Golden section when the curve
/// is known to be unimodal, otherwise a dense grid refined once around its best
/// cell.
inline RevenueOptimum maximize_revenue_1d(const std::function<double(double)>& demand,
                                          const PriceInterval& interval, const RevenueSearch& search = {}) {
  interval.validate();
  auto objective = [&](double p) { return (p + search.shift) * demand(p); };
  double lo = interval.lo, hi = interval.hi;
  double best_grid = -kInf;
  if (!search.unimodal) {
    const int n = interval.grid_n;
    int best = 0;
    for (int i = 0; i < n; ++i) {
      const double p = interval.lo + (interval.hi - interval.lo) * i / (n - 1);
      const double v = objective(p);
      if (v > best_grid) {
        best_grid = v;
        best = i;
      }
    }
    const double step = (interval.hi - interval.lo) / (n - 1);
    lo = std::max(interval.lo, interval.lo + (best - 1) * step);
    hi = std::min(interval.hi, interval.lo + (best + 1) * step);
  }
  double p = golden_section_max(objective, lo, hi, search.tol);
  double v = objective(p);
  for (double edge : {interval.lo, interval.hi}) {
    const double ve = objective(edge);
    if (ve > v) {
      v = ve;
      p = edge;
    }
  }
  if (!(v > 0)) {
    fail(ErrorCode::degenerate, "revenue is nonpositive at every price in the interval");
  }
  return {p, v, p * demand(p)};
}

/// Linear welfare outcome E[Y | x, p] = intercept + coef . x + takeup_effect D(p|x,a).
struct OutcomeModel {
  double intercept = 0.0;
  std::vector<double> coef;
  double takeup_effect = 0.0;

  double expected(const std::vector<double>& x, double demand) const {
    double y = intercept + takeup_effect * demand;
    if (!coef.empty()) y += detail::dot(coef, x);
    return y;
  }
};

struct ObjectiveValue {
  double value = 0.0;
  double revenue = 0.0;
  std::vector<double> access;      // E[D(P) | A=g]
  std::vector<double> mean_price;  // E[P | A=g]
  double total_access = 0.0;
  double outcome = 0.0;
  double parity_slack = kInf;      // gamma - (E[P|a] - E[P|b])
  double breakeven_slack = 0.0;    // E[D(P)(P - c)]
};

/// Scalarized objective E[P D(P)] + lambda1 sum_a E[D(P)|A=a] + lambda2 E[Y(P)]
/// and the slacks of the parity and break-even constraints. Expectations run
/// over the discrete support when the population has one, otherwise over the
/// weight-normalized records.
inline ObjectiveValue scalarized_objective(const PricingPolicy& policy, const DemandModel& model,
                                           const Population& pop, const ScalarizationWeights& w,
                                           const std::optional<OutcomeModel>& outcome = std::nullopt) {
  const std::size_t G = pop.groups.size();
  require(G >= 2, ErrorCode::invalid_argument, "objective needs at least two groups");
  ObjectiveValue out;
  out.access.assign(G, 0.0);
  out.mean_price.assign(G, 0.0);
  std::vector<double> group_mass(G, 0.0);
  double total_mass = 0.0;
  auto accumulate = [&](double mass, std::size_t g, const std::vector<double>& x, double price) {
    const double d = eval_demand(model, x, pop.groups[g], price);
    out.revenue += mass * price * d;
    out.total_access += mass * d;
    out.breakeven_slack += mass * d * (price - w.cost);
    if (outcome) out.outcome += mass * outcome->expected(x, d);
    out.access[g] += mass * d;
    out.mean_price[g] += mass * price;
    group_mass[g] += mass;
    total_mass += mass;
  };

  if (pop.has_support()) {
    for (std::size_t i = 0; i < pop.support.size(); ++i) {
      if (pop.support[i].membership.size() != G) {
        fail(ErrorCode::missing_data,
             "membership probabilities are missing at support point " + std::to_string(i) +
                 "; group-conditional terms cannot be formed");
      }
      for (std::size_t g = 0; g < G; ++g) {
        const double mass = pop.joint(i, g);
        if (mass == 0.0) continue;
        accumulate(mass, g, pop.support[i].x, policy_price(policy, pop, i, g));
      }
    }
  } else {
    require(!pop.records.empty(), ErrorCode::missing_data, "population has neither support nor records");
    for (std::size_t i = 0; i < pop.records.size(); ++i) {
      const Record& r = pop.records[i];
      accumulate(r.weight, pop.group_index(r.group), r.covariates, policy_price(policy, r, i, &pop.groups));
    }
  }
  require(total_mass > 0, ErrorCode::degenerate, "population has zero mass");
  double access_sum = 0.0;
  for (std::size_t g = 0; g < G; ++g) {
    if (group_mass[g] <= 0) fail(ErrorCode::empty_group, "group '" + pop.groups[g] + "' has no mass");
    out.access[g] /= group_mass[g];
    out.mean_price[g] /= group_mass[g];
    access_sum += out.access[g];
  }
  out.revenue /= total_mass;
  out.total_access /= total_mass;
  out.breakeven_slack /= total_mass;
  out.outcome /= total_mass;
  out.value = out.revenue + w.lambda1 * access_sum + w.lambda2 * out.outcome;
  out.parity_slack = w.gamma - (out.mean_price[0] - out.mean_price[1]);
  return out;
}

/// p -> E[D(p | X, A)] over the support, or E[D(p | X, A) | A = group].
inline std::function<double(double)> aggregate_demand(const DemandModel& model, const Population& pop,
                                                      std::optional<std::size_t> group = std::nullopt) {
  require(pop.has_support(), ErrorCode::missing_data, "aggregate demand needs a discrete support");
  return [&model, &pop, group](double p) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < pop.support.size(); ++i) {
      for (std::size_t g = 0; g < pop.groups.size(); ++g) {
        if (group && *group != g) continue;
        const double m = pop.joint(i, g);
        if (m == 0.0) continue;
        num += m * demand_jet(model, pop.support[i].x, pop.groups[g], p).value;
        den += m;
      }
    }
    return den > 0 ? num / den : 0.0;
  };
}

}  // namespace fairprice
