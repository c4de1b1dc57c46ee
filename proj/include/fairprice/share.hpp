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
#include <string>
#include <string_view>
#include <vector>

#include "fairprice/demand.hpp"
#include "fairprice/error.hpp"
#include "fairprice/optimize.hpp"
#include "fairprice/parallel.hpp"
#include "fairprice/policy.hpp"
#include "fairprice/record.hpp"

namespace fairprice {

enum class ShareScope { population, group };

inline std::string_view to_string(ShareScope s) { return s == ShareScope::population ? "population" : "group"; }

/// Market-share penalty lambda E[D(P)] (population) or lambda_a E[D(P)|A=a]
/// (group). In group scope the effective shift is lambda_a / rho_a; groups
/// without an entry in `group_lambda` use `lambda`.
struct SharePenalty {
  ShareScope scope = ShareScope::population;
  double lambda = 0.0;
  GroupMap<double> group_lambda;
  GroupMap<double> rho;

  double effective(std::string_view group) const {
    if (scope == ShareScope::population) return lambda;
    double l = lambda;
    if (const auto it = group_lambda.find(group); it != group_lambda.end()) l = it->second;
    const double r = detail::lookup(rho, group);
    require(r > 0, ErrorCode::invalid_argument, "group prior must be positive");
    return l / r;
  }

  /// Negative penalties are allowed (a take-up tax) but callers may want to warn.
  bool flagged() const {
    if (lambda < 0) return true;
    return std::any_of(group_lambda.begin(), group_lambda.end(), [](const auto& kv) { return kv.second < 0; });
  }
};

/// R''(p) = 2 D'(p) + p D''(p).
inline double revenue_curvature(const DemandCurve& curve, double p) {
  const DemandJet j = curve.jet(p);
  return 2.0 * j.slope + p * j.curvature;
}

inline double revenue_curvature(const DemandModel& model, const std::vector<double>& x, std::string_view group,
                                double p) {
  const DemandJet j = demand_jet(model, x, group, p);
  return 2.0 * j.slope + p * j.curvature;
}

/// Maximizer of (p + shift) D(p): root of h(p) = D(p) + (p + shift) D'(p), the
/// first-order condition 1/(p + shift) + D'/D = 0 cleared of its denominators.
/// A grid locates the bracket, then safeguarded Newton with bisection fallback.
inline double solve_share_price(const DemandCurve& curve, double shift, const PriceInterval& interval,
                                double tol = 1e-8) {
  interval.validate();
  auto h = [&](double p) {
    const DemandJet j = curve.jet(p);
    return j.value + (p + shift) * j.slope;
  };
  auto objective = [&](double p) { return (p + shift) * curve(p); };

  const int n = interval.grid_n;
  const double step = (interval.hi - interval.lo) / (n - 1);
  int best = 0;
  double best_v = -kInf;
  for (int i = 0; i < n; ++i) {
    const double v = objective(interval.lo + step * i);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  double lo = interval.lo + std::max(0, best - 1) * step;
  double hi = interval.lo + std::min(n - 1, best + 1) * step;
  double hlo = h(lo), hhi = h(hi);
  // Objective falling away from the lower edge (or rising into the upper one):
  // the maximizer over the interval is the edge itself.
  if (best == 0 && h(interval.lo) <= 0 && curve(interval.lo) > 0) return interval.lo;
  if (best == n - 1 && h(interval.hi) >= 0 && curve(interval.hi) > 0) return interval.hi;
  if (!(hlo >= 0 && hhi <= 0)) {
    lo = interval.lo;
    hi = interval.hi;
    hlo = h(lo);
    hhi = h(hi);
  }
  if (!(hlo >= 0 && hhi <= 0) || (hlo == 0 && hhi == 0)) {
    fail(ErrorCode::degenerate, "first-order condition has no sign change on [" + std::to_string(interval.lo) +
                                    ", " + std::to_string(interval.hi) + "]");
  }
  if (hlo == 0) hi = lo;
  if (hhi == 0) lo = hi;

  double p = std::clamp(interval.lo + best * step, lo, hi);
  for (int it = 0; it < 200 && hi - lo > 0; ++it) {
    const DemandJet j = curve.jet(p);
    const double hp = j.value + (p + shift) * j.slope;
    if (hp == 0) {
      lo = hi = p;
      break;
    }
    if (hp > 0) {
      lo = p;
    } else {
      hi = p;
    }
    const double dh = 2.0 * j.slope + (p + shift) * j.curvature;
    double next = dh < 0 ? p - hp / dh : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double moved = std::abs(next - p);
    p = next;
    if (moved <= std::min(tol, 4e-16 * std::max(1.0, std::abs(p)))) break;
    if (hi - lo <= 4e-16 * std::max(1.0, std::abs(p))) break;
  }
  require(curve(p) > 0, ErrorCode::degenerate, "demand is zero at the penalized optimum");
  return p;
}

inline double solve_share_price(const DemandModel& model, const std::vector<double>& x, std::string_view group,
                                const SharePenalty& penalty, const PriceInterval& interval) {
  const DemandCurve curve = DemandCurve::at(model, x, std::string(group));
  return solve_share_price(curve, penalty.effective(group), interval);
}

/// Attribute-blind price at x: penalty applied to the membership mixture. Group
/// scope is not defined for a single blind price.
inline double solve_share_price(const DemandModel& model, const std::vector<double>& x,
                                const std::vector<std::string>& groups, const std::vector<double>& membership,
                                const SharePenalty& penalty, const PriceInterval& interval) {
  require(penalty.scope == ShareScope::population, ErrorCode::invalid_argument,
          "group-scope share penalties need attribute-based prices");
  const DemandCurve curve = DemandCurve::blind(model, x, groups, membership);
  return solve_share_price(curve, penalty.lambda, interval);
}

/// d p*(lambda) / d lambda at lambda = 0.
struct SensitivityEntry {
  double price = 0.0;
  double curvature = 0.0;
  double demand = 0.0;
  double analytic = 0.0;           // D(p*) / (p* R''(p*)), divided by rho_a in group scope
  double printed = 0.0;            // 1 / (R''(p*) p*^2), divided by rho_a in group scope
  double finite_difference = 0.0;  // central, step h
  double discrepancy = 0.0;        // |analytic - finite_difference|
};

inline SensitivityEntry sensitivity_at_zero(const DemandCurve& curve, const PriceInterval& interval,
                                            ShareScope scope = ShareScope::population, double rho = 1.0,
                                            double h = 1e-4) {
  require(scope == ShareScope::population || (rho > 0 && rho <= 1), ErrorCode::invalid_argument,
          "group prior must lie in (0, 1]");
  const double scale = scope == ShareScope::group ? 1.0 / rho : 1.0;
  SensitivityEntry e;
  e.price = solve_share_price(curve, 0.0, interval);
  const double width = interval.hi - interval.lo;
  require(e.price > interval.lo + 1e-6 * width && e.price < interval.hi - 1e-6 * width && e.price > 0,
          ErrorCode::degenerate, "optimal price lies on the boundary of the interval");
  e.curvature = revenue_curvature(curve, e.price);
  require(e.curvature != 0 && std::isfinite(e.curvature), ErrorCode::degenerate,
          "revenue curvature is zero at the optimum");
  e.demand = curve(e.price);
  e.analytic = scale * e.demand / (e.price * e.curvature);
  e.printed = scale / (e.curvature * e.price * e.price);
  const double up = solve_share_price(curve, scale * h, interval);
  const double down = solve_share_price(curve, -scale * h, interval);
  e.finite_difference = (up - down) / (2.0 * h);
  e.discrepancy = std::abs(e.analytic - e.finite_difference);
  return e;
}

struct FrontierRow {
  double lambda = 0.0;
  TablePolicy prices;
  double revenue = 0.0;
  double total_access = 0.0;
  std::vector<double> access;      // E[D(P) | A=g]
  std::vector<double> price_mean;  // E[P | A=g]
};

/// Penalized prices and their revenue/access for each lambda, sorted by lambda.
/// Group scope applies lambda to every group, so each group is shifted by
/// lambda / rho_g; it requires attribute-based prices.
inline std::vector<FrontierRow> share_frontier(const DemandModel& model, const Population& pop, ShareScope scope,
                                               std::vector<double> lambdas, const PriceInterval& interval,
                                               bool attribute_based = true) {
  require(!lambdas.empty(), ErrorCode::invalid_argument, "lambda grid is empty");
  require(pop.has_support(), ErrorCode::missing_data, "share frontier needs a discrete support");
  require(attribute_based || scope == ShareScope::population, ErrorCode::invalid_argument,
          "group-scope share penalties need attribute-based prices");
  for (double l : lambdas) require(std::isfinite(l), ErrorCode::invalid_argument, "lambda must be finite");
  pop.validate();
  std::sort(lambdas.begin(), lambdas.end());
  const std::size_t G = pop.groups.size();

  auto solve_row = [&](double lambda) {
    SharePenalty pen{scope, lambda, {}, {}};
    for (std::size_t g = 0; g < G; ++g) pen.rho[pop.groups[g]] = pop.rho[g];
    FrontierRow row;
    row.lambda = lambda;
    row.prices.attribute_based = attribute_based;
    for (std::size_t i = 0; i < pop.support.size(); ++i) {
      const auto& pt = pop.support[i];
      if (attribute_based) {
        std::vector<double> prices(G, NAN);
        for (std::size_t g = 0; g < G; ++g) {
          if (pt.membership[g] == 0.0) continue;
          prices[g] = solve_share_price(model, pt.x, pop.groups[g], pen, interval);
        }
        row.prices.prices.push_back(std::move(prices));
      } else {
        row.prices.prices.push_back({solve_share_price(model, pt.x, pop.groups, pt.membership, pen, interval)});
      }
    }
    const ObjectiveValue v = scalarized_objective(row.prices, model, pop, ScalarizationWeights{});
    row.revenue = v.revenue;
    row.total_access = v.total_access;
    row.access = v.access;
    row.price_mean = v.mean_price;
    return row;
  };

  const auto chunks = parallel_chunks<std::vector<FrontierRow>>(lambdas.size(), [&](std::size_t lo, std::size_t hi) {
    std::vector<FrontierRow> rows;
    for (std::size_t k = lo; k < hi; ++k) rows.push_back(solve_row(lambdas[k]));
    return rows;
  });
  std::vector<FrontierRow> rows;
  for (const auto& c : chunks) rows.insert(rows.end(), c.begin(), c.end());
  return rows;
}

}  // namespace fairprice
