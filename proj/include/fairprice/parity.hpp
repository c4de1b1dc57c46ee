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

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairprice/demand.hpp"
#include "fairprice/error.hpp"
#include "fairprice/optimize.hpp"
#include "fairprice/policy.hpp"
#include "fairprice/record.hpp"

namespace fairprice {

enum class ParityMode { attribute_based, attribute_blind };

inline std::string_view to_string(ParityMode m) {
  return m == ParityMode::attribute_based ? "attribute_based" : "attribute_blind";
}

struct PriceEntry {
  std::size_t x_index = 0;
  std::optional<std::string> group;  // absent for attribute-blind prices
  double price = 0.0;
};

/// Marginal-parity-constrained prices. `lambda_star` is expressed against the
/// reported xi, so every price equals (-Dbar + xi * lambda_star) / (2 beta),
/// with xi and beta replaced by their conditional means given X in blind mode.
struct ParitySolution {
  ParityMode mode = ParityMode::attribute_based;
  double gamma = kInf;
  double lambda_star = 0.0;
  GroupMap<double> xi;
  std::vector<PriceEntry> prices;
  bool active = false;        // the parity cap binds
  double disparity = 0.0;     // realized E[P|a] - E[P|b]

  /// Tabulated prices, attribute-based rows indexed by group position.
  TablePolicy policy(const Population& pop) const {
    TablePolicy t;
    t.attribute_based = mode == ParityMode::attribute_based;
    t.prices.assign(pop.support.size(), std::vector<double>(t.attribute_based ? pop.groups.size() : 1, NAN));
    for (const auto& e : prices) {
      const std::size_t col = e.group ? pop.group_index(*e.group) : 0;
      t.prices.at(e.x_index).at(col) = e.price;
    }
    return t;
  }

  double price(std::size_t x_index, std::optional<std::string_view> group = std::nullopt) const {
    for (const auto& e : prices) {
      if (e.x_index != x_index) continue;
      if (!group || !e.group || *e.group == *group) return e.price;
    }
    fail(ErrorCode::invalid_argument, "no price for support point " + std::to_string(x_index));
  }
};

namespace detail {

inline void require_binary(const Population& pop) {
  require(pop.groups.size() == 2, ErrorCode::invalid_argument,
          "closed-form parity pricing compares exactly two groups");
}

/// Per-cell ingredients of the closed forms.
struct LinearCells {
  std::vector<std::array<double, 2>> dbar;  // Dbar(x_i, g)
  std::array<double, 2> beta{};
  std::array<double, 2> xi{};
};

inline LinearCells linear_cells(const PartiallyLinearDemand& model, const Population& pop) {
  require_binary(pop);
  require(pop.has_support(), ErrorCode::missing_data, "parity pricing needs a discrete support");
  pop.validate();
  model.validate();
  LinearCells c;
  for (std::size_t g = 0; g < 2; ++g) {
    c.beta[g] = model.slope(pop.groups[g]);
  }
  c.xi = {1.0 / pop.rho[0], -1.0 / pop.rho[1]};
  c.dbar.resize(pop.support.size());
  for (std::size_t i = 0; i < pop.support.size(); ++i)
    for (std::size_t g = 0; g < 2; ++g) c.dbar[i][g] = model.baseline_at(pop.support[i].x, pop.groups[g]);
  return c;
}

}  // namespace detail

/// xi(A) = I[A=a]/rho_a - I[A=b]/rho_b for the two groups in `groups`.
inline double xi(std::string_view group, const std::vector<std::string>& groups, const std::vector<double>& rho) {
  require(groups.size() == 2 && rho.size() == 2, ErrorCode::invalid_argument,
          "xi is defined for exactly two groups");
  require(rho[0] > 0 && rho[1] > 0, ErrorCode::invalid_argument, "group priors must be positive");
  if (group == groups[0]) return 1.0 / rho[0];
  if (group == groups[1]) return -1.0 / rho[1];
  fail(ErrorCode::unknown_group, "unknown group label '" + std::string(group) + "'");
}

/// Prices of the Lagrangian relaxation at multiplier `lambda`.
inline ParitySolution parity_prices(const PartiallyLinearDemand& model, const Population& pop, ParityMode mode,
                                    double lambda) {
  const auto c = detail::linear_cells(model, pop);
  ParitySolution s;
  s.mode = mode;
  s.lambda_star = lambda;
  s.xi = {{pop.groups[0], c.xi[0]}, {pop.groups[1], c.xi[1]}};
  double disparity = 0.0;
  for (std::size_t i = 0; i < pop.support.size(); ++i) {
    const auto& pt = pop.support[i];
    if (mode == ParityMode::attribute_based) {
      for (std::size_t g = 0; g < 2; ++g) {
        const double p = (-c.dbar[i][g] + c.xi[g] * lambda) / (2.0 * c.beta[g]);
        s.prices.push_back({i, pop.groups[g], p});
        disparity += pop.joint(i, g) * c.xi[g] * p;
      }
    } else {
      const double dbar = pt.membership[0] * c.dbar[i][0] + pt.membership[1] * c.dbar[i][1];
      const double beta = pt.membership[0] * c.beta[0] + pt.membership[1] * c.beta[1];
      const double m = pt.membership[0] * c.xi[0] + pt.membership[1] * c.xi[1];
      const double p = (-dbar + m * lambda) / (2.0 * beta);
      s.prices.push_back({i, std::nullopt, p});
      disparity += pt.mass * m * p;
    }
  }
  s.disparity = disparity;
  return s;
}

namespace detail {

/// Shared solver: lambda zero when the cap is slack, otherwise the root of the
/// linear equality E[p(lambda) xi] = sigma * gamma.
inline ParitySolution solve_parity(const PartiallyLinearDemand& model, const Population& pop, double gamma,
                                   ParityMode mode) {
  require(!std::isnan(gamma) && gamma >= 0, ErrorCode::invalid_argument, "parity cap must be nonnegative");
  ParitySolution free = parity_prices(model, pop, mode, 0.0);
  free.gamma = gamma;
  // Rounding slack: a disparity that is zero in exact arithmetic (e.g. blind
  // prices when membership never departs from rho) must not trigger the cap.
  double magnitude = 0.0;
  for (const auto& e : free.prices) magnitude = std::max(magnitude, std::abs(e.price));
  const double noise = 1e-12 * (1.0 + magnitude) * (1.0 / pop.rho[0] + 1.0 / pop.rho[1]);
  if (std::abs(free.disparity) <= gamma + noise) return free;

  const auto c = linear_cells(model, pop);
  // Relabel so the higher-priced group plays "a".
  const double sigma = free.disparity > 0 ? 1.0 : -1.0;
  double num = sigma * gamma, den = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < pop.support.size(); ++i) {
    const auto& pt = pop.support[i];
    if (mode == ParityMode::attribute_based) {
      for (std::size_t g = 0; g < 2; ++g) {
        const double w = pop.joint(i, g);
        num += w * c.xi[g] * c.dbar[i][g] / (2.0 * c.beta[g]);
        den += w * c.xi[g] * c.xi[g] / (2.0 * c.beta[g]);
      }
    } else {
      const double dbar = pt.membership[0] * c.dbar[i][0] + pt.membership[1] * c.dbar[i][1];
      const double beta = pt.membership[0] * c.beta[0] + pt.membership[1] * c.beta[1];
      const double m = pt.membership[0] * c.xi[0] + pt.membership[1] * c.xi[1];
      num += pt.mass * m * dbar / (2.0 * beta);
      den += pt.mass * m * m / (2.0 * beta);
      scale += pt.mass * (c.xi[0] * c.xi[0] + c.xi[1] * c.xi[1]);
    }
  }
  if (mode == ParityMode::attribute_blind) {
    double em2 = 0.0;
    for (const auto& pt : pop.support) {
      const double m = pt.membership[0] * c.xi[0] + pt.membership[1] * c.xi[1];
      em2 += pt.mass * m * m;
    }
    if (em2 <= 1e-14 * scale) {
      fail(ErrorCode::unenforceable_constraint,
           "E[E[xi(A)|X]^2] = 0: membership carries no group information, so attribute-blind prices "
           "cannot move the marginal disparity");
    }
  }
  ParitySolution s = parity_prices(model, pop, mode, num / den);
  s.gamma = gamma;
  s.active = true;
  return s;
}

}  // namespace detail

/// Revenue-optimal attribute-based prices p(x, a) subject to |E[P|a] - E[P|b]| <= gamma.
inline ParitySolution solve_attribute_based_parity(const PartiallyLinearDemand& model, const Population& pop,
                                                   double gamma) {
  return detail::solve_parity(model, pop, gamma, ParityMode::attribute_based);
}

/// Revenue-optimal attribute-blind prices p(x) under the same cap.
inline ParitySolution solve_attribute_blind_parity(const PartiallyLinearDemand& model, const Population& pop,
                                                   double gamma) {
  return detail::solve_parity(model, pop, gamma, ParityMode::attribute_blind);
}

inline double expected_revenue(const PricingPolicy& policy, const DemandModel& model, const Population& pop) {
  return scalarized_objective(policy, model, pop, ScalarizationWeights{}).revenue;
}

/// Who gains from attribute-based over attribute-blind pricing at Gamma = 0,
/// when groups share Dbar(x) and beta.
struct WhoWinsReport {
  std::size_t x_index = 0;
  double lambda_based = 0.0;  // lambda*_{xa}
  double lambda_blind = 0.0;  // lambda*_x
  double ratio = 0.0;         // lambda*_{xa} / lambda*_x
  double divergence = 0.0;    // P(a|x) - (rho_a/rho_b) P(b|x)
  bool printed_condition = false;  // ratio < divergence
  int predicted_sign_a = 0;   // sign of p*(x,a;0) - p*(x;0)
  int predicted_sign_b = 0;   // sign of p*(x,b;0) - p*(x;0)
  double direct_diff_a = 0.0;
  double direct_diff_b = 0.0;
};

namespace detail {
inline int sign_of(double v, double tol = 1e-12) { return v > tol ? 1 : (v < -tol ? -1 : 0); }
}  // namespace detail

inline WhoWinsReport whowins(const PartiallyLinearDemand& model, const Population& pop, std::size_t x_index) {
  const auto c = detail::linear_cells(model, pop);
  require(x_index < pop.support.size(), ErrorCode::invalid_argument, "support index out of range");
  auto close = [](double u, double v) { return std::abs(u - v) <= 1e-12 * std::max({1.0, std::abs(u), std::abs(v)}); };
  require(close(c.beta[0], c.beta[1]), ErrorCode::precondition,
          "who-wins comparison needs equal price slopes across groups");
  for (const auto& d : c.dbar)
    require(close(d[0], d[1]), ErrorCode::precondition,
            "who-wins comparison needs Dbar(x,a) = Dbar(x,b) on the whole support");

  const ParitySolution based = detail::solve_parity(model, pop, 0.0, ParityMode::attribute_based);
  const ParitySolution blind = detail::solve_parity(model, pop, 0.0, ParityMode::attribute_blind);
  WhoWinsReport r;
  r.x_index = x_index;
  r.lambda_based = based.lambda_star;
  r.lambda_blind = blind.lambda_star;
  const auto& pt = pop.support[x_index];
  const double rho_a = pop.rho[0], rho_b = pop.rho[1];
  r.divergence = pt.membership[0] - (rho_a / rho_b) * pt.membership[1];
  r.ratio = r.lambda_blind != 0.0 ? r.lambda_based / r.lambda_blind : 0.0;
  r.printed_condition = r.ratio < r.divergence;

  // p(x,g) - p(x) = (xi_g lambda_xa - E[xi|x] lambda_x) / (2 beta), rewritten in
  // terms of the ratio and the covariate-driven divergence.
  const double two_beta = 2.0 * c.beta[0];
  r.predicted_sign_a = detail::sign_of(r.lambda_blind * (r.ratio - r.divergence) / (two_beta * rho_a));
  r.predicted_sign_b = detail::sign_of(-r.lambda_blind * (r.ratio / rho_b + r.divergence / rho_a) / two_beta);

  const double p_blind = blind.price(x_index);
  r.direct_diff_a = based.price(x_index, pop.groups[0]) - p_blind;
  r.direct_diff_b = based.price(x_index, pop.groups[1]) - p_blind;
  return r;
}

struct RevenueLossBound {
  double actual_gap = 0.0;
  double bound = 0.0;
  bool chain_holds = false;  // actual_gap >= bound >= 0 up to 1e-9
};

/// Revenue lost by unconstrained attribute-blind pricing versus attribute-based
/// pricing, and the lower bound (1 / 4 beta) E[Dbar(X)^2 - Dbar(X,A)^2].
inline RevenueLossBound revenue_loss_bound(const PartiallyLinearDemand& model, const Population& pop) {
  const auto c = detail::linear_cells(model, pop);
  require(std::abs(c.beta[0] - c.beta[1]) <= 1e-12 * std::max(1.0, std::abs(c.beta[0])), ErrorCode::precondition,
          "revenue-loss bound needs equal price slopes across groups");
  const double beta = c.beta[0];
  const ParitySolution based = parity_prices(model, pop, ParityMode::attribute_based, 0.0);
  const ParitySolution blind = parity_prices(model, pop, ParityMode::attribute_blind, 0.0);
  const DemandModel dm = model;
  RevenueLossBound out;
  out.actual_gap = expected_revenue(based.policy(pop), dm, pop) - expected_revenue(blind.policy(pop), dm, pop);
  double e_blind = 0.0, e_based = 0.0;
  for (std::size_t i = 0; i < pop.support.size(); ++i) {
    const auto& pt = pop.support[i];
    const double dbar_x = pt.membership[0] * c.dbar[i][0] + pt.membership[1] * c.dbar[i][1];
    e_blind += pt.mass * dbar_x * dbar_x;
    for (std::size_t g = 0; g < 2; ++g) e_based += pop.joint(i, g) * c.dbar[i][g] * c.dbar[i][g];
  }
  out.bound = (e_blind - e_based) / (4.0 * beta);
  out.chain_holds = out.actual_gap >= out.bound - 1e-9 && out.bound >= -1e-9;
  return out;
}

}  // namespace fairprice
