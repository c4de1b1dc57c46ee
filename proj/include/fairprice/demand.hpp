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
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fairprice/error.hpp"
#include "fairprice/noise.hpp"
#include "fairprice/rng.hpp"

namespace fairprice {

namespace detail {

template <typename V>
const V& lookup(const std::map<std::string, V, std::less<>>& m, std::string_view group) {
  const auto it = m.find(group);
  if (it == m.end()) fail(ErrorCode::unknown_group, "unknown group label '" + std::string(group) + "'");
  return it->second;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    fail(ErrorCode::dimension_mismatch, "covariate dimension " + std::to_string(b.size()) +
                                            " does not match coefficient dimension " + std::to_string(a.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace detail

template <typename V>
using GroupMap = std::map<std::string, V, std::less<>>;

/// Dbar(x, a) = intercept_a + coef_a . x
struct LinearBaseline {
  GroupMap<double> intercept;
  GroupMap<std::vector<double>> coef;
};

/// Dbar tabulated over a discrete support: values[g][i] at points[i].
struct TableBaseline {
  std::vector<std::vector<double>> points;
  GroupMap<std::vector<double>> values;
};

/// D(p | x, a) = beta_a p + Dbar(x, a). An expected quantity, never clamped here.
struct PartiallyLinearDemand {
  GroupMap<double> beta;
  std::variant<LinearBaseline, TableBaseline> baseline;

  double slope(std::string_view group) const { return detail::lookup(beta, group); }

  double baseline_at(const std::vector<double>& x, std::string_view group) const {
    if (const auto* lin = std::get_if<LinearBaseline>(&baseline)) {
      return detail::lookup(lin->intercept, group) + detail::dot(detail::lookup(lin->coef, group), x);
    }
    const auto& table = std::get<TableBaseline>(baseline);
    const auto& values = detail::lookup(table.values, group);
    for (std::size_t i = 0; i < table.points.size(); ++i) {
      if (table.points[i] == x) return values.at(i);
    }
    if (!table.points.empty() && table.points.front().size() != x.size())
      fail(ErrorCode::dimension_mismatch, "covariate dimension does not match the baseline table");
    fail(ErrorCode::invalid_argument, "covariate value is not on the baseline table's support");
  }

  /// Every slope must be strictly negative (downward-sloping demand).
  void validate() const {
    require(!beta.empty(), ErrorCode::invalid_argument, "partially linear demand needs slopes");
    for (const auto& [g, b] : beta) {
      if (!(b < 0)) {
        fail(ErrorCode::upward_sloping_demand,
             "price slope for group '" + g + "' is " + std::to_string(b) + " (must be negative)");
      }
    }
  }
};

/// D(p | x, a) = sigmoid(intercept + offset_a + gamma . x + beta p). Groups
/// without an offset entry use 0.
struct LogisticDemand {
  std::vector<double> gamma;
  double beta = 0.0;
  double intercept = 0.0;
  GroupMap<double> group_offsets;

  double index(const std::vector<double>& x, std::string_view group, double p) const {
    double z = intercept + detail::dot(gamma, x) + beta * p;
    if (const auto it = group_offsets.find(group); it != group_offsets.end()) z += it->second;
    return z;
  }
};

/// V = g(x, a) + eps with g(x, a) = intercept_a + coef_a . x; purchase iff V >= p.
struct LatentValuationModel {
  GroupMap<double> intercept;
  GroupMap<std::vector<double>> coef;
  Noise noise;

  double location(const std::vector<double>& x, std::string_view group) const {
    return detail::lookup(intercept, group) + detail::dot(detail::lookup(coef, group), x);
  }
};

using DemandModel = std::variant<PartiallyLinearDemand, LogisticDemand, LatentValuationModel>;

inline std::string_view family_name(const DemandModel& model) {
  switch (model.index()) {
    case 0: return "partially_linear";
    case 1: return "logistic";
    default: return "latent";
  }
}

/// Value, first and second price derivative of expected demand at one context.
struct DemandJet {
  double value = 0.0;
  double slope = 0.0;
  double curvature = 0.0;
};

inline DemandJet demand_jet(const DemandModel& model, const std::vector<double>& x,
                            std::string_view group, double p) {
  require(std::isfinite(p), ErrorCode::invalid_argument, "price must be finite");
  return std::visit(
      [&](const auto& m) -> DemandJet {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, PartiallyLinearDemand>) {
          const double b = m.slope(group);
          return {b * p + m.baseline_at(x, group), b, 0.0};
        } else if constexpr (std::is_same_v<M, LogisticDemand>) {
          const double s = sigmoid(m.index(x, group, p));
          const double v = s * (1.0 - s);
          return {s, m.beta * v, m.beta * m.beta * v * (1.0 - 2.0 * s)};
        } else {
          m.noise.validate();
          const double z = p - m.location(x, group);
          return {m.noise.survival(z), -m.noise.pdf(z), -m.noise.pdf_slope(z)};
        }
      },
      model);
}

/// Expected demand D(p | x, a). Logistic and latent families take p >= 0.
inline double eval_demand(const DemandModel& model, const std::vector<double>& x,
                          std::string_view group, double p) {
  require(std::holds_alternative<PartiallyLinearDemand>(model) || p >= 0, ErrorCode::invalid_argument,
          "price must be nonnegative for logistic and latent demand");
  return demand_jet(model, x, group, p).value;
}

/// Draws the latent valuation for one record. Logistic demand is the latent
/// model with location -(index at p=0)/beta and logistic noise of scale 1/|beta|.
inline double draw_valuation(const DemandModel& model, const std::vector<double>& x,
                             std::string_view group, Rng& rng) {
  if (const auto* lat = std::get_if<LatentValuationModel>(&model)) {
    return lat->location(x, group) + lat->noise.sample(rng);
  }
  if (const auto* lg = std::get_if<LogisticDemand>(&model)) {
    require(lg->beta < 0, ErrorCode::invalid_argument, "logistic valuation draw needs beta < 0");
    const double scale = -1.0 / lg->beta;
    return lg->index(x, group, 0.0) * scale + Noise{NoiseFamily::logistic, scale}.sample(rng);
  }
  fail(ErrorCode::invalid_argument, "partially linear demand has no latent valuation");
}

/// Bernoulli realization of D(p). Latent-type models draw V once and return
/// I[V >= p]; the partially linear family draws with its rate clamped to [0,1].
inline int sample_demand(const DemandModel& model, const std::vector<double>& x,
                         std::string_view group, double p, Rng& rng) {
  if (std::holds_alternative<PartiallyLinearDemand>(model)) {
    const double rate = std::clamp(eval_demand(model, x, group, p), 0.0, 1.0);
    return rng.uniform() < rate ? 1 : 0;
  }
  require(std::isfinite(p), ErrorCode::invalid_argument, "price must be finite");
  return draw_valuation(model, x, group, rng) >= p ? 1 : 0;
}

/// p -> 1 - F_eps(p - g(x, a)); nonincreasing in p.
inline std::function<double(double)> implied_demand_curve(const LatentValuationModel& model,
                                                          const std::vector<double>& x,
                                                          std::string_view group) {
  model.noise.validate();
  const double g = model.location(x, group);
  const Noise noise = model.noise;
  return [g, noise](double p) { return noise.survival(p - g); };
}

/// Demand as a function of price alone, with analytic derivatives. Built either
/// for one (x, a) cell or as the membership mixture D(p | x) = sum_a P(a|x) D(p|x,a).
/// Curves built from a model hold a reference to it; the model must outlive them.
class DemandCurve {
 public:
  using Jet = std::function<DemandJet(double)>;

  explicit DemandCurve(Jet jet) : jet_(std::move(jet)) {}

  static DemandCurve at(const DemandModel& model, std::vector<double> x, std::string group) {
    return DemandCurve([&model, x = std::move(x), group = std::move(group)](double p) {
      return demand_jet(model, x, group, p);
    });
  }

  static DemandCurve blind(const DemandModel& model, std::vector<double> x,
                           std::vector<std::string> groups, std::vector<double> membership) {
    require(groups.size() == membership.size(), ErrorCode::invalid_argument,
            "membership must have one entry per group");
    return DemandCurve([&model, x = std::move(x), groups = std::move(groups),
                        membership = std::move(membership)](double p) {
      DemandJet sum;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (membership[g] == 0.0) continue;
        const DemandJet j = demand_jet(model, x, groups[g], p);
        sum.value += membership[g] * j.value;
        sum.slope += membership[g] * j.slope;
        sum.curvature += membership[g] * j.curvature;
      }
      return sum;
    });
  }

  DemandJet jet(double p) const { return jet_(p); }
  double operator()(double p) const { return jet_(p).value; }
  double slope(double p) const { return jet_(p).slope; }
  double curvature(double p) const { return jet_(p).curvature; }

 private:
  Jet jet_;
};

}  // namespace fairprice
