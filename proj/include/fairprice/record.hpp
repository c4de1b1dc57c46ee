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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairprice/error.hpp"

namespace fairprice {

/// One individual. Optional fields are absent when unobserved; `valuation` is
/// only ever present for simulated records.
struct Record {
  std::string id;
  std::string group;
  std::vector<double> covariates;
  std::optional<double> price;
  std::optional<double> demand;
  std::optional<double> outcome;
  std::optional<double> valuation;
  double weight = 1.0;
  std::size_t line = 0;  // source row, 0 when not read from a file

  /// Equality of content; the source row is not compared.
  friend bool operator==(const Record& l, const Record& r) {
    return l.id == r.id && l.group == r.group && l.covariates == r.covariates && l.price == r.price &&
           l.demand == r.demand && l.outcome == r.outcome && l.valuation == r.valuation && l.weight == r.weight;
  }
};

/// A covariate value on the discrete support, its mass, and P(A = g | X = x)
/// for each group g (aligned with Population::groups).
struct SupportPoint {
  std::vector<double> x;
  double mass = 0.0;
  std::vector<double> membership;
};

struct Population {
  std::vector<std::string> groups;
  std::vector<double> rho;
  std::vector<SupportPoint> support;
  std::vector<Record> records;
  std::optional<double> unit_cost;

  std::size_t group_index(std::string_view label) const {
    const auto it = std::find(groups.begin(), groups.end(), label);
    if (it == groups.end()) fail(ErrorCode::unknown_group, "unknown group label '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - groups.begin());
  }

  bool has_support() const { return !support.empty(); }

  /// P(X = x_i, A = g).
  double joint(std::size_t i, std::size_t g) const {
    return support[i].mass * support[i].membership[g];
  }

  /// E[xi(A) | X = x_i] style conditional mean of a per-group quantity.
  template <typename F>
  double conditional_mean(std::size_t i, F per_group) const {
    double s = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) s += support[i].membership[g] * per_group(g);
    return s;
  }

  /// Group priors implied by the support: rho_g = sum_x mass(x) P(g|x).
  std::vector<double> implied_rho() const {
    std::vector<double> r(groups.size(), 0.0);
    for (std::size_t i = 0; i < support.size(); ++i)
      for (std::size_t g = 0; g < groups.size(); ++g) r[g] += joint(i, g);
    return r;
  }

  void validate(double tol = 1e-9) const {
    require(groups.size() >= 2, ErrorCode::invalid_argument, "population needs at least two groups");
    require(rho.size() == groups.size(), ErrorCode::invalid_argument,
            "rho must have one entry per group");
    double total = 0.0;
    for (double r : rho) {
      require(r > 0 && std::isfinite(r), ErrorCode::invalid_argument, "group priors must be positive");
      total += r;
    }
    require(std::abs(total - 1.0) <= tol, ErrorCode::invalid_argument, "group priors must sum to 1");
    if (support.empty()) return;
    double mass = 0.0;
    const std::size_t dim = support.front().x.size();
    for (const auto& s : support) {
      require(s.x.size() == dim, ErrorCode::dimension_mismatch, "support points differ in dimension");
      require(s.mass >= 0, ErrorCode::invalid_argument, "support mass must be nonnegative");
      require(s.membership.size() == groups.size(), ErrorCode::invalid_argument,
              "membership must have one entry per group");
      double m = 0.0;
      for (double p : s.membership) {
        require(p >= 0 && p <= 1, ErrorCode::invalid_argument, "membership probabilities must lie in [0,1]");
        m += p;
      }
      require(std::abs(m - 1.0) <= tol, ErrorCode::invalid_argument,
              "membership must sum to 1 at every support point");
      mass += s.mass;
    }
    require(std::abs(mass - 1.0) <= tol, ErrorCode::invalid_argument, "support masses must sum to 1");
    const auto implied = implied_rho();
    for (std::size_t g = 0; g < groups.size(); ++g)
      require(std::abs(implied[g] - rho[g]) <= 1e-6, ErrorCode::invalid_argument,
              "rho disagrees with the support's membership probabilities");
  }

  /// Population over a discrete support; rho is derived from the memberships.
  static Population from_support(std::vector<std::string> groups, std::vector<SupportPoint> support) {
    Population pop;
    pop.groups = std::move(groups);
    pop.support = std::move(support);
    pop.rho = pop.implied_rho();
    pop.validate();
    return pop;
  }
};

/// Distinct group labels, sorted.
inline std::vector<std::string> group_labels(const std::vector<Record>& records) {
  std::vector<std::string> labels;
  for (const auto& r : records)
    if (std::find(labels.begin(), labels.end(), r.group) == labels.end()) labels.push_back(r.group);
  std::sort(labels.begin(), labels.end());
  return labels;
}

}  // namespace fairprice
