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
#include <variant>
#include <vector>

#include "fairprice/demand.hpp"
#include "fairprice/error.hpp"
#include "fairprice/record.hpp"

namespace fairprice {

struct ConstantPolicy {
  double price = 0.0;
};

struct GroupPolicy {
  GroupMap<double> prices;
};

/// Attribute-blind linear rule clipped to [clip_lo, clip_hi].
struct LinearPolicy {
  double intercept = 0.0;
  std::vector<double> theta;
  double clip_lo = 0.0;
  double clip_hi = 0.0;

  double operator()(const std::vector<double>& x) const {
    return std::clamp(intercept + detail::dot(theta, x), clip_lo, clip_hi);
  }
};

/// Prices over a discrete support. prices[i][g] when attribute_based,
/// otherwise prices[i][0].
struct TablePolicy {
  bool attribute_based = true;
  std::vector<std::vector<double>> prices;
};

using PricingPolicy = std::variant<ConstantPolicy, GroupPolicy, LinearPolicy, TablePolicy>;

inline bool is_attribute_blind(const PricingPolicy& policy) {
  if (std::holds_alternative<GroupPolicy>(policy)) return false;
  if (const auto* t = std::get_if<TablePolicy>(&policy)) return !t->attribute_based;
  return true;
}

/// Price charged to group `g` at support point `i` of `pop`.
inline double policy_price(const PricingPolicy& policy, const Population& pop, std::size_t i,
                           std::size_t g) {
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ConstantPolicy>) {
          return p.price;
        } else if constexpr (std::is_same_v<P, GroupPolicy>) {
          return detail::lookup(p.prices, pop.groups[g]);
        } else if constexpr (std::is_same_v<P, LinearPolicy>) {
          return p(pop.support[i].x);
        } else {
          if (!(i < p.prices.size())) {
            fail(ErrorCode::invalid_argument, "price table has no entry for support point " + std::to_string(i));
          }
          const auto& row = p.prices[i];
          const std::size_t col = p.attribute_based ? g : 0;
          if (!(col < row.size() && std::isfinite(row[col]))) {
            fail(ErrorCode::invalid_argument, "undefined price at support point " + std::to_string(i));
          }
          return row[col];
        }
      },
      policy);
}

/// Price charged to one record; table policies need the record's support index.
inline double policy_price(const PricingPolicy& policy, const Record& r,
                           std::optional<std::size_t> support_index = std::nullopt,
                           const std::vector<std::string>* groups = nullptr) {
  return std::visit(
      [&](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, ConstantPolicy>) {
          return p.price;
        } else if constexpr (std::is_same_v<P, GroupPolicy>) {
          return detail::lookup(p.prices, r.group);
        } else if constexpr (std::is_same_v<P, LinearPolicy>) {
          return p(r.covariates);
        } else {
          if (!(support_index.has_value() && *support_index < p.prices.size())) {
            fail(ErrorCode::invalid_argument, "table policy needs a support index for record '" + r.id + "'");
          }
          std::size_t col = 0;
          if (p.attribute_based) {
            require(groups != nullptr, ErrorCode::invalid_argument, "table policy needs group labels");
            const auto it = std::find(groups->begin(), groups->end(), r.group);
            if (it == groups->end()) fail(ErrorCode::unknown_group, "unknown group label '" + r.group + "'");
            col = static_cast<std::size_t>(it - groups->begin());
          }
          return p.prices[*support_index].at(col);
        }
      },
      policy);
}

}  // namespace fairprice
