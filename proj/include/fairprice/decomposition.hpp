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
#include <string>
#include <variant>
#include <vector>

#include "fairprice/demand.hpp"
#include "fairprice/error.hpp"
#include "fairprice/optimize.hpp"
#include "fairprice/share.hpp"

namespace fairprice {

/// Pricing error of the maximizer of an estimated curve against the true one.
/// term1 = Dhat(p*) - D(p*), term2 = Dhat'(p*) - D'(p*),
/// term3 = Dhat'(phat*) - Dhat'(p*).
struct DecompositionReport {
  double p_star = 0.0;
  double p_hat_star = 0.0;
  double term1 = 0.0;
  double term2 = 0.0;
  double term3 = 0.0;
  double first_order_prediction = 0.0;  // -(term1 + p*(term2 + term3)) / (Dhat'(phat*) + Dhat'(p*))
  double printed_prediction = 0.0;      // term1/term3 + p*(1 + term2/term3)
  double actual_gap = 0.0;              // phat* - p*
  double residual = 0.0;                // actual_gap - first_order_prediction
  std::string sign = "indeterminate";   // "positive" / "negative" when all terms agree
};

inline DecompositionReport suboptimality_decomposition(const DemandCurve& truth, const DemandCurve& estimate,
                                                       const PriceInterval& interval) {
  DecompositionReport r;
  r.p_star = solve_share_price(truth, 0.0, interval);
  r.p_hat_star = solve_share_price(estimate, 0.0, interval);
  const DemandJet t = truth.jet(r.p_star);
  const DemandJet e = estimate.jet(r.p_star);
  const DemandJet eh = estimate.jet(r.p_hat_star);
  r.term1 = e.value - t.value;
  r.term2 = e.slope - t.slope;
  r.term3 = eh.slope - e.slope;
  r.actual_gap = r.p_hat_star - r.p_star;

  const double scale = std::max({std::abs(eh.slope), std::abs(e.slope), std::abs(t.slope)});
  const double tiny = 1e-12 * std::max(1.0, std::abs(t.value) + scale);
  if (std::abs(r.term1) <= tiny && std::abs(r.term2) <= tiny && std::abs(r.actual_gap) <= 1e-12) {
    r.term1 = r.term2 = r.term3 = r.actual_gap = 0.0;
    return r;
  }
  if (!(std::abs(r.term3) > 1e-10 * scale)) {
    fail(ErrorCode::inapplicable, "decomposition inapplicable: linear estimated demand (gradient unchanged between "
                                  "the two optima)");
  }
  r.first_order_prediction = -(r.term1 + r.p_star * (r.term2 + r.term3)) / (eh.slope + e.slope);
  r.printed_prediction = r.term1 / r.term3 + r.p_star * (1.0 + r.term2 / r.term3);
  r.residual = r.actual_gap - r.first_order_prediction;
  if (r.term1 > 0 && r.term2 > 0 && r.term3 > 0) r.sign = "positive";
  else if (r.term1 < 0 && r.term2 < 0 && r.term3 < 0) r.sign = "negative";
  return r;
}

/// Attribute-based versus attribute-blind price at x: the estimate is
/// D(. | x, a) and the reference is the membership mixture D(. | x).
inline DecompositionReport attribute_gap_decomposition(const DemandModel& model, const std::vector<double>& x,
                                                       const std::string& group,
                                                       const std::vector<std::string>& groups,
                                                       const std::vector<double>& membership,
                                                       const PriceInterval& interval) {
  require(!std::holds_alternative<PartiallyLinearDemand>(model), ErrorCode::inapplicable,
          "decomposition inapplicable: linear estimated demand");
  const DemandCurve based = DemandCurve::at(model, x, group);
  const DemandCurve blind = DemandCurve::blind(model, x, groups, membership);
  return suboptimality_decomposition(blind, based, interval);
}

}  // namespace fairprice
