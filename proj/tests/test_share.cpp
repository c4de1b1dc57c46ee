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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fairprice.hpp"
#include "oracles.hpp"

using namespace fairprice;

namespace {

PartiallyLinearDemand linear(double dbar, double beta) {
  PartiallyLinearDemand m;
  m.beta = {{"a", beta}, {"b", beta}};
  LinearBaseline b;
  b.intercept = {{"a", dbar}, {"b", dbar}};
  b.coef = {{"a", {}}, {"b", {}}};
  m.baseline = b;
  return m;
}

// D(p) = exp(-p) for p >= 0.
LatentValuationModel exponential() {
  LatentValuationModel m;
  m.intercept = {{"a", 0.0}, {"b", 0.0}};
  m.coef = {{"a", {}}, {"b", {}}};
  m.noise = {NoiseFamily::exponential, 1.0};
  return m;
}

const PriceInterval kRange{0.0, 10.0, 2048};

}  // namespace

TEST(SolveSharePrice, Examples) {
  const DemandModel lin = linear(2.0, -1.0);
  const DemandModel ex = exponential();
  const PriceInterval two{0.0, 2.0, 2048};
  EXPECT_NEAR(solve_share_price(lin, {}, "a", SharePenalty{}, two), 1.0, 1e-8);
  EXPECT_NEAR(solve_share_price(lin, {}, "a", SharePenalty{ShareScope::population, 0.5, {}, {}}, two), 0.75, 1e-8);
  EXPECT_NEAR(solve_share_price(ex, {}, "a", SharePenalty{}, kRange), 1.0, 1e-8);
}

TEST(SolveSharePrice, GroupScopeUsesPriorScaling) {
  const DemandModel lin = linear(2.0, -1.0);
  SharePenalty pen{ShareScope::group, 0.1, {{"b", 0.3}}, {{"a", 0.4}, {"b", 0.6}}};
  EXPECT_NEAR(pen.effective("a"), 0.25, 1e-15);
  EXPECT_NEAR(pen.effective("b"), 0.5, 1e-15);
  EXPECT_NEAR(solve_share_price(lin, {}, "b", pen, {0.0, 2.0, 2048}), 0.75, 1e-8);
  EXPECT_FALSE(pen.flagged());
  pen.lambda = -0.1;
  EXPECT_TRUE(pen.flagged());
}

TEST(SolveSharePrice, AgreesWithRevenueMaximizerAndFoc) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const NoiseFamily fams[] = {NoiseFamily::normal, NoiseFamily::logistic, NoiseFamily::gumbel,
                              NoiseFamily::exponential};
  for (int k = 0; k < 50; ++k) {
    LatentValuationModel m;
    m.intercept = {{"a", 0.5 + 2.0 * u(gen)}};
    m.coef = {{"a", {u(gen)}}};
    m.noise = {fams[k % 4], 0.3 + u(gen)};
    const DemandModel dm = m;
    const std::vector<double> x{u(gen)};
    const double shift = u(gen);
    const DemandCurve c = DemandCurve::at(dm, x, "a");
    const double p = solve_share_price(c, shift, kRange);
    RevenueSearch rs;
    rs.shift = shift;
    const double q = maximize_revenue_1d([&](double v) { return c(v); }, kRange, rs).price;
    EXPECT_NEAR(p, q, 1e-6);
    // Exponential demand has a kink at its location, where the FOC need not hold.
    if (fams[k % 4] != NoiseFamily::exponential && p > kRange.lo) {
      EXPECT_LT(std::abs(1.0 / (p + shift) + c.slope(p) / c(p)), 1e-6);
    }
  }
}

TEST(RevenueCurvature, Examples) {
  EXPECT_NEAR(revenue_curvature(linear(2.0, -1.0), {}, "a", 0.3), -2.0, 1e-15);
  EXPECT_NEAR(revenue_curvature(exponential(), {}, "a", 1.0), -std::exp(-1.0), 1e-14);
  EXPECT_EQ(revenue_curvature(linear(2.0, 0.0), {}, "a", 0.7), 0.0);
}

TEST(Sensitivity, LinearIsMinusOneHalf) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int k = 0; k < 20; ++k) {
    const DemandModel m = linear(u(gen), -u(gen));
    const DemandCurve c = DemandCurve::at(m, {}, "a");
    const auto e = sensitivity_at_zero(c, {0.0, 50.0, 4096});
    EXPECT_NEAR(e.analytic, -0.5, 1e-12);
    EXPECT_NEAR(e.finite_difference, -0.5, 1e-6);
    const auto g = sensitivity_at_zero(c, {0.0, 50.0, 4096}, ShareScope::group, 0.5);
    EXPECT_NEAR(g.analytic, -1.0, 1e-12);
    EXPECT_NEAR(g.analytic, e.analytic / 0.5, 1e-10);
  }
}

TEST(Sensitivity, ExponentialDemand) {
  const DemandModel m = exponential();
  const auto e = sensitivity_at_zero(DemandCurve::at(m, {}, "a"), kRange);
  EXPECT_NEAR(e.price, 1.0, 1e-8);
  EXPECT_NEAR(e.demand, std::exp(-1.0), 1e-8);
  EXPECT_NEAR(e.curvature, -std::exp(-1.0), 1e-8);
  EXPECT_NEAR(e.analytic, -1.0, 1e-7);
  EXPECT_LT(e.discrepancy, 1e-4);
}

TEST(Sensitivity, PrintedFormulaDiffersOffTheUnitRevenueCase) {
  // p* D(p*) = 1 * 1 = 1 for D = 2 - p, so the printed form agrees there...
  const DemandModel unit = linear(2.0, -1.0);
  const auto a = sensitivity_at_zero(DemandCurve::at(unit, {}, "a"), kRange);
  EXPECT_NEAR(a.printed, a.analytic, 1e-10);
  // ...and not for D = 4 - p, where p* D(p*) = 4.
  const DemandModel other = linear(4.0, -1.0);
  const auto b = sensitivity_at_zero(DemandCurve::at(other, {}, "a"), kRange);
  EXPECT_NEAR(b.analytic, -0.5, 1e-12);
  EXPECT_NEAR(b.printed, -0.125, 1e-12);
  EXPECT_LT(b.discrepancy, 1e-6);
}

TEST(Sensitivity, NegativeOnSmoothFamilies) {
  for (NoiseFamily f : {NoiseFamily::normal, NoiseFamily::logistic, NoiseFamily::gumbel, NoiseFamily::laplace}) {
    LatentValuationModel m;
    m.intercept = {{"a", 2.0}};
    m.coef = {{"a", {}}};
    m.noise = {f, f == NoiseFamily::laplace ? 4.0 : 0.6};  // keep p* off the Laplace kink
    const DemandModel dm = m;
    const auto e = sensitivity_at_zero(DemandCurve::at(dm, {}, "a"), kRange);
    EXPECT_LT(e.analytic, 0.0) << to_string(f);
    EXPECT_LT(e.discrepancy, 1e-4) << to_string(f);
  }
}

TEST(SolveSharePrice, BoundaryOptimum) {
  // (p + 3)(2 - p) peaks at p = -.5, so the interval edge wins.
  const DemandModel m = linear(2.0, -1.0);
  EXPECT_EQ(solve_share_price(m, {}, "a", SharePenalty{ShareScope::population, 3.0, {}, {}}, {0.0, 2.0, 256}), 0.0);
  EXPECT_EQ(solve_share_price(m, {}, "a", SharePenalty{}, {0.0, 0.5, 256}), 0.5);
}

TEST(Sensitivity, BoundaryOptimumIsRejected) {
  const DemandModel m = linear(2.0, -1.0);
  EXPECT_THROW(sensitivity_at_zero(DemandCurve::at(m, {}, "a"), {0.0, 0.5, 512}), Error);
}

TEST(ShareFrontier, RowsAndMonotoneAccess) {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    LogisticDemand lg;
    lg.intercept = 1.0 + u(gen);
    lg.gamma = {u(gen) - 0.5};
    lg.beta = -(0.5 + u(gen));
    lg.group_offsets = {{"b", u(gen) - 0.5}};
    const DemandModel m = lg;
    const double w = 0.2 + 0.6 * u(gen);
    const auto pop = Population::from_support({"a", "b"}, {{{-1.0}, 0.5, {w, 1 - w}}, {{1.0}, 0.5, {1 - w, w}}});
    for (ShareScope scope : {ShareScope::population, ShareScope::group}) {
      const auto rows = share_frontier(m, pop, scope, {1.0, 0.0, 0.5, 2.0}, {0.0, 20.0, 2048});
      ASSERT_EQ(rows.size(), 4u);
      EXPECT_EQ(rows[0].lambda, 0.0);
      for (std::size_t r = 1; r < rows.size(); ++r) {
        EXPECT_GT(rows[r].lambda, rows[r - 1].lambda);
        EXPECT_LE(rows[r].revenue, rows[0].revenue + 1e-12);
        for (std::size_t g = 0; g < 2; ++g) EXPECT_GE(rows[r].access[g], rows[r - 1].access[g] - 1e-12);
      }
      // The lambda = 0 row is the unconstrained optimum.
      const double p = maximize_revenue_1d([&](double q) { return eval_demand(m, {-1.0}, "a", q); },
                                           {0.0, 20.0, 2048}).price;
      EXPECT_NEAR(rows[0].prices.prices[0][0], p, 1e-6);
    }
  }
}

TEST(ShareFrontier, GroupScopeNeedsAttributeBasedPrices) {
  const DemandModel m = linear(2.0, -1.0);
  const auto pop = Population::from_support({"a", "b"}, {{{}, 1.0, {0.5, 0.5}}});
  EXPECT_THROW(share_frontier(m, pop, ShareScope::group, {0.0}, kRange, false), Error);
  EXPECT_THROW(share_frontier(m, pop, ShareScope::population, {}, kRange), Error);
}
