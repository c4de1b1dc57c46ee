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

using namespace fairprice;

namespace {

DemandModel latent(NoiseFamily f, double location, double scale) {
  LatentValuationModel m;
  m.intercept = {{"a", location}, {"b", location}};
  m.coef = {{"a", {}}, {"b", {}}};
  m.noise = {f, scale};
  return m;
}

// (1 - eps) D + eps P, with its derivatives.
DemandCurve mix(const DemandCurve& d, const DemandCurve& p, double eps) {
  return DemandCurve([d, p, eps](double x) {
    const DemandJet a = d.jet(x), b = p.jet(x);
    return DemandJet{(1 - eps) * a.value + eps * b.value, (1 - eps) * a.slope + eps * b.slope,
                     (1 - eps) * a.curvature + eps * b.curvature};
  });
}

const PriceInterval kRange{0.0, 10.0, 2048};

}  // namespace

TEST(Decomposition, IdentityIsAllZero) {
  const DemandModel m = latent(NoiseFamily::normal, 2.0, 0.7);
  const DemandCurve c = DemandCurve::at(m, {}, "a");
  const auto r = suboptimality_decomposition(c, c, kRange);
  EXPECT_EQ(r.term1, 0.0);
  EXPECT_EQ(r.term2, 0.0);
  EXPECT_EQ(r.term3, 0.0);
  EXPECT_EQ(r.actual_gap, 0.0);
  EXPECT_EQ(r.sign, "indeterminate");
}

TEST(Decomposition, ExponentialExample) {
  const DemandModel truth = latent(NoiseFamily::exponential, 0.0, 1.0);
  const DemandModel est = latent(NoiseFamily::exponential, 0.0, 0.8);  // exp(-1.25 p)
  const auto r = suboptimality_decomposition(DemandCurve::at(truth, {}, "a"), DemandCurve::at(est, {}, "a"), kRange);
  EXPECT_NEAR(r.p_star, 1.0, 1e-8);
  EXPECT_NEAR(r.p_hat_star, 0.8, 1e-8);
  EXPECT_NEAR(r.actual_gap, -0.2, 1e-8);
  EXPECT_NEAR(r.term1, std::exp(-1.25) - std::exp(-1.0), 1e-12);
  EXPECT_NEAR(r.term2, -1.25 * std::exp(-1.25) + std::exp(-1.0), 1e-12);
  EXPECT_NEAR(r.term3, -1.25 * std::exp(-1.0) + 1.25 * std::exp(-1.25), 1e-8);
  EXPECT_LT(std::abs(r.residual), std::abs(r.actual_gap));
}

TEST(Decomposition, LinearEstimateIsInapplicable) {
  PartiallyLinearDemand lin;
  lin.beta = {{"a", -1.0}};
  LinearBaseline b;
  b.intercept = {{"a", 2.0}};
  b.coef = {{"a", {}}};
  lin.baseline = b;
  const DemandModel est = lin;
  const DemandModel truth = latent(NoiseFamily::exponential, 0.0, 1.0);
  try {
    suboptimality_decomposition(DemandCurve::at(truth, {}, "a"), DemandCurve::at(est, {}, "a"), kRange);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::inapplicable);
  }
  EXPECT_THROW(attribute_gap_decomposition(est, {}, "a", {"a"}, {1.0}, kRange), Error);
}

TEST(Decomposition, ResidualShrinksQuadratically) {
  for (NoiseFamily f : {NoiseFamily::normal, NoiseFamily::logistic, NoiseFamily::gumbel}) {
    const DemandModel truth = latent(f, 2.0, 0.6);
    const DemandModel other = latent(f, 2.6, 0.9);
    const DemandCurve d = DemandCurve::at(truth, {}, "a");
    const DemandCurve p = DemandCurve::at(other, {}, "a");
    double prev = 0.0;
    for (double eps : {0.2, 0.1, 0.05}) {
      const auto r = suboptimality_decomposition(d, mix(d, p, eps), kRange);
      if (prev > 0) {
        EXPECT_LE(std::abs(r.residual) / prev, 0.35) << to_string(f) << " eps " << eps;
      }
      prev = std::abs(r.residual);
    }
  }
}

TEST(Decomposition, DeterminateSignMatchesGap) {
  std::mt19937_64 gen(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int fired = 0;
  for (int k = 0; k < 200; ++k) {
    const DemandModel t = latent(NoiseFamily::logistic, 1.0 + u(gen), 0.3 + 0.5 * u(gen));
    const DemandModel e = latent(NoiseFamily::logistic, 1.0 + u(gen), 0.3 + 0.5 * u(gen));
    const auto r = suboptimality_decomposition(DemandCurve::at(t, {}, "a"), DemandCurve::at(e, {}, "a"), kRange);
    if (r.sign == "positive") {
      EXPECT_GT(r.actual_gap, 0.0);
      ++fired;
    } else if (r.sign == "negative") {
      EXPECT_LT(r.actual_gap, 0.0);
      ++fired;
    }
  }
  EXPECT_GT(fired, 0);
}

TEST(AttributeGap, MatchesDirectOptimizers) {
  LogisticDemand lg;
  lg.intercept = 1.5;
  lg.gamma = {0.4};
  lg.beta = -1.1;
  lg.group_offsets = {{"b", -0.7}};
  const DemandModel m = lg;
  const std::vector<double> x{0.3};
  const std::vector<double> member{0.35, 0.65};
  for (const std::string g : {"a", "b"}) {
    const auto r = attribute_gap_decomposition(m, x, g, {"a", "b"}, member, kRange);
    const double based = maximize_revenue_1d([&](double p) { return eval_demand(m, x, g, p); }, kRange).price;
    const double blind = maximize_revenue_1d(
        [&](double p) { return 0.35 * eval_demand(m, x, "a", p) + 0.65 * eval_demand(m, x, "b", p); }, kRange).price;
    EXPECT_NEAR(r.actual_gap, based - blind, 1e-6);
    if (r.sign == "positive") {
      EXPECT_GT(based - blind, 0.0);
    }
    if (r.sign == "negative") {
      EXPECT_LT(based - blind, 0.0);
    }
  }
  // Group a has the higher intercept, so its own price sits above the blend.
  EXPECT_GT(attribute_gap_decomposition(m, x, "a", {"a", "b"}, member, kRange).actual_gap, 0.0);
}

TEST(AttributeGap, IdenticalGroupsGiveZero) {
  LogisticDemand lg;
  lg.intercept = 1.0;
  lg.gamma = {0.0};
  lg.beta = -1.0;
  const DemandModel m = lg;
  const auto r = attribute_gap_decomposition(m, {0.0}, "a", {"a", "b"}, {0.5, 0.5}, kRange);
  EXPECT_EQ(r.actual_gap, 0.0);
  EXPECT_EQ(r.term1, 0.0);
  EXPECT_EQ(r.term3, 0.0);
}
