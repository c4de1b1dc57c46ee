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

#include <sstream>

#include "fairprice.hpp"
#include "fairprice/io/config.hpp"
#include "fairprice/io/csv.hpp"
#include "fairprice/io/serialize.hpp"

using namespace fairprice;
using namespace fairprice::io;

namespace {

std::vector<Record> parse(const std::string& text) {
  std::istringstream in(text);
  return read_records(in);
}

std::string error_message(const std::function<void()>& f, ErrorCode expect) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), expect);
    return e.what();
  }
  ADD_FAILURE() << "no error raised";
  return {};
}

ScenarioFile scenario(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(FlatConfig::parse(in));
}

}  // namespace

TEST(Csv, EmptyBodyAndHeaderOnly) {
  EXPECT_TRUE(parse("").empty());
  EXPECT_TRUE(parse("id,group,x1,price,demand\n").empty());
}

TEST(Csv, RoundTrip) {
  std::vector<Record> recs(3);
  for (int i = 0; i < 3; ++i) {
    recs[i].id = "r" + std::to_string(i);
    recs[i].group = i % 2 ? "a" : "b";
    recs[i].covariates = {0.1 * i, -1.0 / 3.0};
    recs[i].weight = 1.0 + i;
  }
  recs[0].price = 1.25;
  recs[0].demand = 1.0;
  recs[1].valuation = 0.1 + 0.2;  // needs all 17 digits
  recs[2].outcome = -7e-300;
  const auto back = parse(records_to_csv(recs));
  ASSERT_EQ(back.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(back[i], recs[i]) << i;
  EXPECT_EQ(back[2].line, 4u);
  EXPECT_EQ(records_to_csv(back), records_to_csv(recs));
}

TEST(Csv, ColumnsInAnyOrderAndOptional) {
  const auto recs = parse("demand,x2,group,id,x1\n1,5,a,p,4\n0,7,b,q,6\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].covariates, (std::vector<double>{4, 5}));
  EXPECT_EQ(recs[1].group, "b");
  EXPECT_FALSE(recs[0].price.has_value());
  EXPECT_EQ(recs[0].weight, 1.0);
  const auto blank = parse("id,group,price,demand\nz,a,,1\n");
  EXPECT_FALSE(blank[0].price.has_value());
}

TEST(Csv, ErrorsCarryLineNumbers) {
  EXPECT_NE(error_message([] { parse("id,group,colour\n"); }, ErrorCode::parse).find("unknown column 'colour'"),
            std::string::npos);
  EXPECT_NE(error_message([] { parse("id,group,price\na,b,1\nc,d\n"); }, ErrorCode::parse).find("line 3"),
            std::string::npos);
  EXPECT_NE(error_message([] { parse("id,group,price\na,b,1\nc,d,abc\n"); }, ErrorCode::parse).find("line 3"),
            std::string::npos);
  error_message([] { parse("id,group,x2\na,b,1\n"); }, ErrorCode::parse);
  error_message([] { parse("id,group,price\na,b,-1\n"); }, ErrorCode::parse);
  error_message([] { read_records_file("/nonexistent/file.csv"); }, ErrorCode::io);
}

TEST(Csv, NonBinaryDemandIsDeferredToFit) {
  std::string text = "id,group,x1,price,demand\n";
  for (int i = 0; i < 20; ++i)
    text += std::to_string(i) + ",a," + std::to_string(i % 5) + "," + std::to_string(1 + i % 3) + "," +
            (i == 7 ? "2" : std::to_string(i % 2)) + "\n";
  const auto recs = parse(text);
  EXPECT_EQ(*recs[7].demand, 2.0);
  error_message([&] { fit_logistic(recs); }, ErrorCode::invalid_argument);
}

TEST(Json, ModelRoundTrip) {
  LogisticDemand lg;
  lg.intercept = 0.1;
  lg.gamma = {1.0 / 3.0};
  lg.beta = -0.004;
  lg.group_offsets = {{"minority", 0.3}};
  LatentValuationModel lat;
  lat.intercept = {{"a", 1.0}, {"b", 2.0}};
  lat.coef = {{"a", {0.5}}, {"b", {0.25}}};
  lat.noise = {NoiseFamily::gumbel, 0.7};
  PartiallyLinearDemand pl;
  pl.beta = {{"a", -1.0}, {"b", -0.5}};
  TableBaseline t;
  t.points = {{0.0}, {1.0}};
  t.values = {{"a", {2.0, 3.0}}, {"b", {1.0, 1.5}}};
  pl.baseline = t;
  for (const DemandModel& m : {DemandModel(lg), DemandModel(lat), DemandModel(pl)}) {
    const Json j = model_to_json(m);
    const DemandModel back = model_from_json(Json::parse(dump(j)));
    EXPECT_EQ(dump(model_to_json(back)), dump(j));
    EXPECT_EQ(eval_demand(back, {0.0}, "a", 0.9), eval_demand(m, {0.0}, "a", 0.9));
  }
  error_message([] { model_from_json(Json{{"family", "probit"}}); }, ErrorCode::parse);
}

TEST(Json, PopulationAndPolicyRoundTrip) {
  const auto pop = Population::from_support({"a", "b"}, {{{0.0}, 0.3, {0.9, 0.1}}, {{1.0}, 0.7, {0.2, 0.8}}});
  const auto back = population_from_json(Json::parse(dump(population_to_json(pop))));
  EXPECT_EQ(back.groups, pop.groups);
  EXPECT_EQ(back.rho, pop.rho);
  EXPECT_EQ(back.support[1].membership, pop.support[1].membership);

  const PricingPolicy policies[] = {ConstantPolicy{1.5}, LinearPolicy{1.0, {0.2}, 0.5, 2.0},
                                    TablePolicy{true, {{1.0, 0.5}, {1.2, 0.9}}}};
  for (const auto& p : policies) {
    const Json j = policy_to_json(p);
    EXPECT_EQ(dump(policy_to_json(policy_from_json(Json::parse(dump(j))))), dump(j));
  }
}

TEST(Json, ParitySolutionLayout) {
  const auto pop = Population::from_support({"a", "b"}, {{{0.0}, 1.0, {0.5, 0.5}}});
  PartiallyLinearDemand m;
  m.beta = {{"a", -1.0}, {"b", -1.0}};
  m.baseline = TableBaseline{{{0.0}}, {{"a", {2.0}}, {"b", {1.0}}}};
  const Json j = parity_to_json(solve_attribute_based_parity(m, pop, 0.0));
  for (const char* key : {"mode", "gamma", "lambda_star", "xi", "prices"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["mode"], "attribute_based");
  ASSERT_EQ(j["prices"].size(), 2u);
  EXPECT_NEAR(j["prices"][0]["price"].get<double>(), 0.75, 1e-12);
  EXPECT_EQ(j["prices"][0]["x_index"], 0);
}

TEST(Scenario, ParsesFullFile) {
  const auto f = scenario(
      "# comment\n"
      "n = 50\n"
      "seed = 12\n"
      "covariates = normal(0, 2), bernoulli(0.3), uniform(-1,1)\n"
      "groups = minority, majority\n"
      "group.mechanism = threshold\n"
      "group.threshold_covariate = x1\n"
      "group.threshold = -0.5\n"
      "demand.family = logistic\n"
      "demand.intercept = 1.2\n"
      "demand.gamma = 1.1, 0.3, 0\n"
      "demand.beta = -0.004\n"
      "prices.levels = 100, 250, 500\n"
      "experiment.grid = 64\n");
  const auto& c = f.config;
  EXPECT_EQ(c.n, 50u);
  EXPECT_EQ(c.seed, 12u);
  ASSERT_EQ(c.covariates.size(), 3u);
  EXPECT_EQ(c.covariates[0].b, 2.0);
  EXPECT_EQ(c.covariates[1].kind, CovariateSpec::Kind::bernoulli);
  EXPECT_EQ(c.covariates[2].a, -1.0);
  EXPECT_EQ(c.groups, (std::vector<std::string>{"minority", "majority"}));
  EXPECT_EQ(c.mechanism, GroupMechanism::threshold);
  EXPECT_EQ(c.threshold_index, 0u);
  EXPECT_EQ(std::get<LogisticDemand>(c.model).beta, -0.004);
  EXPECT_EQ(c.price_levels.size(), 3u);
  EXPECT_NO_THROW(generate_population(c));
}

TEST(Scenario, ErrorsCarryLineNumbers) {
  const std::string unknown = "n = 5\nbogus = 1\ndemand.family = logistic\ndemand.beta = -1\nprices.levels = 1, 2\n";
  EXPECT_NE(error_message([&] { scenario(unknown); }, ErrorCode::parse).find("line 2"), std::string::npos);
  EXPECT_NE(error_message([] { scenario("n = 5\nn = 6\n"); }, ErrorCode::parse).find("line 2"), std::string::npos);
  EXPECT_NE(error_message([] { scenario("n = 5\ncovariates = cauchy(0, 1)\n"); }, ErrorCode::parse).find("line 2"),
            std::string::npos);
  EXPECT_NE(error_message([] { scenario("n = 5\nno equals sign\n"); }, ErrorCode::parse).find("line 2"),
            std::string::npos);
  error_message([] { scenario("n = -3\n"); }, ErrorCode::parse);
}
