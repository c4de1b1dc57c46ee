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

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairprice.hpp"
#include "fairprice/io/config.hpp"
#include "fairprice/io/csv.hpp"
#include "fairprice/io/serialize.hpp"

namespace fs = std::filesystem;
using namespace fairprice;
using io::Json;
using io::format_double;

namespace {

constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void usage_check(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::io:
    case ErrorCode::parse: return 1;
    case ErrorCode::perfect_separation:
    case ErrorCode::rank_deficient:
    case ErrorCode::not_converged:
    case ErrorCode::singular_design: return 2;
    case ErrorCode::upward_sloping_demand: return 3;
    case ErrorCode::unenforceable_constraint: return 4;
    case ErrorCode::no_computable_metric: return 5;
    default: return 6;
  }
}

struct Globals {
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::string format = "json";
  bool quiet = false;
};

/// Collects outputs of one command and writes the manifest last.
class Run {
 public:
  Run(std::string command, const Globals& g, std::vector<std::string> argv)
      : command_(std::move(command)), g_(g), argv_(std::move(argv)), start_(std::chrono::steady_clock::now()) {
    std::error_code ec;
    fs::create_directories(g_.out_dir, ec);
    require(!ec, ErrorCode::io, "cannot create output directory '" + g_.out_dir + "': " + ec.message());
  }

  void input(const std::string& path) { inputs_.push_back(path); }
  void config(const std::string& path) { config_ = path; }
  void seed(std::uint64_t s) { seed_ = s; }
  bool json() const { return g_.format == "json"; }

  void write(const std::string& name, const std::string& content) {
    const fs::path target = fs::path(g_.out_dir) / name;
    const fs::path tmp = fs::path(g_.out_dir) / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      require(out.good(), ErrorCode::io, "cannot write '" + tmp.string() + "'");
      out << content;
      out.flush();
      require(out.good(), ErrorCode::io, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    require(!ec, ErrorCode::io, "cannot move '" + tmp.string() + "' into place: " + ec.message());
    outputs_.push_back(target.string());
  }

  void info(const std::string& line) const {
    if (!g_.quiet) std::cerr << line << "\n";
  }

  void finish() {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    Json m;
    m["command"] = command_;
    m["argv"] = argv_;
    m["config"] = config_ ? Json(*config_) : Json(nullptr);
    m["inputs"] = inputs_;
    m["seed"] = seed_ ? Json(*seed_) : Json(nullptr);
    m["version"] = kVersion;
    m["format"] = g_.format;
    m["outputs"] = outputs_;
    m["duration_seconds"] = seconds;
    const std::vector<std::string> saved = outputs_;
    write("manifest.json", io::dump(m));
    outputs_ = saved;
  }

 private:
  std::string command_;
  Globals g_;
  std::vector<std::string> argv_;
  std::chrono::steady_clock::time_point start_;
  std::optional<std::string> config_;
  std::optional<std::uint64_t> seed_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

double parse_gamma(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return kInf;
  const double g = io::parse_number(text, 0, "gamma");
  require(g >= 0, ErrorCode::invalid_argument, "gamma must be nonnegative");
  return g;
}

ShareScope parse_scope(const std::string& s) { return s == "group" ? ShareScope::group : ShareScope::population; }

/// Upper end of the search interval: the largest zero-demand price for
/// partially linear models, otherwise the supplied value.
double default_price_max(const DemandModel& model, const Population& pop, double fallback) {
  const auto* pl = std::get_if<PartiallyLinearDemand>(&model);
  if (!pl) return fallback;
  double hi = 0.0;
  for (const auto& pt : pop.support)
    for (const auto& g : pop.groups) hi = std::max(hi, -pl->baseline_at(pt.x, g) / pl->slope(g));
  return hi > 0 ? hi : fallback;
}

struct Summary {
  std::vector<std::vector<std::string>> rows;  // scheme, metric, group, value

  void add(const std::string& scheme, const std::string& metric, const std::string& group, double v) {
    rows.push_back({scheme, metric, group, format_double(v)});
  }

  void add_objective(const std::string& scheme, const ObjectiveValue& v, const std::vector<std::string>& groups) {
    add(scheme, "revenue", "", v.revenue);
    add(scheme, "total_access", "", v.total_access);
    add(scheme, "disparity", "", v.mean_price[0] - v.mean_price[1]);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      add(scheme, "access", groups[g], v.access[g]);
      add(scheme, "mean_price", groups[g], v.mean_price[g]);
    }
  }

  std::string csv() const {
    std::string s = "scheme,metric,group,value\n";
    for (const auto& r : rows) s += r[0] + "," + r[1] + "," + r[2] + "," + r[3] + "\n";
    return s;
  }
};

Json objective_json(const ObjectiveValue& v, const std::vector<std::string>& groups) {
  Json j;
  j["revenue"] = io::number(v.revenue);
  j["total_access"] = io::number(v.total_access);
  j["disparity"] = io::number(v.mean_price[0] - v.mean_price[1]);
  Json acc = Json::object(), pm = Json::object();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    acc[groups[g]] = io::number(v.access[g]);
    pm[groups[g]] = io::number(v.mean_price[g]);
  }
  j["access"] = acc;
  j["mean_price"] = pm;
  return j;
}

std::string table_prices_csv(const TablePolicy& t, const std::vector<std::string>& groups) {
  std::string s = "x_index,group,price\n";
  for (std::size_t i = 0; i < t.prices.size(); ++i) {
    if (!t.attribute_based) {
      s += std::to_string(i) + ",," + format_double(t.prices[i][0]) + "\n";
      continue;
    }
    for (std::size_t g = 0; g < t.prices[i].size(); ++g) {
      if (std::isnan(t.prices[i][g])) continue;
      s += std::to_string(i) + "," + groups[g] + "," + format_double(t.prices[i][g]) + "\n";
    }
  }
  return s;
}

// ---- fit ----------------------------------------------------------------

struct FitArgs {
  std::string data;
  std::string family = "logistic";
  bool group_offsets = false;
  bool allow_upward = false;
};

void cmd_fit(const FitArgs& a, Run& run) {
  run.input(a.data);
  const auto records = io::read_records_file(a.data);
  Json diag;
  diag["family"] = a.family;
  diag["n"] = records.size();
  DemandModel model;
  if (a.family == "logistic") {
    LogisticFitOptions opt;
    opt.group_offsets = a.group_offsets;
    const auto fit = fit_logistic(records, opt);
    model = fit.model;
    diag["log_likelihood"] = io::number(fit.log_likelihood);
    diag["iterations"] = fit.iterations;
    diag["gradient_norm"] = io::number(fit.gradient_norm);
  } else {
    const auto fit = fit_partially_linear(records, PartiallyLinearFitOptions{a.allow_upward});
    model = fit.model;
    diag["rss"] = io::map_json(fit.rss, io::number);
  }
  run.write("model.json", io::dump(io::model_to_json(model)));
  if (run.json()) {
    run.write("fit.json", io::dump(diag));
  } else {
    std::string s = "name,value\n";
    for (const auto& [k, v] : diag.items()) {
      if (v.is_object()) {
        for (const auto& [g, x] : v.items())
          s += k + ":" + g + "," + (x.is_string() ? x.get<std::string>() : x.dump()) + "\n";
      } else {
        s += k + "," + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
      }
    }
    run.write("fit.csv", s);
  }
  run.info("fit: " + a.family + " model from " + std::to_string(records.size()) + " records");
}

// ---- price --------------------------------------------------------------

struct PriceArgs {
  std::string model;
  std::string population;
  std::optional<std::string> gamma;
  std::optional<double> share_lambda;
  std::string scope = "population";
  std::string mode = "based";
  std::optional<double> price_max;
};

struct PriceOutcome {
  Json doc;
  TablePolicy policy;
  Summary summary;
};

PriceOutcome price_once(const DemandModel& model, const Population& pop, const PriceArgs& a) {
  PriceOutcome out;
  const bool based = a.mode == "based";
  const double hi = a.price_max ? *a.price_max : default_price_max(model, pop, 10.0);
  PriceInterval interval{0.0, hi, 4096};
  if (a.share_lambda) {
    const auto rows = share_frontier(model, pop, parse_scope(a.scope), {*a.share_lambda}, interval, based);
    const auto& row = rows.front();
    out.policy = row.prices;
    out.doc["kind"] = "share";
    out.doc["scope"] = a.scope;
    out.doc["mode"] = based ? "attribute_based" : "attribute_blind";
    out.doc["lambda"] = io::number(*a.share_lambda);
  } else {
    const auto* pl = std::get_if<PartiallyLinearDemand>(&model);
    require(pl != nullptr, ErrorCode::invalid_argument, "parity pricing needs a partially linear model");
    const double gamma = parse_gamma(a.gamma.value_or("inf"));
    const ParitySolution sol =
        based ? solve_attribute_based_parity(*pl, pop, gamma) : solve_attribute_blind_parity(*pl, pop, gamma);
    out.policy = sol.policy(pop);
    out.doc = io::parity_to_json(sol);
    out.doc["kind"] = "parity";
  }
  const ObjectiveValue v = scalarized_objective(out.policy, model, pop, ScalarizationWeights{});
  out.doc["summary"] = objective_json(v, pop.groups);
  out.summary.add_objective("solution", v, pop.groups);

  const auto uni = maximize_revenue_1d(aggregate_demand(model, pop), interval);
  const ObjectiveValue vu = scalarized_objective(ConstantPolicy{uni.price}, model, pop, ScalarizationWeights{});
  out.doc["uniform"] = Json{{"price", io::number(uni.price)}, {"summary", objective_json(vu, pop.groups)}};
  out.summary.add("uniform", "price", "", uni.price);
  out.summary.add_objective("uniform", vu, pop.groups);
  out.doc["policy"] = io::policy_to_json(out.policy);
  return out;
}

void cmd_price(const PriceArgs& a, Run& run) {
  run.input(a.model);
  run.input(a.population);
  const DemandModel model = io::model_from_json(io::read_json_file(a.model));
  const Population pop = io::population_from_json(io::read_json_file(a.population));
  const PriceOutcome out = price_once(model, pop, a);
  run.write("prices.csv", table_prices_csv(out.policy, pop.groups));
  if (run.json()) run.write("solution.json", io::dump(out.doc));
  else run.write("summary.csv", out.summary.csv());
  run.info("price: " + out.doc["kind"].get<std::string>() + " prices for " + std::to_string(pop.support.size()) +
           " support points");
}

// ---- audit --------------------------------------------------------------

struct AuditArgs {
  std::optional<std::string> data;
  std::optional<std::string> model;
  std::optional<std::string> population;
  std::optional<std::string> policy;
  std::vector<std::string> metrics;
  std::optional<std::string> groups;
  double alpha = 0.05;
};

std::string audit_csv(const AuditReport& rep) {
  std::string s = "metric,group,value,count\n";
  for (const auto& m : rep.metrics) {
    for (const auto& [k, v] : m.values) s += m.name + ":" + k + ",," + format_double(v) + ",\n";
    for (const auto& [g, v] : m.by_group) {
      const auto c = m.counts.find(g);
      s += m.name + "," + g + "," + format_double(v) + "," + (c != m.counts.end() ? std::to_string(c->second) : "") +
           "\n";
    }
    for (const auto& [k, c] : m.counts)
      if (!m.by_group.count(k)) s += m.name + ":" + k + ",,," + std::to_string(c) + "\n";
  }
  return s;
}

void cmd_audit(const AuditArgs& a, Run& run) {
  AuditReport rep;
  if (a.data) {
    usage_check(!a.model && !a.policy && !a.population,
                "audit takes either --data or --model/--population/--policy, not both");
    run.input(*a.data);
    const auto records = io::read_records_file(*a.data);
    AuditOptions opt;
    opt.metrics.insert(a.metrics.begin(), a.metrics.end());
    opt.alpha = a.alpha;
    if (a.groups) {
      const auto g = io::split_csv_line(*a.groups);
      usage_check(g.size() == 2, "--groups takes two labels a,b");
      opt.pair = GroupPair{io::trim(g[0]), io::trim(g[1])};
    }
    rep = audit_records(records, opt);
  } else {
    usage_check(a.model && a.population && a.policy, "model audit needs --model, --population and --policy");
    run.input(*a.model);
    run.input(*a.population);
    run.input(*a.policy);
    const DemandModel model = io::model_from_json(io::read_json_file(*a.model));
    const Population pop = io::population_from_json(io::read_json_file(*a.population));
    const PricingPolicy policy = io::policy_from_json(io::read_json_file(*a.policy));
    rep = audit_policy(policy, model, pop);
  }
  for (const auto& w : rep.warnings) run.info("audit: warning: " + w);
  if (run.json()) run.write("audit.json", io::dump(io::audit_to_json(rep)));
  else run.write("audit.csv", audit_csv(rep));
  run.info("audit: " + std::to_string(rep.metrics.size()) + " metrics");
}

// ---- simulate -----------------------------------------------------------

std::string experiment_csv(const ExperimentResult& ex) {
  Summary s;
  for (const auto& sc : ex.schemes) {
    s.add(sc.scheme, "revenue", "", sc.revenue);
    s.add(sc.scheme, "total_access", "", sc.total_access);
    for (std::size_t g = 0; g < ex.groups.size(); ++g) {
      s.add(sc.scheme, "access", ex.groups[g], sc.access[g]);
      s.add(sc.scheme, "mean_price", ex.groups[g], sc.mean_price[g]);
    }
  }
  return s.csv();
}

std::string histogram_csv(const ExperimentResult& ex) {
  std::string s = "scheme,group,bin_lo,bin_hi,mass\n";
  for (const auto& sc : ex.schemes)
    for (std::size_t g = 0; g < ex.groups.size(); ++g) {
      const int bins = static_cast<int>(sc.histogram[g].size());
      for (int b = 0; b < bins; ++b) {
        const double lo = ex.bin_lo + (ex.bin_hi - ex.bin_lo) * b / bins;
        const double hi = ex.bin_lo + (ex.bin_hi - ex.bin_lo) * (b + 1) / bins;
        s += sc.scheme + "," + ex.groups[g] + "," + format_double(lo) + "," + format_double(hi) + "," +
             format_double(sc.histogram[g][b]) + "\n";
      }
    }
  return s;
}

std::string revenue_curve_csv(const DemandModel& model, const Population& pop, double lo, double hi, int points) {
  std::string s = "price,revenue,total_access";
  for (const auto& g : pop.groups) s += ",access_" + g;
  s += "\n";
  const auto total = aggregate_demand(model, pop);
  std::vector<std::function<double(double)>> per;
  for (std::size_t g = 0; g < pop.groups.size(); ++g) per.push_back(aggregate_demand(model, pop, g));
  for (int i = 0; i < points; ++i) {
    const double p = lo + (hi - lo) * i / (points - 1);
    const double d = total(p);
    s += format_double(p) + "," + format_double(p * d) + "," + format_double(d);
    for (const auto& f : per) s += "," + format_double(f(p));
    s += "\n";
  }
  return s;
}

struct SimulateArgs {
  std::string scenario;
  bool seed_given = false;
};

void cmd_simulate(const SimulateArgs& a, const Globals& g, Run& run) {
  run.config(a.scenario);
  io::ScenarioFile file = io::parse_scenario_file(a.scenario);
  ScenarioConfig& cfg = file.config;
  if (a.seed_given) cfg.seed = g.seed;
  run.seed(cfg.seed);
  const Population pop = generate_population(cfg);
  run.write("records.csv", io::records_to_csv(pop.records));

  const auto& raw = file.raw;
  const double offer_hi = cfg.offer_range().second;
  ExperimentOptions opt;
  opt.interval.lo = raw.num("experiment.price_min", 0.0);
  opt.interval.hi = raw.num("experiment.price_max", 1.5 * offer_hi);
  opt.interval.grid_n = static_cast<int>(raw.integer("experiment.grid", 256));
  opt.bins = static_cast<int>(raw.integer("experiment.bins", 25));
  const std::string which = raw.str("experiment.model", "true");
  require(which == "true" || which == "fitted", ErrorCode::parse, "experiment.model must be true or fitted");
  DemandModel model = cfg.model;
  if (which == "fitted") {
    LogisticFitOptions fo;
    fo.group_offsets = true;
    model = fit_logistic(pop.records, fo).model;
  }
  run.write("model.json", io::dump(io::model_to_json(model)));
  const ExperimentResult ex = run_pricing_experiment(model, pop, opt);
  if (run.json()) run.write("experiment.json", io::dump(io::experiment_to_json(ex)));
  else run.write("experiment.csv", experiment_csv(ex));
  run.write("histograms.csv", histogram_csv(ex));
  run.write("revenue_curve.csv", revenue_curve_csv(model, pop, opt.interval.lo, opt.interval.hi,
                                                   static_cast<int>(raw.integer("experiment.curve_points", 200))));
  run.info("simulate: " + std::to_string(pop.records.size()) + " records, uniform revenue " +
           format_double(ex.scheme("uniform").revenue) + ", personalized revenue " +
           format_double(ex.scheme("personalized").revenue));
}

// ---- ope ----------------------------------------------------------------

struct OpeArgs {
  std::string data;
  std::optional<std::string> policy;
  bool optimize = false;
  std::vector<double> levels;
  std::vector<double> range;
  double bandwidth = 0.3;
  std::string kernel = "epanechnikov";
  std::string reward = "revenue";
  std::size_t bootstrap = 200;
  std::size_t starts = 16;
  bool unnormalized = false;
};

void cmd_ope(const OpeArgs& a, const Globals& g, Run& run) {
  usage_check(a.policy.has_value() != a.optimize, "ope needs exactly one of --policy or --optimize");
  run.input(a.data);
  run.seed(g.seed);
  const auto records = io::read_records_file(a.data);
  OPEConfig cfg;
  cfg.kernel = parse_kernel(a.kernel);
  cfg.bandwidth = a.bandwidth;
  cfg.self_normalize = !a.unnormalized;
  cfg.reward = a.reward == "outcome" ? RewardKind::outcome : RewardKind::revenue;
  usage_check(a.levels.empty() || a.range.empty(), "--levels and --range are exclusive");
  if (!a.levels.empty()) {
    cfg.density = BehaviorDensity::uniform_levels(a.levels);
  } else if (!a.range.empty()) {
    usage_check(a.range.size() == 2, "--range takes lo,hi");
    cfg.density = BehaviorDensity::continuous_uniform(a.range[0], a.range[1]);
  } else {
    cfg.density = BehaviorDensity::fitted_histogram(records);
  }
  Json doc;
  doc["kernel"] = a.kernel;
  doc["bandwidth"] = a.bandwidth;
  doc["self_normalize"] = cfg.self_normalize;
  doc["reward"] = a.reward;
  PricingPolicy policy;
  if (a.policy) {
    run.input(*a.policy);
    policy = io::policy_from_json(io::read_json_file(*a.policy));
  } else {
    PatternSearchOptions po;
    po.starts = a.starts;
    const auto res = optimize_linear_policy(records, cfg, g.seed, po);
    policy = res.policy;
    doc["best_constant"] = Json{{"price", io::number(res.best_constant_price)},
                                {"value", io::number(res.best_constant_value)}};
    std::string traces = "start,level,value\n";
    for (std::size_t s = 0; s < res.traces.size(); ++s)
      for (std::size_t l = 0; l < res.traces[s].size(); ++l)
        traces += std::to_string(s) + "," + std::to_string(l) + "," + format_double(res.traces[s][l]) + "\n";
    run.write("traces.csv", traces);
    run.write("policy.json", io::dump(io::policy_to_json(policy)));
  }
  const OPEResult r = ope_with_bootstrap(policy, records, cfg, a.bootstrap, g.seed);
  doc["policy"] = io::policy_to_json(policy);
  doc["value"] = io::number(r.value);
  doc["standard_error"] = io::number(r.standard_error);
  doc["resamples"] = r.resamples;
  doc["effective_sample_size"] = io::number(r.effective_sample_size);
  if (run.json()) {
    run.write("ope.json", io::dump(doc));
  } else {
    std::string s = "metric,value\n";
    s += "value," + format_double(r.value) + "\n";
    s += "standard_error," + format_double(r.standard_error) + "\n";
    s += "resamples," + std::to_string(r.resamples) + "\n";
    s += "effective_sample_size," + format_double(r.effective_sample_size) + "\n";
    if (doc.contains("best_constant")) {
      s += "best_constant_price," + format_double(io::read_number(doc["best_constant"]["price"], "price")) + "\n";
      s += "best_constant_value," + format_double(io::read_number(doc["best_constant"]["value"], "value")) + "\n";
    }
    run.write("ope.csv", s);
  }
  run.info("ope: value " + format_double(r.value) + " (se " + format_double(r.standard_error) + ")");
}

// ---- sweep --------------------------------------------------------------

struct SweepArgs {
  std::optional<std::string> scenario;
  std::optional<std::string> model;
  std::optional<std::string> population;
  std::vector<std::string> gamma_grid;
  std::vector<double> lambda_grid;
  std::string scope = "population";
  std::string mode = "based";
  std::optional<double> price_max;
  bool seed_given = false;
};

void cmd_sweep(const SweepArgs& a, const Globals& g, Run& run) {
  usage_check(!a.gamma_grid.empty() || !a.lambda_grid.empty(), "sweep needs --gamma-grid and/or --lambda-grid");
  DemandModel model;
  Population pop;
  if (a.scenario) {
    usage_check(!a.model && !a.population, "sweep takes either --scenario or --model/--population");
    run.config(*a.scenario);
    io::ScenarioFile file = io::parse_scenario_file(*a.scenario);
    if (a.seed_given) file.config.seed = g.seed;
    run.seed(file.config.seed);
    pop = generate_population(file.config);
    pop.records.clear();
    model = file.config.model;
  } else {
    usage_check(a.model && a.population, "sweep needs --model and --population");
    run.input(*a.model);
    run.input(*a.population);
    model = io::model_from_json(io::read_json_file(*a.model));
    pop = io::population_from_json(io::read_json_file(*a.population));
  }
  if (!a.gamma_grid.empty()) {
    std::string csv = "gamma,group,access,revenue,price_mean,lambda_star,disparity\n";
    Json rows = Json::array();
    std::vector<double> grid;
    for (const auto& t : a.gamma_grid) grid.push_back(parse_gamma(t));
    std::sort(grid.begin(), grid.end());
    for (double gamma : grid) {
      PriceArgs pa;
      pa.gamma = std::isinf(gamma) ? "inf" : format_double(gamma);
      pa.mode = a.mode;
      pa.price_max = a.price_max;
      const PriceOutcome out = price_once(model, pop, pa);
      const auto& sum = out.doc["summary"];
      for (const auto& grp : pop.groups) {
        csv += (std::isinf(gamma) ? std::string("inf") : format_double(gamma)) + "," + grp + "," +
               format_double(io::read_number(sum["access"][grp], "access")) + "," +
               format_double(io::read_number(sum["revenue"], "revenue")) + "," +
               format_double(io::read_number(sum["mean_price"][grp], "mean_price")) + "," +
               format_double(io::read_number(out.doc["lambda_star"], "lambda_star")) + "," +
               format_double(io::read_number(out.doc["disparity"], "disparity")) + "\n";
      }
      rows.push_back(out.doc);
    }
    run.write("parity_sweep.csv", csv);
    if (run.json()) run.write("parity_sweep.json", io::dump(rows));
  }
  if (!a.lambda_grid.empty()) {
    const double hi = a.price_max ? *a.price_max : default_price_max(model, pop, 10.0);
    const auto rows = share_frontier(model, pop, parse_scope(a.scope), a.lambda_grid, PriceInterval{0.0, hi, 4096},
                                     a.mode == "based");
    std::string csv = "lambda,group,access,revenue,price_mean\n";
    for (const auto& r : rows)
      for (std::size_t k = 0; k < pop.groups.size(); ++k)
        csv += format_double(r.lambda) + "," + pop.groups[k] + "," + format_double(r.access[k]) + "," +
               format_double(r.revenue) + "," + format_double(r.price_mean[k]) + "\n";
    run.write("frontier.csv", csv);
    if (run.json()) run.write("frontier.json", io::dump(io::frontier_to_json(rows, pop.groups)));
  }
  run.info("sweep: done");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fairness-aware personalized pricing: fit, price, audit, simulate, ope, sweep"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out-dir", g.out_dir, "Output directory");
  app.add_option("--format", g.format, "Structured output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--quiet", g.quiet, "Suppress progress messages");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a demand model to a record CSV");
  fit_cmd->add_option("data,--data", fit.data, "Record CSV")->required();
  fit_cmd->add_option("--family", fit.family)->check(CLI::IsMember({"logistic", "partially_linear"}));
  fit_cmd->add_flag("--group-offsets", fit.group_offsets, "Per-group intercept shifts (logistic)");
  fit_cmd->add_flag("--allow-upward", fit.allow_upward, "Accept nonnegative price slopes (partially linear)");

  PriceArgs price;
  auto* price_cmd = app.add_subcommand("price", "Parity-constrained or share-penalized prices");
  price_cmd->add_option("--model", price.model)->required();
  price_cmd->add_option("--population", price.population)->required();
  auto* gamma_opt = price_cmd->add_option("--gamma", price.gamma, "Parity cap (number or inf)");
  auto* lambda_opt = price_cmd->add_option("--share-lambda", price.share_lambda, "Market-share penalty");
  gamma_opt->excludes(lambda_opt);
  price_cmd->add_option("--scope", price.scope)->check(CLI::IsMember({"population", "group"}));
  price_cmd->add_option("--mode", price.mode)->check(CLI::IsMember({"based", "blind"}));
  price_cmd->add_option("--price-max", price.price_max, "Upper end of the price search interval");

  AuditArgs audit;
  auto* audit_cmd = app.add_subcommand("audit", "Fairness metrics on records or on a policy");
  audit_cmd->add_option("--data", audit.data);
  audit_cmd->add_option("--model", audit.model);
  audit_cmd->add_option("--population", audit.population);
  audit_cmd->add_option("--policy", audit.policy);
  audit_cmd->add_option("--metric", audit.metrics)->check(CLI::IsMember(audit_metric_names()));
  audit_cmd->add_option("--groups", audit.groups, "Compared groups a,b");
  audit_cmd->add_option("--alpha", audit.alpha, "KS significance level");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic population and run the pricing experiment");
  sim_cmd->add_option("scenario,--scenario", sim.scenario)->required();

  OpeArgs ope;
  auto* ope_cmd = app.add_subcommand("ope", "Kernel off-policy evaluation and linear policy search");
  ope_cmd->add_option("data,--data", ope.data)->required();
  ope_cmd->add_option("--policy", ope.policy);
  ope_cmd->add_flag("--optimize", ope.optimize);
  ope_cmd->add_option("--levels", ope.levels)->delimiter(',');
  ope_cmd->add_option("--range", ope.range)->delimiter(',');
  ope_cmd->add_option("--bandwidth", ope.bandwidth);
  ope_cmd->add_option("--kernel", ope.kernel)->check(CLI::IsMember({"epanechnikov", "triangular", "uniform"}));
  ope_cmd->add_option("--reward", ope.reward)->check(CLI::IsMember({"revenue", "outcome"}));
  ope_cmd->add_option("--bootstrap", ope.bootstrap);
  ope_cmd->add_option("--starts", ope.starts);
  ope_cmd->add_flag("--unnormalized", ope.unnormalized);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Parity and market-share frontiers over parameter grids");
  sweep_cmd->add_option("--scenario", sweep.scenario);
  sweep_cmd->add_option("--model", sweep.model);
  sweep_cmd->add_option("--population", sweep.population);
  sweep_cmd->add_option("--gamma-grid", sweep.gamma_grid)->delimiter(',');
  sweep_cmd->add_option("--lambda-grid", sweep.lambda_grid)->delimiter(',');
  sweep_cmd->add_option("--scope", sweep.scope)->check(CLI::IsMember({"population", "group"}));
  sweep_cmd->add_option("--mode", sweep.mode)->check(CLI::IsMember({"based", "blind"}));
  sweep_cmd->add_option("--price-max", sweep.price_max);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error_code=usage exit=" << kExitUsage << " message=" << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const std::string name = app.get_subcommands().front()->get_name();
    Run run(name, g, args);
    if (name == "fit") {
      cmd_fit(fit, run);
    } else if (name == "price") {
      cmd_price(price, run);
    } else if (name == "audit") {
      cmd_audit(audit, run);
    } else if (name == "simulate") {
      sim.seed_given = seed_opt->count() > 0;
      cmd_simulate(sim, g, run);
    } else if (name == "ope") {
      cmd_ope(ope, g, run);
    } else {
      sweep.seed_given = seed_opt->count() > 0;
      cmd_sweep(sweep, g, run);
    }
    run.finish();
  } catch (const UsageError& e) {
    std::cerr << "error_code=usage exit=" << kExitUsage << " message=" << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    std::cerr << "error_code=" << to_string(e.code()) << " exit=" << code << " message=" << e.what() << "\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error_code=internal exit=6 message=" << e.what() << "\n";
    return 6;
  }
  return 0;
}
