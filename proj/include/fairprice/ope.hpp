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
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "fairprice/error.hpp"
#include "fairprice/parallel.hpp"
#include "fairprice/policy.hpp"
#include "fairprice/record.hpp"
#include "fairprice/rng.hpp"

namespace fairprice {

enum class KernelKind { epanechnikov, triangular, uniform };

inline KernelKind parse_kernel(std::string_view name) {
  if (name == "epanechnikov") return KernelKind::epanechnikov;
  if (name == "triangular") return KernelKind::triangular;
  if (name == "uniform") return KernelKind::uniform;
  fail(ErrorCode::invalid_argument, "unknown kernel '" + std::string(name) + "'");
}

inline std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::epanechnikov: return "epanechnikov";
    case KernelKind::triangular: return "triangular";
    case KernelKind::uniform: return "uniform";
  }
  return "epanechnikov";
}

/// Kernels on [-1, 1], each integrating to 1.
inline double kernel_value(KernelKind k, double u) {
  const double a = std::abs(u);
  if (a > 1.0) return 0.0;
  switch (k) {
    case KernelKind::epanechnikov: return 0.75 * (1.0 - u * u);
    case KernelKind::triangular: return 1.0 - a;
    case KernelKind::uniform: return 0.5;
  }
  return 0.0;
}

/// Density of the logged (behavior) prices in standardized units s = (p - lo) / (hi - lo).
struct BehaviorDensity {
  enum class Kind { levels, uniform, histogram };
  Kind kind = Kind::uniform;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> levels;  // levels: offer set; histogram: bin edges in price units
  std::vector<double> masses;  // levels: randomization masses; histogram: standardized bin densities

  double width() const { return hi - lo; }

  /// Uniform randomization over a discrete offer set.
  static BehaviorDensity uniform_levels(std::vector<double> levels) {
    require(levels.size() >= 2, ErrorCode::invalid_argument, "offer set needs at least two levels");
    std::sort(levels.begin(), levels.end());
    BehaviorDensity d;
    d.kind = Kind::levels;
    d.lo = levels.front();
    d.hi = levels.back();
    d.masses.assign(levels.size(), 1.0 / static_cast<double>(levels.size()));
    d.levels = std::move(levels);
    return d;
  }

  static BehaviorDensity continuous_uniform(double lo, double hi) {
    require(lo < hi, ErrorCode::invalid_argument, "price range needs lo < hi");
    BehaviorDensity d;
    d.kind = Kind::uniform;
    d.lo = lo;
    d.hi = hi;
    return d;
  }

  /// Histogram of the observed prices with `bins` equal-width bins.
  static BehaviorDensity fitted_histogram(const std::vector<Record>& records, int bins = 20) {
    require(bins >= 1, ErrorCode::invalid_argument, "histogram needs at least one bin");
    BehaviorDensity d;
    d.kind = Kind::histogram;
    d.lo = kInfinity();
    d.hi = -kInfinity();
    for (const auto& r : records) {
      if (!r.price.has_value()) fail(ErrorCode::missing_data, "record '" + r.id + "' has no observed price");
      d.lo = std::min(d.lo, *r.price);
      d.hi = std::max(d.hi, *r.price);
    }
    require(d.lo < d.hi, ErrorCode::degenerate, "observed prices show no variation");
    d.masses.assign(bins, 0.0);
    for (int b = 0; b <= bins; ++b) d.levels.push_back(d.lo + d.width() * b / bins);
    for (const auto& r : records) d.masses[d.bin_of(*r.price)] += 1.0;
    for (double& m : d.masses) m *= bins / static_cast<double>(records.size());
    return d;
  }

  /// Behavior density at an observed price; levels report their mass.
  double at(double p) const {
    switch (kind) {
      case Kind::uniform:
        require(p >= lo && p <= hi, ErrorCode::missing_data, "observed price outside the randomization range");
        return 1.0;
      case Kind::levels:
        for (std::size_t i = 0; i < levels.size(); ++i)
          if (std::abs(levels[i] - p) <= 1e-9 * std::max(1.0, std::abs(p))) return masses[i];
        fail(ErrorCode::missing_data, "observed price " + std::to_string(p) + " is not an offer level");
      case Kind::histogram:
        require(p >= lo && p <= hi, ErrorCode::missing_data, "observed price outside the histogram range");
        return masses[bin_of(p)];
    }
    return 0.0;
  }

 private:
  static double kInfinity() { return std::numeric_limits<double>::infinity(); }

  std::size_t bin_of(double p) const {
    const std::size_t n = masses.size();
    const auto b = static_cast<std::size_t>(std::floor((p - lo) / width() * static_cast<double>(n)));
    return std::min(b, n - 1);
  }
};

enum class RewardKind { revenue, outcome };

struct OPEConfig {
  KernelKind kernel = KernelKind::epanechnikov;
  double bandwidth = 0.3;  // standardized price units
  BehaviorDensity density;
  bool self_normalize = true;
  RewardKind reward = RewardKind::revenue;

  void validate() const {
    require(bandwidth > 0 && std::isfinite(bandwidth), ErrorCode::invalid_argument, "bandwidth must be positive");
    require(density.lo < density.hi, ErrorCode::invalid_argument, "behavior density needs a price range");
  }
};

namespace detail {

inline double reward_of(const Record& r, RewardKind kind) {
  if (!r.price.has_value()) fail(ErrorCode::missing_data, "record '" + r.id + "' has no observed price");
  if (kind == RewardKind::outcome) {
    if (!r.outcome.has_value()) fail(ErrorCode::missing_data, "record '" + r.id + "' has no outcome");
    return *r.outcome;
  }
  if (!r.demand.has_value()) fail(ErrorCode::missing_data, "record '" + r.id + "' has no observed demand");
  return *r.price * *r.demand;
}

}  // namespace detail

/// Per-record kernel weights and rewards; precomputed once for resampling.
struct OPEData {
  std::vector<double> weight;
  std::vector<double> reward;
};

inline OPEData ope_terms(const PricingPolicy& policy, const std::vector<Record>& records, const OPEConfig& cfg) {
  cfg.validate();
  require(is_attribute_blind(policy) || std::holds_alternative<GroupPolicy>(policy), ErrorCode::invalid_argument,
          "kernel evaluation needs a price rule defined on records");
  OPEData d;
  d.weight.reserve(records.size());
  d.reward.reserve(records.size());
  const double scale = cfg.density.width() * cfg.bandwidth;
  for (const auto& r : records) {
    d.reward.push_back(detail::reward_of(r, cfg.reward));
    const double p = *r.price;
    const double f = cfg.density.at(p);
    require(f > 0, ErrorCode::missing_data, "behavior density is zero at an observed price");
    const double u = (policy_price(policy, r) - p) / scale;
    d.weight.push_back(kernel_value(cfg.kernel, u) / (cfg.bandwidth * f));
  }
  return d;
}

inline double ope_estimate(const OPEData& d, bool self_normalize, const std::vector<std::size_t>* sample = nullptr) {
  double num = 0.0, den = 0.0;
  const std::size_t n = sample ? sample->size() : d.weight.size();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = sample ? (*sample)[k] : k;
    num += d.weight[i] * d.reward[i];
    den += d.weight[i];
  }
  require(den > 0, ErrorCode::degenerate,
          "all kernel weights are zero: the policy's prices are too far from the observed prices");
  return self_normalize ? num / den : num / static_cast<double>(n);
}

/// Kernel off-policy value: sum w_i r_i / sum w_i, w_i = K((pi(x_i) - p_i) / h) / (h f(p_i)),
/// with prices standardized by the offer-range width.
inline double ope_value(const PricingPolicy& policy, const std::vector<Record>& records, const OPEConfig& cfg) {
  require(!records.empty(), ErrorCode::missing_data, "no records to evaluate");
  return ope_estimate(ope_terms(policy, records, cfg), cfg.self_normalize);
}

struct OPEResult {
  double value = 0.0;
  double standard_error = 0.0;  // bootstrap; 0 when no resamples
  std::size_t resamples = 0;
  double effective_sample_size = 0.0;
};

/// Value plus the bootstrap standard error over `resamples` record resamples.
inline OPEResult ope_with_bootstrap(const PricingPolicy& policy, const std::vector<Record>& records,
                                    const OPEConfig& cfg, std::size_t resamples, std::uint64_t seed) {
  require(!records.empty(), ErrorCode::missing_data, "no records to evaluate");
  const OPEData d = ope_terms(policy, records, cfg);
  OPEResult out;
  out.value = ope_estimate(d, cfg.self_normalize);
  double s1 = 0.0, s2 = 0.0;
  for (double w : d.weight) {
    s1 += w;
    s2 += w * w;
  }
  out.effective_sample_size = s2 > 0 ? s1 * s1 / s2 : 0.0;
  out.resamples = resamples;
  if (resamples < 2) return out;
  const Rng root(seed);
  const std::size_t n = records.size();
  const auto values = parallel_chunks<std::vector<double>>(resamples, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> v;
    std::vector<std::size_t> idx(n);
    for (std::size_t b = lo; b < hi; ++b) {
      Rng rng = root.split(b);
      for (auto& i : idx) i = rng.index(n);
      try {
        v.push_back(ope_estimate(d, cfg.self_normalize, &idx));
      } catch (const Error&) {
        v.push_back(NAN);
      }
    }
    return v;
  });
  double m = 0.0, q = 0.0;
  std::size_t k = 0;
  for (const auto& c : values)
    for (double v : c) {
      if (std::isnan(v)) continue;
      ++k;
      const double delta = v - m;
      m += delta / static_cast<double>(k);
      q += delta * (v - m);
    }
  out.standard_error = k > 1 ? std::sqrt(q / static_cast<double>(k - 1)) : 0.0;
  return out;
}

struct PatternSearchOptions {
  std::size_t starts = 16;
  int halvings = 6;
  double step_fraction = 0.1;
  bool constant_start = true;           // include the best constant price among the starts
  std::vector<LinearPolicy> initial;    // explicit starts, used first
  int constant_grid = 101;
};

struct PolicySearchResult {
  LinearPolicy policy;
  double value = 0.0;
  std::vector<std::vector<double>> traces;  // per start: value after each step size
  double best_constant_price = 0.0;
  double best_constant_value = 0.0;
};

/// Multi-start coordinate pattern search over clipped linear policies, clip
/// range taken from the observed prices. Moves are accepted only when they
/// strictly improve the estimated value.
inline PolicySearchResult optimize_linear_policy(const std::vector<Record>& records, const OPEConfig& cfg,
                                                 std::uint64_t seed, const PatternSearchOptions& opt = {}) {
  require(!records.empty(), ErrorCode::missing_data, "no records to learn from");
  require(opt.starts >= 1, ErrorCode::invalid_argument, "policy search needs at least one start");
  require(opt.halvings >= 0 && opt.step_fraction > 0, ErrorCode::invalid_argument, "invalid step schedule");
  cfg.validate();
  const std::size_t k = records.front().covariates.size();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::vector<double> mean(k, 0.0), sd(k, 0.0);
  for (const auto& r : records) {
    if (!r.price.has_value()) fail(ErrorCode::missing_data, "record '" + r.id + "' has no observed price");
    require(r.covariates.size() == k, ErrorCode::dimension_mismatch, "records differ in covariate dimension");
    lo = std::min(lo, *r.price);
    hi = std::max(hi, *r.price);
    for (std::size_t j = 0; j < k; ++j) mean[j] += r.covariates[j] / static_cast<double>(records.size());
  }
  require(lo < hi, ErrorCode::degenerate, "observed prices show no variation");
  for (const auto& r : records)
    for (std::size_t j = 0; j < k; ++j) sd[j] += std::pow(r.covariates[j] - mean[j], 2) / records.size();
  for (auto& s : sd) s = std::sqrt(s) > 0 ? std::sqrt(s) : 1.0;
  const double range = hi - lo;

  auto evaluate = [&](const LinearPolicy& p) {
    try {
      return ope_value(p, records, cfg);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::degenerate) return -std::numeric_limits<double>::infinity();
      throw;
    }
  };
  auto constant = [&](double c) { return LinearPolicy{c, std::vector<double>(k, 0.0), lo, hi}; };

  PolicySearchResult out;
  out.best_constant_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < opt.constant_grid; ++i) {
    const double c = lo + range * i / (opt.constant_grid - 1);
    const double v = evaluate(constant(c));
    if (v > out.best_constant_value) {
      out.best_constant_value = v;
      out.best_constant_price = c;
    }
  }

  std::vector<LinearPolicy> starts;
  for (auto p : opt.initial) {
    require(p.theta.size() == k, ErrorCode::dimension_mismatch, "initial policy has the wrong dimension");
    p.clip_lo = lo;
    p.clip_hi = hi;
    if (starts.size() < opt.starts) starts.push_back(std::move(p));
  }
  if (opt.constant_start && starts.size() < opt.starts) starts.push_back(constant(out.best_constant_price));
  const Rng root(seed);
  for (std::size_t s = starts.size(); s < opt.starts; ++s) {
    Rng rng = root.split(s);
    LinearPolicy p = constant(rng.uniform(lo, hi));
    for (std::size_t j = 0; j < k; ++j) p.theta[j] = rng.uniform(-0.5, 0.5) * range / sd[j];
    p.intercept -= detail::dot(p.theta, mean);
    starts.push_back(std::move(p));
  }

  struct Run {
    LinearPolicy policy;
    double value;
    std::vector<double> trace;
  };
  const auto runs = parallel_chunks<std::vector<Run>>(starts.size(), [&](std::size_t a, std::size_t b) {
    std::vector<Run> rs;
    for (std::size_t s = a; s < b; ++s) {
      LinearPolicy p = starts[s];
      double v = evaluate(p);
      std::vector<double> trace{v};
      double step = opt.step_fraction * range;
      for (int level = 0; level <= opt.halvings; ++level, step *= 0.5) {
        bool improved = true;
        while (improved) {
          improved = false;
          for (std::size_t c = 0; c <= k; ++c) {
            const double delta = c == 0 ? step : step / sd[c - 1];
            for (double dir : {1.0, -1.0}) {
              LinearPolicy q = p;
              (c == 0 ? q.intercept : q.theta[c - 1]) += dir * delta;
              const double vq = evaluate(q);
              if (vq > v) {
                p = std::move(q);
                v = vq;
                improved = true;
                break;
              }
            }
          }
        }
        trace.push_back(v);
      }
      rs.push_back({std::move(p), v, std::move(trace)});
    }
    return rs;
  });
  bool first = true;
  for (const auto& chunk : runs)
    for (const auto& r : chunk) {
      out.traces.push_back(r.trace);
      if (first || r.value > out.value) {
        out.policy = r.policy;
        out.value = r.value;
        first = false;
      }
    }
  return out;
}

}  // namespace fairprice
