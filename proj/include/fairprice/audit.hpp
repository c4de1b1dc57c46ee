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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fairprice/demand.hpp"
#include "fairprice/error.hpp"
#include "fairprice/optimize.hpp"
#include "fairprice/parallel.hpp"
#include "fairprice/policy.hpp"
#include "fairprice/record.hpp"

namespace fairprice {

/// The two compared groups; disparities are signed `a` minus `b`.
struct GroupPair {
  std::string a;
  std::string b;
};

/// Explicit pair, or the two labels present in the records (sorted).
inline GroupPair resolve_pair(const std::vector<Record>& records, const std::optional<GroupPair>& pair = {}) {
  if (pair) {
    require(pair->a != pair->b, ErrorCode::invalid_argument, "compared groups must differ");
    return *pair;
  }
  const auto labels = group_labels(records);
  if (labels.size() != 2) {
    fail(ErrorCode::invalid_argument, "expected exactly two groups in the records, found " +
                                          std::to_string(labels.size()) + "; name the pair explicitly");
  }
  return {labels[0], labels[1]};
}

namespace detail {

inline double require_price(const Record& r) {
  if (!r.price.has_value()) fail(ErrorCode::missing_data, "record '" + r.id + "' has no observed price");
  return *r.price;
}

inline double require_demand(const Record& r) {
  if (!r.demand.has_value()) fail(ErrorCode::missing_data, "record '" + r.id + "' has no observed demand");
  return *r.demand;
}

inline int require_binary_demand(const Record& r) {
  const double d = require_demand(r);
  if (!(d == 0.0 || d == 1.0)) fail(ErrorCode::invalid_argument, "record '" + r.id + "' has non-binary demand");
  return static_cast<int>(d);
}

struct Weighted {
  std::vector<double> values;
  std::vector<double> weights;
};

template <typename Pred>
Weighted collect_prices(const std::vector<Record>& records, const std::string& group, Pred keep) {
  Weighted w;
  for (const auto& r : records) {
    if (r.group != group || !keep(r)) continue;
    w.values.push_back(require_price(r));
    w.weights.push_back(r.weight);
  }
  return w;
}

inline double weighted_mean(const Weighted& w) {
  double s = 0.0, t = 0.0;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    s += w.weights[i] * w.values[i];
    t += w.weights[i];
  }
  return s / t;
}

}  // namespace detail

/// Weighted mean observed price of group a minus group b.
inline double marginal_price_disparity(const std::vector<Record>& records, const std::optional<GroupPair>& pair = {}) {
  const GroupPair gp = resolve_pair(records, pair);
  const auto a = detail::collect_prices(records, gp.a, [](const Record&) { return true; });
  const auto b = detail::collect_prices(records, gp.b, [](const Record&) { return true; });
  if (a.values.empty()) fail(ErrorCode::empty_group, "group '" + gp.a + "' has no records");
  if (b.values.empty()) fail(ErrorCode::empty_group, "group '" + gp.b + "' has no records");
  return detail::weighted_mean(a) - detail::weighted_mean(b);
}

/// E[P | A=a] - E[P | A=b] for a policy over the population's support.
inline double marginal_price_disparity(const PricingPolicy& policy, const Population& pop) {
  require(pop.has_support(), ErrorCode::missing_data, "policy disparity needs a discrete support");
  require(pop.groups.size() == 2, ErrorCode::invalid_argument, "marginal disparity compares two groups");
  double s[2] = {0, 0}, m[2] = {0, 0};
  for (std::size_t i = 0; i < pop.support.size(); ++i)
    for (std::size_t g = 0; g < 2; ++g) {
      const double w = pop.joint(i, g);
      if (w == 0.0) continue;
      s[g] += w * policy_price(policy, pop, i, g);
      m[g] += w;
    }
  require(m[0] > 0 && m[1] > 0, ErrorCode::empty_group, "a group has no mass on the support");
  return s[0] / m[0] - s[1] / m[1];
}

struct KSResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool reject = false;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

/// Asymptotic two-sample KS coefficient c(alpha) = sqrt(-log(alpha/2)/2).
inline double ks_coefficient(double alpha) {
  require(alpha > 0 && alpha < 1, ErrorCode::invalid_argument, "significance level must lie in (0,1)");
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b| on weighted
/// empirical CDFs, with the critical value c(alpha) sqrt((n+m)/(nm)).
inline KSResult ks_two_sample(std::vector<double> a, std::vector<double> wa, std::vector<double> b,
                              std::vector<double> wb, double alpha = 0.05) {
  require(!a.empty() && !b.empty(), ErrorCode::empty_group, "KS statistic needs both samples nonempty");
  if (wa.empty()) wa.assign(a.size(), 1.0);
  if (wb.empty()) wb.assign(b.size(), 1.0);
  require(wa.size() == a.size() && wb.size() == b.size(), ErrorCode::dimension_mismatch,
          "weights must match samples");
  auto sorted = [](std::vector<double>& v, std::vector<double>& w) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
    std::vector<double> v2, w2;
    double total = 0.0;
    for (std::size_t i : idx) {
      v2.push_back(v[i]);
      w2.push_back(w[i]);
      total += w[i];
    }
    for (double& x : w2) x /= total;
    v = std::move(v2);
    w = std::move(w2);
  };
  sorted(a, wa);
  sorted(b, wb);
  double fa = 0.0, fb = 0.0, d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    const double t = (j >= b.size() || (i < a.size() && a[i] <= b[j])) ? a[i] : b[j];
    while (i < a.size() && a[i] == t) fa += wa[i++];
    while (j < b.size() && b[j] == t) fb += wb[j++];
    d = std::max(d, std::abs(fa - fb));
  }
  KSResult r;
  r.statistic = std::min(1.0, d);
  r.n_a = a.size();
  r.n_b = b.size();
  const double n = static_cast<double>(r.n_a), m = static_cast<double>(r.n_b);
  r.critical = ks_coefficient(alpha) * std::sqrt((n + m) / (n * m));
  r.reject = r.statistic > r.critical;
  return r;
}

/// KS test of P independent of A on observed prices.
inline KSResult distributional_parity_stat(const std::vector<Record>& records,
                                           const std::optional<GroupPair>& pair = {}, double alpha = 0.05) {
  const GroupPair gp = resolve_pair(records, pair);
  auto a = detail::collect_prices(records, gp.a, [](const Record&) { return true; });
  auto b = detail::collect_prices(records, gp.b, [](const Record&) { return true; });
  if (a.values.empty()) fail(ErrorCode::empty_group, "group '" + gp.a + "' has no records");
  if (b.values.empty()) fail(ErrorCode::empty_group, "group '" + gp.b + "' has no records");
  return ks_two_sample(a.values, a.weights, b.values, b.weights, alpha);
}

struct ConditionalGap {
  double gap = 0.0;
  std::optional<std::size_t> argmax;
  std::string note;
};

/// max_x |p(x, a) - p(x, b)| over support points where both groups occur.
inline ConditionalGap conditional_parity_gap(const PricingPolicy& policy, const Population& pop) {
  require(pop.groups.size() == 2, ErrorCode::invalid_argument, "conditional parity compares two groups");
  ConditionalGap out;
  if (is_attribute_blind(policy)) {
    out.note = "attribute-blind policy: prices cannot differ by group at any x";
    return out;
  }
  require(pop.has_support(), ErrorCode::missing_data, "conditional parity needs a discrete support");
  for (std::size_t i = 0; i < pop.support.size(); ++i) {
    const auto& m = pop.support[i].membership;
    if (m.at(0) == 0.0 || m.at(1) == 0.0) continue;
    const double g = std::abs(policy_price(policy, pop, i, 0) - policy_price(policy, pop, i, 1));
    if (!out.argmax || g > out.gap) {
      out.gap = g;
      out.argmax = i;
    }
  }
  if (!out.argmax) out.note = "no support point contains both groups";
  return out;
}

struct TakeupParity {
  std::optional<KSResult> purchased;  // D = 1 stratum
  std::optional<KSResult> declined;   // D = 0 stratum
};

/// KS statistics of price by group within each take-up stratum. An absent
/// stratum is reported empty; a stratum holding only one group is an error.
inline TakeupParity takeup_conditional_parity(const std::vector<Record>& records,
                                              const std::optional<GroupPair>& pair = {}, double alpha = 0.05) {
  const GroupPair gp = resolve_pair(records, pair);
  TakeupParity out;
  for (int d : {1, 0}) {
    auto keep = [d](const Record& r) { return detail::require_binary_demand(r) == d; };
    auto a = detail::collect_prices(records, gp.a, keep);
    auto b = detail::collect_prices(records, gp.b, keep);
    if (a.values.empty() && b.values.empty()) continue;
    if (a.values.empty() || b.values.empty()) {
      fail(ErrorCode::empty_group, "take-up stratum D=" + std::to_string(d) + " is missing group '" +
                                       (a.values.empty() ? gp.a : gp.b) + "'");
    }
    auto r = ks_two_sample(a.values, a.weights, b.values, b.weights, alpha);
    (d == 1 ? out.purchased : out.declined) = r;
  }
  return out;
}

struct AccessMetrics {
  double total = 0.0;
  double group_a = 0.0;
  double group_b = 0.0;
  double disparity = 0.0;  // group_a - group_b
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

/// Weighted mean observed demand overall and by group.
inline AccessMetrics access_metrics(const std::vector<Record>& records, const std::optional<GroupPair>& pair = {}) {
  const GroupPair gp = resolve_pair(records, pair);
  AccessMetrics out;
  double s = 0, w = 0, sa = 0, wa = 0, sb = 0, wb = 0;
  for (const auto& r : records) {
    const double d = detail::require_demand(r);
    s += r.weight * d;
    w += r.weight;
    if (r.group == gp.a) {
      sa += r.weight * d;
      wa += r.weight;
      ++out.n_a;
    } else if (r.group == gp.b) {
      sb += r.weight * d;
      wb += r.weight;
      ++out.n_b;
    }
  }
  if (out.n_a == 0) fail(ErrorCode::empty_group, "group '" + gp.a + "' has no records");
  if (out.n_b == 0) fail(ErrorCode::empty_group, "group '" + gp.b + "' has no records");
  out.total = s / w;
  out.group_a = sa / wa;
  out.group_b = sb / wb;
  out.disparity = out.group_a - out.group_b;
  return out;
}

/// Model-implied access under a policy; uses unclamped expected demand.
inline AccessMetrics access_metrics(const PricingPolicy& policy, const DemandModel& model, const Population& pop) {
  require(pop.groups.size() == 2, ErrorCode::invalid_argument, "access disparity compares two groups");
  const ObjectiveValue v = scalarized_objective(policy, model, pop, ScalarizationWeights{});
  AccessMetrics out;
  out.total = v.total_access;
  out.group_a = v.access[0];
  out.group_b = v.access[1];
  out.disparity = out.group_a - out.group_b;
  return out;
}

/// Lower bound on P(V_b > V_a | P_a < P_b) from censored purchase decisions:
/// the fraction of cross pairs (i in a, j in b, p_i < p_j) with D_i = 0, D_j = 1.
struct ConcordanceBound {
  double value = 0.0;
  std::size_t certified = 0;   // pairs with the (0, 1) pattern
  std::size_t qualifying = 0;  // pairs with p_i < p_j
  std::size_t excluded = 0;    // ties and reversed order
  std::size_t total = 0;       // |a| x |b|
};

namespace detail {

struct CrossSplit {
  std::vector<const Record*> a;
  std::vector<const Record*> b;
};

inline CrossSplit split_pair(const std::vector<Record>& records, const GroupPair& gp) {
  CrossSplit s;
  for (const auto& r : records) {
    if (r.group == gp.a) s.a.push_back(&r);
    else if (r.group == gp.b) s.b.push_back(&r);
  }
  if (s.a.empty()) fail(ErrorCode::empty_group, "group '" + gp.a + "' has no records");
  if (s.b.empty()) fail(ErrorCode::empty_group, "group '" + gp.b + "' has no records");
  return s;
}

}  // namespace detail

inline ConcordanceBound concordance_lower_bound(const std::vector<Record>& records,
                                                const std::optional<GroupPair>& pair = {}) {
  const GroupPair gp = resolve_pair(records, pair);
  const auto s = detail::split_pair(records, gp);
  for (const Record* r : s.a) detail::require_binary_demand(*r), detail::require_price(*r);
  for (const Record* r : s.b) detail::require_binary_demand(*r), detail::require_price(*r);
  struct Counts {
    std::size_t certified = 0, qualifying = 0;
  };
  const auto parts = parallel_chunks<Counts>(s.a.size(), [&](std::size_t lo, std::size_t hi) {
    Counts c;
    for (std::size_t i = lo; i < hi; ++i) {
      const Record& ri = *s.a[i];
      for (const Record* rj : s.b) {
        if (!(*ri.price < *rj->price)) continue;
        ++c.qualifying;
        if (*ri.demand == 0.0 && *rj->demand == 1.0) ++c.certified;
      }
    }
    return c;
  });
  ConcordanceBound out;
  for (const auto& c : parts) {
    out.certified += c.certified;
    out.qualifying += c.qualifying;
  }
  out.total = s.a.size() * s.b.size();
  out.excluded = out.total - out.qualifying;
  if (out.qualifying == 0) {
    fail(ErrorCode::no_qualifying_pairs, "no cross-group pair has a lower price in group '" + gp.a + "'");
  }
  out.value = static_cast<double>(out.certified) / static_cast<double>(out.qualifying);
  return out;
}

/// Pair-enumeration concordance from latent valuations.
struct ConcordanceOracle {
  double concordance = 0.0;           // P(V1 > V2 | P1 > P2)
  std::size_t concordance_pairs = 0;
  std::optional<double> b_over_a;     // P(V_b > V_a | P_a < P_b)
  std::size_t b_over_a_pairs = 0;
  std::optional<double> a_over_b;     // P(V_a > V_b | P_b < P_a)
  std::size_t a_over_b_pairs = 0;
  std::optional<double> disparity;    // b_over_a - a_over_b
};

inline ConcordanceOracle concordance_oracle(const std::vector<Record>& records,
                                            const std::optional<GroupPair>& pair = {}) {
  const GroupPair gp = resolve_pair(records, pair);
  for (const auto& r : records) {
    if (!r.valuation.has_value()) fail(ErrorCode::missing_data, "record '" + r.id + "' has no valuation");
    detail::require_price(r);
  }
  struct Counts {
    std::size_t hit = 0, pairs = 0;
  };
  const std::size_t n = records.size();
  const auto parts = parallel_chunks<Counts>(n, [&](std::size_t lo, std::size_t hi) {
    Counts c;
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const Record& u = records[i];
        const Record& v = records[j];
        if (*u.price == *v.price) continue;
        ++c.pairs;
        const bool u_higher = *u.price > *v.price;
        if (u_higher ? *u.valuation > *v.valuation : *v.valuation > *u.valuation) ++c.hit;
      }
    return c;
  });
  ConcordanceOracle out;
  std::size_t hit = 0;
  for (const auto& c : parts) {
    hit += c.hit;
    out.concordance_pairs += c.pairs;
  }
  require(out.concordance_pairs > 0, ErrorCode::no_qualifying_pairs, "every pair of records shares a price");
  out.concordance = static_cast<double>(hit) / static_cast<double>(out.concordance_pairs);

  const auto s = detail::split_pair(records, gp);
  std::size_t ba = 0, ab = 0;
  for (const Record* ra : s.a)
    for (const Record* rb : s.b) {
      if (*ra->price < *rb->price) {
        ++out.b_over_a_pairs;
        if (*rb->valuation > *ra->valuation) ++ba;
      } else if (*rb->price < *ra->price) {
        ++out.a_over_b_pairs;
        if (*ra->valuation > *rb->valuation) ++ab;
      }
    }
  if (out.b_over_a_pairs > 0) out.b_over_a = static_cast<double>(ba) / out.b_over_a_pairs;
  if (out.a_over_b_pairs > 0) out.a_over_b = static_cast<double>(ab) / out.a_over_b_pairs;
  if (out.b_over_a && out.a_over_b) out.disparity = *out.b_over_a - *out.a_over_b;
  return out;
}

/// One named statistic with optional per-group values and counts.
struct MetricEntry {
  std::string name;
  std::string definition;
  std::map<std::string, double> values;
  std::map<std::string, double> by_group;
  std::map<std::string, std::size_t> counts;
};

struct AuditReport {
  std::vector<MetricEntry> metrics;
  std::vector<std::string> warnings;

  const MetricEntry* find(std::string_view name) const {
    for (const auto& m : metrics)
      if (m.name == name) return &m;
    return nullptr;
  }
};

inline const std::vector<std::string>& audit_metric_names() {
  static const std::vector<std::string> names = {"marginal_price_disparity", "distributional_parity",
                                                 "takeup_conditional_parity", "access",
                                                 "concordance_lower_bound", "concordance_oracle"};
  return names;
}

struct AuditOptions {
  std::set<std::string> metrics;  // empty selects every metric
  std::optional<GroupPair> pair;
  double alpha = 0.05;
};

/// Audit of observed records. Metrics whose inputs are missing are skipped and
/// listed in the warnings; if nothing can be computed the audit fails.
inline AuditReport audit_records(const std::vector<Record>& records, const AuditOptions& opt = {}) {
  for (const auto& m : opt.metrics)
    if (!(std::find(audit_metric_names().begin(), audit_metric_names().end(), m) != audit_metric_names().end())) {
      fail(ErrorCode::invalid_argument, "unknown metric '" + m + "'");
    }
  const GroupPair gp = resolve_pair(records, opt.pair);
  auto wanted = [&](const std::string& m) { return opt.metrics.empty() || opt.metrics.count(m) > 0; };
  auto all = [&](auto pred) { return std::all_of(records.begin(), records.end(), pred); };
  const bool has_price = all([](const Record& r) { return r.price.has_value(); });
  const bool has_demand = all([](const Record& r) { return r.demand.has_value(); });
  const bool has_valuation = all([](const Record& r) { return r.valuation.has_value(); });

  AuditReport rep;
  auto attempt = [&](const std::string& name, bool inputs_ok, const char* missing, auto body) {
    if (!wanted(name)) return;
    if (!inputs_ok) {
      rep.warnings.push_back(name + ": skipped, " + missing);
      return;
    }
    try {
      MetricEntry e;
      e.name = name;
      body(e);
      rep.metrics.push_back(std::move(e));
    } catch (const Error& err) {
      rep.warnings.push_back(name + ": skipped, " + std::string(to_string(err.code())) + ": " + err.what());
    }
  };

  attempt("marginal_price_disparity", has_price, "price column incomplete", [&](MetricEntry& e) {
    e.definition = "E[P|A=a] - E[P|A=b]";
    e.values["disparity"] = marginal_price_disparity(records, gp);
    const auto a = detail::collect_prices(records, gp.a, [](const Record&) { return true; });
    const auto b = detail::collect_prices(records, gp.b, [](const Record&) { return true; });
    e.by_group[gp.a] = detail::weighted_mean(a);
    e.by_group[gp.b] = detail::weighted_mean(b);
    e.counts[gp.a] = a.values.size();
    e.counts[gp.b] = b.values.size();
  });
  attempt("distributional_parity", has_price, "price column incomplete", [&](MetricEntry& e) {
    e.definition = "two-sample KS statistic of P by A";
    const auto ks = distributional_parity_stat(records, gp, opt.alpha);
    e.values["statistic"] = ks.statistic;
    e.values["critical"] = ks.critical;
    e.values["reject"] = ks.reject ? 1.0 : 0.0;
    e.counts[gp.a] = ks.n_a;
    e.counts[gp.b] = ks.n_b;
  });
  attempt("takeup_conditional_parity", has_price && has_demand, "price or demand column incomplete",
          [&](MetricEntry& e) {
            e.definition = "KS statistic of P by A within D=1 and D=0";
            const auto t = takeup_conditional_parity(records, gp, opt.alpha);
            if (t.purchased) {
              e.values["statistic_d1"] = t.purchased->statistic;
              e.values["critical_d1"] = t.purchased->critical;
              e.counts["d1_" + gp.a] = t.purchased->n_a;
              e.counts["d1_" + gp.b] = t.purchased->n_b;
            }
            if (t.declined) {
              e.values["statistic_d0"] = t.declined->statistic;
              e.values["critical_d0"] = t.declined->critical;
              e.counts["d0_" + gp.a] = t.declined->n_a;
              e.counts["d0_" + gp.b] = t.declined->n_b;
            }
          });
  attempt("access", has_demand, "demand column incomplete", [&](MetricEntry& e) {
    e.definition = "E[D(P)], E[D(P)|A=g] and their group difference";
    const auto m = access_metrics(records, gp);
    e.values["total"] = m.total;
    e.values["disparity"] = m.disparity;
    e.by_group[gp.a] = m.group_a;
    e.by_group[gp.b] = m.group_b;
    e.counts[gp.a] = m.n_a;
    e.counts[gp.b] = m.n_b;
  });
  attempt("concordance_lower_bound", has_price && has_demand, "price or demand column incomplete",
          [&](MetricEntry& e) {
            e.definition = "lower bound on P(V_b > V_a | P_a < P_b) from (D_a, D_b) = (0, 1) pairs";
            const auto c = concordance_lower_bound(records, gp);
            e.values["bound"] = c.value;
            e.counts["certified"] = c.certified;
            e.counts["qualifying"] = c.qualifying;
            e.counts["excluded"] = c.excluded;
            e.counts["total"] = c.total;
          });
  attempt("concordance_oracle", has_price && has_valuation, "valuation column incomplete", [&](MetricEntry& e) {
    e.definition = "P(V1 > V2 | P1 > P2) and P(V_b > V_a | P_a < P_b) - P(V_a > V_b | P_b < P_a)";
    const auto c = concordance_oracle(records, gp);
    e.values["concordance"] = c.concordance;
    e.counts["pairs"] = c.concordance_pairs;
    if (c.b_over_a) e.values["b_over_a"] = *c.b_over_a;
    if (c.a_over_b) e.values["a_over_b"] = *c.a_over_b;
    if (c.disparity) e.values["class_crossed_disparity"] = *c.disparity;
    e.counts["b_over_a_pairs"] = c.b_over_a_pairs;
    e.counts["a_over_b_pairs"] = c.a_over_b_pairs;
  });
  require(!rep.metrics.empty(), ErrorCode::no_computable_metric, "no requested metric could be computed");
  return rep;
}

/// Audit of a policy under a demand model over a discrete support.
inline AuditReport audit_policy(const PricingPolicy& policy, const DemandModel& model, const Population& pop) {
  require(pop.groups.size() == 2, ErrorCode::invalid_argument, "audit compares two groups");
  AuditReport rep;
  const ObjectiveValue v = scalarized_objective(policy, model, pop, ScalarizationWeights{});
  MetricEntry d{"marginal_price_disparity", "E[P|A=a] - E[P|A=b]", {}, {}, {}};
  d.values["disparity"] = v.mean_price[0] - v.mean_price[1];
  d.by_group[pop.groups[0]] = v.mean_price[0];
  d.by_group[pop.groups[1]] = v.mean_price[1];
  rep.metrics.push_back(d);
  const auto gap = conditional_parity_gap(policy, pop);
  MetricEntry c{"conditional_parity_gap", "max_x |p(x,a) - p(x,b)|", {{"gap", gap.gap}}, {}, {}};
  if (!gap.note.empty()) rep.warnings.push_back("conditional_parity_gap: " + gap.note);
  rep.metrics.push_back(c);
  MetricEntry a{"access", "E[D(P)], E[D(P)|A=g] and their group difference", {}, {}, {}};
  a.values["total"] = v.total_access;
  a.values["disparity"] = v.access[0] - v.access[1];
  a.by_group[pop.groups[0]] = v.access[0];
  a.by_group[pop.groups[1]] = v.access[1];
  rep.metrics.push_back(a);
  MetricEntry r{"revenue", "E[P D(P)]", {{"revenue", v.revenue}}, {}, {}};
  rep.metrics.push_back(r);
  return rep;
}

}  // namespace fairprice
