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

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "fairprice/demand.hpp"
#include "fairprice/error.hpp"
#include "fairprice/record.hpp"

namespace fairprice {

struct LogisticFitOptions {
  bool group_offsets = false;  // add a dummy per non-reference group
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;
};

struct LogisticFit {
  LogisticDemand model;
  double log_likelihood = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
};

struct PartiallyLinearFitOptions {
  bool allow_upward = false;
};

struct PartiallyLinearFit {
  PartiallyLinearDemand model;
  GroupMap<double> rss;
};

namespace detail {

struct Design {
  Eigen::MatrixXd x;  // standardized columns, column 0 is the intercept
  Eigen::VectorXd y;
  Eigen::VectorXd w;
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;
};

/// Standardizes every non-intercept column; a constant column is unidentified.
inline void standardize(Design& d, const std::vector<std::string>& names) {
  const Eigen::Index n = d.x.rows();
  const double wsum = d.w.sum();
  d.mean = Eigen::VectorXd::Zero(d.x.cols());
  d.scale = Eigen::VectorXd::Ones(d.x.cols());
  for (Eigen::Index j = 1; j < d.x.cols(); ++j) {
    const double m = d.w.dot(d.x.col(j)) / wsum;
    const double var = d.w.dot((d.x.col(j).array() - m).square().matrix()) / wsum;
    if (!(var > 1e-24 * std::max(1.0, m * m))) {
      fail(ErrorCode::rank_deficient,
           "column '" + names[static_cast<std::size_t>(j)] + "' has no variation; its coefficient is unidentified");
    }
    d.mean[j] = m;
    d.scale[j] = std::sqrt(var);
    for (Eigen::Index i = 0; i < n; ++i) d.x(i, j) = (d.x(i, j) - m) / d.scale[j];
  }
}

/// Maps standardized coefficients back to the raw column scale.
inline Eigen::VectorXd unstandardize(const Eigen::VectorXd& b, const Design& d) {
  Eigen::VectorXd raw = b;
  for (Eigen::Index j = 1; j < b.size(); ++j) {
    raw[j] = b[j] / d.scale[j];
    raw[0] -= raw[j] * d.mean[j];
  }
  return raw;
}

inline double log1pexp(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace detail

/// Maximum-likelihood logistic demand on (covariates, price) by damped Newton
/// with step halving.
inline LogisticFit fit_logistic(const std::vector<Record>& records, const LogisticFitOptions& opt = {}) {
  require(!records.empty(), ErrorCode::missing_data, "no records to fit");
  const std::size_t k = records.front().covariates.size();
  const auto labels = group_labels(records);
  const std::size_t offsets = opt.group_offsets ? labels.size() - 1 : 0;

  std::vector<std::string> names{"intercept"};
  for (std::size_t j = 0; j < k; ++j) names.push_back("x" + std::to_string(j + 1));
  names.push_back("price");
  for (std::size_t g = 1; g <= offsets; ++g) names.push_back("group:" + labels[g]);

  const auto n = static_cast<Eigen::Index>(records.size());
  detail::Design d;
  d.x.resize(n, static_cast<Eigen::Index>(names.size()));
  d.y.resize(n);
  d.w.resize(n);
  double positives = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Record& r = records[static_cast<std::size_t>(i)];
    const std::string where = " (record '" + r.id + "'" + (r.line ? ", line " + std::to_string(r.line) : "") + ")";
    if (r.covariates.size() != k) fail(ErrorCode::dimension_mismatch, "covariate dimension differs" + where);
    if (!r.price.has_value()) fail(ErrorCode::missing_data, "price missing" + where);
    if (!r.demand.has_value()) fail(ErrorCode::missing_data, "demand missing" + where);
    if (!(*r.demand == 0.0 || *r.demand == 1.0)) {
      fail(ErrorCode::invalid_argument, "logistic demand requires a binary demand indicator, got " +
                                            std::to_string(*r.demand) + where);
    }
    d.x(i, 0) = 1.0;
    for (std::size_t j = 0; j < k; ++j) d.x(i, static_cast<Eigen::Index>(j + 1)) = r.covariates[j];
    d.x(i, static_cast<Eigen::Index>(k + 1)) = *r.price;
    for (std::size_t g = 1; g <= offsets; ++g)
      d.x(i, static_cast<Eigen::Index>(k + 1 + g)) = r.group == labels[g] ? 1.0 : 0.0;
    d.y[i] = *r.demand;
    d.w[i] = r.weight;
    positives += *r.demand;
  }
  if (positives == 0.0 || positives == static_cast<double>(n)) {
    fail(ErrorCode::perfect_separation, "perfect separation: every demand outcome is identical");
  }
  detail::standardize(d, names);
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.x);
    require(qr.rank() == d.x.cols(), ErrorCode::rank_deficient, "design matrix is rank deficient");
  }

  const double wsum = d.w.sum();
  auto loglik = [&](const Eigen::VectorXd& b) {
    const Eigen::VectorXd eta = d.x * b;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) ll += d.w[i] * (d.y[i] * eta[i] - detail::log1pexp(eta[i]));
    return ll;
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(d.x.cols());
  beta[0] = std::log(positives / (static_cast<double>(n) - positives));
  double ll = loglik(beta);
  double gnorm = 0.0;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const Eigen::VectorXd eta = d.x * beta;
    Eigen::VectorXd mu(n), v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      mu[i] = sigmoid(eta[i]);
      v[i] = d.w[i] * mu[i] * (1.0 - mu[i]);
    }
    const Eigen::VectorXd grad = d.x.transpose() * (d.w.array() * (d.y - mu).array()).matrix();
    gnorm = grad.norm() / wsum;
    if (gnorm < opt.gradient_tolerance) break;
    if (beta.cwiseAbs().maxCoeff() > 40.0 || -ll < 1e-8 * wsum) {
      fail(ErrorCode::perfect_separation,
           "perfect separation: coefficients diverge (gradient norm " + std::to_string(gnorm) + ")");
    }
    const Eigen::MatrixXd hessian = d.x.transpose() * v.asDiagonal() * d.x;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      fail(ErrorCode::perfect_separation, "perfect separation: information matrix is singular (quasi-separated data)");
    }
    const Eigen::VectorXd step = ldlt.solve(grad);
    double t = 1.0;
    Eigen::VectorXd next = beta + step;
    double ll_next = loglik(next);
    for (int h = 0; h < 40 && !(ll_next >= ll - 1e-12 * std::abs(ll)); ++h) {
      t *= 0.5;
      next = beta + t * step;
      ll_next = loglik(next);
    }
    beta = next;
    ll = ll_next;
  }
  if (!(gnorm < opt.gradient_tolerance)) {
    fail(ErrorCode::not_converged,
         "logistic fit did not converge in " + std::to_string(opt.max_iterations) +
             " iterations; final gradient norm " + std::to_string(gnorm));
  }

  const Eigen::VectorXd raw = detail::unstandardize(beta, d);
  LogisticFit fit;
  fit.model.intercept = raw[0];
  for (std::size_t j = 0; j < k; ++j) fit.model.gamma.push_back(raw[static_cast<Eigen::Index>(j + 1)]);
  fit.model.beta = raw[static_cast<Eigen::Index>(k + 1)];
  for (std::size_t g = 1; g <= offsets; ++g)
    fit.model.group_offsets[labels[g]] = raw[static_cast<Eigen::Index>(k + 1 + g)];
  fit.log_likelihood = ll;
  fit.iterations = it;
  fit.gradient_norm = gnorm;
  return fit;
}

/// Per-group weighted least squares of demand on (intercept, price, covariates).
inline PartiallyLinearFit fit_partially_linear(const std::vector<Record>& records,
                                               const PartiallyLinearFitOptions& opt = {}) {
  require(!records.empty(), ErrorCode::missing_data, "no records to fit");
  const std::size_t k = records.front().covariates.size();
  PartiallyLinearFit fit;
  LinearBaseline baseline;
  for (const auto& label : group_labels(records)) {
    std::vector<const Record*> rows;
    for (const auto& r : records)
      if (r.group == label) rows.push_back(&r);
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto cols = static_cast<Eigen::Index>(k + 2);
    Eigen::MatrixXd x(n, cols);
    Eigen::VectorXd y(n);
    Eigen::VectorXd sw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Record& r = *rows[static_cast<std::size_t>(i)];
      const std::string where = " (record '" + r.id + "'" + (r.line ? ", line " + std::to_string(r.line) : "") + ")";
      if (r.covariates.size() != k) fail(ErrorCode::dimension_mismatch, "covariate dimension differs" + where);
      if (!(r.price && r.demand)) fail(ErrorCode::missing_data, "price and demand are required" + where);
      sw[i] = std::sqrt(r.weight);
      x(i, 0) = sw[i];
      x(i, 1) = sw[i] * *r.price;
      for (std::size_t j = 0; j < k; ++j) x(i, static_cast<Eigen::Index>(j + 2)) = sw[i] * r.covariates[j];
      y[i] = sw[i] * *r.demand;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (n < cols || qr.rank() < cols) {
      fail(ErrorCode::singular_design,
           "singular design for group '" + label + "' (needs price and covariate variation)");
    }
    const Eigen::VectorXd coef = qr.solve(y);
    const double slope = coef[1];
    if (slope >= 0 && !opt.allow_upward) {
      fail(ErrorCode::upward_sloping_demand,
           "estimated price slope for group '" + label + "' is " + std::to_string(slope) +
               " >= 0 (demand must slope downward)");
    }
    fit.model.beta[label] = slope;
    baseline.intercept[label] = coef[0];
    std::vector<double> gamma(k);
    for (std::size_t j = 0; j < k; ++j) gamma[j] = coef[static_cast<Eigen::Index>(j + 2)];
    baseline.coef[label] = std::move(gamma);
    fit.rss[label] = (x * coef - y).squaredNorm();
  }
  fit.model.baseline = std::move(baseline);
  return fit;
}

}  // namespace fairprice
