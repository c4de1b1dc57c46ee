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

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "fairprice/error.hpp"
#include "fairprice/rng.hpp"

namespace fairprice {

/// Log-concave noise families admitted for latent valuations V = g(x,a) + eps.
enum class NoiseFamily { normal, logistic, exponential, laplace, gumbel };

inline std::string_view to_string(NoiseFamily f) {
  switch (f) {
    case NoiseFamily::normal: return "normal";
    case NoiseFamily::logistic: return "logistic";
    case NoiseFamily::exponential: return "exponential";
    case NoiseFamily::laplace: return "laplace";
    case NoiseFamily::gumbel: return "gumbel";
  }
  return "normal";
}

inline NoiseFamily parse_noise_family(std::string_view name) {
  if (name == "normal") return NoiseFamily::normal;
  if (name == "logistic") return NoiseFamily::logistic;
  if (name == "exponential") return NoiseFamily::exponential;
  if (name == "laplace") return NoiseFamily::laplace;
  if (name == "gumbel") return NoiseFamily::gumbel;
  fail(ErrorCode::invalid_argument,
       "noise family '" + std::string(name) + "' is not in the log-concave whitelist");
}

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// Noise distribution with location 0 and the given scale. Exponential noise is
/// supported on [0, inf); the others on the real line.
struct Noise {
  NoiseFamily family = NoiseFamily::logistic;
  double scale = 1.0;

  void validate() const {
    require(std::isfinite(scale) && scale > 0, ErrorCode::invalid_argument,
            "noise scale must be positive");
  }

  double cdf(double z) const {
    const double u = z / scale;
    switch (family) {
      case NoiseFamily::normal: return 0.5 * std::erfc(-u / std::numbers::sqrt2);
      case NoiseFamily::logistic: return sigmoid(u);
      case NoiseFamily::exponential: return u <= 0 ? 0.0 : -std::expm1(-u);
      case NoiseFamily::laplace: return u < 0 ? 0.5 * std::exp(u) : 1.0 - 0.5 * std::exp(-u);
      case NoiseFamily::gumbel: return std::exp(-std::exp(-u));
    }
    return 0.0;
  }

  /// 1 - cdf(z), computed without cancellation in the upper tail.
  double survival(double z) const {
    const double u = z / scale;
    switch (family) {
      case NoiseFamily::normal: return 0.5 * std::erfc(u / std::numbers::sqrt2);
      case NoiseFamily::logistic: return sigmoid(-u);
      case NoiseFamily::exponential: return u <= 0 ? 1.0 : std::exp(-u);
      case NoiseFamily::laplace: return u < 0 ? 1.0 - 0.5 * std::exp(u) : 0.5 * std::exp(-u);
      case NoiseFamily::gumbel: return -std::expm1(-std::exp(-u));
    }
    return 0.0;
  }

  double pdf(double z) const {
    const double u = z / scale;
    switch (family) {
      case NoiseFamily::normal:
        return std::exp(-0.5 * u * u) / (scale * std::sqrt(2.0 * std::numbers::pi));
      case NoiseFamily::logistic: {
        const double s = sigmoid(u);
        return s * (1.0 - s) / scale;
      }
      case NoiseFamily::exponential: return u < 0 ? 0.0 : std::exp(-u) / scale;
      case NoiseFamily::laplace: return std::exp(-std::abs(u)) / (2.0 * scale);
      case NoiseFamily::gumbel: {
        const double e = std::exp(-u);
        return e * std::exp(-e) / scale;
      }
    }
    return 0.0;
  }

  /// Derivative of the density (one-sided at the kinks of exponential/Laplace).
  double pdf_slope(double z) const {
    const double u = z / scale;
    const double f = pdf(z);
    switch (family) {
      case NoiseFamily::normal: return -u * f / scale;
      case NoiseFamily::logistic: return f * (1.0 - 2.0 * sigmoid(u)) / scale;
      case NoiseFamily::exponential: return u < 0 ? 0.0 : -f / scale;
      case NoiseFamily::laplace: return (u < 0 ? f : -f) / scale;
      case NoiseFamily::gumbel: return f * (std::exp(-u) - 1.0) / scale;
    }
    return 0.0;
  }

  /// Inverse-CDF draw; a zero scale degenerates to the point mass at 0.
  double sample(Rng& rng) const {
    if (scale == 0.0) return 0.0;
    const double w = rng.uniform();
    switch (family) {
      case NoiseFamily::normal: return scale * rng.normal();
      case NoiseFamily::logistic: return scale * std::log(w / (1.0 - w));
      case NoiseFamily::exponential: return -scale * std::log(w);
      case NoiseFamily::laplace:
        return w < 0.5 ? scale * std::log(2.0 * w) : -scale * std::log(2.0 * (1.0 - w));
      case NoiseFamily::gumbel: return -scale * std::log(-std::log(w));
    }
    return 0.0;
  }
};

}  // namespace fairprice
