#pragma once

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "fickit/error.hpp"
#include "fickit/family.hpp"
#include "fickit/models/basic.hpp"
#include "fickit/types.hpp"

namespace fickit::models {

// Two-parameter models used to draw information landscapes.
//
// Singular: y_j = a sin(omega t_j) + eps_j, t_j = j. At a = 0 every omega
// gives the same distribution, so omega is unidentifiable and the in-sample
// landscape picks up one local minimum per frequency resolution unit
// (2 pi / N).
//
// Regular: y_j = b0 + b1 u_j + eps_j, u_j equally spaced on [-1, 1].
//
// Both have known unit noise variance. Parameter order: theta1, theta2 =
// (a, omega) and (b0, b1).

inline double frequency_resolution(std::size_t n) { return 2.0 * std::numbers::pi / static_cast<double>(n); }

inline FittedModel sine_model(std::size_t n, double amplitude, double omega) {
  if (!std::isfinite(amplitude) || !std::isfinite(omega)) throw InvalidArgument("sine model parameters must be finite");
  auto mean = std::make_shared<std::vector<double>>(n);
  for (std::size_t j = 1; j <= n; ++j) (*mean)[j - 1] = amplitude * std::sin(omega * static_cast<double>(j));
  std::shared_ptr<const std::vector<double>> mu = mean;
  return FittedModel(
      ParameterVector({amplitude, omega}),
      [mu, n](const Dataset& x) {
        if (x.size() != n) throw InvalidArgument("sine model scores exactly " + std::to_string(n) + " observations");
        return detail::gaussian_log_density(x.values(), *mu);
      },
      [mu, n](std::size_t size, RngStream& rng) {
        if (size != n) throw InvalidArgument("sine model simulates exactly " + std::to_string(n) + " observations");
        return Dataset(detail::gaussian_draw(*mu, 1.0, rng));
      });
}

namespace detail {

/// Best amplitude at fixed omega and the corresponding drop in information.
struct SineProfile {
  double amplitude = 0.0;
  double gain = 0.0;  // h(y|0, .) - h(y|a_hat(omega), omega) >= 0
};

inline SineProfile sine_profile(std::span<const double> y, double omega) {
  double sy = 0.0, ss = 0.0;
  for (std::size_t j = 1; j <= y.size(); ++j) {
    const double s = std::sin(omega * static_cast<double>(j));
    sy += y[j - 1] * s;
    ss += s * s;
  }
  if (ss <= 0.0) return {};
  return {sy / ss, 0.5 * sy * sy / ss};
}

}  // namespace detail

/// MLE over amplitude and omega in [omega_min, omega_max]: a grid with
/// `grid_per_resolution` points per resolution unit, then Brent refinement
/// around the best grid cell. The amplitude is solved in closed form.
inline ModelFamily sine_regression_family(std::size_t n, double omega_min, double omega_max,
                                          std::size_t grid_per_resolution = 8) {
  if (n < 3) throw InvalidArgument("sine regression needs N >= 3");
  if (!(omega_max > omega_min)) throw InvalidArgument("sine regression needs omega_max > omega_min");
  if (grid_per_resolution < 2) throw InvalidArgument("need at least 2 grid points per resolution unit");
  ModelFamily::Spec spec;
  spec.family_id = "sine_regression:N=" + std::to_string(n);
  spec.dimension = 2;
  spec.fit = [=](const Dataset& y) {
    if (y.size() != n) throw InvalidArgument("sine regression expects " + std::to_string(n) + " observations");
    const double step = frequency_resolution(n) / static_cast<double>(grid_per_resolution);
    const auto cells = static_cast<std::size_t>(std::ceil((omega_max - omega_min) / step));
    double best_omega = omega_min;
    double best_gain = -1.0;
    for (std::size_t g = 0; g <= cells; ++g) {
      const double w = std::min(omega_max, omega_min + step * static_cast<double>(g));
      const double gain = detail::sine_profile(y.values(), w).gain;
      if (gain > best_gain) {
        best_gain = gain;
        best_omega = w;
      }
    }
    const double lo = std::max(omega_min, best_omega - step);
    const double hi = std::min(omega_max, best_omega + step);
    auto neg_gain = [&](double w) { return -detail::sine_profile(y.values(), w).gain; };
    const auto refined = boost::math::tools::brent_find_minima(neg_gain, lo, hi, 40);
    const double omega = (-refined.second >= best_gain) ? refined.first : best_omega;
    return sine_model(n, detail::sine_profile(y.values(), omega).amplitude, omega);
  };
  spec.model_at = [n](const ParameterVector& p) {
    if (p.dimension() != 2) throw InvalidArgument("sine model parameters are (amplitude, omega)");
    return sine_model(n, p[0], p[1]);
  };
  spec.fisher_at = [n](const ParameterVector& p, std::size_t size) {
    if (size != n) throw InvalidArgument("sine Fisher matrix is for N=" + std::to_string(n));
    const double a = p[0], w = p[1];
    Eigen::Matrix2d f = Eigen::Matrix2d::Zero();
    for (std::size_t j = 1; j <= n; ++j) {
      const double t = static_cast<double>(j);
      const double s = std::sin(w * t), c = std::cos(w * t);
      f(0, 0) += s * s;
      f(0, 1) += a * t * s * c;
      f(1, 1) += a * a * t * t * c * c;
    }
    f(1, 0) = f(0, 1);
    return FisherMatrix(f);
  };
  spec.structured_data = true;
  return ModelFamily(std::move(spec));
}

inline FittedModel linear_trend_model(std::size_t n, double intercept, double slope) {
  const Eigen::MatrixXd design = polynomial_design(n, 2);
  auto mean = std::make_shared<std::vector<double>>(n);
  for (std::size_t j = 0; j < n; ++j) (*mean)[j] = intercept + slope * design(static_cast<Eigen::Index>(j), 1);
  std::shared_ptr<const std::vector<double>> mu = mean;
  return FittedModel(
      ParameterVector({intercept, slope}),
      [mu, n](const Dataset& x) {
        if (x.size() != n) throw InvalidArgument("trend model scores exactly " + std::to_string(n) + " observations");
        return detail::gaussian_log_density(x.values(), *mu);
      },
      [mu, n](std::size_t size, RngStream& rng) {
        if (size != n) throw InvalidArgument("trend model simulates exactly " + std::to_string(n) + " observations");
        return Dataset(detail::gaussian_draw(*mu, 1.0, rng));
      });
}

/// Regular reference: straight line with known unit variance.
inline ModelFamily linear_trend_family(std::size_t n) {
  if (n < 3) throw InvalidArgument("linear trend needs N >= 3");
  auto design = std::make_shared<const Eigen::MatrixXd>(polynomial_design(n, 2));
  ModelFamily::Spec spec;
  spec.family_id = "linear_trend:N=" + std::to_string(n);
  spec.dimension = 2;
  spec.fit = [n, design](const Dataset& y) {
    if (y.size() != n) throw InvalidArgument("linear trend expects " + std::to_string(n) + " observations");
    const Eigen::Map<const Eigen::VectorXd> yv(y.values().data(), static_cast<Eigen::Index>(n));
    const Eigen::Vector2d beta = design->colPivHouseholderQr().solve(yv);
    return linear_trend_model(n, beta(0), beta(1));
  };
  spec.model_at = [n](const ParameterVector& p) {
    if (p.dimension() != 2) throw InvalidArgument("trend parameters are (intercept, slope)");
    return linear_trend_model(n, p[0], p[1]);
  };
  spec.fisher_at = [n, design](const ParameterVector&, std::size_t size) {
    if (size != n) throw InvalidArgument("trend Fisher matrix is for N=" + std::to_string(n));
    return FisherMatrix(design->transpose() * *design);
  };
  spec.structured_data = true;
  return ModelFamily(std::move(spec));
}

}  // namespace fickit::models
