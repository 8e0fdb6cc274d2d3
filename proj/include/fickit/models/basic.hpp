#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fickit/error.hpp"
#include "fickit/family.hpp"
#include "fickit/types.hpp"

namespace fickit::models {

namespace detail {

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;

/// log of prod_j N(x_j | mean_j, variance).
inline double gaussian_log_density(std::span<const double> x, std::span<const double> mean,
                                   double variance = 1.0) {
  double ss = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double r = x[j] - mean[j];
    ss += r * r;
  }
  const double n = static_cast<double>(x.size());
  return -0.5 * n * (kLog2Pi + std::log(variance)) - 0.5 * ss / variance;
}

inline std::vector<double> gaussian_draw(std::span<const double> mean, double sd, RngStream& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> out(mean.size());
  for (std::size_t j = 0; j < mean.size(); ++j) out[j] = mean[j] + sd * normal(rng);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Gaussian block-mean family
// ---------------------------------------------------------------------------

/// Start of block b when n observations are split into k contiguous blocks
/// of near-equal length: floor(b n / k).
inline std::size_t block_begin(std::size_t b, std::size_t n, std::size_t k) { return b * n / k; }

/// K block means with known unit variance: the data are split into K
/// contiguous blocks of near-equal length and block b has mean theta_b.
inline FittedModel gaussian_mean_model(std::vector<double> means) {
  if (means.empty()) throw InvalidArgument("gaussian mean model needs K >= 1");
  auto mu = std::make_shared<const std::vector<double>>(std::move(means));
  const std::size_t k = mu->size();
  auto expand = [mu, k](std::size_t n) {
    if (n < k)
      throw InvalidArgument("sample size " + std::to_string(n) + " is smaller than the " + std::to_string(k) +
                            " blocks");
    std::vector<double> full(n);
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t j = block_begin(b, n, k); j < block_begin(b + 1, n, k); ++j) full[j] = (*mu)[b];
    return full;
  };
  return FittedModel(
      ParameterVector(*mu),
      [expand](const Dataset& x) { return detail::gaussian_log_density(x.values(), expand(x.size())); },
      [expand](std::size_t n, RngStream& rng) { return Dataset(detail::gaussian_draw(expand(n), 1.0, rng)); });
}

inline ModelFamily gaussian_mean_family(std::size_t k) {
  if (k < 1) throw InvalidArgument("gaussian_mean_family needs K >= 1");
  ModelFamily::Spec spec;
  spec.family_id = "gaussian_mean:K=" + std::to_string(k);
  spec.dimension = k;
  spec.fit = [k](const Dataset& x) {
    const std::size_t n = x.size();
    if (n < k)
      throw InvalidArgument("data length " + std::to_string(n) + " is smaller than the " + std::to_string(k) +
                            " blocks");
    std::vector<double> means(k, 0.0);
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t lo = block_begin(b, n, k), hi = block_begin(b + 1, n, k);
      double s = 0.0;
      for (std::size_t j = lo; j < hi; ++j) s += x[j];
      means[b] = s / static_cast<double>(hi - lo);
    }
    return gaussian_mean_model(std::move(means));
  };
  spec.model_at = [k](const ParameterVector& p) {
    if (p.dimension() != k) throw InvalidArgument("gaussian mean family expects " + std::to_string(k) + " means");
    return gaussian_mean_model({p.coordinates().begin(), p.coordinates().end()});
  };
  spec.fisher_at = [k](const ParameterVector&, std::size_t n) {
    if (n < k) throw InvalidArgument("sample size is smaller than the number of blocks");
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t b = 0; b < k; ++b)
      f(b, b) = static_cast<double>(block_begin(b + 1, n, k) - block_begin(b, n, k));
    return FisherMatrix(std::move(f));
  };
  return ModelFamily(std::move(spec));
}

// ---------------------------------------------------------------------------
// Linear least-squares regression with unknown noise variance
// ---------------------------------------------------------------------------

namespace detail {

struct RegressionDesign {
  Eigen::MatrixXd x;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
};

}  // namespace detail

/// Parameters are (beta_1..beta_p, sigma^2); the family dimension counts the
/// variance, K = p + 1.
inline ModelFamily linear_regression_family(Eigen::MatrixXd design) {
  const auto n = design.rows();
  const auto p = design.cols();
  if (p < 1) throw InvalidArgument("regression design needs at least one column");
  if (n <= p + 2)
    throw InvalidArgument("linear regression needs N > K + 1 (N=" + std::to_string(n) +
                          ", K=" + std::to_string(p + 1) + ")");
  auto state = std::make_shared<detail::RegressionDesign>();
  state->x = std::move(design);
  state->qr.compute(state->x);
  if (state->qr.rank() != p) throw InvalidArgument("regression design is rank deficient");
  std::shared_ptr<const detail::RegressionDesign> shared = state;

  auto make_model = [shared, n, p](Eigen::VectorXd beta, double variance) {
    if (!(variance > 0.0) || !std::isfinite(variance))
      throw NumericalError("regression variance must be positive and finite");
    auto mean_vec = std::make_shared<const std::vector<double>>([&] {
      Eigen::VectorXd m = shared->x * beta;
      return std::vector<double>(m.data(), m.data() + m.size());
    }());
    std::vector<double> coords(beta.data(), beta.data() + p);
    coords.push_back(variance);
    const double sd = std::sqrt(variance);
    return FittedModel(
        ParameterVector(std::move(coords)),
        [mean_vec, n, variance](const Dataset& y) {
          if (static_cast<Eigen::Index>(y.size()) != n)
            throw InvalidArgument("regression model scores exactly " + std::to_string(n) + " responses");
          return detail::gaussian_log_density(y.values(), *mean_vec, variance);
        },
        [mean_vec, n, sd](std::size_t size, RngStream& rng) {
          if (static_cast<Eigen::Index>(size) != n)
            throw InvalidArgument("regression model simulates exactly " + std::to_string(n) + " responses");
          return Dataset(detail::gaussian_draw(*mean_vec, sd, rng));
        });
  };

  ModelFamily::Spec spec;
  spec.family_id = "linear_regression:N=" + std::to_string(n) + ":p=" + std::to_string(p);
  spec.dimension = static_cast<std::size_t>(p + 1);
  spec.fit = [shared, n, make_model](const Dataset& y) {
    if (static_cast<Eigen::Index>(y.size()) != n)
      throw InvalidArgument("regression fit expects " + std::to_string(n) + " responses");
    const Eigen::Map<const Eigen::VectorXd> yv(y.values().data(), n);
    Eigen::VectorXd beta = shared->qr.solve(yv);
    const double rss = (yv - shared->x * beta).squaredNorm();
    const double variance = rss / static_cast<double>(n);
    if (!(rss > 1e-24 * std::max(1.0, yv.squaredNorm())))
      throw NumericalError("zero residual variance: degenerate regression fit");
    return make_model(std::move(beta), variance);
  };
  spec.model_at = [p, make_model](const ParameterVector& theta) {
    if (static_cast<Eigen::Index>(theta.dimension()) != p + 1)
      throw InvalidArgument("regression parameters are (beta_1..beta_p, sigma^2)");
    Eigen::VectorXd beta(p);
    for (Eigen::Index i = 0; i < p; ++i) beta(i) = theta[i];
    return make_model(std::move(beta), theta[p]);
  };
  spec.fisher_at = [shared, n, p](const ParameterVector& theta, std::size_t size) {
    if (static_cast<Eigen::Index>(size) != n) throw InvalidArgument("regression Fisher matrix is for the design size");
    const double v = theta[p];
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(p + 1, p + 1);
    f.topLeftCorner(p, p) = shared->x.transpose() * shared->x / v;
    f(p, p) = static_cast<double>(n) / (2.0 * v * v);
    return FisherMatrix(std::move(f));
  };
  spec.structured_data = true;  // responses are tied to design rows
  return ModelFamily(std::move(spec));
}

/// Design matrix with columns 1, u, u^2, ... for u_j equally spaced on [-1, 1].
inline Eigen::MatrixXd polynomial_design(std::size_t n, std::size_t columns) {
  Eigen::MatrixXd d(n, columns);
  for (std::size_t j = 0; j < n; ++j) {
    const double u = n == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(n - 1);
    double power = 1.0;
    for (std::size_t c = 0; c < columns; ++c) {
      d(j, c) = power;
      power *= u;
    }
  }
  return d;
}

// ---------------------------------------------------------------------------
// Exponential
// ---------------------------------------------------------------------------

inline FittedModel exponential_model(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidArgument("exponential rate must be positive");
  return FittedModel(
      ParameterVector({rate}),
      [rate](const Dataset& x) {
        double s = 0.0;
        for (double v : x.values()) {
          if (v < 0.0) return -std::numeric_limits<double>::infinity();
          s += v;
        }
        return static_cast<double>(x.size()) * std::log(rate) - rate * s;
      },
      [rate](std::size_t n, RngStream& rng) {
        std::exponential_distribution<double> dist(rate);
        std::vector<double> out(n);
        for (auto& v : out) v = dist(rng);
        return Dataset(std::move(out));
      });
}

/// q(x|lambda) = lambda exp(-lambda x); MLE lambda = N / sum(x).
inline ModelFamily exponential_family() {
  ModelFamily::Spec spec;
  spec.family_id = "exponential";
  spec.dimension = 1;
  spec.fit = [](const Dataset& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!(x[i] > 0.0))
        throw InvalidArgument("exponential family needs positive observations (index " + std::to_string(i) + ")");
      s += x[i];
    }
    return exponential_model(static_cast<double>(x.size()) / s);
  };
  spec.model_at = [](const ParameterVector& p) {
    if (p.dimension() != 1) throw InvalidArgument("exponential family has one parameter");
    return exponential_model(p[0]);
  };
  spec.fisher_at = [](const ParameterVector& p, std::size_t n) {
    Eigen::MatrixXd f(1, 1);
    f(0, 0) = static_cast<double>(n) / (p[0] * p[0]);
    return FisherMatrix(std::move(f));
  };
  return ModelFamily(std::move(spec));
}

// ---------------------------------------------------------------------------
// Zero-parameter family
// ---------------------------------------------------------------------------

/// A family that ignores the data and always returns `model` (K = 0).
inline ModelFamily fixed_family(const FittedModel& distribution, std::string label = "fixed") {
  const FittedModel model = distribution.without_parameters();
  ModelFamily::Spec spec;
  spec.family_id = "fixed:" + label;
  spec.dimension = 0;
  spec.fit = [model](const Dataset&) { return model; };
  spec.model_at = [model](const ParameterVector&) { return model; };
  return ModelFamily(std::move(spec));
}

/// iid N(mean, 1).
inline FittedModel unit_normal_model(double mean = 0.0) {
  return FittedModel(
      ParameterVector({mean}),
      [mean](const Dataset& x) {
        double ss = 0.0;
        for (double v : x.values()) ss += (v - mean) * (v - mean);
        return -0.5 * static_cast<double>(x.size()) * detail::kLog2Pi - 0.5 * ss;
      },
      [mean](std::size_t n, RngStream& rng) {
        std::normal_distribution<double> normal(mean, 1.0);
        std::vector<double> out(n);
        for (auto& v : out) v = normal(rng);
        return Dataset(std::move(out));
      });
}

}  // namespace fickit::models
