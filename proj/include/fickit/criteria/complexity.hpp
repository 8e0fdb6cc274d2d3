#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fickit/criteria/report.hpp"
#include "fickit/error.hpp"
#include "fickit/family.hpp"
#include "fickit/information.hpp"
#include "fickit/monte_carlo.hpp"
#include "fickit/types.hpp"

namespace fickit::criteria {

namespace detail {

/// One replicate of E[h(Y|M_Z) - h(Z|M_Z)] with Z, Y drawn from `generator`,
/// averaged over both role assignments of the pair.
inline double complexity_replicate(const ModelFamily& family, const FittedModel& generator,
                                   std::size_t sample_size, RngStream& rng) {
  const Dataset z = generator.sample(sample_size, rng);
  const Dataset y = generator.sample(sample_size, rng);
  const FittedModel fit_z = family.fit(z);
  const FittedModel fit_y = family.fit(y);
  const double forward = shannon_information(y, fit_z) - shannon_information(z, fit_z);
  const double backward = shannon_information(z, fit_y) - shannon_information(y, fit_y);
  return 0.5 * (forward + backward);
}

}  // namespace detail

/// Complexity of `family` when data are generated by `generator`:
/// E_{Z,Y}[h(Y|M_Z) - h(Z|M_Z)], where M_Z is the family's full fitting
/// procedure (including any discrete selection) applied to Z.
inline MonteCarloEstimate fic_complexity(const ModelFamily& family, const FittedModel& generator,
                                         std::size_t sample_size, std::size_t replicates, std::uint64_t seed) {
  return monte_carlo(replicates, seed, [&](RngStream& rng) {
    return detail::complexity_replicate(family, generator, sample_size, rng);
  });
}

/// Same estimator with the (known) true distribution as generator; the
/// oracle that FIC approximates.
inline MonteCarloEstimate true_complexity_mc(const FittedModel& truth, const ModelFamily& family,
                                             std::size_t sample_size, std::size_t replicates, std::uint64_t seed) {
  return fic_complexity(family, truth, sample_size, replicates, seed);
}

/// FIC(X) = h(X|theta_hat_X) + K_FIC(theta_hat_X) at the observed sample size.
inline CriterionReport fic(const Dataset& data, const ModelFamily& family, std::size_t replicates,
                           std::uint64_t seed, std::string label = "") {
  const FittedModel fitted = family.fit(data);
  const double h = shannon_information(data, fitted);
  const MonteCarloEstimate k = fic_complexity(family, fitted, data.size(), replicates, seed);
  return CriterionReport::information_criterion(label.empty() ? family.id() : std::move(label), CriterionKind::FIC, h,
                                                Complexity::from(k), family.dimension());
}

/// Information criterion built from the true complexity (simulation studies only).
inline CriterionReport true_information_criterion(const Dataset& data, const ModelFamily& family,
                                                  const FittedModel& truth, std::size_t replicates,
                                                  std::uint64_t seed, std::string label = "") {
  const FittedModel fitted = family.fit(data);
  const double h = shannon_information(data, fitted);
  const MonteCarloEstimate k = true_complexity_mc(truth, family, data.size(), replicates, seed);
  return CriterionReport::information_criterion(label.empty() ? family.id() : std::move(label),
                                                CriterionKind::TrueIC, h, Complexity::from(k), family.dimension());
}

// ---------------------------------------------------------------------------
// Bootstrap and cross validation
// ---------------------------------------------------------------------------

enum class BootstrapMode { Parametric, Empirical };

/// E_Y[2 h(X|M_Y) - 2 h(X|M_X)] with X itself as the validation set. Y is a
/// with-replacement resample of X (empirical) or a draw from q(.|theta_hat_X)
/// (parametric). Empirical mode refuses structured-data families.
inline MonteCarloEstimate bootstrap_complexity(const Dataset& data, const ModelFamily& family, BootstrapMode mode,
                                               std::size_t replicates, std::uint64_t seed) {
  if (mode == BootstrapMode::Empirical && family.structured_data())
    throw InvalidArgument("empirical bootstrap is not applicable to structured data (family '" + family.id() + "')");
  const FittedModel fitted = family.fit(data);
  const double h_x = shannon_information(data, fitted);
  const std::size_t n = data.size();
  return monte_carlo(replicates, seed, [&](RngStream& rng) {
    Dataset y = [&] {
      if (mode == BootstrapMode::Parametric) return fitted.sample(n, rng);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      std::vector<double> resampled(n);
      for (auto& v : resampled) v = data[pick(rng)];
      return Dataset(std::move(resampled));
    }();
    return 2.0 * (shannon_information(data, family.fit(y)) - h_x);
  });
}

inline CriterionReport bootstrap_criterion(const Dataset& data, const ModelFamily& family, BootstrapMode mode,
                                           std::size_t replicates, std::uint64_t seed, std::string label = "") {
  const double h = shannon_information(data, family.fit(data));
  const MonteCarloEstimate k = bootstrap_complexity(data, family, mode, replicates, seed);
  const auto kind = mode == BootstrapMode::Parametric ? CriterionKind::BootParametric : CriterionKind::BootEmpirical;
  return CriterionReport::information_criterion(label.empty() ? family.id() : std::move(label), kind, h,
                                                Complexity::from(k), family.dimension());
}

/// Leave-one-out cross validation, sum_i h(X_i | theta_hat fitted without X_i).
/// The raw sum is the criterion value; it estimates the cross entropy of a
/// model trained on N - 1 points, an O(K/N) offset relative to IC values.
inline CriterionReport loocv(const Dataset& data, const ModelFamily& family, std::string label = "") {
  if (family.structured_data())
    throw InvalidArgument("leave-one-out cross validation is not applicable to structured data (family '" +
                          family.id() + "')");
  const std::size_t n = data.size();
  if (n < 2) throw InvalidArgument("LOOCV needs at least two observations");
  std::vector<double> terms(n);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> rest;
    rest.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) rest.push_back(data[j]);
    const FittedModel held_out_fit = family.fit(Dataset(std::move(rest)));
    terms[i] = shannon_information(Dataset({data[i]}), held_out_fit);
  });
  CriterionReport r;
  r.model_label = label.empty() ? family.id() : std::move(label);
  r.kind = CriterionKind::LOOCV;
  r.goodness_of_fit = shannon_information(data, family.fit(data));
  r.complexity = Complexity::not_applicable();
  r.criterion_value = pairwise_sum(terms);
  r.dimension = family.dimension();
  return r;
}

// ---------------------------------------------------------------------------
// Variance of the FIC complexity
// ---------------------------------------------------------------------------

struct FicVarianceEstimate {
  double value = 0.0;        // grad K . I^-1 . grad K
  double noise_floor = 0.0;  // expected value of the same form from MC noise alone
  std::vector<double> gradient;
  std::vector<double> steps;
};

inline constexpr double kDefaultFdStep = 0.05;

/// Delta-method variance of K_FIC(theta_hat). The gradient is a central
/// difference of fic_complexity with the same seed on both sides; the step
/// for coordinate i is fd_step * sqrt((I^-1)_ii), i.e. in units of the MLE
/// standard deviation. A singular Fisher matrix is an error unless
/// `pseudo_inverse` is set, in which case coordinates with zero MLE variance
/// are skipped.
inline FicVarianceEstimate fic_variance_estimate(const ModelFamily& family, const ParameterVector& theta_hat,
                                                 std::size_t sample_size, double fd_step, std::size_t replicates,
                                                 std::uint64_t seed, bool pseudo_inverse = false) {
  if (!(fd_step > 0.0)) throw InvalidArgument("fd_step must be positive");
  const FisherMatrix fisher = family.fisher_at(theta_hat, sample_size);
  if (fisher.is_singular() && !pseudo_inverse)
    throw NumericalError("Fisher matrix is singular at theta_hat; call with pseudo_inverse = true to use its "
                         "Moore-Penrose pseudo-inverse");
  const Eigen::MatrixXd cov = fisher.pseudo_inverse();
  const std::size_t k = theta_hat.dimension();
  FicVarianceEstimate out;
  out.gradient.assign(k, 0.0);
  out.steps.assign(k, 0.0);
  std::vector<double> grad_var(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double sd = std::sqrt(std::max(0.0, cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))));
    if (sd == 0.0) continue;
    const double h = fd_step * sd;
    const auto plus = fic_complexity(family, family.model_at(theta_hat.with_coordinate(i, theta_hat[i] + h)),
                                     sample_size, replicates, seed);
    const auto minus = fic_complexity(family, family.model_at(theta_hat.with_coordinate(i, theta_hat[i] - h)),
                                      sample_size, replicates, seed);
    out.steps[i] = h;
    out.gradient[i] = (plus.value - minus.value) / (2.0 * h);
    grad_var[i] = (plus.std_error * plus.std_error + minus.std_error * minus.std_error) / (4.0 * h * h);
  }
  const Eigen::Map<const Eigen::VectorXd> g(out.gradient.data(), static_cast<Eigen::Index>(k));
  out.value = g.dot(cov * g);
  for (std::size_t i = 0; i < k; ++i)
    out.noise_floor += cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) * grad_var[i];
  return out;
}

}  // namespace fickit::criteria
