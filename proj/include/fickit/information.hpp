#pragma once

#include <cmath>
#include <cstdint>

#include "fickit/error.hpp"
#include "fickit/monte_carlo.hpp"
#include "fickit/types.hpp"

namespace fickit {

/// h(X|theta) = -log q(X|theta), in nats.
inline double shannon_information(const Dataset& data, const FittedModel& model) {
  const double log_q = model.log_density(data);
  if (!std::isfinite(log_q))
    throw NumericalError("log-density is not finite (density underflow or invalid parameters)");
  return -log_q;
}

/// Monte Carlo estimate of H(theta) = E_{Y~truth}[h(Y|theta)] for datasets
/// of `sample_size` observations.
inline MonteCarloEstimate cross_entropy_mc(const FittedModel& truth_sampler,
                                           const FittedModel& eval_model,
                                           std::size_t sample_size, std::size_t replicates,
                                           std::uint64_t seed) {
  return monte_carlo(replicates, seed, [&](RngStream& rng) {
    const Dataset y = truth_sampler.sample(sample_size, rng);
    return shannon_information(y, eval_model);
  });
}

/// d(theta0||theta) = h(X|theta) - h(X|theta0).
inline double kl_statistic(const Dataset& data, const FittedModel& theta0, const FittedModel& theta) {
  return shannon_information(data, theta) - shannon_information(data, theta0);
}

/// D(theta0||theta) = H(theta) - H(theta0). Both terms are evaluated on the
/// same draw Y in each replicate (common random numbers).
inline MonteCarloEstimate kl_divergence_mc(const FittedModel& theta0, const FittedModel& theta,
                                           const FittedModel& truth_sampler,
                                           std::size_t sample_size, std::size_t replicates,
                                           std::uint64_t seed) {
  return monte_carlo(replicates, seed, [&](RngStream& rng) {
    const Dataset y = truth_sampler.sample(sample_size, rng);
    return kl_statistic(y, theta0, theta);
  });
}

/// kappa(theta) = D(theta0||theta) - d(theta0||theta) for a precomputed divergence.
inline double error_statistic(const Dataset& data, const FittedModel& theta0,
                              const FittedModel& theta, double divergence) {
  return divergence - kl_statistic(data, theta0, theta);
}

}  // namespace fickit
