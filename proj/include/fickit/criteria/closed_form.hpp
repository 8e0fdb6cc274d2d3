#pragma once

#include <cmath>
#include <string>

#include "fickit/criteria/report.hpp"
#include "fickit/error.hpp"
#include "fickit/information.hpp"
#include "fickit/types.hpp"

namespace fickit::criteria {

/// h(X|theta_hat) + K, K = number of continuous parameters.
inline CriterionReport aic(const FittedModel& fit, const Dataset& data, std::string label = "") {
  const auto k = fit.params().dimension();
  return CriterionReport::information_criterion(std::move(label), CriterionKind::AIC, shannon_information(data, fit),
                                                Complexity::exact(static_cast<double>(k)), k);
}

/// h(X|theta_hat) + K log(N) / 2.
inline CriterionReport bic(const FittedModel& fit, const Dataset& data, std::string label = "") {
  const auto k = fit.params().dimension();
  const double complexity = 0.5 * static_cast<double>(k) * std::log(static_cast<double>(data.size()));
  return CriterionReport::information_criterion(std::move(label), CriterionKind::BIC, shannon_information(data, fit),
                                                Complexity::exact(complexity), k);
}

/// Small-sample complexity of linear regression with unknown variance,
/// K N / (N - K - 1), where K counts the coefficients and the variance.
inline double aicc_linear_regression(std::size_t k, std::size_t n) {
  if (n <= k + 1)
    throw InvalidArgument("AICc complexity diverges for N <= K + 1 (K=" + std::to_string(k) + ", N=" + std::to_string(n) + ")");
  const double kd = static_cast<double>(k), nd = static_cast<double>(n);
  return kd * nd / (nd - kd - 1.0);
}

/// Exact complexity of the one-parameter exponential model, N / (N - 1).
inline double aicc_exponential(std::size_t n) {
  if (n < 2) throw InvalidArgument("exponential complexity diverges for N < 2");
  const double nd = static_cast<double>(n);
  return nd / (nd - 1.0);
}

}  // namespace fickit::criteria
