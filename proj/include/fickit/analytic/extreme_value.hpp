#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "fickit/error.hpp"
#include "fickit/monte_carlo.hpp"

namespace fickit::analytic {

/// Large-m complexity of the best of m independent nu-parameter fits:
/// 2 log m + (nu - 2) log log m.
inline double evt_complexity(std::size_t m, std::size_t nu) {
  if (m < 2) throw InvalidArgument("evt_complexity needs m >= 2 (log log m is undefined below)");
  if (nu < 1) throw InvalidArgument("evt_complexity needs nu >= 1");
  const double lm = std::log(static_cast<double>(m));
  return 2.0 * lm + (static_cast<double>(nu) - 2.0) * std::log(lm);
}

/// E[max of m independent chi^2_nu draws] by direct simulation.
inline MonteCarloEstimate max_chi2_mc(std::size_t m, std::size_t nu, std::size_t replicates, std::uint64_t seed) {
  if (m < 1) throw InvalidArgument("max_chi2_mc needs m >= 1");
  if (nu < 1) throw InvalidArgument("max_chi2_mc needs nu >= 1");
  return monte_carlo(replicates, seed, [m, nu](RngStream& rng) {
    double best = 0.0;
    if (nu <= 4) {
      std::normal_distribution<double> z;
      for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t d = 0; d < nu; ++d) {
          const double v = z(rng);
          s += v * v;
        }
        best = std::max(best, s);
      }
    } else {
      std::chi_squared_distribution<double> chi2(static_cast<double>(nu));
      for (std::size_t i = 0; i < m; ++i) best = std::max(best, chi2(rng));
    }
    return best;
  });
}

}  // namespace fickit::analytic
