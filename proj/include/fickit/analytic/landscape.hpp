#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "fickit/error.hpp"
#include "fickit/family.hpp"
#include "fickit/format.hpp"
#include "fickit/information.hpp"
#include "fickit/monte_carlo.hpp"
#include "fickit/types.hpp"

namespace fickit::analytic {

/// Pearson correlation of kappa(theta_a) and kappa(theta_b) over datasets
/// drawn from `truth`, with theta_0 = truth. The divergences are constants
/// per parameter point and are computed once.
inline double error_statistic_correlation(const ModelFamily& family, const FittedModel& truth,
                                          const ParameterVector& theta_a, const ParameterVector& theta_b,
                                          std::size_t sample_size, std::size_t replicates, std::uint64_t seed) {
  if (replicates < 10) throw InvalidArgument("error_statistic_correlation needs replicates >= 10");
  const FittedModel model_a = family.model_at(theta_a);
  const FittedModel model_b = family.model_at(theta_b);
  const std::uint64_t div_seed = derive_seed(seed, "divergence");
  const double div_a = kl_divergence_mc(truth, model_a, truth, sample_size, replicates, div_seed).value;
  const double div_b = kl_divergence_mc(truth, model_b, truth, sample_size, replicates, div_seed).value;

  const std::uint64_t data_seed = derive_seed(seed, "data");
  std::vector<double> ka(replicates), kb(replicates);
  parallel_for(replicates, [&](std::size_t i) {
    RngStream rng = make_stream(data_seed, i);
    const Dataset x = truth.sample(sample_size, rng);
    ka[i] = error_statistic(x, truth, model_a, div_a);
    kb[i] = error_statistic(x, truth, model_b, div_b);
  });

  const double n = static_cast<double>(replicates);
  const double ma = pairwise_sum(ka) / n, mb = pairwise_sum(kb) / n;
  std::vector<double> saa(replicates), sbb(replicates), sab(replicates);
  for (std::size_t i = 0; i < replicates; ++i) {
    saa[i] = (ka[i] - ma) * (ka[i] - ma);
    sbb[i] = (kb[i] - mb) * (kb[i] - mb);
    sab[i] = (ka[i] - ma) * (kb[i] - mb);
  }
  const double va = pairwise_sum(saa), vb = pairwise_sum(sbb);
  if (!(va > 0.0) || !(vb > 0.0)) throw NumericalError("error statistic has zero variance; correlation undefined");
  const double r = pairwise_sum(sab) / std::sqrt(va * vb);
  return std::clamp(r, -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Information landscape over a 2-parameter grid
// ---------------------------------------------------------------------------

struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  std::size_t steps = 1;

  double at(std::size_t i) const {
    if (steps == 1) return min;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  void validate(const char* name) const {
    if (steps < 1) throw InvalidArgument(std::string(name) + " needs at least one step");
    if (!std::isfinite(min) || !std::isfinite(max) || (steps > 1 && !(max > min)))
      throw InvalidArgument(std::string(name) + " range must be finite with max > min");
  }
};

struct LandscapeSpec {
  GridAxis theta1;
  GridAxis theta2;
  std::size_t replicates = 200;
  std::uint64_t seed = 0;
};

/// Surfaces are stored row-major with theta1 as the row index.
struct LandscapeGrid {
  GridAxis theta1;
  GridAxis theta2;
  std::vector<double> d;         // on the observed data
  std::vector<double> D;         // Monte Carlo divergence
  std::vector<double> D_stderr;
  std::vector<char> valid;
  // Minimum over theta1 at each theta2 (NaN if no valid cell).
  std::vector<double> d_profile;
  std::vector<double> D_profile;
  std::vector<double> D_profile_stderr;

  std::size_t index(std::size_t i1, std::size_t i2) const { return i1 * theta2.steps + i2; }

  /// Grid cell (i1, i2) minimizing D among valid cells.
  std::pair<std::size_t, std::size_t> argmin_D() const {
    std::size_t best = d.size();
    for (std::size_t c = 0; c < D.size(); ++c)
      if (valid[c] && (best == d.size() || D[c] < D[best])) best = c;
    if (best == d.size()) throw NumericalError("landscape has no valid cell");
    return {best / theta2.steps, best % theta2.steps};
  }
};

/// d(theta0||theta) on `data` and D(theta0||theta) by Monte Carlo at every
/// grid point, with theta0 = `truth`. All cells share one seed, so the D
/// surface is smooth in theta (common random numbers across cells). Cells
/// whose parameters the family rejects are flagged invalid.
inline LandscapeGrid information_landscape(const ModelFamily& family, const FittedModel& truth, const Dataset& data,
                                           const LandscapeSpec& spec) {
  if (family.dimension() != 2) throw InvalidArgument("information landscape needs a 2-parameter family");
  spec.theta1.validate("theta1 axis");
  spec.theta2.validate("theta2 axis");
  LandscapeGrid g;
  g.theta1 = spec.theta1;
  g.theta2 = spec.theta2;
  const std::size_t cells = spec.theta1.steps * spec.theta2.steps;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  g.d.assign(cells, nan);
  g.D.assign(cells, nan);
  g.D_stderr.assign(cells, nan);
  g.valid.assign(cells, 0);
  const std::size_t n = data.size();

  for (std::size_t c = 0; c < cells; ++c) {
    const std::size_t i1 = c / spec.theta2.steps, i2 = c % spec.theta2.steps;
    try {
      const FittedModel m = family.model_at(ParameterVector({spec.theta1.at(i1), spec.theta2.at(i2)}));
      const double d = kl_statistic(data, truth, m);
      const MonteCarloEstimate D = kl_divergence_mc(truth, m, truth, n, spec.replicates, spec.seed);
      g.d[c] = d;
      g.D[c] = D.value;
      g.D_stderr[c] = D.std_error;
      g.valid[c] = 1;
    } catch (const InvalidArgument&) {
    } catch (const NumericalError&) {
    }
  }

  g.d_profile.assign(spec.theta2.steps, nan);
  g.D_profile.assign(spec.theta2.steps, nan);
  g.D_profile_stderr.assign(spec.theta2.steps, nan);
  for (std::size_t i2 = 0; i2 < spec.theta2.steps; ++i2) {
    for (std::size_t i1 = 0; i1 < spec.theta1.steps; ++i1) {
      const std::size_t c = g.index(i1, i2);
      if (!g.valid[c]) continue;
      if (std::isnan(g.d_profile[i2]) || g.d[c] < g.d_profile[i2]) g.d_profile[i2] = g.d[c];
      if (std::isnan(g.D_profile[i2]) || g.D[c] < g.D_profile[i2]) {
        g.D_profile[i2] = g.D[c];
        g.D_profile_stderr[i2] = g.D_stderr[c];
      }
    }
  }
  return g;
}

/// Interior points strictly below both neighbours.
inline std::size_t count_local_minima(const std::vector<double>& y) {
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] < y[i - 1] && y[i] < y[i + 1]) ++count;
  return count;
}

namespace detail {
inline std::string csv_number(double v) { return std::isnan(v) ? std::string("NA") : format_double(v); }
}  // namespace detail

/// Columns theta1,theta2,d,D; invalid cells are written as NA.
inline void write_surface_csv(std::ostream& out, const LandscapeGrid& g) {
  out << "theta1,theta2,d,D\n";
  for (std::size_t i1 = 0; i1 < g.theta1.steps; ++i1)
    for (std::size_t i2 = 0; i2 < g.theta2.steps; ++i2) {
      const std::size_t c = g.index(i1, i2);
      out << format_double(g.theta1.at(i1)) << ',' << format_double(g.theta2.at(i2)) << ','
          << detail::csv_number(g.d[c]) << ',' << detail::csv_number(g.D[c]) << '\n';
    }
}

inline void write_profile_csv(std::ostream& out, const LandscapeGrid& g) {
  out << "theta2,d_profile,D_profile\n";
  for (std::size_t i2 = 0; i2 < g.theta2.steps; ++i2)
    out << format_double(g.theta2.at(i2)) << ',' << detail::csv_number(g.d_profile[i2]) << ','
        << detail::csv_number(g.D_profile[i2]) << '\n';
}

}  // namespace fickit::analytic
