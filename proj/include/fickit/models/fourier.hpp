#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>
#include <unsupported/Eigen/FFT>
#include <utility>
#include <vector>

#include "fickit/error.hpp"
#include "fickit/family.hpp"
#include "fickit/models/basic.hpp"
#include "fickit/types.hpp"

namespace fickit::models {

// Real orthonormal Fourier basis on j = 1..N (N even), indexed by
// i = -(N/2 - 1) .. N/2:
//   i = 0        1/sqrt(N)
//   0 < i < N/2  sqrt(2/N) cos(2 pi i j / N)
//   i < 0        sqrt(2/N) sin(2 pi |i| j / N)
//   i = N/2      (-1)^j / sqrt(N)
// Unit-variance white noise maps to iid unit-variance coefficients.

inline void require_even(std::size_t n) {
  if (n < 2 || n % 2 != 0)
    throw InvalidArgument("Fourier basis requires an even sample size, got " + std::to_string(n));
}

inline int fourier_min_index(std::size_t n) { return -(static_cast<int>(n) / 2 - 1); }
inline int fourier_max_index(std::size_t n) { return static_cast<int>(n) / 2; }

inline double fourier_basis_value(int i, std::size_t j, std::size_t n) {
  const double nd = static_cast<double>(n);
  if (i == 0) return 1.0 / std::sqrt(nd);
  if (i == static_cast<int>(n) / 2) return (j % 2 == 0 ? 1.0 : -1.0) / std::sqrt(nd);
  const double arg = 2.0 * std::numbers::pi * std::abs(i) * static_cast<double>(j) / nd;
  return std::sqrt(2.0 / nd) * (i > 0 ? std::cos(arg) : std::sin(arg));
}

/// Explicit N x N basis matrix; row r holds mode i = r + min_index.
inline Eigen::MatrixXd fourier_basis_matrix(std::size_t n) {
  require_even(n);
  Eigen::MatrixXd b(n, n);
  const int lo = fourier_min_index(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 1; j <= n; ++j) b(r, j - 1) = fourier_basis_value(static_cast<int>(r) + lo, j, n);
  return b;
}

/// Coefficients X~_i stored in ascending index order.
class FourierCoefficients {
 public:
  FourierCoefficients(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
    require_even(n_);
    if (values_.size() != n_) throw InvalidArgument("expected one coefficient per Fourier mode");
  }

  std::size_t sample_size() const noexcept { return n_; }
  int min_index() const noexcept { return fourier_min_index(n_); }
  int max_index() const noexcept { return fourier_max_index(n_); }
  std::span<const double> values() const noexcept { return values_; }

  double at(int i) const { return values_.at(position(i)); }
  double& at(int i) { return values_.at(position(i)); }

  std::size_t position(int i) const {
    if (i < min_index() || i > max_index())
      throw InvalidArgument("Fourier index " + std::to_string(i) + " out of range");
    return static_cast<std::size_t>(i - min_index());
  }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

inline FourierCoefficients fourier_transform(std::span<const double> x) {
  const std::size_t n = x.size();
  require_even(n);
  thread_local Eigen::FFT<double> fft;
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, in);
  // S_k = sum_j x_j exp(+2 pi i k j / N) with j = m + 1 equals exp(2 pi i k / N) conj(X_k).
  const double nd = static_cast<double>(n);
  const double scale = std::sqrt(2.0 / nd);
  std::vector<double> out(n, 0.0);
  const int lo = fourier_min_index(n);
  auto slot = [lo](int i) { return static_cast<std::size_t>(i - lo); };
  out[slot(0)] = spec[0].real() / std::sqrt(nd);
  for (std::size_t k = 1; k < n / 2; ++k) {
    const double arg = 2.0 * std::numbers::pi * static_cast<double>(k) / nd;
    const std::complex<double> s = std::polar(1.0, arg) * std::conj(spec[k]);
    out[slot(static_cast<int>(k))] = scale * s.real();
    out[slot(-static_cast<int>(k))] = scale * s.imag();
  }
  // Nyquist: sum_m x_m (-1)^(m+1).
  out[slot(static_cast<int>(n / 2))] = -spec[n / 2].real() / std::sqrt(nd);
  return FourierCoefficients(n, std::move(out));
}

inline FourierCoefficients fourier_transform(const Dataset& data) { return fourier_transform(data.values()); }

inline std::vector<double> inverse_fourier_transform(const FourierCoefficients& c) {
  const std::size_t n = c.sample_size();
  std::vector<double> x(n, 0.0);
  for (int i = c.min_index(); i <= c.max_index(); ++i) {
    const double ci = c.at(i);
    if (ci == 0.0) continue;
    for (std::size_t j = 1; j <= n; ++j) x[j - 1] += ci * fourier_basis_value(i, j, n);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Models built from a subset of Fourier modes
// ---------------------------------------------------------------------------

/// Unit-variance Gaussian whose mean is sum over (index, coefficient) of
/// coefficient * basis(index). Parameters: coefficients, tagged by index.
inline FittedModel fourier_model(std::size_t n, std::vector<int> indices, std::vector<double> coefficients) {
  require_even(n);
  if (indices.size() != coefficients.size()) throw InvalidArgument("one coefficient per Fourier index");
  auto mean = std::make_shared<std::vector<double>>(n, 0.0);
  for (std::size_t s = 0; s < indices.size(); ++s) {
    if (indices[s] < fourier_min_index(n) || indices[s] > fourier_max_index(n))
      throw InvalidArgument("Fourier index " + std::to_string(indices[s]) + " out of range");
    for (std::size_t j = 1; j <= n; ++j) (*mean)[j - 1] += coefficients[s] * fourier_basis_value(indices[s], j, n);
  }
  std::shared_ptr<const std::vector<double>> mu = mean;
  return FittedModel(
      ParameterVector(std::move(coefficients), std::move(indices)),
      [mu, n](const Dataset& x) {
        if (x.size() != n) throw InvalidArgument("Fourier model scores exactly " + std::to_string(n) + " observations");
        return detail::gaussian_log_density(x.values(), *mu);
      },
      [mu, n](std::size_t size, RngStream& rng) {
        if (size != n) throw InvalidArgument("Fourier model simulates exactly " + std::to_string(n) + " observations");
        return Dataset(detail::gaussian_draw(*mu, 1.0, rng));
      });
}

/// Full coefficient vector of a Fourier model's parameters (unselected modes zero).
inline FourierCoefficients coefficients_of(const ParameterVector& params, std::size_t n) {
  FourierCoefficients c(n, std::vector<double>(n, 0.0));
  if (params.tags().size() != params.dimension())
    throw InvalidArgument("Fourier parameters must carry one index tag per coefficient");
  for (std::size_t s = 0; s < params.dimension(); ++s) c.at(params.tags()[s]) = params[s];
  return c;
}

/// Indices in the order the sequential algorithm adds them: 0, 1, -1, 2, -2, ...
inline std::vector<int> sequential_indices(std::size_t nesting) {
  std::vector<int> idx{0};
  for (int k = 1; k <= static_cast<int>(nesting); ++k) {
    idx.push_back(k);
    idx.push_back(-k);
  }
  return idx;
}

namespace detail {

inline FittedModel fourier_model_from_params(const ParameterVector& p, std::size_t n,
                                             const std::vector<int>& default_indices) {
  std::vector<int> idx = p.tags().empty() ? default_indices : std::vector<int>(p.tags().begin(), p.tags().end());
  if (idx.size() != p.dimension()) throw InvalidArgument("Fourier parameters and indices disagree in length");
  return fourier_model(n, std::move(idx), {p.coordinates().begin(), p.coordinates().end()});
}

}  // namespace detail

/// Keeps the modes |i| <= n (Nyquist excluded): 2n + 1 coefficients.
inline ModelFamily sequential_fourier_family(std::size_t nesting, std::size_t n) {
  require_even(n);
  if (nesting > n / 2 - 1)
    throw InvalidArgument("sequential nesting index must lie in [0, N/2 - 1]");
  const std::vector<int> indices = sequential_indices(nesting);
  ModelFamily::Spec spec;
  spec.family_id = "sequential_fourier:n=" + std::to_string(nesting) + ":N=" + std::to_string(n);
  spec.dimension = indices.size();
  spec.fit = [n, indices](const Dataset& x) {
    if (x.size() != n) throw InvalidArgument("sequential Fourier family expects " + std::to_string(n) + " observations");
    const FourierCoefficients c = fourier_transform(x);
    std::vector<double> coef;
    coef.reserve(indices.size());
    for (int i : indices) coef.push_back(c.at(i));
    return fourier_model(n, indices, std::move(coef));
  };
  spec.model_at = [n, indices](const ParameterVector& p) { return detail::fourier_model_from_params(p, n, indices); };
  spec.fisher_at = [n, dim = indices.size()](const ParameterVector&, std::size_t size) {
    if (size != n) throw InvalidArgument("Fourier family Fisher matrix is for N=" + std::to_string(n));
    return FisherMatrix::identity(static_cast<Eigen::Index>(dim));
  };
  spec.structured_data = true;
  return ModelFamily(std::move(spec));
}

/// Greedy ordering: larger |coefficient| first; ties go to smaller |i|, then positive i.
inline bool greedy_precedes(int ia, double ca, int ib, double cb) {
  const double ma = std::abs(ca), mb = std::abs(cb);
  if (ma != mb) return ma > mb;
  if (std::abs(ia) != std::abs(ib)) return std::abs(ia) < std::abs(ib);
  return ia > ib;
}

/// The first `count` non-constant modes in greedy order.
inline std::vector<int> greedy_selection(const FourierCoefficients& c, std::size_t count) {
  std::vector<int> candidates;
  candidates.reserve(c.sample_size() - 1);
  for (int i = c.min_index(); i <= c.max_index(); ++i)
    if (i != 0) candidates.push_back(i);
  if (count > candidates.size()) throw InvalidArgument("greedy selection asks for more modes than exist");
  auto cmp = [&c](int a, int b) { return greedy_precedes(a, c.at(a), b, c.at(b)); };
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(count), candidates.end(), cmp);
  candidates.resize(count);
  return candidates;
}

/// Mode 0 plus the n largest-magnitude remaining coefficients. The selected
/// indices are discrete tags; they do not count towards the dimension.
inline ModelFamily greedy_fourier_family(std::size_t nesting, std::size_t n) {
  require_even(n);
  if (nesting > n - 1) throw InvalidArgument("greedy nesting index must lie in [0, N - 1]");
  ModelFamily::Spec spec;
  spec.family_id = "greedy_fourier:n=" + std::to_string(nesting) + ":N=" + std::to_string(n);
  spec.dimension = nesting + 1;
  spec.naive_dimension = 2 * nesting + 1;
  spec.fit = [n, nesting](const Dataset& x) {
    if (x.size() != n) throw InvalidArgument("greedy Fourier family expects " + std::to_string(n) + " observations");
    const FourierCoefficients c = fourier_transform(x);
    std::vector<int> idx{0};
    for (int i : greedy_selection(c, nesting)) idx.push_back(i);
    std::vector<double> coef;
    coef.reserve(idx.size());
    for (int i : idx) coef.push_back(c.at(i));
    return fourier_model(n, std::move(idx), std::move(coef));
  };
  spec.model_at = [n, nesting](const ParameterVector& p) {
    if (p.tags().size() != nesting + 1) throw InvalidArgument("greedy parameters need n + 1 index tags");
    return detail::fourier_model_from_params(p, n, {});
  };
  spec.fisher_at = [n, nesting](const ParameterVector&, std::size_t size) {
    if (size != n) throw InvalidArgument("Fourier family Fisher matrix is for N=" + std::to_string(n));
    return FisherMatrix::identity(static_cast<Eigen::Index>(nesting + 1));
  };
  spec.structured_data = true;
  return ModelFamily(std::move(spec));
}

/// Analytic approximation of the greedy complexity: 1 for the constant mode,
/// then per nesting step 1 if the step's generator coefficient satisfies
/// c^2 >= 2 log N (it beats the extreme of N noise modes), else 2 log N.
inline double greedy_piecewise_complexity(std::size_t nesting, std::size_t n, const FourierCoefficients& generator) {
  if (generator.sample_size() != n) throw InvalidArgument("generator coefficients must have N entries");
  const double two_log_n = 2.0 * std::log(static_cast<double>(n));
  const std::vector<int> order = greedy_selection(generator, nesting);
  double k = 1.0;
  for (int i : order) {
    const double c = generator.at(i);
    k += (c * c >= two_log_n) ? 1.0 : two_log_n;
  }
  return k;
}

// ---------------------------------------------------------------------------
// Seasonal neutrino-intensity toy truth
// ---------------------------------------------------------------------------

/// mu_j = sqrt(120 + 100 sin(2 pi j / N + pi / 6)) AU, j = 1..N.
inline std::vector<double> neutrino_mean(std::size_t n) {
  std::vector<double> mu(n);
  const double nd = static_cast<double>(n);
  for (std::size_t j = 1; j <= n; ++j)
    mu[j - 1] = std::sqrt(120.0 + 100.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(j) / nd +
                                                   std::numbers::pi / 6.0));
  return mu;
}

/// X_j ~ N(mu_j, 1) independently. Parameters are all N Fourier coefficients of mu.
inline FittedModel neutrino_truth(std::size_t n) {
  require_even(n);
  const std::vector<double> mu = neutrino_mean(n);
  const FourierCoefficients c = fourier_transform(mu);
  std::vector<int> idx;
  idx.reserve(n);
  for (int i = c.min_index(); i <= c.max_index(); ++i) idx.push_back(i);
  auto mean = std::make_shared<const std::vector<double>>(mu);
  return FittedModel(
      ParameterVector({c.values().begin(), c.values().end()}, std::move(idx)),
      [mean, n](const Dataset& x) {
        if (x.size() != n) throw InvalidArgument("neutrino truth scores exactly " + std::to_string(n) + " observations");
        return detail::gaussian_log_density(x.values(), *mean);
      },
      [mean, n](std::size_t size, RngStream& rng) {
        if (size != n) throw InvalidArgument("neutrino truth simulates exactly " + std::to_string(n) + " observations");
        return Dataset(detail::gaussian_draw(*mean, 1.0, rng));
      });
}

}  // namespace fickit::models
