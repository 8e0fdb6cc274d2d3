#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "fickit/analytic/coordinates.hpp"
#include "fickit/analytic/extreme_value.hpp"
#include "fickit/analytic/landscape.hpp"
#include "fickit/models/basic.hpp"
#include "fickit/models/fourier.hpp"
#include "fickit/models/landscape_models.hpp"

using namespace fickit;
using namespace fickit::analytic;
using namespace fickit::models;

namespace {

FisherMatrix diag(std::vector<double> d) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return FisherMatrix(m);
}

/// E[max of m chi^2_nu] = int_0^inf (1 - F(x)^m) dx with F the chi^2_nu CDF.
double max_chi2_quadrature(std::size_t m, std::size_t nu) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto tail = [m, nu](double x) {
    const double f = boost::math::gamma_p(0.5 * static_cast<double>(nu), 0.5 * x);
    return -std::expm1(static_cast<double>(m) * std::log1p(-(1.0 - f)));
  };
  return integrator.integrate(tail);
}

std::vector<ParameterVector> gaussian_mean_errors(std::size_t k, std::size_t n, std::size_t samples, std::uint64_t seed) {
  std::vector<double> truth(k);
  for (std::size_t b = 0; b < k; ++b) truth[b] = static_cast<double>(b);
  const auto gen = gaussian_mean_model(truth);
  const auto fam = gaussian_mean_family(k);
  std::vector<ParameterVector> out;
  for (std::size_t s = 0; s < samples; ++s) {
    RngStream rng = make_stream(seed, s);
    const auto fit = fam.fit(gen.sample(n, rng));
    std::vector<double> d(k);
    for (std::size_t b = 0; b < k; ++b) d[b] = fit.params()[b] - truth[b];
    out.emplace_back(d);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Quadratic error statistic and coordinate complexities
// ---------------------------------------------------------------------------

TEST(QuadraticErrorStatistic, Basics) {
  EXPECT_EQ(quadratic_error_statistic(ParameterVector({0.0, 0.0}), FisherMatrix::identity(2)), 0.0);
  EXPECT_DOUBLE_EQ(quadratic_error_statistic(ParameterVector({3.0, 4.0}), FisherMatrix::identity(2)), 25.0);
  EXPECT_THROW(quadratic_error_statistic(ParameterVector({1.0}), FisherMatrix::identity(2)), InvalidArgument);
}

TEST(QuadraticErrorStatistic, GaussianMeanAveragesToOne) {
  const std::size_t n = 25;
  const auto errors = gaussian_mean_errors(1, n, 20000, 1);
  std::vector<double> q;
  for (const auto& e : errors) q.push_back(quadratic_error_statistic(e, diag({static_cast<double>(n)})));
  const auto est = MonteCarloEstimate::from_samples(q, 1);
  EXPECT_LE(std::abs(est.value - 1.0), 3.0 * est.std_error) << est.value;
}

TEST(CoordinateComplexities, RegularModelIsOnePerCoordinate) {
  const std::size_t k = 3, n = 300;
  const auto errors = gaussian_mean_errors(k, n, 8000, 2);
  const auto cc = coordinate_complexities(errors, gaussian_mean_family(k).fisher_at(ParameterVector({0, 1, 2}), n));
  ASSERT_EQ(cc.k.size(), k);
  for (std::size_t i = 0; i < k; ++i) {
    EXPECT_NEAR(cc.k[i], 1.0, 0.1) << i;
    EXPECT_EQ(cc.classes[i], CoordinateClass::Regular);
    EXPECT_FALSE(cc.pseudo[i]);
  }
}

TEST(CoordinateComplexities, SumEqualsMeanQuadraticStatistic) {
  // Correlated Fisher matrix so the hatted basis is a genuine rotation.
  Eigen::Matrix3d f;
  f << 4, 1, 0.5, 1, 3, 0.2, 0.5, 0.2, 2;
  const FisherMatrix fisher(f);
  std::vector<ParameterVector> errors;
  std::vector<double> q;
  RngStream rng(3);
  std::normal_distribution<double> z;
  for (int s = 0; s < 500; ++s) {
    errors.emplace_back(std::vector<double>{z(rng), z(rng), z(rng)});
    q.push_back(quadratic_error_statistic(errors.back(), fisher));
  }
  const auto cc = coordinate_complexities(errors, fisher);
  const double mean_q = pairwise_sum(q) / static_cast<double>(q.size());
  EXPECT_NEAR(cc.total(), mean_q, 1e-12 * mean_q);
}

TEST(CoordinateComplexities, SingularDirectionIsUnidentifiable) {
  // Second parameter has zero information but bounded, nonzero MLE error.
  std::vector<ParameterVector> errors;
  RngStream rng(4);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s = 0; s < 2000; ++s) errors.emplace_back(std::vector<double>{z(rng) / 10.0, u(rng)});
  const auto cc = coordinate_complexities(errors, diag({100.0, 0.0}));
  // Eigenvalues ascending: the singular direction comes first.
  EXPECT_EQ(cc.k[0], 0.0);
  EXPECT_EQ(cc.classes[0], CoordinateClass::Unidentifiable);
  EXPECT_TRUE(cc.pseudo[0]);
  EXPECT_NEAR(cc.k[1], 1.0, 0.1);
  EXPECT_EQ(cc.classes[1], CoordinateClass::Regular);
}

TEST(CoordinateComplexities, GreedyModeBeyondIdentifiabilityIsInflated) {
  // Pure-noise truth: the greedily selected coefficient is the largest of
  // N - 1 null modes, so its error carries roughly 2 log N.
  const std::size_t n = 1000;
  const auto fam = greedy_fourier_family(1, n);
  const auto truth = fourier_model(n, {0}, {0.0});
  std::vector<ParameterVector> errors;
  for (std::size_t s = 0; s < 2000; ++s) {
    RngStream rng = make_stream(5, s);
    const auto fit = fam.fit(truth.sample(n, rng));
    errors.emplace_back(std::vector<double>{fit.params()[0], fit.params()[1]});
  }
  const auto cc = coordinate_complexities(errors, FisherMatrix::identity(2));
  const double two_log_n = 2.0 * std::log(static_cast<double>(n));
  const double inflated = std::max(cc.k[0], cc.k[1]);
  const double regular = std::min(cc.k[0], cc.k[1]);
  EXPECT_NEAR(inflated, two_log_n, 0.2 * two_log_n);
  EXPECT_NEAR(regular, 1.0, 0.15);
  EXPECT_EQ(classify_coordinate(inflated), CoordinateClass::MultiplicityInflated);
}

TEST(CoordinateComplexities, Classification) {
  EXPECT_EQ(classify_coordinate(0.05), CoordinateClass::Unidentifiable);
  EXPECT_EQ(classify_coordinate(0.1), CoordinateClass::Unidentifiable);
  EXPECT_EQ(classify_coordinate(0.85), CoordinateClass::Regular);
  EXPECT_EQ(classify_coordinate(1.2), CoordinateClass::Regular);
  EXPECT_EQ(classify_coordinate(1.5), CoordinateClass::Intermediate);
  EXPECT_EQ(classify_coordinate(2.0), CoordinateClass::MultiplicityInflated);
  EXPECT_EQ(to_string(CoordinateClass::MultiplicityInflated), "multiplicity-inflated");
  EXPECT_THROW(coordinate_complexities(std::vector<ParameterVector>{ParameterVector({1.0})}, diag({1.0})),
               InvalidArgument);
}

// ---------------------------------------------------------------------------
// Extreme-value complexity
// ---------------------------------------------------------------------------

TEST(EvtComplexity, ClosedForm) {
  for (std::size_t m : {2, 3, 10, 1000}) EXPECT_EQ(evt_complexity(m, 2), 2.0 * std::log(static_cast<double>(m)));
  EXPECT_NEAR(evt_complexity(1000, 1), 11.883, 1e-3);
  EXPECT_NEAR(evt_complexity(1000, 1), 2 * std::log(1000.0) - std::log(std::log(1000.0)), 1e-12);
  EXPECT_THROW(evt_complexity(1, 1), InvalidArgument);
  EXPECT_THROW(evt_complexity(0, 2), InvalidArgument);
}

TEST(MaxChi2, QuadratureOracleSelfCheck) {
  // The integral route reproduces the two-draw closed form before it is
  // trusted as an oracle elsewhere.
  EXPECT_NEAR(max_chi2_quadrature(2, 1), 1.0 + 2.0 / std::numbers::pi, 1e-9);
  EXPECT_NEAR(max_chi2_quadrature(1, 3), 3.0, 1e-9);
}

TEST(MaxChi2, SingleDrawIsNu) {
  for (std::size_t nu : {1, 2, 3, 7}) {
    const auto e = max_chi2_mc(1, nu, 20000, 10 + nu);
    EXPECT_LE(std::abs(e.value - static_cast<double>(nu)), 3.0 * e.std_error) << nu;
  }
}

TEST(MaxChi2, TwoDrawsClosedForm) {
  const auto e = max_chi2_mc(2, 1, 200000, 20);
  EXPECT_LE(std::abs(e.value - (1.0 + 2.0 / std::numbers::pi)), 3.0 * e.std_error) << e.value;
}

TEST(MaxChi2, MatchesQuadrature) {
  for (auto [m, nu] : {std::pair<std::size_t, std::size_t>{20, 1}, {20, 3}, {100, 2}, {50, 6}}) {
    const auto e = max_chi2_mc(m, nu, 20000, 30 + m + nu);
    EXPECT_LE(std::abs(e.value - max_chi2_quadrature(m, nu)), 3.0 * e.std_error) << m << "," << nu;
  }
}

TEST(MaxChi2, MonotoneInMAndDominatesSingleDraw) {
  double prev = -1.0;
  for (std::size_t m = 1; m <= 256; m *= 2) {
    const auto e = max_chi2_mc(m, 1, 4000, 40);
    EXPECT_GT(e.value, prev) << m;
    EXPECT_GE(e.value, 1.0 - 3.0 * e.std_error);
    prev = e.value;
  }
}

TEST(MaxChi2, EvtFormulaGapShrinksWithM) {
  const double gap20 = std::abs(evt_complexity(20, 1) - max_chi2_quadrature(20, 1)) / max_chi2_quadrature(20, 1);
  const double gap1000 = std::abs(evt_complexity(1000, 1) - max_chi2_quadrature(1000, 1)) / max_chi2_quadrature(1000, 1);
  EXPECT_LT(gap20, 0.15);
  EXPECT_LT(gap1000, 0.05);
  EXPECT_LT(gap1000, gap20);
}

// ---------------------------------------------------------------------------
// Error-statistic correlation
// ---------------------------------------------------------------------------

class SineCorrelation : public ::testing::Test {
 protected:
  static constexpr std::size_t kN = 100;
  ModelFamily family = sine_regression_family(kN, 0.2, 3.0);
  FittedModel truth = sine_model(kN, 0.0, 1.0);
};

TEST_F(SineCorrelation, IdenticalParametersGiveOne) {
  const ParameterVector a({0.5, 0.9});
  EXPECT_EQ(error_statistic_correlation(family, truth, a, a, kN, 200, 1), 1.0);
}

TEST_F(SineCorrelation, Symmetric) {
  const ParameterVector a({0.5, 0.9}), b({0.3, 1.4});
  EXPECT_EQ(error_statistic_correlation(family, truth, a, b, kN, 200, 2),
            error_statistic_correlation(family, truth, b, a, kN, 200, 2));
}

TEST_F(SineCorrelation, SeparatedFrequenciesAreIndependent) {
  const std::size_t r = 4000;
  const ParameterVector a({0.5, 0.9}), b({0.5, 0.9 + 10.0 * frequency_resolution(kN)});
  EXPECT_LE(std::abs(error_statistic_correlation(family, truth, a, b, kN, r, 3)), 3.0 / std::sqrt(double(r)));
}

TEST_F(SineCorrelation, AdjacentFrequenciesAreCorrelated) {
  const ParameterVector a({0.5, 0.9});
  double prev = 0.0;
  for (double sep : {0.5, 0.1, 0.01}) {
    const double r = error_statistic_correlation(family, truth, a, ParameterVector({0.5, 0.9 + sep * frequency_resolution(kN)}), kN, 500, 4);
    EXPECT_GT(r, prev) << sep;
    prev = r;
  }
  EXPECT_GT(prev, 0.99);
}

TEST_F(SineCorrelation, Errors) {
  const ParameterVector a({0.5, 0.9});
  EXPECT_THROW(error_statistic_correlation(family, truth, a, a, kN, 9, 1), InvalidArgument);
  // Zero amplitude is the truth itself: kappa is identically zero.
  EXPECT_THROW(error_statistic_correlation(family, truth, ParameterVector({0.0, 0.9}), a, kN, 50, 1), NumericalError);
}

// ---------------------------------------------------------------------------
// Landscapes
// ---------------------------------------------------------------------------

TEST(Landscape, RegularModelHasMinimumAtTruth) {
  const std::size_t n = 100;
  const auto truth = linear_trend_model(n, 1.0, 0.25);
  RngStream rng(6);
  const auto data = truth.sample(n, rng);
  LandscapeSpec spec{{0.5, 1.5, 21}, {-1.0, 1.0, 21}, 200, 7};
  const auto g = information_landscape(linear_trend_family(n), truth, data, spec);
  const auto [i1, i2] = g.argmin_D();
  const double cell1 = (spec.theta1.max - spec.theta1.min) / 20, cell2 = (spec.theta2.max - spec.theta2.min) / 20;
  EXPECT_LE(std::abs(g.theta1.at(i1) - 1.0), cell1 + 1e-12);
  EXPECT_LE(std::abs(g.theta2.at(i2) - 0.25), cell2 + 1e-12);
  // The in-sample statistic reaches below its value at the truth (zero).
  double min_d = INFINITY;
  for (double v : g.d) min_d = std::min(min_d, v);
  EXPECT_LE(min_d, 0.0);
}

TEST(Landscape, SingularModelDegenerateLineAndRoughProfile) {
  const std::size_t n = 100;
  const double w0 = 0.3, w1 = w0 + 20 * frequency_resolution(n);
  const auto truth = sine_model(n, 0.0, 0.9);
  RngStream rng(8);
  const auto data = truth.sample(n, rng);
  LandscapeSpec spec{{-0.5, 0.5, 21}, {w0, w1, 161}, 100, 9};
  const auto g = information_landscape(sine_regression_family(n, w0, w1), truth, data, spec);

  double lo = INFINITY, hi = -INFINITY, se = 0.0;
  for (std::size_t i = 0; i < g.D_profile.size(); ++i) {
    lo = std::min(lo, g.D_profile[i]);
    hi = std::max(hi, g.D_profile[i]);
    se = std::max(se, g.D_profile_stderr[i]);
  }
  EXPECT_LE(hi - lo, 5.0 * se + 1e-12);
  EXPECT_GE(count_local_minima(g.d_profile), 5u);
  for (std::size_t c = 0; c < g.d.size(); ++c) EXPECT_GE(g.d[c], *std::min_element(g.d.begin(), g.d.end()));
}

TEST(Landscape, InvalidCellsAreFlaggedNotFatal) {
  ModelFamily::Spec spec;
  spec.family_id = "positive-first";
  spec.dimension = 2;
  spec.fit = [](const Dataset& x) { return gaussian_mean_family(2).fit(x); };
  spec.model_at = [](const ParameterVector& p) {
    if (p[0] < 0.0) throw InvalidArgument("first parameter must be non-negative");
    return gaussian_mean_model({p[0], p[1]});
  };
  const ModelFamily fam(std::move(spec));
  const auto truth = gaussian_mean_model({0.5, 0.5});
  RngStream rng(10);
  const auto data = truth.sample(20, rng);
  const auto g = information_landscape(fam, truth, data, {{-1.0, 1.0, 5}, {0.0, 1.0, 3}, 20, 11});
  std::size_t invalid = 0;
  for (char v : g.valid) invalid += v ? 0 : 1;
  EXPECT_EQ(invalid, 6u);  // theta1 = -1, -0.5
  EXPECT_TRUE(std::isnan(g.d[g.index(0, 0)]));
  std::ostringstream surface;
  write_surface_csv(surface, g);
  EXPECT_NE(surface.str().find(",NA,NA\n"), std::string::npos);
  std::ostringstream profile;
  write_profile_csv(profile, g);
  EXPECT_EQ(profile.str().substr(0, 27), "theta2,d_profile,D_profile\n");
}

TEST(Landscape, RejectsWrongDimension) {
  const auto truth = gaussian_mean_model({0.0});
  RngStream rng(12);
  EXPECT_THROW(information_landscape(gaussian_mean_family(1), truth, truth.sample(10, rng), {{0, 1, 2}, {0, 1, 2}, 10, 1}),
               InvalidArgument);
}

TEST(Landscape, CountLocalMinima) {
  EXPECT_EQ(count_local_minima({3, 1, 2, 0, 5, 4, 6}), 3u);
  EXPECT_EQ(count_local_minima({1, 2, 3}), 0u);
  EXPECT_EQ(count_local_minima({2, 1, 1, 2}), 0u);
}
