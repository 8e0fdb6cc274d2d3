#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "fickit/criteria/complexity.hpp"
#include "fickit/fisher.hpp"
#include "fickit/information.hpp"
#include "fickit/models/basic.hpp"
#include "fickit/monte_carlo.hpp"
#include "fickit/types.hpp"

using namespace fickit;

namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

Dataset data_of(std::vector<double> v) { return Dataset(std::move(v)); }

}  // namespace

TEST(Dataset, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(Dataset({}), InvalidArgument);
  EXPECT_THROW(Dataset({1.0, NAN}), InvalidArgument);
  EXPECT_THROW(Dataset({INFINITY}), InvalidArgument);
  EXPECT_EQ(data_of({1, 2, 3}).size(), 3u);
}

TEST(ParameterVector, TagsMustBeDistinct) {
  EXPECT_THROW(ParameterVector({1.0, 2.0}, {3, 3}), InvalidArgument);
  ParameterVector p({1.0, 2.0}, {3, -3});
  EXPECT_EQ(p.dimension(), 2u);
  const auto q = p.with_coordinate(1, 5.0);
  EXPECT_EQ(q[1], 5.0);
  EXPECT_EQ(q.tags()[1], -3);
}

TEST(FittedModel, SamplerSizeIsChecked) {
  FittedModel bad(ParameterVector(), [](const Dataset&) { return 0.0; },
                  [](std::size_t, RngStream&) { return Dataset({1.0}); });
  RngStream rng(1);
  EXPECT_THROW(bad.sample(2, rng), NumericalError);
}

TEST(FittedModel, DensityIntegratesToOne) {
  // Trapezoid rule over a range holding all but ~1e-20 of the mass.
  auto integrate = [](const FittedModel& m, double lo, double hi) {
    const int steps = 200000;
    const double h = (hi - lo) / steps;
    double s = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double x = lo + h * i;
      const double w = (i == 0 || i == steps) ? 0.5 : 1.0;
      s += w * std::exp(m.log_density(Dataset({x})));
    }
    return s * h;
  };
  EXPECT_NEAR(integrate(models::unit_normal_model(0.3), -12.0, 12.0), 1.0, 1e-8);
  EXPECT_NEAR(integrate(models::exponential_model(2.0), 0.0, 30.0), 1.0, 1e-6);
}

TEST(ShannonInformation, StandardNormalAtMode) {
  EXPECT_NEAR(shannon_information(data_of({0.0}), models::unit_normal_model()), kHalfLog2Pi, 1e-15);
  EXPECT_NEAR(kHalfLog2Pi, 0.9189385332, 1e-10);
}

TEST(ShannonInformation, AdditiveOverIndependentObservations) {
  const std::vector<double> x{0.3, -1.2, 2.5, 0.0};
  const auto m = models::unit_normal_model();
  double sum = 0.0;
  for (double v : x) sum += shannon_information(data_of({v}), m);
  EXPECT_NEAR(shannon_information(data_of(x), m), sum, 1e-12);
}

TEST(ShannonInformation, ExponentialDirectEvaluation) {
  EXPECT_DOUBLE_EQ(shannon_information(data_of({2.0}), models::exponential_model(1.0)), 2.0);
}

TEST(ShannonInformation, NonFiniteDensityIsAnError) {
  EXPECT_THROW(shannon_information(data_of({-1.0}), models::exponential_model(1.0)), NumericalError);
}

TEST(ShannonInformation, InvariantUnderParameterRelabeling) {
  // Exponential written with the scale beta = 1 / lambda instead of the rate.
  const double beta = 0.4;
  FittedModel by_scale(
      ParameterVector({beta}),
      [beta](const Dataset& x) {
        double s = 0.0;
        for (double v : x.values()) s += -std::log(beta) - v / beta;
        return s;
      },
      [](std::size_t n, RngStream&) { return Dataset(std::vector<double>(n, 1.0)); });
  const Dataset x = data_of({0.1, 0.7, 2.2});
  EXPECT_NEAR(shannon_information(x, by_scale), shannon_information(x, models::exponential_model(1.0 / beta)), 1e-12);
}

TEST(CrossEntropy, GaussianEntropy) {
  const auto m = models::unit_normal_model();
  const auto e = cross_entropy_mc(m, m, 1, 20000, 7);
  EXPECT_NEAR(e.value, kHalfLog2Pi + 0.5, 3 * e.std_error);
  EXPECT_EQ(e.replicates, 20000u);
  EXPECT_EQ(e.seed, 7u);
}

TEST(CrossEntropy, GaussianCrossEntropyAddsDivergence) {
  const auto e = cross_entropy_mc(models::unit_normal_model(0.0), models::unit_normal_model(1.0), 1, 20000, 8);
  EXPECT_NEAR(e.value, kHalfLog2Pi + 1.0, 3 * e.std_error);
}

TEST(CrossEntropy, GibbsInequalityOverGrid) {
  const auto truth = models::unit_normal_model(0.5);
  const auto self = cross_entropy_mc(truth, truth, 5, 4000, 9);
  for (double mu : {-1.0, 0.0, 0.25, 0.75, 2.0}) {
    const auto other = cross_entropy_mc(truth, models::unit_normal_model(mu), 5, 4000, 9);
    EXPECT_LE(self.value, other.value + 3 * combined_std_error(self, other)) << "mu=" << mu;
  }
}

TEST(CrossEntropy, NeedsTwoReplicates) {
  const auto m = models::unit_normal_model();
  EXPECT_THROW(cross_entropy_mc(m, m, 1, 1, 0), InvalidArgument);
}

TEST(KlStatistic, IdentityAntisymmetryAndHandValue) {
  const Dataset x = data_of({0.0});
  const auto m0 = models::unit_normal_model(0.0), m1 = models::unit_normal_model(1.0);
  EXPECT_EQ(kl_statistic(x, m0, m0), 0.0);
  EXPECT_DOUBLE_EQ(kl_statistic(x, m0, m1), 0.5);
  const Dataset y = data_of({0.3, -2.0, 1.7});
  EXPECT_EQ(kl_statistic(y, m0, m1) + kl_statistic(y, m1, m0), 0.0);
}

TEST(KlDivergence, IdenticalParametersGiveZero) {
  const auto m = models::unit_normal_model(0.2);
  const auto d = kl_divergence_mc(m, m, m, 10, 100, 3);
  EXPECT_EQ(d.value, 0.0);
  EXPECT_EQ(d.std_error, 0.0);
}

TEST(KlDivergence, GaussianShiftScalesWithN) {
  const auto m0 = models::unit_normal_model(0.0), m1 = models::unit_normal_model(1.0);
  const std::size_t n = 10;
  const auto d = kl_divergence_mc(m0, m1, m0, n, 5000, 4);
  EXPECT_NEAR(d.value, 0.5 * n, 3 * d.std_error);
  EXPECT_GE(d.value, -3 * d.std_error);
}

TEST(ErrorStatistic, VanishesAtTheOptimum) {
  const auto m = models::unit_normal_model();
  EXPECT_EQ(error_statistic(data_of({1.5}), m, m, 0.0), 0.0);
}

TEST(ErrorStatistic, ExpectationAtMleIsTheComplexity) {
  // Gaussian mean, truth 0, unit variance: D(0||mu) = N mu^2 / 2 exactly.
  const std::size_t n = 10, datasets = 20000;
  const auto family = models::gaussian_mean_family(1);
  const auto truth = models::gaussian_mean_model({0.0});
  std::vector<double> kappa(datasets);
  for (std::size_t r = 0; r < datasets; ++r) {
    RngStream rng = make_stream(11, r);
    const Dataset x = truth.sample(n, rng);
    const FittedModel fit = family.fit(x);
    const double mu = fit.params()[0];
    kappa[r] = error_statistic(x, truth, fit, 0.5 * n * mu * mu);
  }
  const auto k = MonteCarloEstimate::from_samples(kappa, 11);
  EXPECT_NEAR(k.value, 1.0, 3 * k.std_error);

  const auto oracle = criteria::true_complexity_mc(truth, family, n, 20000, 12);
  EXPECT_NEAR(k.value, oracle.value, 3 * combined_std_error(k, oracle));
}

TEST(ErrorStatistic, MonteCarloDivergencePath) {
  const std::size_t n = 5, datasets = 400;
  const auto family = models::gaussian_mean_family(1);
  const auto truth = models::gaussian_mean_model({0.0});
  std::vector<double> kappa(datasets);
  for (std::size_t r = 0; r < datasets; ++r) {
    RngStream rng = make_stream(13, r);
    const Dataset x = truth.sample(n, rng);
    const FittedModel fit = family.fit(x);
    const double divergence = kl_divergence_mc(truth, fit, truth, n, 400, derive_seed(14, r)).value;
    kappa[r] = error_statistic(x, truth, fit, divergence);
  }
  const auto k = MonteCarloEstimate::from_samples(kappa, 13);
  EXPECT_NEAR(k.value, 1.0, 3 * k.std_error);
}

// ---------------------------------------------------------------------------
// Monte Carlo plumbing
// ---------------------------------------------------------------------------

TEST(MonteCarloEstimate, StdErrorIsSampleSdOverRootN) {
  const std::vector<double> v{1, 2, 3, 4};
  const auto e = MonteCarloEstimate::from_samples(v, 0);
  EXPECT_DOUBLE_EQ(e.value, 2.5);
  EXPECT_NEAR(e.std_error, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
  EXPECT_EQ(e.replicates, 4u);
  EXPECT_THROW(MonteCarloEstimate::from_samples(std::vector<double>{1.0}, 0), InvalidArgument);
}

TEST(MonteCarlo, DeterministicReplay) {
  auto draw = [](RngStream& rng) { return std::normal_distribution<double>()(rng); };
  const auto a = monte_carlo(1000, 42, draw);
  const auto b = monte_carlo(1000, 42, draw);
  const auto c = monte_carlo(1000, 43, draw);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.value, c.value);
}

TEST(MonteCarlo, FailingReplicateIsNamed) {
  try {
    monte_carlo(50, 5, [](RngStream&) -> double { throw NumericalError("boom"); });
    FAIL() << "expected ReplicateError";
  } catch (const ReplicateError& e) {
    EXPECT_EQ(e.replicate(), 0u);
    EXPECT_EQ(e.stream_seed(), derive_seed(5, std::uint64_t{0}));
    EXPECT_NE(std::string(e.what()).find("boom"), std::string::npos);
  }
}

TEST(MonteCarlo, NonFiniteReplicateIsAnError) {
  EXPECT_THROW(monte_carlo(10, 1, [](RngStream&) { return NAN; }), ReplicateError);
}

TEST(MonteCarlo, PairwiseSumMatchesExactIntegerSum) {
  std::vector<double> v(1001);
  std::iota(v.begin(), v.end(), 1.0);
  EXPECT_EQ(pairwise_sum(v), 1001.0 * 1002.0 / 2.0);
}

TEST(MonteCarlo, DerivedSeedsAreDistinct) {
  EXPECT_NE(derive_seed(1, std::uint64_t{0}), derive_seed(1, std::uint64_t{1}));
  EXPECT_NE(derive_seed(1, "data"), derive_seed(1, "fic"));
  EXPECT_NE(derive_seed(1, "data"), derive_seed(2, "data"));
  EXPECT_EQ(derive_seed(1, "data"), derive_seed(1, "data"));
}

TEST(MonteCarlo, ParallelForNestsAndReportsLowestFailure) {
  std::vector<int> out(64, 0);
  parallel_for(8, [&](std::size_t i) { parallel_for(8, [&](std::size_t j) { out[i * 8 + j] = 1; }); });
  EXPECT_EQ(std::accumulate(out.begin(), out.end(), 0), 64);
  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 37 || i == 80) throw InvalidArgument(std::to_string(i));
    });
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_STREQ(e.what(), "37");
  }
}

// ---------------------------------------------------------------------------
// Fisher matrix
// ---------------------------------------------------------------------------

TEST(FisherMatrix, Validation) {
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0.4, 1;
  EXPECT_THROW(FisherMatrix{asym}, InvalidArgument);
  Eigen::MatrixXd indefinite(2, 2);
  indefinite << 1, 0, 0, -1;
  EXPECT_THROW(FisherMatrix{indefinite}, InvalidArgument);
  EXPECT_THROW(FisherMatrix{Eigen::MatrixXd(2, 3)}, InvalidArgument);
}

TEST(FisherMatrix, SingularInverseNeedsPseudoInverse) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 1, 1, 1;
  const FisherMatrix f(m);
  EXPECT_TRUE(f.is_singular());
  EXPECT_THROW(f.inverse(), NumericalError);
  const Eigen::MatrixXd p = f.pseudo_inverse();
  EXPECT_NEAR(p(0, 0), 0.25, 1e-12);
  EXPECT_NEAR(p(0, 1), 0.25, 1e-12);
  EXPECT_FALSE(FisherMatrix::identity(3).is_singular());
}
