#pragma once

#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "fickit/error.hpp"
#include "fickit/fisher.hpp"
#include "fickit/monte_carlo.hpp"
#include "fickit/types.hpp"

namespace fickit::analytic {

/// delta^T I delta.
inline double quadratic_error_statistic(const ParameterVector& delta_theta, const FisherMatrix& fisher) {
  const auto k = static_cast<Eigen::Index>(delta_theta.dimension());
  if (k != fisher.dimension())
    throw InvalidArgument("parameter error has dimension " + std::to_string(k) + " but the Fisher matrix is " +
                          std::to_string(fisher.dimension()) + "x" + std::to_string(fisher.dimension()));
  const Eigen::Map<const Eigen::VectorXd> d(delta_theta.coordinates().data(), k);
  return d.dot(fisher.entries() * d);
}

enum class CoordinateClass { Regular, Unidentifiable, MultiplicityInflated, Intermediate };

inline std::string_view to_string(CoordinateClass c) {
  switch (c) {
    case CoordinateClass::Regular: return "regular";
    case CoordinateClass::Unidentifiable: return "unidentifiable";
    case CoordinateClass::MultiplicityInflated: return "multiplicity-inflated";
    case CoordinateClass::Intermediate: return "intermediate";
  }
  return "?";
}

inline constexpr double kRegularTolerance = 0.2;
inline constexpr double kUnidentifiableMax = 0.1;
inline constexpr double kInflatedMin = 2.0;

inline CoordinateClass classify_coordinate(double k) {
  if (k <= kUnidentifiableMax) return CoordinateClass::Unidentifiable;
  if (std::abs(k - 1.0) <= kRegularTolerance) return CoordinateClass::Regular;
  if (k >= kInflatedMin) return CoordinateClass::MultiplicityInflated;
  return CoordinateClass::Intermediate;
}

struct CoordinateComplexities {
  std::vector<double> k;  // one per hatted coordinate, eigenvalues ascending
  std::vector<CoordinateClass> classes;
  std::vector<bool> pseudo;       // zero-eigenvalue direction carrying nonzero error
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd basis;          // columns: unit eigenvectors of I

  double total() const { return pairwise_sum(k); }
};

/// Per-coordinate mean squared MLE error in the basis where I is the
/// identity: delta^i_hat = sqrt(lambda_i) v_i . delta. Eigenvalues below
/// 1e-12 * max are clipped to zero; their coordinates get k = 0 and, if the
/// errors have a component along them, the pseudo flag.
inline CoordinateComplexities coordinate_complexities(std::span<const ParameterVector> mle_errors,
                                                      const FisherMatrix& fisher) {
  if (mle_errors.size() < 2) throw InvalidArgument("coordinate complexities need at least 2 MLE error samples");
  const Eigen::Index dim = fisher.dimension();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fisher.entries());
  if (eig.info() != Eigen::Success) throw NumericalError("Fisher eigendecomposition failed");
  const Eigen::VectorXd lambda = eig.eigenvalues();
  const double cutoff = FisherMatrix::kClipRatio * std::max(0.0, lambda.maxCoeff());

  const std::size_t samples = mle_errors.size();
  const auto kdim = static_cast<std::size_t>(dim);
  std::vector<std::vector<double>> sq(kdim, std::vector<double>(samples));
  std::vector<double> raw_mass(kdim, 0.0);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto& e = mle_errors[s];
    if (static_cast<Eigen::Index>(e.dimension()) != dim)
      throw InvalidArgument("MLE error sample " + std::to_string(s) + " has the wrong dimension");
    const Eigen::Map<const Eigen::VectorXd> d(e.coordinates().data(), dim);
    const Eigen::VectorXd proj = eig.eigenvectors().transpose() * d;
    for (std::size_t i = 0; i < kdim; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const double l = lambda(ii) > cutoff ? lambda(ii) : 0.0;
      sq[i][s] = l * proj(ii) * proj(ii);
      raw_mass[i] += proj(ii) * proj(ii);
    }
  }

  CoordinateComplexities out;
  out.eigenvalues = lambda;
  out.basis = eig.eigenvectors();
  for (std::size_t i = 0; i < kdim; ++i) {
    const double k = pairwise_sum(sq[i]) / static_cast<double>(samples);
    const bool clipped = !(lambda(static_cast<Eigen::Index>(i)) > cutoff);
    out.k.push_back(k);
    out.pseudo.push_back(clipped && raw_mass[i] > 0.0);
    out.classes.push_back(clipped ? CoordinateClass::Unidentifiable : classify_coordinate(k));
  }
  return out;
}

}  // namespace fickit::analytic
