#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "fickit/error.hpp"

namespace fickit {

/// Fisher information of N observations: the Hessian of the cross entropy at
/// the optimal parameters. Symmetric and positive semi-definite; singular
/// matrices are allowed (and expected for unidentifiable models).
class FisherMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-9;
  static constexpr double kNegativeEigenTolerance = 1e-9;
  static constexpr double kClipRatio = 1e-12;

  explicit FisherMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw InvalidArgument("Fisher matrix must be square");
    const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
    if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale)
      throw InvalidArgument("Fisher matrix is not symmetric");
    entries_ = 0.5 * (entries_ + entries_.transpose());
    if (entries_.size() > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries_);
      const auto& ev = eig.eigenvalues();
      const double top = std::max(0.0, ev.maxCoeff());
      if (ev.minCoeff() < -kNegativeEigenTolerance * std::max(top, 1e-300))
        throw InvalidArgument("Fisher matrix is not positive semi-definite");
    }
  }

  static FisherMatrix identity(Eigen::Index k) { return FisherMatrix(Eigen::MatrixXd::Identity(k, k)); }

  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  Eigen::Index dimension() const noexcept { return entries_.rows(); }

  /// Eigenvalues below kClipRatio * max are treated as exactly zero.
  bool is_singular() const {
    if (entries_.size() == 0) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries_);
    const auto& ev = eig.eigenvalues();
    return ev.minCoeff() <= kClipRatio * ev.maxCoeff();
  }

  /// Moore-Penrose pseudo-inverse with the same eigenvalue clipping.
  Eigen::MatrixXd pseudo_inverse() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries_);
    const auto& ev = eig.eigenvalues();
    const double cut = kClipRatio * ev.maxCoeff();
    Eigen::VectorXd inv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) inv(i) = ev(i) > cut ? 1.0 / ev(i) : 0.0;
    return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
  }

  Eigen::MatrixXd inverse() const {
    if (is_singular()) throw NumericalError("Fisher matrix is singular");
    return pseudo_inverse();
  }

 private:
  Eigen::MatrixXd entries_;
};

}  // namespace fickit
