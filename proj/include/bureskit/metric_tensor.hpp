#pragma once

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "bureskit/errors.hpp"

namespace bureskit {

/// Symmetric positive-definite metric with cached inverse and volume factor.
///
/// `orientation` multiplies the volume form; +1 means the coordinate order
/// itself is positively oriented.
class MetricTensor {
 public:
  static MetricTensor from_matrix(const Eigen::MatrixXd& g, int orientation = 1) {
    if (g.rows() != g.cols() || g.rows() == 0) {
      throw Error(ErrorKind::invalid_metric, "metric must be a non-empty square matrix");
    }
    if (!g.allFinite()) throw Error(ErrorKind::invalid_metric, "metric has non-finite entries");
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
      throw Error(ErrorKind::invalid_metric, "metric is not symmetric");
    }
    if (orientation != 1 && orientation != -1) {
      throw Error(ErrorKind::invalid_metric, "orientation must be +1 or -1");
    }
    MetricTensor m;
    m.g_ = 0.5 * (g + g.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(m.g_);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorKind::invalid_metric, "metric is not positive-definite");
    }
    const Eigen::MatrixXd L = llt.matrixL();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < L.rows(); ++i) {
      if (!(L(i, i) > 0.0)) throw Error(ErrorKind::invalid_metric, "non-positive determinant");
      log_det += 2.0 * std::log(L(i, i));
    }
    m.det_ = std::exp(log_det);
    m.sqrt_det_ = std::exp(0.5 * log_det);
    m.g_inv_ = llt.solve(Eigen::MatrixXd::Identity(g.rows(), g.cols()));
    m.g_inv_ = 0.5 * (m.g_inv_ + m.g_inv_.transpose());
    m.orientation_ = orientation;
    return m;
  }

  static MetricTensor euclidean(int n = 8) {
    return from_matrix(Eigen::MatrixXd::Identity(n, n));
  }

  int dim() const noexcept { return static_cast<int>(g_.rows()); }
  const Eigen::MatrixXd& g() const noexcept { return g_; }
  const Eigen::MatrixXd& g_inv() const noexcept { return g_inv_; }
  double det() const noexcept { return det_; }
  double sqrt_det() const noexcept { return sqrt_det_; }
  int orientation() const noexcept { return orientation_; }

  /// Ratio of extreme eigenvalues of g.
  double condition_number() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
  }

 private:
  MetricTensor() = default;
  Eigen::MatrixXd g_;
  Eigen::MatrixXd g_inv_;
  double det_ = 1.0;
  double sqrt_det_ = 1.0;
  int orientation_ = 1;
};

}  // namespace bureskit
