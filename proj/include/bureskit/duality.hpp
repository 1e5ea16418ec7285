#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "bureskit/exterior_algebra.hpp"
#include "bureskit/metric_tensor.hpp"

namespace bureskit {

/// Four-form with ⋆Ω = sign·Ω whose coefficients on the 35 indices
/// without coordinate 1 are pinned to one.
struct FourFormSolution {
  Form8 omega{4};
  int sign = 1;
  std::vector<MultiIndex> pinned_set;
  double residual = 0.0;  // max |(⋆ − sign)Ω| over all 70 equations
  int rank = 0;           // rank of ⋆ − sign on Λ⁴
};

struct DualitySplit {
  std::vector<int> first;   // positions of indices containing coordinate 1
  std::vector<int> second;  // the pinned positions
};

inline const DualitySplit& duality_split() {
  static const DualitySplit s = [] {
    DualitySplit r;
    const auto& b = FormBasis<8>::of_degree(4);
    for (std::size_t k = 0; k < b.size(); ++k) (b[k] & 1u ? r.first : r.second).push_back(static_cast<int>(k));
    return r;
  }();
  return s;
}

inline constexpr double kDualityTolerance = 1e-9;
inline constexpr double kRankThreshold = 1e-8;
inline constexpr double kPivotThreshold = 1e-13;

inline FourFormSolution solve_dual_form(const MetricTensor& metric, int sign, double tol = kDualityTolerance) {
  if (sign != 1 && sign != -1) throw Error(ErrorKind::invalid_argument, "sign must be +1 or -1");
  const Eigen::MatrixXd star = star_matrix<8>(metric, 4);
  const Eigen::MatrixXd sys = star - sign * Eigen::MatrixXd::Identity(70, 70);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > kRankThreshold * sv(0)) ++rank;
  }
  if (rank != 35) {
    throw Error(ErrorKind::degenerate_duality, "rank of star minus sign is " + std::to_string(rank) + ", expected 35");
  }

  const auto& split = duality_split();
  Eigen::MatrixXd block(35, 35);
  Eigen::VectorXd rhs(35);
  for (int r = 0; r < 35; ++r) {
    const int row = split.second[static_cast<std::size_t>(r)];
    double pinned = 0.0;
    for (int c : split.second) pinned += star(row, c);
    rhs(r) = sign - pinned;
    for (int c = 0; c < 35; ++c) block(r, c) = star(row, split.first[static_cast<std::size_t>(c)]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
  lu.setThreshold(kPivotThreshold);
  if (!lu.isInvertible()) throw Error(ErrorKind::pin_convention_failure, "pinned block is singular");
  const Eigen::VectorXd x = lu.solve(rhs);

  FourFormSolution sol;
  sol.sign = sign;
  sol.rank = rank;
  sol.omega.coeffs.setOnes();
  for (int c = 0; c < 35; ++c) sol.omega.coeffs(split.first[static_cast<std::size_t>(c)]) = x(c);
  const auto& b = FormBasis<8>::of_degree(4);
  for (int k : split.second) sol.pinned_set.push_back(b[static_cast<std::size_t>(k)]);
  sol.residual = (sys * sol.omega.coeffs).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, sol.omega.coeffs.cwiseAbs().maxCoeff());
  if (!(sol.residual <= tol * scale)) {
    throw Error(ErrorKind::pin_convention_failure, "duality residual " + std::to_string(sol.residual) + " exceeds tolerance");
  }
  return sol;
}

template <int N>
bool is_pm_equal(const PForm<N>& a, const PForm<N>& b, double tol) {
  if (a.degree != b.degree) return false;
  return (a.coeffs - b.coeffs).cwiseAbs().maxCoeff() <= tol || (a.coeffs + b.coeffs).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_pm_equal(const FourFormSolution& a, const FourFormSolution& b, double tol) {
  return is_pm_equal(a.omega, b.omega, tol);
}

}  // namespace bureskit
