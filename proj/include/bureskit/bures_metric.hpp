#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "bureskit/connection.hpp"
#include "bureskit/exterior_algebra.hpp"
#include "bureskit/metric_tensor.hpp"
#include "bureskit/state_param.hpp"

namespace bureskit {

/// How the volume form is oriented at a point.
///
/// `positive` keeps the chart order positively oriented everywhere.
/// `published` flips it where sin2β·sin2b·sin2θ·sinθ₁·sinθ₂ < 0, which
/// is the orientation under which the reference four-forms and sweep curves
/// are self-dual.
enum class OrientationRule { published, positive };

inline int orientation_at(const PointCoords& p, OrientationRule rule) {
  if (rule == OrientationRule::positive) return 1;
  const double s = std::sin(2 * p.beta) * std::sin(2 * p.b) * std::sin(2 * p.theta) * std::sin(p.theta1) *
                   std::sin(p.theta2);
  return s < 0 ? -1 : 1;
}

inline constexpr double kPairSumFloor = 1e-12;

/// Components of ∂ρ in the eigenframe: U†(∂ᵢρ)U = KD − DK + ∂D with K = U†∂U.
inline std::array<Mat3c, kNumCoords> frame_rho_partials(const PointCoords& p, const DensityState& s,
                                                        const GeneratorSequence& seq) {
  const FramePartials fp = frame_partials(p, seq);
  const Mat3c& u = s.frame.unitary;
  const Mat3c d = s.frame.eigenvalues.cast<cplx>().asDiagonal();
  std::array<Mat3c, kNumCoords> out;
  for (std::size_t i = 0; i < kNumCoords; ++i) {
    const Mat3c k = u.adjoint() * fp.dU[i];
    out[i] = k * d - d * k;
    out[i].diagonal() += fp.dlambda[i].cast<cplx>();
  }
  return out;
}

/// g_ij = ½ Σ_ab Re[(dρ'ᵢ)_ab (dρ'ⱼ)_ba] / (λ_a + λ_b).
inline Eigen::MatrixXd bures_metric_matrix(const PointCoords& p, const GeneratorSequence& seq = calibrated_sequence(),
                                           double gap = kDefaultEigenGap) {
  const DensityState s = density_from_angles(p, seq, gap);
  const auto dr = frame_rho_partials(p, s, seq);
  const Eigen::Vector3d& lam = s.frame.eigenvalues;
  Eigen::Matrix3d inv_sum;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double den = lam(a) + lam(b);
      if (den < kPairSumFloor) throw Error(ErrorKind::degenerate_state, "eigenvalue pair sum below floor");
      inv_sum(a, b) = 1.0 / den;
    }
  }
  Eigen::MatrixXd g(kNumCoords, kNumCoords);
  for (int i = 0; i < kNumCoords; ++i) {
    for (int j = i; j < kNumCoords; ++j) {
      double acc = 0.0;
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          acc += (dr[static_cast<std::size_t>(i)](a, b) * dr[static_cast<std::size_t>(j)](b, a)).real() * inv_sum(a, b);
        }
      }
      g(i, j) = g(j, i) = 0.5 * acc;
    }
  }
  return g;
}

inline MetricTensor bures_metric(const PointCoords& p, OrientationRule rule = OrientationRule::published,
                                 const GeneratorSequence& seq = calibrated_sequence(), double gap = kDefaultEigenGap) {
  return MetricTensor::from_matrix(bures_metric_matrix(p, seq, gap), orientation_at(p, rule));
}

/// (θ₁, θ₂) block from the eigenvalue derivatives alone: ¼ Σ_a ∂ᵢλ_a ∂ⱼλ_a / λ_a.
inline Eigen::Matrix2d eigenvalue_block(const PointCoords& p, const GeneratorSequence& seq = calibrated_sequence()) {
  const Eigen::Vector3d lam = eigenvalues_from_angles(p.theta1, p.theta2, kDefaultEigenGap, seq);
  const auto tri = raw_eigen_triple(p.theta1, p.theta2);
  const std::array<Eigen::Vector3d, 2> d{apply_slots(tri[1], seq.slots), apply_slots(tri[2], seq.slots)};
  Eigen::Matrix2d out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out(i, j) = 0.25 * (d[i].array() * d[j].array() / lam.array()).sum();
  }
  return out;
}

/// Inner product on two-forms: G2[(ij),(kl)] = g^{ik}g^{jl} − g^{il}g^{jk}.
inline Eigen::MatrixXd gram_on_two_forms(const MetricTensor& metric) {
  const int n = metric.dim();
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  const Eigen::MatrixXd& gi = metric.g_inv();
  const auto m = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd G(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto [i, j] = pairs[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < m; ++c) {
      const auto [k, l] = pairs[static_cast<std::size_t>(c)];
      G(r, c) = gi(i, k) * gi(j, l) - gi(i, l) * gi(j, k);
    }
  }
  return G;
}

/// Coefficients a with Σ_ij a_ij ρ^{i-1} S ρ^{j-1} = (L+R)⁻¹ S for all S.
struct AijFit {
  Eigen::Matrix3d a;
  double residual = 0.0;   // max abs mismatch over the Hermitian basis
  double condition = 0.0;  // ratio of extreme nonzero singular values
  bool ill_conditioned = false;
};

inline std::array<Mat3c, 9> hermitian_basis() {
  std::array<Mat3c, 9> out;
  out[0] = Mat3c::Identity() * std::sqrt(2.0 / 3.0);
  for (std::size_t k = 0; k < 8; ++k) out[k + 1] = gell_mann()[k];
  return out;
}

inline AijFit fit_aij(const Mat3c& rho, double cond_limit = 1e10) {
  const auto basis = hermitian_basis();
  std::array<Mat3c, 3> pw{Mat3c::Identity(), rho, rho * rho};
  static constexpr std::array<std::pair<int, int>, 6> unknowns{{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
  Eigen::MatrixXd A(9 * 18, 6);
  Eigen::VectorXd rhs(9 * 18);
  for (std::size_t s = 0; s < basis.size(); ++s) {
    const Mat3c x = sylvester_solve(rho, basis[s]);
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      const auto [i, j] = unknowns[u];
      Mat3c t = pw[static_cast<std::size_t>(i)] * basis[s] * pw[static_cast<std::size_t>(j)];
      if (i != j) t += pw[static_cast<std::size_t>(j)] * basis[s] * pw[static_cast<std::size_t>(i)];
      for (int e = 0; e < 9; ++e) {
        A(static_cast<Eigen::Index>(s * 18 + 2 * e), static_cast<Eigen::Index>(u)) = t(e / 3, e % 3).real();
        A(static_cast<Eigen::Index>(s * 18 + 2 * e + 1), static_cast<Eigen::Index>(u)) = t(e / 3, e % 3).imag();
      }
    }
    for (int e = 0; e < 9; ++e) {
      rhs(static_cast<Eigen::Index>(s * 18 + 2 * e)) = x(e / 3, e % 3).real();
      rhs(static_cast<Eigen::Index>(s * 18 + 2 * e + 1)) = x(e / 3, e % 3).imag();
    }
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
  cod.setThreshold(1e-12);
  const Eigen::VectorXd sol = cod.solve(rhs);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  double smallest = sv(0);
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > 1e-12 * sv(0)) smallest = sv(k);
  }
  AijFit fit;
  for (std::size_t u = 0; u < unknowns.size(); ++u) {
    const auto [i, j] = unknowns[u];
    fit.a(i, j) = fit.a(j, i) = sol(static_cast<Eigen::Index>(u));
  }
  fit.residual = (A * sol - rhs).cwiseAbs().maxCoeff();
  fit.condition = sv(0) / smallest;
  fit.ill_conditioned = fit.condition > cond_limit || cod.rank() < 6;
  return fit;
}

/// Applies the fitted operator Σ_ij a_ij ρ^{i-1} S ρ^{j-1}.
inline Mat3c apply_aij(const AijFit& fit, const Mat3c& rho, const Mat3c& S) {
  std::array<Mat3c, 3> pw{Mat3c::Identity(), rho, rho * rho};
  Mat3c out = Mat3c::Zero();
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) out += fit.a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * pw[i] * S * pw[j];
  }
  return out;
}

/// Metric from the fitted polynomial route: ½ Σ a_kl Tr(∂ᵢρ ρ^{k-1} ∂ⱼρ ρ^{l-1}).
inline Eigen::MatrixXd fitted_metric(const PointCoords& p, const GeneratorSequence& seq = calibrated_sequence()) {
  const DensityState s = density_from_angles(p, seq);
  const AijFit fit = fit_aij(s.rho);
  const auto dr = rho_partials(p, seq);
  Eigen::MatrixXd g(kNumCoords, kNumCoords);
  for (std::size_t i = 0; i < kNumCoords; ++i) {
    for (std::size_t j = 0; j < kNumCoords; ++j) {
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          0.5 * (dr[i] * apply_aij(fit, s.rho, dr[j])).trace().real();
    }
  }
  return g;
}

}  // namespace bureskit
