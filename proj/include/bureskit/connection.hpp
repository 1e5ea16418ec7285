#pragma once

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "bureskit/errors.hpp"
#include "bureskit/state_param.hpp"

namespace bureskit {

/// Solves ρX + Xρ = S in the eigenbasis of the Hermitian matrix ρ.
inline Mat3c sylvester_solve(const Mat3c& rho, const Mat3c& S, double floor = 1e-12) {
  Eigen::SelfAdjointEigenSolver<Mat3c> es(rho);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::degenerate_state, "eigendecomposition failed");
  const Mat3c& v = es.eigenvectors();
  const Eigen::Vector3d& lam = es.eigenvalues();
  Mat3c sp = v.adjoint() * S * v;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const double den = lam(a) + lam(b);
      if (den < floor) throw Error(ErrorKind::degenerate_state, "eigenvalue pair sum below floor");
      sp(a, b) /= den;
    }
  }
  return v * sp * v.adjoint();
}

/// Hermitian purification W = U D^{1/2} U† and its coordinate derivatives.
struct PurificationSection {
  Mat3c W;
  std::array<Mat3c, kNumCoords> dW;
  Mat3c rho;
};

inline PurificationSection purification(const PointCoords& p, const GeneratorSequence& seq = calibrated_sequence()) {
  const DensityState s = density_from_angles(p, seq);
  const FramePartials fp = frame_partials(p, seq);
  const Mat3c& u = s.frame.unitary;
  const Eigen::Vector3d root = s.frame.eigenvalues.cwiseSqrt();
  const Mat3c r = root.cast<cplx>().asDiagonal();
  PurificationSection out;
  out.rho = s.rho;
  out.W = u * r * u.adjoint();
  for (std::size_t i = 0; i < kNumCoords; ++i) {
    const Eigen::Vector3d droot = fp.dlambda[i].cwiseQuotient(2.0 * root);
    const Mat3c dr = droot.cast<cplx>().asDiagonal();
    out.dW[i] = fp.dU[i] * r * u.adjoint() + u * dr * u.adjoint() + u * r * fp.dU[i].adjoint();
  }
  return out;
}

struct ConnectionComponent {
  Coordinate direction;
  Mat3c A;
  double sylvester_residual = 0.0;
};

/// Solves ρA + Aρ = W T − T W with T = ∂W along `direction`.
inline ConnectionComponent uhlmann_connection(const PointCoords& p, Coordinate direction,
                                              const GeneratorSequence& seq = calibrated_sequence()) {
  const PurificationSection ps = purification(p, seq);
  const Mat3c& T = ps.dW[static_cast<std::size_t>(direction)];
  const Mat3c S = ps.W.adjoint() * T - T.adjoint() * ps.W;
  ConnectionComponent c{direction, sylvester_solve(ps.rho, S), 0.0};
  c.sylvester_residual = (ps.rho * c.A + c.A * ps.rho - S).cwiseAbs().maxCoeff();
  return c;
}

/// F_{μν} = ∂_μA_ν − ∂_νA_μ + [A_μ, A_ν] with central differences.
inline Mat3c curvature(const PointCoords& p, Coordinate mu, Coordinate nu, double step = 1e-4,
                       const GeneratorSequence& seq = calibrated_sequence()) {
  if (!(step > 0.0)) throw Error(ErrorKind::invalid_argument, "step must be positive");
  auto a_at = [&](const PointCoords& q, Coordinate dir) {
    try {
      return uhlmann_connection(q, dir, seq).A;
    } catch (const Error& e) {
      throw Error(ErrorKind::stencil, std::string("stencil point rejected: ") + e.what());
    }
  };
  const int m = static_cast<int>(mu), n = static_cast<int>(nu);
  const Mat3c dmu_anu = (a_at(p.shifted(m, step), nu) - a_at(p.shifted(m, -step), nu)) / (2 * step);
  const Mat3c dnu_amu = (a_at(p.shifted(n, step), mu) - a_at(p.shifted(n, -step), mu)) / (2 * step);
  const Mat3c amu = a_at(p, mu), anu = a_at(p, nu);
  return dmu_anu - dnu_amu + amu * anu - anu * amu;
}

/// |F(h) − F(h/2)| / |F(h/2) − F(h/4)|; close to 4 under second-order convergence.
inline double curvature_convergence_ratio(const PointCoords& p, Coordinate mu, Coordinate nu, double step,
                                          const GeneratorSequence& seq = calibrated_sequence()) {
  const Mat3c f1 = curvature(p, mu, nu, step, seq);
  const Mat3c f2 = curvature(p, mu, nu, step / 2, seq);
  const Mat3c f4 = curvature(p, mu, nu, step / 4, seq);
  return (f1 - f2).cwiseAbs().maxCoeff() / (f2 - f4).cwiseAbs().maxCoeff();
}

}  // namespace bureskit
