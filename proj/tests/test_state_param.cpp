#include <gtest/gtest.h>

#include <algorithm>

#include "bureskit/fixtures.hpp"
#include "bureskit/state_param.hpp"
#include "support/oracles.hpp"

using namespace bureskit;

namespace {

std::vector<double> sorted(const Eigen::Vector3d& v) {
  std::vector<double> s(v.data(), v.data() + 3);
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

TEST(GellMann, StandardBasis) {
  const auto& l = gell_mann();
  Mat3c l3 = Mat3c::Zero();
  l3(0, 0) = 1;
  l3(1, 1) = -1;
  EXPECT_EQ(l[2], l3);
  for (int i = 0; i < 8; ++i) {
    EXPECT_LT((l[i] - l[i].adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT(std::abs(l[i].trace()), 1e-15);
    for (int j = 0; j < 8; ++j) {
      EXPECT_NEAR((l[i] * l[j]).trace().real(), i == j ? 2.0 : 0.0, 1e-14);
    }
  }
  const Mat3c comm = l[0] * l[1] - l[1] * l[0];
  EXPECT_LT((comm - cplx(0, 2) * l[2]).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GellMann, ClosedFormExponentialIsExact) {
  for (int k = 1; k <= 8; ++k) {
    const double x = 0.37 * k;
    // Taylor series reference
    const Mat3c a = cplx(0, x) * gell_mann()[k - 1];
    Mat3c term = Mat3c::Identity(), sum = Mat3c::Identity();
    for (int n = 1; n < 40; ++n) {
      term = term * a / double(n);
      sum += term;
    }
    EXPECT_LT((gell_mann_exp(k, x) - sum).cwiseAbs().maxCoeff(), 1e-14) << "k=" << k;
  }
}

TEST(Eigenvalues, ReferenceTriples) {
  const auto u = sorted(eigenvalues_from_angles(-2 * fixtures::pi / 3, -fixtures::pi / 3));
  EXPECT_NEAR(u[0], 3.0 / 16, 1e-15);
  EXPECT_NEAR(u[1], 1.0 / 4, 1e-15);
  EXPECT_NEAR(u[2], 9.0 / 16, 1e-15);
  const auto v = sorted(eigenvalues_from_angles(fixtures::pi / 4, fixtures::pi / 6));
  EXPECT_NEAR(v[0], 1.0 / 8, 1e-15);
  EXPECT_NEAR(v[1], 3.0 / 8, 1e-15);
  EXPECT_NEAR(v[2], 1.0 / 2, 1e-15);
  EXPECT_NEAR(eigenvalues_from_angles(0.3, 0.7).sum(), 1.0, 1e-15);
}

TEST(Eigenvalues, PureStateRejected) {
  try {
    eigenvalues_from_angles(0.0, 0.4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_state);
  }
  // two equal eigenvalues
  EXPECT_THROW(eigenvalues_from_angles(fixtures::pi / 3, fixtures::pi / 4), Error);
}

TEST(Density, ReproducesReferenceMatrices) {
  EXPECT_LT((density_from_angles(fixtures::q1()).rho - fixtures::rho1()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((density_from_angles(fixtures::q2()).rho - fixtures::rho2()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(density_from_angles(fixtures::q1()).rho(0, 0).real(), 307.0 / 1024, 1e-12);
  EXPECT_NEAR(density_from_angles(fixtures::q2()).rho(2, 2).real(), 23.0 / 64, 1e-12);
}

TEST(Density, PrintedSecondMatrixEntryIsInconsistent) {
  // The printed (1,3) entry has modulus above one; the stored value is the
  // Hermitian partner of (3,1).
  EXPECT_GT(std::abs(fixtures::rho2_printed_13()), 1.0);
  const Mat3c r = fixtures::rho2();
  EXPECT_LT((r - r.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Density, ConstructionInvariants) {
  const PointCoords p{0.3, 1.1, -0.4, 0.5, 0.9, 0.2, 0.6, 0.8};
  const DensityState s = density_from_angles(p);
  EXPECT_LT((s.rho - s.rho.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(s.rho.trace().real(), 1.0, 1e-12);
  EXPECT_LT((s.frame.unitary.adjoint() * s.frame.unitary - Mat3c::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Mat3c> es(s.rho);
  EXPECT_EQ(sorted(es.eigenvalues()).size(), 3u);
  const auto want = sorted(eigenvalues_from_angles(p.theta1, p.theta2));
  const auto got = sorted(es.eigenvalues());
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(got[k], want[k], 1e-12);
}

TEST(Density, AlphaShiftChangesEntries) {
  const PointCoords p = fixtures::q2();
  const Mat3c a = density_from_angles(p).rho;
  const Mat3c b = density_from_angles(p.with(Coordinate::alpha, p.alpha + fixtures::pi)).rho;
  EXPECT_GT((a - b).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Partials, HermitianTracelessAndMatchFiniteDifferences) {
  const PointCoords p = fixtures::q2();
  const auto d = rho_partials(p);
  for (int i = 0; i < kNumCoords; ++i) {
    EXPECT_LT(std::abs(d[i].trace()), 1e-12);
    EXPECT_LT((d[i] - d[i].adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((d[i] - oracle::fd_rho(p, i, 1e-6)).cwiseAbs().maxCoeff(), 1e-8) << coord_name(Coordinate(i));
  }
}

TEST(Partials, EigenvalueDirectionsDiagonalInFrame) {
  const PointCoords p{1.0, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.5};
  const auto d = rho_partials(p);
  const Mat3c u = density_from_angles(p).frame.unitary;
  for (int i : {6, 7}) {
    Mat3c m = u.adjoint() * d[i] * u;
    m.diagonal().setZero();
    EXPECT_LT(m.cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Calibration, FindsBakedSequence) {
  const auto r = calibrate_parameterization(fixtures::calibration_fixtures());
  EXPECT_EQ(r.sequence, calibrated_sequence());
  EXPECT_EQ(r.exact.size(), 2u);
  EXPECT_EQ(r.candidates_searched, 720u * 64u * 2u * 6u);
  EXPECT_GT(r.nearest.front().max_deviation, 1e-2);
}

TEST(Calibration, WrongSlotPermutationRejected) {
  GeneratorSequence s = calibrated_sequence();
  s.slots = {1, 0, 2};
  EXPECT_GT(candidate_deviation(s, fixtures::calibration_fixtures()), 1e-2);
  EXPECT_LT(candidate_deviation(calibrated_sequence(), fixtures::calibration_fixtures()), 1e-14);
}

TEST(Calibration, NoSurvivorRaises) {
  auto fx = fixtures::calibration_fixtures();
  fx[0].rho(0, 0) += 0.1;
  try {
    calibrate_parameterization(fx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::calibration_failure);
  }
}

TEST(Ranges, FirstPointOutsideCanonicalBox) {
  EXPECT_FALSE(range_warnings(fixtures::q1()).empty());
  EXPECT_TRUE(range_warnings(fixtures::q2()).empty());
}
