#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "bureskit/state_param.hpp"

namespace bureskit::fixtures {

namespace detail {
inline cplx phase(double p) { return std::polar(1.0, std::numbers::pi * p); }
}  // namespace detail

constexpr double pi = std::numbers::pi;

/// First reference point; several angles lie outside the canonical box.
inline PointCoords q1() {
  return {-pi / 3, 2 * pi / 3, 3 * pi / 4, 2 * pi / 3, -2 * pi / 3, -2 * pi / 3, -2 * pi / 3, -pi / 3};
}

inline PointCoords q2() { return {pi / 4, 3 * pi / 4, 2 * pi / 3, pi / 4, pi / 4, pi / 3, pi / 4, pi / 6}; }

/// Point where the q1 four-forms are re-evaluated.
inline PointCoords q3() { return {2 * pi / 3, 2 * pi / 3, 5 * pi / 6, pi / 4, pi / 3, pi / 6, pi / 4, pi / 6}; }

inline Mat3c rho1() {
  using detail::phase;
  const double s3 = std::sqrt(3.0);
  const cplx i(0, 1);
  Mat3c r;
  r(0, 0) = 307.0 / 1024;
  r(0, 1) = -3.0 * (59.0 * i + 25 * s3) / 2048.0;
  r(0, 2) = phase(5.0 / 12) * (51.0 + 29.0 * i * s3) / 1024.0;
  r(1, 0) = -3.0 * (-59.0 * i + 25 * s3) / 2048.0;
  r(1, 1) = 417.0 / 1024;
  r(1, 2) = -3.0 * phase(1.0 / 12) * (21.0 * i + 25 * s3) / 1024.0;
  r(2, 0) = phase(11.0 / 12) * (9.0 + 20.0 * i * s3) / 512.0;
  r(2, 1) = 3.0 / 512 * phase(3.0 / 4) * (24.0 + i * s3);
  r(2, 2) = 75.0 / 256;
  return r;
}

/// Second reference matrix. Entry (1,3) is stored as the conjugate of
/// entry (3,1); the printed value lacks a factor (7+3i)/128.
inline Mat3c rho2() {
  using detail::phase;
  const double s3 = std::sqrt(3.0), s2 = std::sqrt(2.0);
  const cplx i(0, 1);
  Mat3c r;
  r(0, 0) = 41.0 / 128;
  r(0, 1) = -1.0 / 32 + 15.0 * i / 128.0;
  r(1, 0) = -1.0 / 32 - 15.0 * i / 128.0;
  r(1, 1) = 41.0 / 128;
  r(1, 2) = (-3.0 / 128 - 7.0 * i / 128.0) * (phase(5.0 / 12) + phase(3.0 / 4));
  r(2, 0) = (3.0 / 128 + 7.0 * i / 128.0) * (phase(1.0 / 4) + phase(7.0 / 12));
  r(2, 1) = (1.0 / 64 + 5.0 * i / 128.0) * (-3.0 * i + s3) / s2;
  r(2, 2) = 23.0 / 64;
  r(0, 2) = std::conj(r(2, 0));
  return r;
}

/// Entry (1,3) of the second matrix exactly as printed.
inline cplx rho2_printed_13() { return detail::phase(11.0 / 12) * (1.0 + detail::phase(1.0 / 3)); }

inline std::vector<CalibrationFixture> calibration_fixtures() { return {{q1(), rho1()}, {q2(), rho2()}}; }

/// Printed spectra, rescaled to the published normalization.
inline std::vector<double> spectrum_q1() {
  std::vector<double> v{6.15149, -6.06045, -4.16211, 4.07107};
  for (double x : {5.11128, 0.994689, 0.0455182}) {
    for (int k = 0; k < 4; ++k) {
      v.push_back(x);
      v.push_back(-x);
    }
  }
  return v;
}

/// The final octet is printed without a sign; it splits four and four.
inline std::vector<double> spectrum_q2() {
  std::vector<double> v{2.68934, -2.60397, -1.69317, 1.6078};
  for (double x : {2.14857, 0.498082, 0.0426838}) {
    for (int k = 0; k < 4; ++k) {
      v.push_back(x);
      v.push_back(-x);
    }
  }
  return v;
}

struct CoefficientGolden {
  std::array<int, 4> labels;
  double value;
};

inline std::vector<CoefficientGolden> omega_plus_q1() {
  return {{{1, 2, 3, 4}, 378375.0 / 1654016},
          {{1, 2, 3, 5}, -14037.0 / 127232},
          {{1, 5, 7, 8}, 601.0 / 71},
          {{1, 6, 7, 8}, -59079.0 / 284}};
}

inline std::vector<CoefficientGolden> omega_minus_q1() {
  return {{{1, 2, 3, 4}, 6975.0 / 23296},
          {{1, 2, 3, 5}, -14187.0 / 127232},
          {{1, 5, 7, 8}, -647.0 / 71},
          {{1, 6, 7, 8}, 58745.0 / 284}};
}

inline std::vector<CoefficientGolden> omega_plus_q2() {
  const double s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  return {{{1, 2, 3, 4}, (448 + 128 * s3 + 27 * s6) / 896}, {{1, 6, 7, 8}, (-3 + 224 * s6) / 6}};
}

inline std::vector<CoefficientGolden> omega_minus_q2() {
  const double s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  return {{{1, 2, 3, 4}, (448 + 128 * s3 - 27 * s6) / 896}, {{1, 6, 7, 8}, (-3 - 224 * s6) / 6}};
}

}  // namespace bureskit::fixtures
