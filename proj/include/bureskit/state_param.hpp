#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bureskit/errors.hpp"

namespace bureskit {

using Mat3c = Eigen::Matrix3cd;
using cplx = std::complex<double>;

enum class Coordinate : int { alpha = 0, tau, a, beta, b, theta, theta1, theta2 };

inline constexpr int kNumCoords = 8;

inline constexpr std::array<std::string_view, kNumCoords> kCoordNames = {
    "alpha", "tau", "a", "beta", "b", "theta", "theta1", "theta2"};

inline std::string_view coord_name(Coordinate c) { return kCoordNames[static_cast<std::size_t>(c)]; }

inline std::optional<Coordinate> coord_from_name(std::string_view s) {
  for (int i = 0; i < kNumCoords; ++i) {
    if (kCoordNames[static_cast<std::size_t>(i)] == s) return static_cast<Coordinate>(i);
  }
  return std::nullopt;
}

/// Chart coordinates of a state, in chart order.
struct PointCoords {
  double alpha = 0, tau = 0, a = 0, beta = 0, b = 0, theta = 0, theta1 = 0, theta2 = 0;

  double operator[](int i) const { return const_cast<PointCoords&>(*this)[i]; }
  double& operator[](int i) {
    switch (i) {
      case 0: return alpha;
      case 1: return tau;
      case 2: return a;
      case 3: return beta;
      case 4: return b;
      case 5: return theta;
      case 6: return theta1;
      case 7: return theta2;
      default: throw Error(ErrorKind::invalid_index, "coordinate index out of range");
    }
  }
  double operator[](Coordinate c) const { return (*this)[static_cast<int>(c)]; }
  double& operator[](Coordinate c) { return (*this)[static_cast<int>(c)]; }

  PointCoords with(Coordinate c, double v) const {
    PointCoords p = *this;
    p[c] = v;
    return p;
  }
  PointCoords shifted(int i, double h) const {
    PointCoords p = *this;
    p[i] += h;
    return p;
  }
};

struct SpectralFrame {
  Mat3c unitary;
  Eigen::Vector3d eigenvalues;
};

struct DensityState {
  Mat3c rho;
  SpectralFrame frame;
};

/// The eight Gell-Mann matrices λ1..λ8 (index 0 holds λ1).
inline const std::array<Mat3c, 8>& gell_mann() {
  static const std::array<Mat3c, 8> l = [] {
    const cplx i(0, 1);
    std::array<Mat3c, 8> m;
    for (auto& x : m) x.setZero();
    m[0](0, 1) = m[0](1, 0) = 1;
    m[1](0, 1) = -i;
    m[1](1, 0) = i;
    m[2](0, 0) = 1;
    m[2](1, 1) = -1;
    m[3](0, 2) = m[3](2, 0) = 1;
    m[4](0, 2) = -i;
    m[4](2, 0) = i;
    m[5](1, 2) = m[5](2, 1) = 1;
    m[6](1, 2) = -i;
    m[6](2, 1) = i;
    const double r = 1.0 / std::sqrt(3.0);
    m[7](0, 0) = m[7](1, 1) = r;
    m[7](2, 2) = -2 * r;
    return m;
  }();
  return l;
}

/// exp(i x λ_k) for k in 1..8, in closed form.
inline Mat3c gell_mann_exp(int k, double x) {
  if (k < 1 || k > 8) throw Error(ErrorKind::invalid_index, "generator index must be 1..8");
  const cplx i(0, 1);
  if (k == 8) {
    const double r = x / std::sqrt(3.0);
    Mat3c e = Mat3c::Zero();
    e(0, 0) = e(1, 1) = std::exp(i * r);
    e(2, 2) = std::exp(-2.0 * i * r);
    return e;
  }
  // For k < 8 the square of λ_k projects onto its 2×2 block.
  const Mat3c& l = gell_mann()[static_cast<std::size_t>(k - 1)];
  const Mat3c proj = l * l;
  return Mat3c::Identity() - proj + std::cos(x) * proj + (i * std::sin(x)) * l;
}

/// One factor exp(i·sign·λ_generator·x_coord) of the unitary.
struct GeneratorFactor {
  int generator = 3;
  Coordinate coord = Coordinate::alpha;
  int sign = 1;
  friend bool operator==(const GeneratorFactor&, const GeneratorFactor&) = default;
};

/// Euler convention: ordered factors of U and the slot permutation placing
/// (cos²θ₁, sin²θ₁cos²θ₂, sin²θ₁sin²θ₂) on the diagonal of D.
struct GeneratorSequence {
  std::vector<GeneratorFactor> factors;
  std::array<int, 3> slots{0, 1, 2};
  friend bool operator==(const GeneratorSequence&, const GeneratorSequence&) = default;

  std::string describe() const {
    std::string s;
    for (const auto& f : factors) {
      if (!s.empty()) s += " ";
      s += "exp(" + std::string(f.sign < 0 ? "-" : "") + "i*l" + std::to_string(f.generator) + "*" +
           std::string(coord_name(f.coord)) + ")";
    }
    s += " slots=(" + std::to_string(slots[0]) + "," + std::to_string(slots[1]) + "," + std::to_string(slots[2]) + ")";
    return s;
  }
};

/// Convention reproducing both reference density matrices exactly:
/// U = e^{iλ3 α} e^{iλ2 β} e^{iλ3 (τ−a)} e^{iλ5 θ} e^{iλ3 a} e^{iλ2 b}.
inline const GeneratorSequence& calibrated_sequence() {
  static const GeneratorSequence s{{{3, Coordinate::alpha, 1},
                                    {2, Coordinate::beta, 1},
                                    {3, Coordinate::tau, 1},
                                    {3, Coordinate::a, -1},
                                    {5, Coordinate::theta, 1},
                                    {3, Coordinate::a, 1},
                                    {2, Coordinate::b, 1}},
                                   {0, 1, 2}};
  return s;
}

inline constexpr double kDefaultEigenGap = 1e-8;

/// Unpermuted eigenvalue triple and its θ₁, θ₂ derivatives.
inline std::array<Eigen::Vector3d, 3> raw_eigen_triple(double t1, double t2) {
  const double c1 = std::cos(t1), s1 = std::sin(t1), c2 = std::cos(t2), s2 = std::sin(t2);
  Eigen::Vector3d v(c1 * c1, s1 * s1 * c2 * c2, s1 * s1 * s2 * s2);
  const double d1 = 2 * s1 * c1;
  Eigen::Vector3d dt1(-d1, d1 * c2 * c2, d1 * s2 * s2);
  const double d2 = 2 * s2 * c2;
  Eigen::Vector3d dt2(0.0, -s1 * s1 * d2, s1 * s1 * d2);
  return {v, dt1, dt2};
}

inline Eigen::Vector3d apply_slots(const Eigen::Vector3d& v, const std::array<int, 3>& slots) {
  Eigen::Vector3d out;
  for (int k = 0; k < 3; ++k) out(slots[static_cast<std::size_t>(k)]) = v(k);
  return out;
}

inline void check_nondegenerate(const Eigen::Vector3d& v, double gap) {
  for (int k = 0; k < 3; ++k) {
    if (!(v(k) > gap)) throw Error(ErrorKind::degenerate_state, "eigenvalue below gap threshold");
    for (int l = k + 1; l < 3; ++l) {
      if (!(std::abs(v(k) - v(l)) > gap)) throw Error(ErrorKind::degenerate_state, "repeated eigenvalue");
    }
  }
}

inline Eigen::Vector3d eigenvalues_from_angles(double theta1, double theta2, double gap = kDefaultEigenGap,
                                               const GeneratorSequence& seq = calibrated_sequence()) {
  if (!std::isfinite(theta1) || !std::isfinite(theta2)) {
    throw Error(ErrorKind::degenerate_state, "non-finite angle");
  }
  Eigen::Vector3d v = apply_slots(raw_eigen_triple(theta1, theta2)[0], seq.slots);
  check_nondegenerate(v, gap);
  return v;
}

/// Ordered product of the sequence's factors at the given point.
inline Mat3c unitary_from_angles(const PointCoords& p, const GeneratorSequence& seq = calibrated_sequence()) {
  Mat3c u = Mat3c::Identity();
  for (const auto& f : seq.factors) u = u * gell_mann_exp(f.generator, f.sign * p[f.coord]);
  return u;
}

inline void check_finite(const PointCoords& p) {
  for (int i = 0; i < kNumCoords; ++i) {
    if (!std::isfinite(p[i])) throw Error(ErrorKind::degenerate_state, "non-finite coordinate");
  }
}

inline DensityState density_from_angles(const PointCoords& p, const GeneratorSequence& seq = calibrated_sequence(),
                                        double gap = kDefaultEigenGap) {
  check_finite(p);
  DensityState s;
  s.frame.eigenvalues = eigenvalues_from_angles(p.theta1, p.theta2, gap, seq);
  s.frame.unitary = unitary_from_angles(p, seq);
  const Mat3c& u = s.frame.unitary;
  s.rho = u * s.frame.eigenvalues.cast<cplx>().asDiagonal() * u.adjoint();
  return s;
}

/// Derivatives of U, and of the eigenvalues, along every chart coordinate.
struct FramePartials {
  std::array<Mat3c, kNumCoords> dU;
  std::array<Eigen::Vector3d, kNumCoords> dlambda;
};

inline FramePartials frame_partials(const PointCoords& p, const GeneratorSequence& seq = calibrated_sequence()) {
  const std::size_t n = seq.factors.size();
  std::vector<Mat3c> e(n);
  for (std::size_t k = 0; k < n; ++k) {
    e[k] = gell_mann_exp(seq.factors[k].generator, seq.factors[k].sign * p[seq.factors[k].coord]);
  }
  // prefix[k] = e0…e(k-1), suffix[k] = ek…e(n-1)
  std::vector<Mat3c> prefix(n + 1), suffix(n + 1);
  prefix[0] = Mat3c::Identity();
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] * e[k];
  suffix[n] = Mat3c::Identity();
  for (std::size_t k = n; k-- > 0;) suffix[k] = e[k] * suffix[k + 1];

  FramePartials fp;
  for (auto& m : fp.dU) m.setZero();
  for (auto& v : fp.dlambda) v.setZero();
  const cplx i(0, 1);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& f = seq.factors[k];
    const Mat3c& l = gell_mann()[static_cast<std::size_t>(f.generator - 1)];
    fp.dU[static_cast<std::size_t>(f.coord)] += prefix[k] * ((i * double(f.sign)) * l) * suffix[k];
  }
  const auto tri = raw_eigen_triple(p.theta1, p.theta2);
  fp.dlambda[static_cast<std::size_t>(Coordinate::theta1)] = apply_slots(tri[1], seq.slots);
  fp.dlambda[static_cast<std::size_t>(Coordinate::theta2)] = apply_slots(tri[2], seq.slots);
  return fp;
}

/// ∂ρ/∂x_i for all eight coordinates, by the product rule.
inline std::array<Mat3c, kNumCoords> rho_partials(const PointCoords& p,
                                                  const GeneratorSequence& seq = calibrated_sequence(),
                                                  double gap = kDefaultEigenGap) {
  const DensityState s = density_from_angles(p, seq, gap);
  const FramePartials fp = frame_partials(p, seq);
  const Mat3c& u = s.frame.unitary;
  const Mat3c d = s.frame.eigenvalues.cast<cplx>().asDiagonal();
  std::array<Mat3c, kNumCoords> out;
  for (std::size_t i = 0; i < kNumCoords; ++i) {
    const Mat3c dd = fp.dlambda[i].cast<cplx>().asDiagonal();
    out[i] = fp.dU[i] * d * u.adjoint() + u * dd * u.adjoint() + u * d * fp.dU[i].adjoint();
  }
  return out;
}

struct CoordinateRange {
  double lo;
  double hi;
};

/// Canonical coordinate box; informative only.
inline CoordinateRange documented_range(Coordinate c) {
  constexpr double pi = std::numbers::pi;
  switch (c) {
    case Coordinate::alpha:
    case Coordinate::tau:
    case Coordinate::a: return {0.0, pi};
    case Coordinate::beta:
    case Coordinate::b:
    case Coordinate::theta: return {0.0, pi / 2};
    case Coordinate::theta1: return {0.0, pi / 4};
    case Coordinate::theta2: return {0.0, std::acos(1.0 / std::sqrt(3.0))};
  }
  return {0.0, 0.0};
}

/// Names of coordinates lying outside the canonical box.
inline std::vector<std::string> range_warnings(const PointCoords& p) {
  std::vector<std::string> out;
  for (int i = 0; i < kNumCoords; ++i) {
    const auto r = documented_range(static_cast<Coordinate>(i));
    if (p[i] < r.lo || p[i] > r.hi) out.emplace_back(kCoordNames[static_cast<std::size_t>(i)]);
  }
  return out;
}

// ---- calibration ----------------------------------------------------------

struct CalibrationFixture {
  PointCoords point;
  Mat3c rho;
};

struct CandidateScore {
  GeneratorSequence sequence;
  double max_deviation;
};

struct CalibrationResult {
  GeneratorSequence sequence;
  std::vector<CandidateScore> exact;    // every candidate within tolerance
  std::vector<CandidateScore> nearest;  // closest rejected candidates
  std::size_t candidates_searched = 0;
};

inline double candidate_deviation(const GeneratorSequence& seq, const std::vector<CalibrationFixture>& fixtures) {
  double worst = 0.0;
  for (const auto& f : fixtures) {
    const Mat3c u = unitary_from_angles(f.point, seq);
    const Eigen::Vector3d v = apply_slots(raw_eigen_triple(f.point.theta1, f.point.theta2)[0], seq.slots);
    const Mat3c r = u * v.cast<cplx>().asDiagonal() * u.adjoint();
    worst = std::max(worst, (r - f.rho).cwiseAbs().maxCoeff());
  }
  return worst;
}

namespace detail {

inline bool pi_range(Coordinate c) {
  return c == Coordinate::alpha || c == Coordinate::tau || c == Coordinate::a;
}

/// Candidates whose π-range coordinates sit on λ3 phases.
inline bool range_consistent(const GeneratorSequence& s) {
  for (const auto& f : s.factors) {
    if (pi_range(f.coord) != (f.generator == 3)) return false;
  }
  return true;
}

}  // namespace detail

/// Searches Euler conventions for the one reproducing every fixture.
///
/// Family: generator pattern (λ3, λ2, λ3, λ5, λ3, λ2) over all assignments
/// of the six Euler coordinates, all exponent signs, an optional
/// conjugation of the λ5 factor by the following λ3 phase, and all six
/// eigenvalue slot permutations.
inline CalibrationResult calibrate_parameterization(const std::vector<CalibrationFixture>& fixtures,
                                                    double tol = 1e-10, std::size_t keep_nearest = 8) {
  if (fixtures.empty()) throw Error(ErrorKind::calibration_failure, "no fixtures supplied");
  static constexpr std::array<int, 6> pattern{3, 2, 3, 5, 3, 2};
  std::array<Coordinate, 6> coords{Coordinate::alpha, Coordinate::tau,  Coordinate::a,
                                   Coordinate::beta,  Coordinate::b,    Coordinate::theta};
  std::array<std::array<int, 3>, 6> perms{};
  {
    std::array<int, 3> s{0, 1, 2};
    int k = 0;
    do perms[static_cast<std::size_t>(k++)] = s;
    while (std::next_permutation(s.begin(), s.end()));
  }
  std::vector<std::array<Eigen::Vector3d, 6>> eig(fixtures.size());
  for (std::size_t f = 0; f < fixtures.size(); ++f) {
    const auto raw = raw_eigen_triple(fixtures[f].point.theta1, fixtures[f].point.theta2)[0];
    for (std::size_t k = 0; k < 6; ++k) eig[f][k] = apply_slots(raw, perms[k]);
  }

  CalibrationResult result;
  std::vector<CandidateScore> all_near;
  std::sort(coords.begin(), coords.end());
  do {
    for (int mask = 0; mask < 64; ++mask) {
      for (int conj = 0; conj < 2; ++conj) {
        GeneratorSequence seq;
        for (int k = 0; k < 6; ++k) {
          const int sign = (mask >> k & 1) ? -1 : 1;
          if (conj && k == 3) seq.factors.push_back({3, coords[4], -((mask >> 4 & 1) ? -1 : 1)});
          seq.factors.push_back({pattern[static_cast<std::size_t>(k)], coords[static_cast<std::size_t>(k)], sign});
        }
        std::array<double, 6> dev{};
        for (std::size_t f = 0; f < fixtures.size(); ++f) {
          const Mat3c u = unitary_from_angles(fixtures[f].point, seq);
          for (std::size_t k = 0; k < 6; ++k) {
            const Mat3c r = u * eig[f][k].cast<cplx>().asDiagonal() * u.adjoint();
            dev[k] = std::max(dev[k], (r - fixtures[f].rho).cwiseAbs().maxCoeff());
          }
        }
        for (std::size_t k = 0; k < 6; ++k) {
          ++result.candidates_searched;
          GeneratorSequence s = seq;
          s.slots = perms[k];
          if (dev[k] <= tol) {
            result.exact.push_back({std::move(s), dev[k]});
          } else if (all_near.size() < keep_nearest || dev[k] < all_near.back().max_deviation) {
            all_near.push_back({std::move(s), dev[k]});
            std::sort(all_near.begin(), all_near.end(),
                      [](const auto& x, const auto& y) { return x.max_deviation < y.max_deviation; });
            if (all_near.size() > keep_nearest) all_near.pop_back();
          }
        }
      }
    }
  } while (std::next_permutation(coords.begin(), coords.end()));
  result.nearest = std::move(all_near);

  std::vector<const CandidateScore*> chosen;
  for (const auto& c : result.exact) {
    if (detail::range_consistent(c.sequence)) chosen.push_back(&c);
  }
  if (chosen.size() != 1) {
    std::string msg = std::to_string(result.exact.size()) + " exact candidates, " + std::to_string(chosen.size()) +
                      " range-consistent; nearest deviations:";
    for (const auto& c : result.nearest) msg += " " + std::to_string(c.max_deviation);
    throw Error(ErrorKind::calibration_failure, msg);
  }
  result.sequence = chosen.front()->sequence;
  return result;
}

}  // namespace bureskit
