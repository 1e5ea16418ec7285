#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bureskit/bures_metric.hpp"
#include "bureskit/exterior_algebra.hpp"

namespace bureskit {

/// Scale turning eigenvalues of F ↦ ⋆(Ω∧F) into the published figures (1/6!).
inline constexpr double kPublishedSpectrumScale = 1.0 / 720.0;

/// The map F ↦ scale·sign·⋆(Ω∧F) on two-forms.
struct Endo2Forms {
  Eigen::MatrixXd M;
  int omega_sign = 1;
  double scale = 1.0;
  Eigen::MatrixXd gram;
};

inline Endo2Forms build_endomorphism(const Form8& omega, const MetricTensor& metric, int sign, double scale = 1.0) {
  if (omega.degree != 4) throw Error(ErrorKind::invalid_argument, "endomorphism needs a four-form");
  if (sign != 1 && sign != -1) throw Error(ErrorKind::invalid_argument, "sign must be +1 or -1");
  Endo2Forms e;
  e.M = (scale * sign) * (star_matrix<8>(metric, 6) * wedge_matrix(omega, 2));
  e.omega_sign = sign;
  e.scale = scale;
  e.gram = gram_on_two_forms(metric);
  return e;
}

struct Cluster {
  double value;
  int multiplicity;
};

struct SpectrumReport {
  std::vector<double> eigenvalues;  // descending
  std::vector<Cluster> clusters;
  std::vector<int> pattern;  // sorted multiplicities
};

/// Greedy gap clustering of descending values at tol_rel·(spectral radius).
inline std::vector<Cluster> cluster_multiplicities(const std::vector<double>& values, double tol_rel = 1e-5) {
  std::vector<Cluster> out;
  if (values.empty()) return out;
  double radius = 0.0;
  for (double v : values) radius = std::max(radius, std::abs(v));
  const double tol = tol_rel * radius;
  double sum = values[0];
  int count = 1;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (std::abs(values[k - 1] - values[k]) > tol) {
      out.push_back({sum / count, count});
      sum = 0.0;
      count = 0;
    }
    sum += values[k];
    ++count;
  }
  out.push_back({sum / count, count});
  return out;
}

inline SpectrumReport make_report(std::vector<double> values, double tol_rel = 1e-5) {
  std::sort(values.begin(), values.end(), std::greater<>());
  SpectrumReport r;
  r.eigenvalues = std::move(values);
  r.clusters = cluster_multiplicities(r.eigenvalues, tol_rel);
  for (const auto& c : r.clusters) r.pattern.push_back(c.multiplicity);
  std::sort(r.pattern.begin(), r.pattern.end());
  return r;
}

/// Eigenvalues of M, which is self-adjoint for G2: congruence by the
/// Cholesky factor, then a symmetric solver.
inline SpectrumReport eigen_spectrum(const Endo2Forms& endo, double tol_rel = 1e-5) {
  Eigen::LLT<Eigen::MatrixXd> llt(endo.gram);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::invalid_gram, "two-form Gram matrix is not positive-definite");
  const Eigen::MatrixXd L = llt.matrixL();
  // C = Lᵀ M L⁻ᵀ
  const Eigen::MatrixXd LtM = L.transpose() * endo.M;
  Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(LtM.transpose()).transpose();
  C = 0.5 * (C + C.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return make_report(std::vector<double>(ev.data(), ev.data() + ev.size()), tol_rel);
}

/// Largest |G2·M − (G2·M)ᵀ| entry.
inline double self_adjointness_defect(const Endo2Forms& endo) {
  const Eigen::MatrixXd gm = endo.gram * endo.M;
  return (gm - gm.transpose()).cwiseAbs().maxCoeff();
}

/// Real parts of a general nonsymmetric eigensolve of M, descending, with
/// the largest imaginary part seen.
inline std::pair<std::vector<double>, double> general_eigenvalues(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  std::vector<double> re;
  double max_imag = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    re.push_back(es.eigenvalues()(k).real());
    max_imag = std::max(max_imag, std::abs(es.eigenvalues()(k).imag()));
  }
  std::sort(re.begin(), re.end(), std::greater<>());
  return {re, max_imag};
}

// ---- exact-integer characteristic factors ----------------------------------

using int128 = __int128;

consteval int128 parse_int128(std::string_view s) {
  bool neg = false;
  std::size_t k = 0;
  if (!s.empty() && s[0] == '-') {
    neg = true;
    k = 1;
  }
  int128 v = 0;
  for (; k < s.size(); ++k) v = v * 10 + (s[k] - '0');
  return neg ? -v : v;
}

/// Integer polynomial with coefficients in increasing degree.
template <std::size_t D>
struct IntPoly {
  std::array<int128, D + 1> c;

  long double eval(long double x) const {
    long double acc = 0;
    for (std::size_t k = D + 1; k-- > 0;) acc = acc * x + static_cast<long double>(c[k]);
    return acc;
  }
  /// Σ|c_k||x|^k, the magnitude against which a residual is judged.
  long double magnitude(long double x) const {
    long double acc = 0;
    const long double ax = x < 0 ? -x : x;
    for (std::size_t k = D + 1; k-- > 0;) {
      const long double ck = static_cast<long double>(c[k]);
      acc = acc * ax + (ck < 0 ? -ck : ck);
    }
    return acc;
  }
  double scaled_residual(double x) const {
    return static_cast<double>(std::abs(eval(x)) / magnitude(x));
  }
};

/// Quartic whose roots are the four singlets at the first reference point:
/// 17848517231861271296 + 718875 λ(−72767012864 − 2131611323040 λ + 39304490625 λ³).
inline constexpr IntPoly<4> kSingletQuartic{{
    parse_int128("17848517231861271296"),
    int128{718875} * parse_int128("-72767012864"),
    int128{718875} * parse_int128("-2131611323040"),
    0,
    int128{718875} * parse_int128("39304490625"),
}};

/// Sextic whose roots are the six octet values at the first reference point:
/// 82734971267961585664 − 18225 λ²(2195802859754043904 + 291144375 λ²(−7894856752 + 291144375 λ²)).
inline constexpr IntPoly<6> kOctetSextic{{
    parse_int128("82734971267961585664"),
    0,
    -int128{18225} * parse_int128("2195802859754043904"),
    0,
    -int128{18225} * 291144375 * parse_int128("-7894856752"),
    0,
    -int128{18225} * 291144375 * 291144375,
}};

struct PolyCheck {
  std::array<double, 4> singlets{};
  std::array<double, 6> octet_values{};
  std::array<double, 4> quartic_residuals{};
  std::array<double, 6> sextic_residuals{};
  // relative deviations of elementary symmetric functions from coefficient ratios
  std::array<double, 4> quartic_symmetric_deviation{};
  std::array<double, 3> sextic_symmetric_deviation{};
  double singlet_sum = 0.0;
};

/// Splits a 4-singlet/3-octet spectrum (octets as ± quartets) into its
/// singlets and six octet values.
inline std::pair<std::array<double, 4>, std::array<double, 6>> singlets_and_octets(const SpectrumReport& r) {
  std::vector<double> singles, quads;
  for (const auto& c : r.clusters) {
    if (c.multiplicity == 1) singles.push_back(c.value);
    else if (c.multiplicity == 4) quads.push_back(c.value);
    else throw Error(ErrorKind::pattern_mismatch, "unexpected multiplicity " + std::to_string(c.multiplicity));
  }
  if (singles.size() != 4 || quads.size() != 6) {
    throw Error(ErrorKind::pattern_mismatch, "expected four singlets and six quartets");
  }
  std::vector<double> mags;
  for (double q : quads) mags.push_back(std::abs(q));
  std::sort(mags.begin(), mags.end());
  const double radius = std::abs(r.eigenvalues.front()) + std::abs(r.eigenvalues.back());
  for (std::size_t k = 0; k < 6; k += 2) {
    if (std::abs(mags[k] - mags[k + 1]) > 1e-5 * radius) {
      throw Error(ErrorKind::pattern_mismatch, "quartets do not pair into sign-opposite octets");
    }
  }
  std::pair<std::array<double, 4>, std::array<double, 6>> out;
  std::copy(singles.begin(), singles.end(), out.first.begin());
  std::copy(quads.begin(), quads.end(), out.second.begin());
  return out;
}

inline bool has_singlet_octet_pattern(const SpectrumReport& r) {
  try {
    singlets_and_octets(r);
    return true;
  } catch (const Error&) {
    return false;
  }
}

inline PolyCheck singlet_octet_polynomials(const SpectrumReport& report) {
  const auto [singles, octets] = singlets_and_octets(report);
  PolyCheck pc;
  pc.singlets = singles;
  pc.octet_values = octets;
  for (std::size_t k = 0; k < 4; ++k) pc.quartic_residuals[k] = kSingletQuartic.scaled_residual(singles[k]);
  for (std::size_t k = 0; k < 6; ++k) pc.sextic_residuals[k] = kOctetSextic.scaled_residual(octets[k]);

  auto rel = [](long double got, long double want) {
    const long double d = got - want;
    const long double m = want < 0 ? -want : want;
    return static_cast<double>((d < 0 ? -d : d) / (m > 0 ? m : 1));
  };
  // quartic: e1 = -c3/c4, e2 = c2/c4, e3 = -c1/c4, e4 = c0/c4
  const auto& q = kSingletQuartic.c;
  const long double c4 = static_cast<long double>(q[4]);
  long double e[5] = {1, 0, 0, 0, 0};
  for (double x : singles) {
    for (int k = 4; k >= 1; --k) e[k] += e[k - 1] * x;
  }
  const long double scale_e1 = std::abs(singles[0]) + std::abs(singles[1]) + std::abs(singles[2]) + std::abs(singles[3]);
  pc.quartic_symmetric_deviation[0] = static_cast<double>((e[1] < 0 ? -e[1] : e[1]) / scale_e1);
  pc.quartic_symmetric_deviation[1] = rel(e[2], static_cast<long double>(q[2]) / c4);
  pc.quartic_symmetric_deviation[2] = rel(e[3], -static_cast<long double>(q[1]) / c4);
  pc.quartic_symmetric_deviation[3] = rel(e[4], static_cast<long double>(q[0]) / c4);

  // sextic as a cubic in x = λ²: roots are the squared octet magnitudes
  std::vector<double> sq;
  for (double v : octets) sq.push_back(v * v);
  std::sort(sq.begin(), sq.end());
  const long double x1 = sq[0], x2 = sq[2], x3 = sq[4];
  const auto& s = kOctetSextic.c;
  const long double d3 = static_cast<long double>(s[6]);
  pc.sextic_symmetric_deviation[0] = rel(x1 + x2 + x3, -static_cast<long double>(s[4]) / d3);
  pc.sextic_symmetric_deviation[1] = rel(x1 * x2 + x1 * x3 + x2 * x3, static_cast<long double>(s[2]) / d3);
  pc.sextic_symmetric_deviation[2] = rel(x1 * x2 * x3, -static_cast<long double>(s[0]) / d3);

  for (double x : singles) pc.singlet_sum += x;
  return pc;
}

struct RadicalIdentity {
  double formula_value;  // right-hand side, should equal the squared octet value
  double cosine;
  double reference_square;
  double relative_deviation;
  bool holds;
};

/// Real radical form of the largest octet value squared at the first
/// reference point, compared against `octet_value`².
inline RadicalIdentity verify_radical_identity(double octet_value = 5.11128, double tol_rel = 1e-5) {
  const long double num = 19986057.0L * std::sqrt(257834787813597115559383045701069731.0L);
  const long double den = 101094855629270248323646732.0L;
  const long double c = std::cos(std::atan(num / den) / 3.0L);
  const long double value = 16.0L * (493428547.0L + 2.0L * std::sqrt(217739666231788507.0L) * c) / 873433125.0L;
  RadicalIdentity r;
  r.formula_value = static_cast<double>(value);
  r.cosine = static_cast<double>(c);
  r.reference_square = octet_value * octet_value;
  r.relative_deviation = std::abs(r.formula_value - r.reference_square) / r.formula_value;
  r.holds = r.formula_value > 0 && r.relative_deviation <= tol_rel;
  return r;
}

/// The 14-term self-dual Cayley four-form.
inline Form8 cayley_calibration() {
  static constexpr std::array<std::pair<std::array<int, 4>, int>, 14> terms{{
      {{1, 2, 3, 4}, 1},  {{1, 2, 5, 8}, 1},  {{1, 2, 6, 7}, -1}, {{1, 3, 5, 7}, 1},  {{1, 3, 6, 8}, 1},
      {{1, 4, 5, 6}, -1}, {{1, 4, 7, 8}, 1},  {{2, 3, 5, 6}, 1},  {{2, 3, 7, 8}, -1}, {{2, 4, 5, 7}, 1},
      {{2, 4, 6, 8}, 1},  {{3, 4, 5, 8}, -1}, {{3, 4, 6, 7}, 1},  {{5, 6, 7, 8}, 1},
  }};
  Form8 f(4);
  for (const auto& [l, s] : terms) f[make_index({l[0], l[1], l[2], l[3]})] = s;
  return f;
}

}  // namespace bureskit
