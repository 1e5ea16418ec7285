#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bureskit/bures_metric.hpp"
#include "bureskit/connection.hpp"
#include "bureskit/duality.hpp"
#include "bureskit/fixtures.hpp"
#include "bureskit/spectral.hpp"
#include "bureskit/sweeps.hpp"
#include "oracles.hpp"

namespace acceptance {

using namespace bureskit;

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  std::string anchor;
  std::string tolerance;
};

struct Options {
  GeneratorSequence sequence = calibrated_sequence();
  unsigned threads = 0;
};

namespace detail {

inline std::string fmt(double v, int prec = 10) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

/// Collects sub-checks; the first failure is kept for the report.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (!ok && failure_.empty()) failure_ = what;
    if (!ok) ++failed_;
  }
  void expect_le(double value, double bound, const std::string& what) {
    expect(value <= bound, what + " = " + fmt(value) + " > " + fmt(bound));
  }
  bool ok() const { return failed_ == 0; }
  std::string summary(const std::string& extra = {}) const {
    std::string s = std::to_string(total_ - failed_) + "/" + std::to_string(total_) + " sub-checks";
    if (!failure_.empty()) s += "; first failure: " + failure_;
    if (!extra.empty()) s += "; " + extra;
    return s;
  }

 private:
  int total_ = 0;
  int failed_ = 0;
  std::string failure_;
};

inline double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

inline std::string entry_name(const char* m, int i, int j) {
  return std::string(m) + "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

}  // namespace detail

inline CheckResult fixture_reproduction(const Options& opt) {
  detail::Tally t;
  double worst = 0.0;
  const struct {
    const char* name;
    PointCoords p;
    Mat3c want;
  } cases[] = {{"rho1", fixtures::q1(), fixtures::rho1()}, {"rho2", fixtures::q2(), fixtures::rho2()}};
  for (const auto& c : cases) {
    const Mat3c got = density_from_angles(c.p, opt.sequence).rho;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double d = std::abs(got(i, j) - c.want(i, j));
        worst = std::max(worst, d);
        t.expect_le(d, 1e-10, "entry " + detail::entry_name(c.name, i, j) + " deviation");
      }
    }
  }
  return {1, "fixture reproduction", t.ok(), t.summary("max entry deviation " + detail::fmt(worst, 3)),
          "reference matrices at q1 and q2", "1e-10 absolute"};
}

inline CheckResult metric_properties(const Options& opt) {
  detail::Tally t;
  for (const auto& [name, p] : {std::pair{"q1", fixtures::q1()}, std::pair{"q2", fixtures::q2()}}) {
    const Eigen::MatrixXd g = bures_metric_matrix(p, opt.sequence);
    t.expect_le((g - g.transpose()).cwiseAbs().maxCoeff(), 1e-12, std::string("asymmetry at ") + name);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    t.expect(es.eigenvalues().minCoeff() > 0, std::string("metric not positive-definite at ") + name);
    for (Coordinate c : {Coordinate::alpha, Coordinate::a}) {
      const Eigen::MatrixXd gs = bures_metric_matrix(p.with(c, p[c] + 0.3), opt.sequence);
      t.expect_le((gs - g).cwiseAbs().maxCoeff(), 1e-10,
                  std::string("change under shift of ") + std::string(coord_name(c)) + " at " + name);
    }
    const Eigen::Matrix2d blk = g.block<2, 2>(6, 6);
    t.expect_le((blk - eigenvalue_block(p, opt.sequence)).cwiseAbs().maxCoeff(), 1e-10,
                std::string("eigenvalue block mismatch at ") + name);
  }
  return {2, "metric properties", t.ok(), t.summary(), "metric independent of alpha and a", "1e-10"};
}

inline CheckResult hodge_structure(const Options& opt) {
  detail::Tally t;
  std::string counts;
  for (const auto& [name, p] : {std::pair{"q1", fixtures::q1()}, std::pair{"q2", fixtures::q2()}}) {
    const MetricTensor g = bures_metric(p, OrientationRule::published, opt.sequence);
    const Eigen::MatrixXd s = star_matrix<8>(g, 4);
    t.expect_le((s * s - Eigen::MatrixXd::Identity(70, 70)).cwiseAbs().maxCoeff(), 1e-10,
                std::string("star squared defect at ") + name);
    Eigen::EigenSolver<Eigen::MatrixXd> es(s, false);
    int plus = 0, minus = 0;
    for (Eigen::Index k = 0; k < 70; ++k) {
      const auto ev = es.eigenvalues()(k);
      if (std::abs(ev - 1.0) < 1e-8) ++plus;
      else if (std::abs(ev + 1.0) < 1e-8) ++minus;
    }
    t.expect(plus == 35 && minus == 35, std::string("eigenvalue multiplicities at ") + name);
    counts += std::string(name) + ": " + std::to_string(plus) + "/" + std::to_string(minus) + " ";
  }
  return {3, "hodge structure", t.ok(), t.summary(counts), "thirty-five +1's and thirty-five -1's", "1e-10"};
}

inline CheckResult four_form_goldens(const Options& opt) {
  detail::Tally t;
  double worst = 0.0, res = 0.0;
  struct Case {
    const char* name;
    PointCoords p;
    int sign;
    std::vector<fixtures::CoefficientGolden> want;
  };
  const Case cases[] = {{"Omega+(q1)", fixtures::q1(), 1, fixtures::omega_plus_q1()},
                        {"Omega-(q1)", fixtures::q1(), -1, fixtures::omega_minus_q1()},
                        {"Omega+(q2)", fixtures::q2(), 1, fixtures::omega_plus_q2()},
                        {"Omega-(q2)", fixtures::q2(), -1, fixtures::omega_minus_q2()}};
  std::vector<FourFormSolution> sols;
  for (const auto& c : cases) {
    const auto sol = solve_dual_form(bures_metric(c.p, OrientationRule::published, opt.sequence), c.sign);
    res = std::max(res, sol.residual);
    t.expect_le(sol.residual, 1e-9, std::string("duality residual of ") + c.name);
    for (const auto& w : c.want) {
      const MultiIndex m = make_index({w.labels[0], w.labels[1], w.labels[2], w.labels[3]});
      const double d = std::abs(sol.omega[m] - w.value);
      worst = std::max(worst, d);
      t.expect_le(d, 1e-9, std::string(c.name) + " coefficient " + index_name(m));
    }
    sols.push_back(sol);
  }
  t.expect(!is_pm_equal(sols[0], sols[1], 1e-6), "Omega+ = +-Omega- at q1");
  t.expect(!is_pm_equal(sols[2], sols[3], 1e-6), "Omega+ = +-Omega- at q2");
  return {4, "four-form goldens", t.ok(),
          t.summary("max coefficient deviation " + detail::fmt(worst, 3) + ", max residual " + detail::fmt(res, 3)),
          "printed coefficients of Omega+-(q1), Omega+-(q2)", "1e-9 absolute"};
}

inline SpectrumReport published_spectrum(const PointCoords& p, int sign, const GeneratorSequence& seq) {
  const MetricTensor g = bures_metric(p, OrientationRule::published, seq);
  const auto sol = solve_dual_form(g, sign);
  return eigen_spectrum(build_endomorphism(sol.omega, g, sign, kPublishedSpectrumScale));
}

inline CheckResult spectra(const Options& opt) {
  detail::Tally t;
  double worst = 0.0;
  for (const auto& [name, p, printed] : {std::tuple{"q1", fixtures::q1(), fixtures::spectrum_q1()},
                                         std::tuple{"q2", fixtures::q2(), fixtures::spectrum_q2()}}) {
    const SpectrumReport plus = published_spectrum(p, 1, opt.sequence);
    const SpectrumReport minus = published_spectrum(p, -1, opt.sequence);
    std::vector<double> want = printed;
    std::sort(want.begin(), want.end(), std::greater<>());
    for (std::size_t k = 0; k < want.size(); ++k) {
      const double r = detail::rel(plus.eigenvalues[k], want[k]);
      worst = std::max(worst, r);
      t.expect_le(r, 1e-4, std::string("eigenvalue ") + std::to_string(k) + " at " + name);
    }
    t.expect(has_singlet_octet_pattern(plus), std::string("singlet/octet pattern at ") + name);
    double sum = 0.0;
    for (double v : plus.eigenvalues) sum += v;
    t.expect_le(std::abs(sum), 1e-8, std::string("eigenvalue sum at ") + name);
    double diff = 0.0;
    for (std::size_t k = 0; k < 28; ++k) diff = std::max(diff, std::abs(plus.eigenvalues[k] - minus.eigenvalues[k]));
    t.expect_le(diff, 1e-8, std::string("self/anti-self-dual spectra differ at ") + name);
  }
  return {5, "spectra", t.ok(), t.summary("max relative deviation " + detail::fmt(worst, 3)),
          "eigenvalue lists at q1 and q2", "1e-4 relative, 1e-8 invariants"};
}

inline CheckResult characteristic_factors(const Options& opt) {
  detail::Tally t;
  const SpectrumReport r = published_spectrum(fixtures::q1(), 1, opt.sequence);
  const PolyCheck pc = singlet_octet_polynomials(r);
  double worst = 0.0;
  for (double v : pc.quartic_residuals) worst = std::max(worst, v);
  for (double v : pc.sextic_residuals) worst = std::max(worst, v);
  t.expect_le(worst, 1e-4, "scaled polynomial residual");
  for (double v : pc.quartic_symmetric_deviation) t.expect_le(v, 1e-4, "quartic symmetric-function deviation");
  for (double v : pc.sextic_symmetric_deviation) t.expect_le(v, 1e-4, "sextic symmetric-function deviation");
  t.expect_le(std::abs(pc.singlet_sum), 1e-4, "singlet sum");
  double top = 0.0;
  for (double v : pc.octet_values) top = std::max(top, v);
  const RadicalIdentity ri = verify_radical_identity(top, 1e-5);
  t.expect(ri.holds, "radical identity deviation " + detail::fmt(ri.relative_deviation, 3));
  t.expect_le(std::abs(ri.cosine - 0.999444), 1e-5, "cosine term");
  return {6, "characteristic factors", t.ok(),
          t.summary("max scaled residual " + detail::fmt(worst, 3) + ", radical rel. dev. " +
                    detail::fmt(ri.relative_deviation, 3) + ", cosine " + detail::fmt(ri.cosine, 8)),
          "quartic, sextic and radical identity", "1e-4 scaled, 1e-5 relative"};
}

inline CheckResult cross_point(const Options&) {
  detail::Tally t;
  const CrossPointSpectra cp = cross_point_spectrum();
  const auto& sd = cp.self_dual.eigenvalues;
  const auto& asd = cp.anti_self_dual.eigenvalues;
  t.expect_le(detail::rel(sd.front(), 9.83657), 1e-4, "self-dual largest");
  t.expect_le(detail::rel(asd.front(), 9.66359), 1e-4, "anti-self-dual largest");
  t.expect_le(detail::rel(sd.back(), -9.73817), 1e-4, "self-dual smallest");
  t.expect_le(detail::rel(asd.back(), -9.59167), 1e-4, "anti-self-dual smallest");
  for (const auto* ev : {&sd, &asd}) {
    const double radius = std::max(std::abs(ev->front()), std::abs(ev->back()));
    double gap = radius;
    for (std::size_t k = 1; k < ev->size(); ++k) gap = std::min(gap, (*ev)[k - 1] - (*ev)[k]);
    t.expect(gap > 1e-6 * radius, "repeated eigenvalue in a cross-point branch");
  }
  return {7, "cross-point experiment", t.ok(),
          t.summary("leading pairs " + detail::fmt(sd.front(), 7) + "/" + detail::fmt(asd.front(), 7) + " and " +
                    detail::fmt(sd.back(), 7) + "/" + detail::fmt(asd.back(), 7)),
          "9.83657 vs 9.66359, -9.73817 vs -9.59167", "1e-4 relative"};
}

inline CheckResult cayley_benchmark(const Options&) {
  detail::Tally t;
  const MetricTensor e = MetricTensor::euclidean();
  const Form8 c = cayley_calibration();
  t.expect_le((hodge_star(c, e).coeffs - c.coeffs).cwiseAbs().maxCoeff(), 1e-12, "Cayley form not self-dual");
  const Endo2Forms m = build_endomorphism(c, e, 1, 1.0);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(28, 28);
  t.expect_le((m.M * m.M + 2 * m.M - 3 * I).cwiseAbs().maxCoeff(), 1e-10, "M^2 + 2M - 3I");
  const SpectrumReport r = eigen_spectrum(m, 1e-10);
  int ones = 0, threes = 0;
  for (double v : r.eigenvalues) {
    if (std::abs(v - 1.0) <= 1e-10) ++ones;
    else if (std::abs(v + 3.0) <= 1e-10) ++threes;
  }
  t.expect(ones == 21 && threes == 7, "multiplicities " + std::to_string(ones) + "/" + std::to_string(threes));
  return {8, "Cayley benchmark", t.ok(),
          t.summary("eigenvalue 1 x" + std::to_string(ones) + ", -3 x" + std::to_string(threes)),
          "(Upsilon - I)(Upsilon + 3I) = 0, multiplicities 21 and 7", "1e-10"};
}

/// Eq-style comparator exactly as printed for the β sweep (denominator 996).
inline double printed_beta_comparator(double t) {
  return (448 + 128 * std::sqrt(3.0) + 27 * std::sqrt(6.0)) * std::sin(2 * t) / 996;
}

/// b-sweep comparator as printed (denominator 7 + cos 2b).
inline double printed_b_comparator(double t) {
  return 0.5 + std::sqrt(3.0) * (128 + 27 * std::sqrt(2.0)) * std::sin(2 * t) / (128 * (7 + std::cos(2 * t)));
}

inline CheckResult sweeps(const Options& opt) {
  detail::Tally t;
  std::vector<SweepResult> res;
  for (int f = 1; f <= kNumFigures; ++f) {
    res.push_back(coefficient_sweep(figure_spec(f), opt.threads));
    const auto& r = res.back();
    t.expect(r.failures == 0, "figure " + std::to_string(f) + " has failed samples");
    t.expect_le(r.max_deviation, 1e-8, "figure " + std::to_string(f) + " max deviation");
    const auto& spec = r.spec;
    const double base = closed_form(spec.coefficient, spec.free_coordinate, spec.base[spec.free_coordinate]);
    const double target = spec.coefficient == SweepCoefficient::z1234 ? 0.821249 : 90.9476;
    t.expect_le(std::abs(base - target), spec.coefficient == SweepCoefficient::z1234 ? 1e-6 : 1e-4,
                "figure " + std::to_string(f) + " base-point value");
  }
  t.expect_le(std::abs(res[1].max_value - 0.821249), 1e-6, "figure 2 maximum");
  const double caption[] = {0.821472, 0.0, 0.83522, 1.04598, 1.38035};
  for (int f : {1, 3, 4, 5}) {
    t.expect_le(std::abs(res[static_cast<std::size_t>(f - 1)].max_value - caption[f - 1]), 1e-3,
                "figure " + std::to_string(f) + " maximum value");
  }
  double printed996 = 0.0, printed_b = 0.0;
  for (const auto& s : res[1].samples) printed996 = std::max(printed996, std::abs(s.computed - printed_beta_comparator(s.angle)));
  for (const auto& s : res[2].samples) printed_b = std::max(printed_b, std::abs(s.computed - printed_b_comparator(s.angle)));

  auto variation = [&](Coordinate c) {
    SweepSpec s;
    s.free_coordinate = c;
    s.grid = default_grid(c);
    return spectrum_variation(spectrum_under_sweep(s, opt.threads));
  };
  const double vb = variation(Coordinate::beta);
  t.expect_le(vb, 1e-8, "spectrum variation along beta");
  for (Coordinate c : {Coordinate::tau, Coordinate::b, Coordinate::theta}) {
    const double v = variation(c);
    t.expect(v > 1e-3, "spectrum does not vary along " + std::string(coord_name(c)));
  }
  std::string extra = "maxima read as values: fig1 " + detail::fmt(res[0].max_value, 7) + ", fig3 " +
                      detail::fmt(res[2].max_value, 7) + ", fig4 " + detail::fmt(res[3].max_value, 7) + ", fig5 " +
                      detail::fmt(res[4].max_value, 7) + "; printed 996 comparator off by " +
                      detail::fmt(printed996, 3) + ", printed 7+cos2b comparator off by " + detail::fmt(printed_b, 3) +
                      "; beta spectrum variation " + detail::fmt(vb, 3);
  return {9, "sweeps", t.ok(), t.summary(extra), "closed forms h1-h5, i1-i5 and figure maxima",
          "1e-8 curves, 1e-6/1e-4 base values, 1e-3 maxima"};
}

inline CheckResult connection_checks(const Options& opt) {
  detail::Tally t;
  double worst_res = 0.0, worst_ratio_dev = 0.0;
  for (const auto& [name, p] : {std::pair{"q1", fixtures::q1()}, std::pair{"q2", fixtures::q2()}}) {
    for (int d = 0; d < kNumCoords; ++d) {
      const auto c = uhlmann_connection(p, static_cast<Coordinate>(d), opt.sequence);
      worst_res = std::max(worst_res, c.sylvester_residual);
      const std::string where = std::string(coord_name(static_cast<Coordinate>(d))) + " at " + name;
      t.expect_le(c.sylvester_residual, 1e-10, "Sylvester residual " + where);
      t.expect_le((c.A + c.A.adjoint()).cwiseAbs().maxCoeff(), 1e-10, "anti-Hermitian defect " + where);
      if (d >= 6) t.expect_le(c.A.cwiseAbs().maxCoeff(), 1e-12, "nonzero eigenvalue-direction component " + where);
    }
  }
  const PointCoords p = fixtures::q2();
  for (int m = 0; m < kNumCoords; ++m) {
    for (int n = m + 1; n < kNumCoords; ++n) {
      const auto mu = static_cast<Coordinate>(m), nu = static_cast<Coordinate>(n);
      const Mat3c f = curvature(p, mu, nu, 1e-4, opt.sequence);
      const Mat3c fr = curvature(p, nu, mu, 1e-4, opt.sequence);
      const std::string pair = std::string(coord_name(mu)) + "," + std::string(coord_name(nu));
      t.expect_le((f + fr).cwiseAbs().maxCoeff(), 1e-12, "curvature antisymmetry " + pair);
      t.expect_le((f + f.adjoint()).cwiseAbs().maxCoeff(), 1e-8, "curvature anti-Hermitian defect " + pair);
      if (f.cwiseAbs().maxCoeff() < 1e-8) continue;  // identically flat pair
      const double ratio = curvature_convergence_ratio(p, mu, nu, 1e-2, opt.sequence);
      worst_ratio_dev = std::max(worst_ratio_dev, std::abs(ratio - 4.0));
      t.expect(ratio >= 3.5 && ratio <= 4.5, "convergence ratio " + detail::fmt(ratio, 4) + " for " + pair);
    }
  }
  return {10, "connection", t.ok(),
          t.summary("max Sylvester residual " + detail::fmt(worst_res, 3) + ", max |ratio - 4| " +
                    detail::fmt(worst_ratio_dev, 3)),
          "connection from (W*T - T*W)", "1e-10, ratio 3.5-4.5"};
}

inline CheckResult property_suites(const Options& opt) {
  detail::Tally t;
  double wedge_worst = 0.0;
  for (int p = 0; p <= 8; ++p) {
    for (int q = 0; p + q <= 8; ++q) {
      const int s = (p * q) % 2 ? -1 : 1;
      for (MultiIndex a : FormBasis<8>::of_degree(p)) {
        for (MultiIndex b : FormBasis<8>::of_degree(q)) {
          const Form8 fa = Form8::basis_form(a), fb = Form8::basis_form(b);
          wedge_worst = std::max(wedge_worst, (wedge(fa, fb).coeffs - s * wedge(fb, fa).coeffs).cwiseAbs().maxCoeff());
        }
      }
    }
  }
  t.expect_le(wedge_worst, 1e-10, "wedge anticommutativity");

  std::mt19937_64 rng(20240611);
  const MetricTensor g1 = bures_metric(fixtures::q1(), OrientationRule::published, opt.sequence);
  double star_worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int p = k % 5;
    const Form8 f = oracle::random_form(p, rng);
    const double d = (hodge_star(f, g1).coeffs - oracle::hodge_star_permutation_sum(f, g1).coeffs).cwiseAbs().maxCoeff();
    star_worst = std::max(star_worst, d / std::max(1.0, f.coeffs.cwiseAbs().maxCoeff() * g1.sqrt_det()));
  }
  t.expect_le(star_worst, 1e-10, "hodge star vs permutation sum");

  double syl_worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Mat3c rho = oracle::random_density(rng);
    const Mat3c S = oracle::random_complex(rng);
    syl_worst = std::max(syl_worst, (sylvester_solve(rho, S) - oracle::sylvester_kronecker(rho, S)).cwiseAbs().maxCoeff());
  }
  t.expect_le(syl_worst, 1e-10, "Sylvester vs Kronecker oracle");
  return {11, "property suites", t.ok(),
          t.summary("wedge " + detail::fmt(wedge_worst, 3) + ", star " + detail::fmt(star_worst, 3) + ", Sylvester " +
                    detail::fmt(syl_worst, 3)),
          "exhaustive wedge pairs, 100 random stars, 100 random Sylvester inputs", "1e-10"};
}

inline std::vector<std::function<CheckResult(const Options&)>> all_checks() {
  return {fixture_reproduction, metric_properties, hodge_structure, four_form_goldens, spectra,       characteristic_factors,
          cross_point,          cayley_benchmark,  sweeps,          connection_checks, property_suites};
}

/// Runs every criterion; exceptions become failures with their message.
inline std::vector<CheckResult> run_all(const Options& opt = {}) {
  std::vector<CheckResult> out;
  int id = 1;
  for (const auto& check : all_checks()) {
    try {
      out.push_back(check(opt));
    } catch (const std::exception& e) {
      out.push_back({id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what(), "", ""});
    }
    ++id;
  }
  return out;
}

inline nlohmann::ordered_json to_json(const CheckResult& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["name"] = r.name;
  j["passed"] = r.passed;
  j["detail"] = r.detail;
  j["anchor"] = r.anchor;
  j["tolerance"] = r.tolerance;
  return j;
}

inline std::string format_line(const CheckResult& r) {
  return std::string(r.passed ? "PASS" : "FAIL") + " criterion " + std::to_string(r.id) + " (" + r.name + "): " + r.detail;
}

}  // namespace acceptance
