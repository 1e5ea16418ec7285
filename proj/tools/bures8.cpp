// bures8: command-line front end for the bureskit library.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bureskit/bures_metric.hpp"
#include "bureskit/duality.hpp"
#include "bureskit/fixtures.hpp"
#include "bureskit/point_config.hpp"
#include "bureskit/spectral.hpp"
#include "bureskit/sweeps.hpp"
#include "support/acceptance_suite.hpp"

using namespace bureskit;
using json = nlohmann::ordered_json;

namespace {

enum Exit : int { ok = 0, acceptance_failed = 1, invalid_state = 2, solver_failed = 3, usage = 64 };

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::degenerate_state:
    case ErrorKind::invalid_metric:
    case ErrorKind::pole: return invalid_state;
    case ErrorKind::invalid_argument:
    case ErrorKind::invalid_index:
    case ErrorKind::degree_overflow: return usage;
    default: return solver_failed;
  }
}

struct PointArgs {
  std::string fixture;
  std::string file;
  std::map<std::string, std::string> inline_values;

  void attach(CLI::App* app) {
    app->add_option("--fixture", fixture, "Start from a reference point")->check(CLI::IsMember({"q1", "q2", "q3"}));
    app->add_option("--point-file", file, "JSON file with the eight coordinates");
    for (auto name : kCoordNames) {
      app->add_option("--" + std::string(name), inline_values[std::string(name)],
                      "Angle in radians or a multiple of pi such as 2pi/3");
    }
  }

  PointCoords resolve() const {
    PointCoords p;
    bool have_base = false;
    if (!fixture.empty()) {
      p = fixture == "q1" ? fixtures::q1() : fixture == "q2" ? fixtures::q2() : fixtures::q3();
      have_base = true;
    }
    if (!file.empty()) {
      if (have_base) throw Error(ErrorKind::invalid_argument, "--fixture and --point-file are exclusive");
      p = point_from_file(file);
      have_base = true;
    }
    int given = 0;
    for (int i = 0; i < kNumCoords; ++i) {
      const auto& v = inline_values.at(std::string(kCoordNames[static_cast<std::size_t>(i)]));
      if (v.empty()) continue;
      p[i] = parse_angle(v);
      ++given;
    }
    if (!have_base && given != kNumCoords) {
      throw Error(ErrorKind::invalid_argument, "give --fixture, --point-file or all eight coordinates");
    }
    return p;
  }
};

json matrix_json(const Mat3c& m) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < 3; ++i) {
    json r = json::array(), c = json::array();
    for (int j = 0; j < 3; ++j) {
      r.push_back(m(i, j).real());
      c.push_back(m(i, j).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return {{"real", re}, {"imag", im}};
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

json check(const std::string& name, double value, double target, double tol, const std::string& anchor,
           bool relative = false) {
  const double dev = std::abs(value - target) / (relative ? std::abs(target) : 1.0);
  return {{"name", name},     {"value", value}, {"target", target}, {"tolerance", tol},
          {"relative", relative}, {"anchor", anchor}, {"passed", dev <= tol}};
}

std::optional<std::string> fixture_name(const PointCoords& p) {
  if (same_point(p, fixtures::q1())) return "q1";
  if (same_point(p, fixtures::q2())) return "q2";
  if (same_point(p, fixtures::q3())) return "q3";
  return std::nullopt;
}

json new_report(const std::string& command) {
  json r;
  r["schema"] = 1;
  r["tool"] = "bures8";
  r["command"] = command;
  return r;
}

OrientationRule parse_rule(const std::string& s) {
  return s == "positive" ? OrientationRule::positive : OrientationRule::published;
}

json cmd_point(const PointCoords& p) {
  json r = new_report("point");
  r["inputs"] = {{"point", point_to_json(p)}};
  const DensityState s = density_from_angles(p);
  const MetricTensor g = bures_metric(p);
  json out;
  out["rho"] = matrix_json(s.rho);
  out["eigenvalues"] = {s.frame.eigenvalues(0), s.frame.eigenvalues(1), s.frame.eigenvalues(2)};
  out["metric"] = matrix_json(g.g());
  out["det_g"] = g.det();
  out["condition_number"] = g.condition_number();
  out["orientation"] = g.orientation();
  out["range_warnings"] = range_warnings(p);
  r["outputs"] = out;
  r["residuals"] = {{"hermiticity", (s.rho - s.rho.adjoint()).cwiseAbs().maxCoeff()},
                    {"trace_minus_one", std::abs(s.rho.trace().real() - 1.0)}};
  json checks = json::array();
  if (auto f = fixture_name(p); f && *f != "q3") {
    const Mat3c want = *f == "q1" ? fixtures::rho1() : fixtures::rho2();
    checks.push_back(check("max entry deviation from reference matrix", (s.rho - want).cwiseAbs().maxCoeff(), 0.0,
                           1e-10, "reference density matrix at " + *f));
  }
  r["checks"] = checks;
  r["tolerances"] = {{"entries", 1e-10}, {"eigen_gap", kDefaultEigenGap}};
  return r;
}

json cmd_omega(const PointCoords& p, int sign, OrientationRule rule) {
  json r = new_report("omega");
  r["inputs"] = {{"point", point_to_json(p)}, {"sign", sign}, {"orientation", rule == OrientationRule::published ? "published" : "positive"}};
  const MetricTensor g = bures_metric(p, rule);
  const FourFormSolution sol = solve_dual_form(g, sign);
  json coeffs;
  const auto& basis = FormBasis<8>::of_degree(4);
  for (std::size_t k = 0; k < basis.size(); ++k) coeffs[index_name(basis[k])] = sol.omega.coeffs(static_cast<Eigen::Index>(k));
  const FourFormSolution other = solve_dual_form(g, -sign);
  r["outputs"] = {{"coefficients", coeffs}, {"rank", sol.rank}, {"pm_equal_to_opposite_branch", is_pm_equal(sol, other, 1e-6)}};
  r["residuals"] = {{"duality", sol.residual}};
  r["tolerances"] = {{"duality", kDualityTolerance}, {"rank_threshold", kRankThreshold}};
  json checks = json::array();
  if (auto f = fixture_name(p); f && *f != "q3" && rule == OrientationRule::published) {
    const auto golden = *f == "q1" ? (sign > 0 ? fixtures::omega_plus_q1() : fixtures::omega_minus_q1())
                                   : (sign > 0 ? fixtures::omega_plus_q2() : fixtures::omega_minus_q2());
    for (const auto& w : golden) {
      const MultiIndex m = make_index({w.labels[0], w.labels[1], w.labels[2], w.labels[3]});
      checks.push_back(check("zeta" + index_name(m), sol.omega[m], w.value, 1e-9,
                             std::string(sign > 0 ? "self" : "anti-self") + "-dual form at " + *f));
    }
  }
  r["checks"] = checks;
  return r;
}

json cmd_spectrum(const PointCoords& p, int sign, const std::string& source, bool euclidean, const std::string& scale_name,
                  OrientationRule rule) {
  json r = new_report("spectrum");
  r["inputs"] = {{"point", point_to_json(p)}, {"sign", sign}, {"omega_source", source}, {"euclidean", euclidean}, {"scale", scale_name}};
  const MetricTensor g = euclidean ? MetricTensor::euclidean() : bures_metric(p, rule);
  Form8 omega(4);
  int star_sign = 1;
  if (source == "solve-here") {
    omega = solve_dual_form(g, sign).omega;
    star_sign = sign;
  } else if (source == "fixture-q1" || source == "fixture-q2") {
    const PointCoords at = source == "fixture-q1" ? fixtures::q1() : fixtures::q2();
    omega = solve_dual_form(bures_metric(at, rule), sign).omega;
  } else {
    omega = cayley_calibration();
  }
  double scale = 1.0;
  if (scale_name == "published" || (scale_name == "auto" && !euclidean)) scale = kPublishedSpectrumScale;
  const Endo2Forms e = build_endomorphism(omega, g, star_sign, scale);
  const SpectrumReport s = eigen_spectrum(e);
  json clusters = json::array();
  for (const auto& c : s.clusters) clusters.push_back({{"value", c.value}, {"multiplicity", c.multiplicity}});
  double sum = 0.0;
  for (double v : s.eigenvalues) sum += v;
  r["outputs"] = {{"eigenvalues", s.eigenvalues}, {"clusters", clusters}, {"pattern", s.pattern}, {"scale", scale}};
  r["residuals"] = {{"trace", std::abs(e.M.trace())}, {"eigenvalue_sum", std::abs(sum)}, {"self_adjointness", self_adjointness_defect(e)}};
  r["tolerances"] = {{"cluster_relative", 1e-5}, {"trace", 1e-8}};
  json checks = json::array();
  const auto f = fixture_name(p);
  if (!euclidean && source == "solve-here" && f && *f != "q3" && rule == OrientationRule::published) {
    auto want = *f == "q1" ? fixtures::spectrum_q1() : fixtures::spectrum_q2();
    std::sort(want.begin(), want.end(), std::greater<>());
    for (std::size_t k = 0; k < want.size(); ++k) {
      checks.push_back(check("eigenvalue " + std::to_string(k), s.eigenvalues[k], want[k], 1e-4,
                             "eigenvalue list at " + *f, true));
    }
  }
  if (!euclidean && source == "fixture-q1" && f && *f == "q3" && rule == OrientationRule::published) {
    const double hi = sign > 0 ? 9.83657 : 9.66359, lo = sign > 0 ? -9.73817 : -9.59167;
    checks.push_back(check("largest eigenvalue", s.eigenvalues.front(), hi, 1e-4, "cross-point leading pair", true));
    checks.push_back(check("smallest eigenvalue", s.eigenvalues.back(), lo, 1e-4, "cross-point leading pair", true));
  }
  if (euclidean && source == "cayley") {
    int ones = 0, threes = 0;
    for (double v : s.eigenvalues) {
      ones += std::abs(v - 1.0) <= 1e-10;
      threes += std::abs(v + 3.0) <= 1e-10;
    }
    checks.push_back(check("multiplicity of 1", ones, 21, 0, "Cayley benchmark"));
    checks.push_back(check("multiplicity of -3", threes, 7, 0, "Cayley benchmark"));
  }
  r["checks"] = checks;
  return r;
}

json cmd_sweep(const std::vector<int>& figures, const std::string& out_dir, int samples, unsigned threads, bool& enough) {
  json r = new_report("sweep");
  r["inputs"] = {{"figures", figures}, {"out_dir", out_dir}, {"samples", samples}};
  std::filesystem::create_directories(out_dir);
  json summaries;
  enough = true;
  for (int fig : figures) {
    const SweepResult res = coefficient_sweep(figure_spec(fig, samples), threads);
    const auto path = std::filesystem::path(out_dir) / figure_filename(fig);
    write_sweep_csv(res, path.string());
    json s = sweep_summary(res);
    s["file"] = path.string();
    if (res.failures > 0) std::cerr << "warning: figure " << fig << " has " << res.failures << " failed samples\n";
    if (res.failures * 10 > res.samples.size()) enough = false;
    summaries[figure_filename(fig).substr(0, 5)] = s;
  }
  std::ofstream(std::filesystem::path(out_dir) / "sweep_summary.json") << summaries.dump(2) << '\n';
  r["outputs"] = summaries;
  r["tolerances"] = {{"curve_deviation", 1e-8}};
  return r;
}

void emit(json r, std::chrono::steady_clock::time_point start) {
  r["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << r.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bures-metric exterior calculus on three-level density matrices"};
  app.require_subcommand(1);

  PointArgs point_args, omega_args, spectrum_args;
  int sign = 1, spectrum_sign = 1, samples = 41;
  unsigned threads = 0;
  std::string orientation = "published", source = "solve-here", scale = "auto", out_dir = "figures";
  bool euclidean = false, json_out = false, all_figures = false;
  std::vector<int> figures;

  auto* point = app.add_subcommand("point", "Density matrix, eigenvalues and metric at a point");
  point_args.attach(point);

  auto* omega = app.add_subcommand("omega", "Pinned self-dual or anti-self-dual four-form");
  omega_args.attach(omega);
  omega->add_option("--sign", sign, "+1 self-dual, -1 anti-self-dual")->check(CLI::IsMember({1, -1}));
  omega->add_option("--orientation", orientation)->check(CLI::IsMember({"published", "positive"}));

  auto* spectrum = app.add_subcommand("spectrum", "Spectrum of F -> *(Omega ^ F) on two-forms");
  spectrum_args.attach(spectrum);
  spectrum->add_option("--sign", spectrum_sign,
                       "Branch of Omega; with solve-here it also signs the star")
      ->check(CLI::IsMember({1, -1}));
  spectrum->add_option("--omega-source", source)->check(CLI::IsMember({"solve-here", "fixture-q1", "fixture-q2", "cayley"}));
  spectrum->add_flag("--euclidean", euclidean, "Use the identity metric");
  spectrum->add_option("--scale", scale, "auto: published scale for the Bures metric, unit otherwise")
      ->check(CLI::IsMember({"auto", "published", "unit"}));
  spectrum->add_option("--orientation", orientation)->check(CLI::IsMember({"published", "positive"}));

  auto* sweep = app.add_subcommand("sweep", "Coefficient sweeps around the second reference point");
  sweep->add_option("--figure", figures, "Figure numbers 1-10")->check(CLI::Range(1, kNumFigures));
  sweep->add_flag("--all", all_figures, "All ten figures");
  sweep->add_option("--out-dir", out_dir);
  sweep->add_option("--samples", samples)->check(CLI::PositiveNumber);
  sweep->add_option("--threads", threads);

  auto* accept = app.add_subcommand("acceptance", "Run every acceptance criterion");
  accept->add_flag("--json", json_out, "Machine-readable report on standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    return ok;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    if (*point) {
      emit(cmd_point(point_args.resolve()), start);
    } else if (*omega) {
      emit(cmd_omega(omega_args.resolve(), sign, parse_rule(orientation)), start);
    } else if (*spectrum) {
      const PointCoords p = (source == "cayley" && euclidean && spectrum_args.fixture.empty() && spectrum_args.file.empty())
                                ? fixtures::q2()
                                : spectrum_args.resolve();
      emit(cmd_spectrum(p, spectrum_sign, source, euclidean, scale, parse_rule(orientation)), start);
    } else if (*sweep) {
      if (all_figures) {
        figures.clear();
        for (int f = 1; f <= kNumFigures; ++f) figures.push_back(f);
      }
      if (figures.empty()) throw Error(ErrorKind::invalid_argument, "give --figure or --all");
      bool enough = true;
      emit(cmd_sweep(figures, out_dir, samples, threads, enough), start);
      return enough ? ok : solver_failed;
    } else if (*accept) {
      const auto results = acceptance::run_all();
      bool passed = true;
      json checks = json::array();
      for (const auto& c : results) {
        passed = passed && c.passed;
        if (json_out) checks.push_back(acceptance::to_json(c));
        else std::cout << acceptance::format_line(c) << '\n';
      }
      if (json_out) {
        json r = new_report("acceptance");
        r["checks"] = checks;
        r["passed"] = passed;
        emit(r, start);
      }
      return passed ? ok : acceptance_failed;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return solver_failed;
  }
  return ok;
}
