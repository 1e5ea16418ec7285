#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "bureskit/bures_metric.hpp"
#include "bureskit/duality.hpp"
#include "bureskit/fixtures.hpp"
#include "bureskit/spectral.hpp"

namespace bureskit {

enum class SweepCoefficient { z1234, z1678 };

inline MultiIndex coefficient_index(SweepCoefficient c) {
  return c == SweepCoefficient::z1234 ? make_index({1, 2, 3, 4}) : make_index({1, 6, 7, 8});
}

inline std::string coefficient_name(SweepCoefficient c) { return c == SweepCoefficient::z1234 ? "1234" : "1678"; }

inline bool has_closed_form(Coordinate c) {
  return c == Coordinate::tau || c == Coordinate::beta || c == Coordinate::b || c == Coordinate::theta ||
         c == Coordinate::theta1;
}

namespace detail {

inline void pole_guard(double denom, const char* where) {
  if (std::abs(denom) < 1e-12) throw Error(ErrorKind::pole, std::string("closed form has a pole in ") + where);
}

}  // namespace detail

/// Closed forms of the pinned self-dual coefficients at the second reference
/// point with one coordinate freed.
inline double closed_form(SweepCoefficient coeff, Coordinate coord, double t) {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), s6 = std::sqrt(6.0);
  using std::cos;
  using std::sin;
  if (coeff == SweepCoefficient::z1234) {
    switch (coord) {
      case Coordinate::tau:
        return (28 * s2 * (42 - 5 * s3) * cos(2 * t) + 119 * s6 * cos(4 * t) - 4480 * (7 + 2 * s3) * sin(2 * t) +
                s6 * (2009 - 10 * sin(4 * t)) + 84 * s2 * sin(4 * t)) /
               62720;
      case Coordinate::beta:
        return (448 + 128 * s3 + 27 * s6) * sin(2 * t) / 896;
      case Coordinate::b:
        return 0.5 + s3 * (128 + 27 * s2) * sin(2 * t) / (128 * (7 + 2 * cos(2 * t)));
      case Coordinate::theta:
        return cos(t) + 2 * sin(t) / 7 + 9 * cos(t) * std::pow(sin(t), 3) / (28 * s2);
      case Coordinate::theta1:
        return (1600 + 256 * (7 + 8 * s3) * cos(2 * t) + 64 * (11 + 14 * s3) * cos(4 * t) +
                3 * s3 * (384 + 26 * sin(t) + 35 * sin(3 * t) + 25 * sin(5 * t))) /
               (128 * (25 + 28 * cos(2 * t) + 11 * cos(4 * t)));
      default: break;
    }
  } else {
    switch (coord) {
      case Coordinate::tau:
        return 112 * std::sqrt(2.0 / 3.0) + (1.0 / 7 + 16 * s2) * cos(2 * t) + cos(t) * sin(t);
      case Coordinate::beta:
        return cos(2 * t) + ((-3 + 224 * s6) / 6) * sin(2 * t);
      case Coordinate::b: {
        const double d = sin(t) * cos(t);
        detail::pole_guard(d, "b");
        return -0.5 + 56 * std::sqrt(2.0 / 3.0) / d;
      }
      case Coordinate::theta: {
        const double d = sin(t) * cos(t);
        detail::pole_guard(d, "theta");
        return -cos(t) + 28 * s2 / d;
      }
      case Coordinate::theta1: {
        const double d = 1 + 7 * cos(2 * t);
        detail::pole_guard(d, "theta1");
        return -0.5 + 16 * (13 * sin(t) + sin(3 * t)) / (s3 * d * d);
      }
      default: break;
    }
  }
  throw Error(ErrorKind::invalid_argument, "no closed form for coordinate " + std::string(coord_name(coord)));
}

/// n samples over the documented range, offset by half a step from the ends.
inline std::vector<double> default_grid(Coordinate c, int n = 41) {
  const auto r = documented_range(c);
  const double step = (r.hi - r.lo) / n;
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = r.lo + step * (k + 0.5);
  return g;
}

struct SweepSpec {
  PointCoords base = fixtures::q2();
  Coordinate free_coordinate = Coordinate::beta;
  std::vector<double> grid;
  SweepCoefficient coefficient = SweepCoefficient::z1234;
  int sign = 1;
  bool experimental = false;  // allows coordinates without a closed form
};

inline constexpr int kNumFigures = 10;

/// Figures 1–5 track ζ1234 along τ, β, b, θ, θ₁; figures 6–10 track ζ1678.
inline SweepSpec figure_spec(int figure, int samples = 41) {
  if (figure < 1 || figure > kNumFigures) throw Error(ErrorKind::invalid_argument, "figure must be 1..10");
  static constexpr std::array<Coordinate, 5> order{Coordinate::tau, Coordinate::beta, Coordinate::b,
                                                   Coordinate::theta, Coordinate::theta1};
  SweepSpec s;
  s.free_coordinate = order[static_cast<std::size_t>((figure - 1) % 5)];
  s.coefficient = figure <= 5 ? SweepCoefficient::z1234 : SweepCoefficient::z1678;
  s.grid = default_grid(s.free_coordinate, samples);
  return s;
}

struct SweepSample {
  double angle;
  double computed;
  double closed_form;
  double deviation;
  std::string error;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepSample> samples;
  double argmax_angle = std::numeric_limits<double>::quiet_NaN();
  double max_value = std::numeric_limits<double>::quiet_NaN();
  double max_deviation = 0.0;
  std::size_t failures = 0;
};

inline double swept_coefficient(const SweepSpec& spec, double angle) {
  const PointCoords p = spec.base.with(spec.free_coordinate, angle);
  const auto sol = solve_dual_form(bures_metric(p), spec.sign);
  return sol.omega[coefficient_index(spec.coefficient)];
}

/// Runs `fn(k)` for k in [0, n) on a small worker pool.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < n; k = next++) fn(k);
    });
  }
  for (auto& th : pool) th.join();
}

/// Golden-section maximisation of a unimodal f on [lo, hi].
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol = 1e-10) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

inline SweepResult coefficient_sweep(const SweepSpec& spec, unsigned threads = 0, bool refine = true) {
  if (!has_closed_form(spec.free_coordinate) && !spec.experimental) {
    throw Error(ErrorKind::invalid_argument,
                "no closed form along " + std::string(coord_name(spec.free_coordinate)) + "; enable experimental mode");
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  SweepResult res;
  res.spec = spec;
  res.samples.resize(spec.grid.size());
  parallel_for(
      spec.grid.size(),
      [&](std::size_t k) {
        SweepSample s{spec.grid[k], nan, nan, nan, {}};
        try {
          s.computed = swept_coefficient(spec, s.angle);
        } catch (const Error& e) {
          s.error = e.what();
        }
        if (has_closed_form(spec.free_coordinate)) {
          try {
            s.closed_form = closed_form(spec.coefficient, spec.free_coordinate, s.angle);
          } catch (const Error& e) {
            if (s.error.empty()) s.error = e.what();
          }
        }
        s.deviation = std::abs(s.computed - s.closed_form);
        res.samples[k] = std::move(s);
      },
      threads);

  std::size_t best = res.samples.size();
  for (std::size_t k = 0; k < res.samples.size(); ++k) {
    const auto& s = res.samples[k];
    if (!std::isfinite(s.computed)) {
      ++res.failures;
      continue;
    }
    if (std::isfinite(s.deviation)) res.max_deviation = std::max(res.max_deviation, s.deviation);
    if (best == res.samples.size() || s.computed > res.samples[best].computed) best = k;
  }
  if (best == res.samples.size()) return res;
  res.argmax_angle = res.samples[best].angle;
  res.max_value = res.samples[best].computed;
  if (refine && res.samples.size() >= 3) {
    const auto r = documented_range(spec.free_coordinate);
    const double lo = best > 0 ? res.samples[best - 1].angle : r.lo;
    const double hi = best + 1 < res.samples.size() ? res.samples[best + 1].angle : r.hi;
    try {
      const auto [x, v] = golden_max([&](double t) { return swept_coefficient(spec, t); }, lo, hi, 1e-9);
      if (v >= res.max_value) {
        res.argmax_angle = x;
        res.max_value = v;
      }
    } catch (const Error&) {
    }
  }
  return res;
}

inline std::vector<SpectrumReport> spectrum_under_sweep(const SweepSpec& spec, unsigned threads = 0) {
  std::vector<SpectrumReport> out(spec.grid.size());
  parallel_for(
      spec.grid.size(),
      [&](std::size_t k) {
        const PointCoords p = spec.base.with(spec.free_coordinate, spec.grid[k]);
        const MetricTensor g = bures_metric(p);
        const auto sol = solve_dual_form(g, spec.sign);
        out[k] = eigen_spectrum(build_endomorphism(sol.omega, g, spec.sign, kPublishedSpectrumScale));
      },
      threads);
  return out;
}

/// Largest eigenvalue-wise difference between any report and the first.
inline double spectrum_variation(const std::vector<SpectrumReport>& reports) {
  double worst = 0.0;
  for (const auto& r : reports) {
    for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
      worst = std::max(worst, std::abs(r.eigenvalues[k] - reports.front().eigenvalues[k]));
    }
  }
  return worst;
}

struct CrossPointSpectra {
  SpectrumReport self_dual;
  SpectrumReport anti_self_dual;
};

/// Four-forms solved at the first reference point, held constant and
/// re-evaluated under the metric at the third point, both with +⋆(Ω∧F).
inline CrossPointSpectra cross_point_spectrum() {
  const MetricTensor g1 = bures_metric(fixtures::q1());
  const MetricTensor g3 = bures_metric(fixtures::q3());
  const auto plus = solve_dual_form(g1, 1);
  const auto minus = solve_dual_form(g1, -1);
  return {eigen_spectrum(build_endomorphism(plus.omega, g3, 1, kPublishedSpectrumScale)),
          eigen_spectrum(build_endomorphism(minus.omega, g3, 1, kPublishedSpectrumScale))};
}

// ---- figure data -------------------------------------------------------------

inline std::string figure_filename(int figure) {
  return std::string("fig") + (figure < 10 ? "0" : "") + std::to_string(figure) + ".csv";
}

inline void write_sweep_csv(const SweepResult& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot open " + path);
  out.precision(17);
  out << "angle,computed,closed_form,deviation\n";
  auto put = [&out](double v) -> std::ostream& {
    if (std::isfinite(v)) return out << v;
    return out << "NaN";
  };
  for (const auto& s : r.samples) {
    out << s.angle << ',';
    put(s.computed) << ',';
    put(s.closed_form) << ',';
    put(s.deviation) << '\n';
  }
}

inline nlohmann::ordered_json sweep_summary(const SweepResult& r) {
  nlohmann::ordered_json j;
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr); };
  j["coordinate"] = std::string(coord_name(r.spec.free_coordinate));
  j["coefficient"] = coefficient_name(r.spec.coefficient);
  j["sign"] = r.spec.sign;
  j["samples"] = r.samples.size();
  j["failures"] = r.failures;
  j["max_deviation"] = num(r.max_deviation);
  j["argmax"] = {{"angle", num(r.argmax_angle)}, {"value", num(r.max_value)}};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& s : r.samples) {
    if (std::isfinite(s.computed)) {
      lo = std::min(lo, s.computed);
      hi = std::max(hi, s.computed);
    }
  }
  j["range"] = {num(lo), num(hi)};
  const double base_angle = r.spec.base[r.spec.free_coordinate];
  nlohmann::ordered_json base;
  base["angle"] = base_angle;
  try {
    base["computed"] = num(swept_coefficient(r.spec, base_angle));
    base["closed_form"] = has_closed_form(r.spec.free_coordinate)
                              ? num(closed_form(r.spec.coefficient, r.spec.free_coordinate, base_angle))
                              : nlohmann::ordered_json(nullptr);
  } catch (const Error& e) {
    base["error"] = e.what();
  }
  j["base_point"] = base;
  return j;
}

}  // namespace bureskit
