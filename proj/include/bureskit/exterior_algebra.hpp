#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bureskit/errors.hpp"
#include "bureskit/metric_tensor.hpp"

namespace bureskit {

/// Strictly increasing set of coordinate labels, stored as a bitmask
/// (bit k set means label k+1 is present).
using MultiIndex = std::uint32_t;

inline int degree_of(MultiIndex m) noexcept { return std::popcount(m); }

/// 1-based labels of a multi-index in increasing order.
inline std::vector<int> labels_of(MultiIndex m) {
  std::vector<int> out;
  for (int k = 0; m != 0; ++k, m >>= 1) {
    if (m & 1u) out.push_back(k + 1);
  }
  return out;
}

/// Multi-index from 1-based labels; labels must be distinct.
inline MultiIndex make_index(std::initializer_list<int> labels, int n = 8) {
  MultiIndex m = 0;
  for (int l : labels) {
    if (l < 1 || l > n) throw Error(ErrorKind::invalid_index, "label out of range");
    const MultiIndex bit = 1u << (l - 1);
    if (m & bit) throw Error(ErrorKind::invalid_index, "repeated label");
    m |= bit;
  }
  return m;
}

/// "1234" style name; labels above 9 are comma separated.
inline std::string index_name(MultiIndex m) {
  std::string s;
  const auto ls = labels_of(m);
  bool wide = !ls.empty() && ls.back() > 9;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (wide && i > 0) s += ',';
    s += std::to_string(ls[i]);
  }
  return s;
}

/// Sign of moving the labels of `b` behind those of `a` into sorted order;
/// 0 when they overlap.
inline int merge_sign(MultiIndex a, MultiIndex b) noexcept {
  if (a & b) return 0;
  int swaps = 0;
  for (MultiIndex rest = a; rest != 0; rest &= rest - 1) {
    const MultiIndex low = (rest & (~rest + 1)) - 1;
    swaps += std::popcount(b & low);
  }
  return (swaps & 1) ? -1 : 1;
}

/// Lexicographically ordered basis of Λ^p over an n-dimensional chart.
template <int N>
class FormBasis {
  static_assert(N >= 1 && N <= 12, "chart dimension out of supported range");

 public:
  static constexpr int dim = N;

  static const std::vector<MultiIndex>& of_degree(int p) {
    check_degree(p);
    return tables().basis[static_cast<std::size_t>(p)];
  }

  static int size(int p) { return static_cast<int>(of_degree(p).size()); }

  /// Position of `m` within the basis of its degree.
  static int position(MultiIndex m) {
    if (m >> N) throw Error(ErrorKind::invalid_index, "multi-index outside chart");
    return tables().position[m];
  }

  static MultiIndex full() noexcept { return (MultiIndex{1} << N) - 1; }

  static void check_degree(int p) {
    if (p < 0 || p > N) throw Error(ErrorKind::degree_overflow, "degree outside 0.." + std::to_string(N));
  }

 private:
  struct Tables {
    std::array<std::vector<MultiIndex>, N + 1> basis;
    std::vector<int> position;
  };

  static void extend(std::vector<MultiIndex>& out, MultiIndex prefix, int next, int left) {
    if (left == 0) {
      out.push_back(prefix);
      return;
    }
    for (int k = next; k <= N - left; ++k) extend(out, prefix | (MultiIndex{1} << k), k + 1, left - 1);
  }

  static const Tables& tables() {
    static const Tables t = [] {
      Tables r;
      r.position.assign(std::size_t{1} << N, -1);
      for (int p = 0; p <= N; ++p) {
        extend(r.basis[static_cast<std::size_t>(p)], 0, 0, p);
        const auto& b = r.basis[static_cast<std::size_t>(p)];
        for (std::size_t i = 0; i < b.size(); ++i) r.position[b[i]] = static_cast<int>(i);
      }
      return r;
    }();
    return t;
  }
};

/// Antisymmetric form of fixed degree, dense over the lexicographic basis.
template <int N = 8>
struct PForm {
  int degree = 0;
  Eigen::VectorXd coeffs;

  PForm() : coeffs(Eigen::VectorXd::Zero(1)) {}
  explicit PForm(int p) : degree(p), coeffs(Eigen::VectorXd::Zero(FormBasis<N>::size(p))) {}
  PForm(int p, Eigen::VectorXd c) : degree(p), coeffs(std::move(c)) {
    if (coeffs.size() != FormBasis<N>::size(p)) {
      throw Error(ErrorKind::invalid_argument, "coefficient count does not match degree");
    }
  }

  static PForm basis_form(MultiIndex m) {
    PForm f(degree_of(m));
    f.coeffs(FormBasis<N>::position(m)) = 1.0;
    return f;
  }

  double operator[](MultiIndex m) const {
    if (degree_of(m) != degree) throw Error(ErrorKind::invalid_index, "multi-index has wrong degree");
    return coeffs(FormBasis<N>::position(m));
  }
  double& operator[](MultiIndex m) {
    if (degree_of(m) != degree) throw Error(ErrorKind::invalid_index, "multi-index has wrong degree");
    return coeffs(FormBasis<N>::position(m));
  }

  PForm operator+(const PForm& o) const { return PForm(degree, coeffs + o.coeffs); }
  PForm operator-(const PForm& o) const { return PForm(degree, coeffs - o.coeffs); }
  PForm operator-() const { return PForm(degree, -coeffs); }
  friend PForm operator*(double s, const PForm& f) { return PForm(f.degree, s * f.coeffs); }
};

using Form8 = PForm<8>;

/// Sign of a labelling of 1..n; 0 when a label repeats.
inline int levi_civita_sign(std::span<const int> labels, int n = 8) {
  if (static_cast<int>(labels.size()) != n) {
    throw Error(ErrorKind::invalid_index, "expected " + std::to_string(n) + " labels");
  }
  for (int l : labels) {
    if (l < 1 || l > n) throw Error(ErrorKind::invalid_index, "label " + std::to_string(l) + " out of range");
  }
  int sign = 1;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      if (labels[i] == labels[j]) return 0;
      if (labels[i] > labels[j]) sign = -sign;
    }
  }
  return sign;
}

inline int levi_civita_sign(std::initializer_list<int> labels, int n = 8) {
  return levi_civita_sign(std::span<const int>(labels.begin(), labels.size()), n);
}

/// Matrix of F ↦ a ∧ F from Λ^q to Λ^{p+q}.
template <int N>
Eigen::MatrixXd wedge_matrix(const PForm<N>& a, int q) {
  using B = FormBasis<N>;
  B::check_degree(q);
  if (a.degree + q > N) throw Error(ErrorKind::degree_overflow, "wedge degree exceeds chart dimension");
  const auto& left = B::of_degree(a.degree);
  const auto& right = B::of_degree(q);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(B::size(a.degree + q), B::size(q));
  for (std::size_t i = 0; i < left.size(); ++i) {
    const double c = a.coeffs(static_cast<Eigen::Index>(i));
    if (c == 0.0) continue;
    for (std::size_t j = 0; j < right.size(); ++j) {
      const int s = merge_sign(left[i], right[j]);
      if (s != 0) m(B::position(left[i] | right[j]), static_cast<Eigen::Index>(j)) += s * c;
    }
  }
  return m;
}

template <int N>
PForm<N> wedge(const PForm<N>& a, const PForm<N>& b) {
  if (a.degree + b.degree > N) throw Error(ErrorKind::degree_overflow, "wedge degree exceeds chart dimension");
  return PForm<N>(a.degree + b.degree, wedge_matrix(a, b.degree) * b.coeffs);
}

/// Matrix of the Hodge star from Λ^p to Λ^{n-p}.
///
/// Entry (J', I) is orientation·√g·ε(J J')·det(g⁻¹[I, J]) with J the
/// complement of J'.
template <int N>
Eigen::MatrixXd star_matrix(const MetricTensor& metric, int p) {
  using B = FormBasis<N>;
  B::check_degree(p);
  if (metric.dim() != N) throw Error(ErrorKind::invalid_metric, "metric dimension does not match chart");
  const auto& rows = B::of_degree(N - p);
  const auto& cols = B::of_degree(p);
  const Eigen::MatrixXd& gi = metric.g_inv();
  const double vol = metric.orientation() * metric.sqrt_det();
  Eigen::MatrixXd s(rows.size(), cols.size());
  Eigen::MatrixXd sub(p, p);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const MultiIndex jp = rows[r];
    const MultiIndex j = B::full() & ~jp;
    const double eps = vol * merge_sign(j, jp);
    const auto jl = labels_of(j);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (p == 0) {
        s(r, c) = eps;
        continue;
      }
      const auto il = labels_of(cols[c]);
      for (int x = 0; x < p; ++x) {
        for (int y = 0; y < p; ++y) sub(x, y) = gi(il[x] - 1, jl[y] - 1);
      }
      s(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = eps * sub.determinant();
    }
  }
  return s;
}

template <int N>
PForm<N> hodge_star(const PForm<N>& form, const MetricTensor& metric) {
  return PForm<N>(N - form.degree, star_matrix<N>(metric, form.degree) * form.coeffs);
}

}  // namespace bureskit
