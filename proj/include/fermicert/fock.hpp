// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fock.hpp
 * @brief Dense Fock-space numerics under a fixed Jordan-Wigner convention.
 *
 * Modes are ordered site-major: mode g = (site-1)*p + (a-1) for fermionic
 * mode a on a site, and mode g is the g-th tensor factor (the most
 * significant bit of a basis index belongs to mode 0). With f = |0><1| on
 * one mode,
 *
 *   m^{2a-1} = f^dag + f      -> Z...Z X 1...1
 *   m^{2a}   = i(f^dag - f)   -> Z...Z Y 1...1
 *
 * Every Majorana word is therefore a monomial matrix (one non-zero per
 * column), which keeps conversions and expectation values O(dim) per word.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fermicert/majorana.hpp"

namespace fermicert {

using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

struct DenseOperator {
  SystemShape shape{};
  Matrix mat;

  DenseOperator() = default;
  DenseOperator(SystemShape s, Matrix m) : shape(s), mat(std::move(m)) {
    const auto dim = static_cast<Eigen::Index>(s.fock_dim());
    if (mat.rows() != dim || mat.cols() != dim)
      throw DomainError("DenseOperator: matrix is " + std::to_string(mat.rows()) + "x" + std::to_string(mat.cols()) +
                        ", shape " + s.str() + " needs " + std::to_string(dim));
  }

  static DenseOperator zero(SystemShape s) {
    const auto d = static_cast<Eigen::Index>(s.fock_dim());
    return {s, Matrix::Zero(d, d)};
  }
  static DenseOperator identity(SystemShape s) {
    const auto d = static_cast<Eigen::Index>(s.fock_dim());
    return {s, Matrix::Identity(d, d)};
  }
  static DenseOperator maximally_mixed(SystemShape s) {
    auto m = identity(s);
    m.mat /= static_cast<double>(m.dim());
    return m;
  }

  Eigen::Index dim() const { return mat.rows(); }
  Complex trace() const { return mat.trace(); }
};

namespace detail {

/// Occupation of mode g in basis index b of an n-mode register.
inline int occupation(std::uint64_t b, int g, int n) { return static_cast<int>((b >> (n - 1 - g)) & 1ULL); }

/// Number of occupied modes strictly before mode g.
inline int occupied_before(std::uint64_t b, int g, int n) {
  return g == 0 ? 0 : std::popcount(b >> (n - g));
}

/// Applies a single Majorana (bit position) to basis state |b>: returns new index and amplitude.
inline std::pair<std::uint64_t, Complex> apply_majorana(int bit, std::uint64_t b, int n) {
  const int g = mode_of_bit(bit);
  const double jw = (occupied_before(b, g, n) % 2 == 0) ? 1.0 : -1.0;
  const int occ = occupation(b, g, n);
  const std::uint64_t flipped = b ^ (1ULL << (n - 1 - g));
  if (bit % 2 == 0) return {flipped, Complex(jw, 0.0)};          // X
  return {flipped, Complex(0.0, occ == 0 ? jw : -jw)};            // Y: |0> -> i|1>, |1> -> -i|0>
}

}  // namespace detail

/// Column action of a word: W|col> = value |row>.
inline std::pair<std::uint64_t, Complex> jw_column(MajoranaWord w, std::uint64_t col, int n_modes) {
  Complex amp{1.0, 0.0};
  std::uint64_t b = col;
  // rightmost factor (highest bit) acts first
  for (std::uint64_t rest = w.bits; rest != 0;) {
    const int bit = 63 - std::countl_zero(rest);
    rest &= ~(1ULL << bit);
    auto [nb, a] = detail::apply_majorana(bit, b, n_modes);
    b = nb;
    amp *= a;
  }
  return {b, amp};
}

inline DenseOperator jw_matrix(MajoranaWord w, const SystemShape& shape) {
  auto out = DenseOperator::zero(shape);
  const int n = shape.num_modes();
  for (Eigen::Index c = 0; c < out.dim(); ++c) {
    auto [r, v] = jw_column(w, static_cast<std::uint64_t>(c), n);
    out.mat(static_cast<Eigen::Index>(r), c) = v;
  }
  return out;
}

inline DenseOperator to_matrix(const OperatorExpansion& a) {
  auto out = DenseOperator::zero(a.shape());
  const int n = a.shape().num_modes();
  for (const auto& [w, coeff] : a.terms())
    for (Eigen::Index c = 0; c < out.dim(); ++c) {
      auto [r, v] = jw_column(w, static_cast<std::uint64_t>(c), n);
      out.mat(static_cast<Eigen::Index>(r), c) += coeff * v;
    }
  return out;
}

/// tr(M W) for a Majorana word W, in O(dim).
inline Complex trace_with_word(const DenseOperator& m, MajoranaWord w) {
  const int n = m.shape.num_modes();
  Complex acc{};
  for (Eigen::Index c = 0; c < m.dim(); ++c) {
    auto [r, v] = jw_column(w, static_cast<std::uint64_t>(c), n);
    acc += v * m.mat(c, static_cast<Eigen::Index>(r));
  }
  return acc;
}

/// Visits every word with at most `max_degree` Majoranas out of `n` (all words when max_degree < 0).
template <class Fn>
void for_each_word(int n_majoranas, int max_degree, Fn&& fn) {
  if (max_degree < 0 || max_degree >= n_majoranas) {
    const std::uint64_t count = (n_majoranas == 64) ? 0 : (1ULL << n_majoranas);
    for (std::uint64_t b = 0; b < count; ++b) fn(MajoranaWord{b});
    return;
  }
  for (int r = 0; r <= max_degree; ++r) {
    if (r == 0) {
      fn(MajoranaWord{0});
      continue;
    }
    // Gosper's hack over r-subsets
    std::uint64_t b = (1ULL << r) - 1;
    const std::uint64_t limit = 1ULL << n_majoranas;
    while (b < limit) {
      fn(MajoranaWord{b});
      const std::uint64_t c = b & (~b + 1);
      const std::uint64_t rr = b + c;
      b = (((rr ^ b) >> 2) / c) | rr;
    }
  }
}

/// Coefficient of w is tr(M W^dag)/2^{pV}; optionally restricted to low-degree words.
inline OperatorExpansion to_expansion(const DenseOperator& m, int max_degree = -1) {
  OperatorExpansion out(m.shape);
  const int n = m.shape.num_modes();
  const double inv_dim = 1.0 / static_cast<double>(m.dim());
  for_each_word(m.shape.num_majoranas(), max_degree, [&](MajoranaWord w) {
    Complex acc{};
    for (Eigen::Index c = 0; c < m.dim(); ++c) {
      auto [r, v] = jw_column(w, static_cast<std::uint64_t>(c), n);
      acc += std::conj(v) * m.mat(static_cast<Eigen::Index>(r), c);
    }
    out.add_term(w, acc * inv_dim);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Parity structure

/// Parity (+1/-1) of the occupation on one site for basis index b.
inline int site_parity(std::uint64_t b, int site, const SystemShape& shape) {
  const int n = shape.num_modes();
  const int p = shape.modes_per_site;
  const int shift = n - site * p;
  const std::uint64_t bits = (b >> shift) & ((1ULL << p) - 1);
  return (std::popcount(bits) % 2 == 0) ? 1 : -1;
}

inline int global_parity(std::uint64_t b) { return (std::popcount(b) % 2 == 0) ? 1 : -1; }

/// Dense C^sigma_{P_j}(X) = (X + sigma P_j X P_j)/2 with diagonal P_j.
inline DenseOperator parity_project(const DenseOperator& x, int site, Parity sigma) {
  if (site < 1 || site > x.shape.sites) throw DomainError("parity_project: site out of range");
  DenseOperator out = x;
  for (Eigen::Index c = 0; c < x.dim(); ++c)
    for (Eigen::Index r = 0; r < x.dim(); ++r) {
      const int rel = site_parity(r, site, x.shape) * site_parity(c, site, x.shape);
      if (rel != static_cast<int>(sigma)) out.mat(r, c) = 0.0;
    }
  return out;
}

/// Dense global channel C: zero every entry connecting different local parities.
inline DenseOperator global_channel_C(const DenseOperator& x) {
  const SystemShape& s = x.shape;
  std::vector<std::uint64_t> signature(static_cast<std::size_t>(x.dim()));
  for (Eigen::Index b = 0; b < x.dim(); ++b) {
    std::uint64_t sig = 0;
    for (int j = 1; j <= s.sites; ++j)
      if (site_parity(b, j, s) < 0) sig |= 1ULL << (j - 1);
    signature[b] = sig;
  }
  DenseOperator out = x;
  for (Eigen::Index c = 0; c < x.dim(); ++c)
    for (Eigen::Index r = 0; r < x.dim(); ++r)
      if (signature[r] != signature[c]) out.mat(r, c) = 0.0;
  return out;
}

/// Diagonal matrix of the site parity P_j.
inline DenseOperator site_parity_operator(const SystemShape& shape, int site) {
  auto out = DenseOperator::zero(shape);
  for (Eigen::Index b = 0; b < out.dim(); ++b) out.mat(b, b) = static_cast<double>(site_parity(b, site, shape));
  return out;
}

// ---------------------------------------------------------------------------
// Mode permutations and partial traces

/// Unitary action U_pi with U f_x U^dag = f_{pi(x)} for the site permutation pi.
/// Returns (image index, sign) for every basis state.
inline std::vector<std::pair<std::uint64_t, double>> site_permutation_action(const SitePermutation& pi,
                                                                             const SystemShape& shape) {
  if (pi.size() != shape.sites) throw DomainError("site_permutation_action: size mismatch");
  const int n = shape.num_modes();
  const int p = shape.modes_per_site;
  std::vector<int> mode_image(n);
  for (int g = 0; g < n; ++g) mode_image[g] = (pi(g / p + 1) - 1) * p + g % p;
  const auto dim = shape.fock_dim();
  std::vector<std::pair<std::uint64_t, double>> out(dim);
  std::vector<int> seq;
  for (std::uint64_t b = 0; b < dim; ++b) {
    seq.clear();
    std::uint64_t img = 0;
    for (int g = 0; g < n; ++g)
      if (detail::occupation(b, g, n)) {
        seq.push_back(mode_image[g]);
        img |= 1ULL << (n - 1 - mode_image[g]);
      }
    int inv = 0;
    for (std::size_t i = 0; i < seq.size(); ++i)
      for (std::size_t j = i + 1; j < seq.size(); ++j)
        if (seq[i] > seq[j]) ++inv;
    out[b] = {img, (inv % 2 == 0) ? 1.0 : -1.0};
  }
  return out;
}

inline DenseOperator permutation_unitary(const SitePermutation& pi, const SystemShape& shape) {
  auto u = DenseOperator::zero(shape);
  const auto act = site_permutation_action(pi, shape);
  for (std::size_t b = 0; b < act.size(); ++b) u.mat(static_cast<Eigen::Index>(act[b].first), b) = act[b].second;
  return u;
}

/// U_pi X U_pi^dag, applied entrywise.
inline DenseOperator conjugate_by_permutation(const DenseOperator& x, const SitePermutation& pi) {
  const auto act = site_permutation_action(pi, x.shape);
  auto out = DenseOperator::zero(x.shape);
  for (Eigen::Index c = 0; c < x.dim(); ++c)
    for (Eigen::Index r = 0; r < x.dim(); ++r) {
      const auto& [ir, sr] = act[r];
      const auto& [ic, sc] = act[c];
      out.mat(static_cast<Eigen::Index>(ir), static_cast<Eigen::Index>(ic)) = sr * sc * x.mat(r, c);
    }
  return out;
}

/// Fermionic reduction onto the sites in `keep` (any order, duplicates rejected).
/// The reduced operator lives on |keep| sites in increasing site order; its
/// expansion is the sub-expansion of words supported on `keep`, rescaled so
/// that the trace is preserved.
inline DenseOperator partial_trace_sites(const DenseOperator& x, std::vector<int> keep) {
  if (keep.empty()) throw DomainError("partial_trace_sites: keep set must be non-empty");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) throw DomainError("partial_trace_sites: duplicate site");
  if (keep.front() < 1 || keep.back() > x.shape.sites) throw DomainError("partial_trace_sites: site out of range");
  const int v = x.shape.sites;
  const int k = static_cast<int>(keep.size());

  bool prefix = true;
  for (int i = 0; i < k; ++i) prefix = prefix && keep[i] == i + 1;

  const DenseOperator* src = &x;
  DenseOperator moved;
  if (!prefix) {
    // order-preserving relabelling keep[i] -> i+1, discarded sites after
    std::vector<int> images(v, 0);
    int next = k + 1;
    std::vector<bool> kept(v + 1, false);
    for (int i = 0; i < k; ++i) {
      images[keep[i] - 1] = i + 1;
      kept[keep[i]] = true;
    }
    for (int j = 1; j <= v; ++j)
      if (!kept[j]) images[j - 1] = next++;
    moved = conjugate_by_permutation(x, SitePermutation(images));
    src = &moved;
  }

  const SystemShape out_shape(k, x.shape.modes_per_site);
  auto out = DenseOperator::zero(out_shape);
  const int traced_modes = (v - k) * x.shape.modes_per_site;
  const Eigen::Index env = Eigen::Index{1} << traced_modes;
  for (Eigen::Index i = 0; i < out.dim(); ++i)
    for (Eigen::Index j = 0; j < out.dim(); ++j) {
      Complex acc{};
      for (Eigen::Index t = 0; t < env; ++t) acc += src->mat((i << traced_modes) | t, (j << traced_modes) | t);
      out.mat(i, j) = acc;
    }
  return out;
}

inline DenseOperator reduce_to_first_sites(const DenseOperator& x, int k) {
  std::vector<int> keep(k);
  std::iota(keep.begin(), keep.end(), 1);
  return partial_trace_sites(x, keep);
}

/// Kronecker product; for even operators this is the fermionic product under site-major JW.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// ---------------------------------------------------------------------------
// Spectral routines

inline double hermiticity_residual(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

inline void require_hermitian(const Matrix& m, const char* who, double tol = 1e-10) {
  if (m.rows() != m.cols()) throw DomainError(std::string(who) + ": matrix is not square");
  if (m.size() == 0) return;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double res = hermiticity_residual(m);
  if (res > tol * scale)
    throw DomainError(std::string(who) + ": matrix is not Hermitian (residual " + std::to_string(res) + ")");
}

struct EigenSystem {
  RealVector values;  // ascending
  Matrix vectors;     // columns
};

namespace detail {

/// Connected components of the non-zero pattern; eigenproblems split along them.
inline std::vector<std::vector<Eigen::Index>> coupled_blocks(const Matrix& m) {
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> parent(n);
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (m(r, c) != Complex{} || m(c, r) != Complex{}) {
        const auto a = find(r), b = find(c);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
  std::vector<std::vector<Eigen::Index>> groups;
  std::vector<Eigen::Index> slot(n, -1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<Eigen::Index>(groups.size());
      groups.emplace_back();
    }
    groups[slot[root]].push_back(i);
  }
  return groups;
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix (ascending). The matrix is split
/// into decoupled blocks first; each block goes to Eigen's self-adjoint solver.
inline EigenSystem hermitian_eig(const Matrix& m, bool with_vectors = true) {
  require_hermitian(m, "hermitian_eig");
  const Eigen::Index n = m.rows();
  const Matrix h = 0.5 * (m + m.adjoint());
  const auto blocks = detail::coupled_blocks(h);

  std::vector<std::pair<double, Eigen::Index>> order;  // (value, column in staging)
  RealVector vals(n);
  Matrix staged = with_vectors ? Matrix::Zero(n, n) : Matrix();
  Eigen::Index col = 0;
  for (const auto& idx : blocks) {
    const auto bs = static_cast<Eigen::Index>(idx.size());
    Matrix sub(bs, bs);
    for (Eigen::Index i = 0; i < bs; ++i)
      for (Eigen::Index j = 0; j < bs; ++j) sub(i, j) = h(idx[i], idx[j]);
    Eigen::SelfAdjointEigenSolver<Matrix> es(sub, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < bs; ++k) {
      vals(col) = es.eigenvalues()(k);
      if (with_vectors)
        for (Eigen::Index i = 0; i < bs; ++i) staged(idx[i], col) = es.eigenvectors()(i, k);
      order.emplace_back(vals(col), col);
      ++col;
    }
  }
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  EigenSystem out;
  out.values.resize(n);
  if (with_vectors) out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = order[k].first;
    if (with_vectors) out.vectors.col(k) = staged.col(order[k].second);
  }
  return out;
}

inline EigenSystem hermitian_eig(const DenseOperator& m, bool with_vectors = true) {
  return hermitian_eig(m.mat, with_vectors);
}

inline RealVector hermitian_eigenvalues(const Matrix& m) { return hermitian_eig(m, false).values; }

struct JacobiOptions {
  double off_threshold = 1e-12;
  int max_sweeps = 100;
};

/// Cyclic Jacobi eigensolver for complex Hermitian matrices.
inline EigenSystem jacobi_eigh(const Matrix& m, JacobiOptions opt = {}) {
  require_hermitian(m, "jacobi_eigh");
  const Eigen::Index n = m.rows();
  if (n > 4096) throw ResourceError("jacobi_eigh: dimension above 4096");
  Matrix a = 0.5 * (m + m.adjoint());
  Matrix v = Matrix::Identity(n, n);
  const double scale = std::max(1.0, a.norm());

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r)
        if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < opt.max_sweeps && off_norm() > opt.off_threshold * scale; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double r = std::abs(a(p, q));
        if (r < 1e-300) continue;
        const Complex phase = a(p, q) / r;  // e^{i phi}
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G acts on span(p,q): G_pp = c, G_pq = s, G_qp = -s e^{-i phi}, G_qq = c e^{-i phi}
        const Complex gpp = c, gpq = s, gqp = -s * std::conj(phase), gqq = c * std::conj(phase);
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex aip = a(i, p), aiq = a(i, q);
          a(i, p) = aip * gpp + aiq * gqp;
          a(i, q) = aip * gpq + aiq * gqq;
        }
        for (Eigen::Index j = 0; j < n; ++j) {
          const Complex apj = a(p, j), aqj = a(q, j);
          a(p, j) = std::conj(gpp) * apj + std::conj(gqp) * aqj;
          a(q, j) = std::conj(gpq) * apj + std::conj(gqq) * aqj;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index i = 0; i < n; ++i) {
          const Complex vip = v(i, p), viq = v(i, q);
          v(i, p) = vip * gpp + viq * gqp;
          v(i, q) = vip * gpq + viq * gqq;
        }
      }
  }
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](auto x, auto y) { return a(x, x).real() < a(y, y).real(); });
  EigenSystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(idx[k], idx[k]).real();
    out.vectors.col(k) = v.col(idx[k]);
  }
  return out;
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
inline double trace_norm(const Matrix& m) { return hermitian_eigenvalues(m).cwiseAbs().sum(); }
inline double trace_norm(const DenseOperator& m) { return trace_norm(m.mat); }

/// Largest singular value.
inline double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const RealVector ev = hermitian_eigenvalues(m.adjoint() * m);
  return std::sqrt(std::max(0.0, ev.maxCoeff()));
}
inline double operator_norm(const DenseOperator& m) { return operator_norm(m.mat); }

inline constexpr double kPositivityTol = 1e-10;

struct StateValidity {
  bool trace_ok = false;
  bool positive_ok = false;
  bool parity_ok = false;
  bool hermitian_ok = false;
  double min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  double parity_residual = 0.0;

  bool ok() const { return trace_ok && positive_ok && parity_ok && hermitian_ok; }
};

inline StateValidity check_state(const DenseOperator& m) {
  StateValidity v;
  v.trace_ok = std::abs(m.trace() - Complex(1.0, 0.0)) <= 1e-9;
  v.hermitian_ok = hermiticity_residual(m.mat) <= 1e-10;
  for (Eigen::Index c = 0; c < m.dim(); ++c)
    for (Eigen::Index r = 0; r < m.dim(); ++r)
      if (global_parity(r) != global_parity(c)) v.parity_residual = std::max(v.parity_residual, std::abs(m.mat(r, c)));
  // [M, P] has entries 2 M_rc on parity-changing positions
  v.parity_ok = 2.0 * v.parity_residual <= 1e-10;
  if (v.hermitian_ok) {
    v.min_eigenvalue = hermitian_eigenvalues(m.mat).minCoeff();
    v.positive_ok = v.min_eigenvalue >= -kPositivityTol;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Fixture format: first line "dim", then one row per line of interleaved re/im values.

inline std::string matrix_to_text(const Matrix& m) {
  std::ostringstream os;
  os << std::setprecision(17) << m.rows() << '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << m(r, c).real() << ' ' << m(r, c).imag();
    }
    os << '\n';
  }
  return os.str();
}

inline Matrix matrix_from_text(const std::string& text) {
  std::istringstream in(text);
  long dim = 0;
  if (!(in >> dim) || dim <= 0) throw DomainError("matrix fixture: missing or invalid dimension header");
  Matrix m(dim, dim);
  for (long r = 0; r < dim; ++r)
    for (long c = 0; c < dim; ++c) {
      double re = 0, im = 0;
      if (!(in >> re >> im)) throw DomainError("matrix fixture: truncated at row " + std::to_string(r));
      m(r, c) = Complex(re, im);
    }
  return m;
}

inline DenseOperator dense_from_text(const std::string& text, const SystemShape& shape) {
  return {shape, matrix_from_text(text)};
}

}  // namespace fermicert
