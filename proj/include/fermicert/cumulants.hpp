// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cumulants.hpp
 * @brief Ladder-operator moments and cumulants, Fourier modes of product
 *        states, the closed-form cumulant of i.i.d. copies, and the Gaussian
 *        deviation of Fourier moments for reductions of invariant states.
 *
 * Convention: c = +1 is an annihilator f, c = -1 a creator f^dagger, and
 * a_q^c = V^{-1/2} sum_{j=1..V} exp(2 pi i c q j / V) f_j^c.
 */

#pragma once

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "fermicert/definetti.hpp"

namespace fermicert {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor, std::int64_t>;

inline constexpr int kAnnihilate = +1;
inline constexpr int kCreate = -1;

/// One ladder operator. `site` addresses real-space operators, `q` Fourier modes.
struct LadderIndex {
  int c = kAnnihilate;
  int site = 1;
  int mode = 1;
  int q = 0;

  static LadderIndex real(int c, int site, int mode) { return {c, site, mode, 0}; }
  static LadderIndex fourier(int c, int q, int mode) { return {c, 1, mode, q}; }
};

inline int fourier_q_min(int v) { return -((v - 1) / 2); }
inline int fourier_q_max(int v) { return v / 2; }

// ---------------------------------------------------------------------------
// Even partitions

struct EvenPartition {
  std::vector<std::vector<int>> blocks;  // 1-based, increasing, ordered by least element
};

/// All partitions of {1..w} into blocks of even size.
inline std::vector<EvenPartition> even_partitions(int w) {
  if (w < 2 || w % 2 != 0) throw DomainError("even_partitions: w must be even and at least 2");
  std::vector<EvenPartition> out;
  std::vector<std::vector<int>> current;
  std::function<void(std::vector<int>)> rec = [&](std::vector<int> rest) {
    if (rest.empty()) {
      out.push_back({current});
      return;
    }
    const int head = rest.front();
    const int m = static_cast<int>(rest.size()) - 1;
    // choose an odd number of companions for the least element
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      if (std::popcount(mask) % 2 == 0) continue;
      std::vector<int> block{head}, remaining;
      for (int i = 0; i < m; ++i) ((mask >> i) & 1u ? block : remaining).push_back(rest[i + 1]);
      current.push_back(block);
      rec(remaining);
      current.pop_back();
    }
  };
  std::vector<int> all(w);
  std::iota(all.begin(), all.end(), 1);
  rec(all);
  return out;
}

/// Sign of the permutation that sorts the concatenated blocks.
inline int partition_sign(const EvenPartition& p) {
  std::vector<int> seq;
  for (const auto& b : p.blocks) seq.insert(seq.end(), b.begin(), b.end());
  int inversions = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j) inversions += seq[i] > seq[j];
  return inversions % 2 ? -1 : 1;
}

// ---------------------------------------------------------------------------
// Operators

namespace detail {

inline void add_word_triplets(std::vector<Eigen::Triplet<Complex, std::int64_t>>& out, MajoranaWord w, Complex coeff,
                              const SystemShape& shape) {
  const auto dim = static_cast<std::int64_t>(shape.fock_dim());
  for (std::int64_t col = 0; col < dim; ++col) {
    auto [row, v] = jw_column(w, static_cast<std::uint64_t>(col), shape.num_modes());
    out.emplace_back(static_cast<std::int64_t>(row), col, coeff * v);
  }
}

inline SparseMatrix from_triplets(const SystemShape& shape, const std::vector<Eigen::Triplet<Complex, std::int64_t>>& t) {
  const auto dim = static_cast<std::int64_t>(shape.fock_dim());
  SparseMatrix m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  m.prune(Complex{}, 0.0);
  return m;
}

inline void check_ladder(const SystemShape& shape, int c, int site, int mode) {
  if (c != kAnnihilate && c != kCreate) throw DomainError("ladder index: c must be +1 or -1");
  if (site < 1 || site > shape.sites || mode < 1 || mode > shape.modes_per_site)
    throw DomainError("ladder index: site or mode out of range for " + shape.str());
}

/// (m^{2a-1} + i c m^{2a}) / 2 with the Majoranas of `site`, scaled by `coeff`.
inline void add_ladder_triplets(std::vector<Eigen::Triplet<Complex, std::int64_t>>& out, const SystemShape& shape,
                                int c, int site, int mode, Complex coeff) {
  add_word_triplets(out, make_word({{site, 2 * mode - 1}}, shape), 0.5 * coeff, shape);
  add_word_triplets(out, make_word({{site, 2 * mode}}, shape), Complex(0.0, 0.5 * c) * coeff, shape);
}

}  // namespace detail

/// f_{site,mode} (c = +1) or its adjoint (c = -1) as a sparse Fock-space matrix.
inline SparseMatrix ladder_operator(const SystemShape& shape, int c, int site, int mode) {
  detail::check_ladder(shape, c, site, mode);
  std::vector<Eigen::Triplet<Complex, std::int64_t>> t;
  detail::add_ladder_triplets(t, shape, c, site, mode, 1.0);
  return detail::from_triplets(shape, t);
}

/// a_q^c for mode `mode` on V = shape.sites sites.
inline SparseMatrix fourier_mode(const SystemShape& shape, int c, int q, int mode) {
  detail::check_ladder(shape, c, 1, mode);
  const int v = shape.sites;
  if (q < fourier_q_min(v) || q > fourier_q_max(v))
    throw DomainError("fourier_mode: q=" + std::to_string(q) + " outside [" + std::to_string(fourier_q_min(v)) + ", " +
                      std::to_string(fourier_q_max(v)) + "]");
  std::vector<Eigen::Triplet<Complex, std::int64_t>> t;
  const double norm = 1.0 / std::sqrt(static_cast<double>(v));
  for (int j = 1; j <= v; ++j) {
    const double phase = 2.0 * std::numbers::pi * c * q * j / v;
    detail::add_ladder_triplets(t, shape, c, j, mode, norm * std::polar(1.0, phase));
  }
  return detail::from_triplets(shape, t);
}

inline SparseMatrix ladder_operator(const SystemShape& shape, const LadderIndex& x) {
  return ladder_operator(shape, x.c, x.site, x.mode);
}

/// tr(rho X) for sparse X.
inline Complex trace_product(const DenseOperator& rho, const SparseMatrix& x) {
  Complex acc{};
  for (std::int64_t col = 0; col < x.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(x, col); it; ++it) acc += rho.mat(col, it.row()) * it.value();
  return acc;
}

/// tr(rho O_1 ... O_w).
inline Complex moment(const DenseOperator& rho, const std::vector<SparseMatrix>& ops) {
  if (ops.empty()) return rho.trace();
  SparseMatrix prod = ops.front();
  for (std::size_t i = 1; i < ops.size(); ++i) prod = (prod * ops[i]).pruned();
  return trace_product(rho, prod);
}

inline Complex moment(const DenseOperator& rho, const std::vector<LadderIndex>& ops) {
  std::vector<SparseMatrix> mats;
  for (const auto& x : ops) mats.push_back(ladder_operator(rho.shape, x));
  return moment(rho, mats);
}

namespace detail {

/// Cumulants of every even sub-sequence, indexed by position bitmask, from the
/// recursion m(S) = sum_{B containing min S} sigma(B, S\B) K(B) m(S\B).
template <class Moment>
std::vector<Complex> cumulant_table(int w, Moment&& moment_of) {
  const std::uint32_t full = (1u << w) - 1;
  std::vector<Complex> m(full + 1), k(full + 1);
  for (std::uint32_t s = 0; s <= full; ++s)
    if (std::popcount(s) % 2 == 0) m[s] = s ? moment_of(s) : Complex(1.0);
  auto split_sign = [](std::uint32_t b, std::uint32_t rest) {
    int inv = 0;
    for (std::uint32_t x = b; x; x &= x - 1) inv += std::popcount(rest & ((x & -x) - 1));
    return inv % 2 ? -1.0 : 1.0;
  };
  std::vector<std::uint32_t> order;
  for (std::uint32_t s = 1; s <= full; ++s)
    if (std::popcount(s) % 2 == 0) order.push_back(s);
  std::stable_sort(order.begin(), order.end(), [](auto a, auto b) { return std::popcount(a) < std::popcount(b); });
  for (const auto s : order) {
    const std::uint32_t low = s & -s;
    const std::uint32_t others = s & ~low;
    Complex acc = m[s];
    // proper sub-blocks B = low | t with t a subset of the other elements, |B| even, B != S
    for (std::uint32_t t = others;; t = (t - 1) & others) {
      const std::uint32_t b = low | t;
      if (b != s && std::popcount(b) % 2 == 0) acc -= split_sign(b, s & ~b) * k[b] * m[s & ~b];
      if (t == 0) break;
    }
    k[s] = acc;
  }
  return k;
}

}  // namespace detail

/// K_w(O_1, ..., O_w) for an even number of operators.
inline Complex cumulant(const DenseOperator& rho, const std::vector<SparseMatrix>& ops) {
  const int w = static_cast<int>(ops.size());
  if (w == 0 || w % 2 != 0) throw DomainError("cumulant: need an even, non-zero number of operators");
  if (w > 16) throw DomainError("cumulant: at most 16 operators");
  const auto k = detail::cumulant_table(w, [&](std::uint32_t s) {
    std::vector<SparseMatrix> sub;
    for (int i = 0; i < w; ++i)
      if ((s >> i) & 1u) sub.push_back(ops[i]);
    return moment(rho, sub);
  });
  return k[(1u << w) - 1];
}

inline Complex cumulant(const DenseOperator& rho, const std::vector<LadderIndex>& ops) {
  std::vector<SparseMatrix> mats;
  for (const auto& x : ops) mats.push_back(ladder_operator(rho.shape, x));
  return cumulant(rho, mats);
}

// ---------------------------------------------------------------------------
// Copies of a single-site state

/// rho^{(x)V} for a single-site state given as a dense operator on one site.
inline DenseOperator tensor_power(const DenseOperator& single, int v) {
  if (single.shape.sites != 1) throw DomainError("tensor_power: expected a single-site operator");
  if (v < 1) throw DomainError("tensor_power: V must be positive");
  const SystemShape shape(v, single.shape.modes_per_site);
  (void)shape.fock_dim();
  Matrix out = single.mat;
  for (int i = 1; i < v; ++i) out = kron(out, single.mat);
  return {shape, std::move(out)};
}

/// xi^{(x)V} as an expansion, built site by site so no 2^{pV} matrix is needed.
/// Requires an even single-site state; words of different sites then commute.
inline OperatorExpansion product_state_expansion(const DenseOperator& single, int v) {
  if (single.shape.sites != 1) throw DomainError("product_state_expansion: expected a single-site operator");
  if (!check_state(single).ok()) throw DomainError("product_state_expansion: single-site input is not an even state");
  const int p = single.shape.modes_per_site;
  const SystemShape shape(v, p);
  const auto xi = to_expansion(single);
  auto rho = OperatorExpansion::scalar(shape, 1.0);
  for (int j = 1; j <= v; ++j) {
    OperatorExpansion placed(shape);
    for (const auto& [w, c] : xi.terms()) placed.add_term(MajoranaWord{w.bits << (2 * p * (j - 1))}, c);
    rho = multiply(rho, placed);
  }
  return rho;
}

/// Exact sum_{j=1..V} exp(2 pi i j s / V) with s = sum_l c_l q_l: V on resonance, else 0.
inline double fourier_phase_sum(int v, const std::vector<LadderIndex>& ops) {
  long long s = 0;
  for (const auto& x : ops) s += static_cast<long long>(x.c) * x.q;
  return (((s % v) + v) % v == 0) ? static_cast<double>(v) : 0.0;
}

inline bool distinct_triples(const std::vector<LadderIndex>& ops) {
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i + 1; j < ops.size(); ++j)
      if (ops[i].c == ops[j].c && ops[i].mode == ops[j].mode && ops[i].q == ops[j].q) return false;
  return true;
}

struct FourierCumulant {
  std::optional<Complex> direct;  // cumulant of rho^{(x)V} in the Fourier modes
  Complex closed_form{};          // V^{-w/2} K_w^rho(f_1 ops) * phase sum
  Complex single_site{};          // K_w^rho(f_1 ops)
  bool skipped = false;           // distinct-triples precondition violated
  std::string note;
};

/// Closed form for the Fourier cumulant of V copies of a single-site state.
inline FourierCumulant fourier_cumulant_closed(const DenseOperator& single, int v, const std::vector<LadderIndex>& ops) {
  FourierCumulant out;
  std::vector<LadderIndex> local;
  for (const auto& x : ops) {
    if (x.q < fourier_q_min(v) || x.q > fourier_q_max(v))
      throw DomainError("fourier_cumulant: q=" + std::to_string(x.q) + " out of range for V=" + std::to_string(v));
    local.push_back(LadderIndex::real(x.c, 1, x.mode));
  }
  out.single_site = cumulant(single, local);
  const double w = static_cast<double>(ops.size());
  out.closed_form = std::pow(static_cast<double>(v), -w / 2.0) * out.single_site * fourier_phase_sum(v, ops);
  return out;
}

/// Direct cumulant of rho^{(x)V} in Fourier modes next to the closed form. Inputs
/// with repeated (c, mode, q) triples are skipped with a note.
inline FourierCumulant fourier_cumulant(const DenseOperator& single, int v, const std::vector<LadderIndex>& ops,
                                        bool direct = true) {
  if (!distinct_triples(ops)) {
    FourierCumulant out;
    out.skipped = true;
    out.note = "skipped: (c, mode, q) triples are not distinct";
    return out;
  }
  auto out = fourier_cumulant_closed(single, v, ops);
  if (direct) {
    const auto power = tensor_power(single, v);
    std::vector<SparseMatrix> mats;
    for (const auto& x : ops) mats.push_back(fourier_mode(power.shape, x.c, x.q, x.mode));
    out.direct = cumulant(power, mats);
  }
  return out;
}

/// |K_w^{rho^V}(a ops)| <= V^{(2-w)/2} |K_w^rho(f_1 ops)|.
inline VerificationReport verify_suppression(const DenseOperator& single, int v, const std::vector<LadderIndex>& ops,
                                             double tol = kBoundTol) {
  const int w = static_cast<int>(ops.size());
  if (w <= 2) throw DomainError("verify_suppression: requires w > 2");
  VerificationReport rep;
  ReportTimer timer(rep);
  rep.claim = "hudson-w" + std::to_string(w);
  rep.add_input("V", v);
  rep.add_input("p", single.shape.modes_per_site);
  std::string qs;
  for (const auto& x : ops) qs += (qs.empty() ? "" : ";") + std::to_string(x.c) + "," + std::to_string(x.mode) + "," +
                                  std::to_string(x.q);
  rep.add_input("ops", qs);

  bool within_cap = true;
  try {
    (void)SystemShape(v, single.shape.modes_per_site).fock_dim();
  } catch (const ResourceError&) {
    within_cap = false;
  }
  auto fc = fourier_cumulant_closed(single, v, ops);
  if (within_cap) {
    const auto power = tensor_power(single, v);
    std::vector<SparseMatrix> mats;
    for (const auto& x : ops) mats.push_back(fourier_mode(power.shape, x.c, x.q, x.mode));
    fc.direct = cumulant(power, mats);
    rep.notes.push_back("direct vs closed form |diff| = " +
                        VerificationReport::format_number(std::abs(*fc.direct - fc.closed_form)));
  } else {
    rep.notes.push_back("closed form only (mode cap)");
  }
  rep.lhs = std::abs(fc.direct ? *fc.direct : fc.closed_form);
  rep.rhs = std::pow(static_cast<double>(v), (2.0 - w) / 2.0) * std::abs(fc.single_site);
  rep.tolerance = tol;
  rep.relation = Relation::LessEqual;
  if (!distinct_triples(ops)) rep.notes.push_back("(c, mode, q) triples repeat");
  rep.decide();
  return rep;
}

// ---------------------------------------------------------------------------
// Gaussian deviation of Fourier moments

/// Pair partitions of {0..w-1} with their signs.
inline std::vector<std::pair<int, std::vector<std::pair<int, int>>>> pairings(int w) {
  std::vector<std::pair<int, std::vector<std::pair<int, int>>>> out;
  for (const auto& p : even_partitions(w)) {
    bool pairs_only = true;
    for (const auto& b : p.blocks) pairs_only = pairs_only && b.size() == 2;
    if (!pairs_only) continue;
    std::vector<std::pair<int, int>> pr;
    for (const auto& b : p.blocks) pr.emplace_back(b[0] - 1, b[1] - 1);
    out.emplace_back(partition_sign(p), pr);
  }
  return out;
}

struct CorollaryOptions {
  Theorem1Options theorem1{};
  /// Operator patterns (c, mode) of length four; q labels range over all resonant tuples.
  std::vector<std::vector<std::pair<int, int>>> patterns;
  int max_q_tuples = 64;  // per pattern, lexicographic order
};

inline std::vector<std::vector<std::pair<int, int>>> default_corollary_patterns(int p) {
  if (p == 1) return {{{kCreate, 1}, {kAnnihilate, 1}, {kCreate, 1}, {kAnnihilate, 1}}};
  return {{{kCreate, 1}, {kAnnihilate, 1}, {kCreate, 2}, {kAnnihilate, 2}},
          {{kCreate, 1}, {kCreate, 2}, {kAnnihilate, 2}, {kAnnihilate, 1}}};
}

/// Resonant q-tuples (sum_l c_l q_l = 0 mod k) for a pattern, lexicographic, at most `limit`.
inline std::vector<std::vector<LadderIndex>> resonant_fourier_ops(int k, const std::vector<std::pair<int, int>>& pattern,
                                                                  int limit) {
  std::vector<std::vector<LadderIndex>> out;
  const int lo = fourier_q_min(k), hi = fourier_q_max(k);
  std::vector<LadderIndex> cur(pattern.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (static_cast<int>(out.size()) >= limit) return;
    if (i == pattern.size()) {
      if (fourier_phase_sum(k, cur) != 0.0) out.push_back(cur);
      return;
    }
    for (int q = lo; q <= hi; ++q) {
      cur[i] = LadderIndex::fourier(pattern[i].first, q, pattern[i].second);
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

struct CorollaryPoint {
  int k = 0;
  double deviation = 0.0;      // max |m_sigma - sum_l a_l m_l^Gauss| over the sample
  double mixture_distance = 0.0;
  double fourth_cumulant_mass = 0.0;  // max over the sample of sum_l a_l |K_4^{xi_l^k}|
  double scale = 0.0;          // 1/k + k^{3/2}/V
  int samples = 0;
};

/// Fourier moments of the k-site reduction against the Gaussian moments of the
/// de Finetti mixture. Gaussian moments come from second cumulants in closed form.
inline CorollaryPoint corollary_point(const OperatorExpansion& rho, int k, const CorollaryOptions& opt,
                                      MixtureResult* mixture_out = nullptr) {
  const auto cert = verify_theorem1(rho, k, opt.theorem1);
  const auto& mix = cert.approx.mixture;
  const int p = rho.shape().modes_per_site;
  const auto sigma = reduce_to_first_sites(to_matrix(rho), k);
  CorollaryPoint pt;
  pt.k = k;
  pt.mixture_distance = cert.approx.distance;
  pt.scale = 1.0 / k + std::pow(static_cast<double>(k), 1.5) / rho.shape().sites;
  const auto pr = pairings(4);
  const auto patterns = opt.patterns.empty() ? default_corollary_patterns(p) : opt.patterns;
  for (const auto& pattern : patterns)
    for (const auto& ops : resonant_fourier_ops(k, pattern, opt.max_q_tuples)) {
      std::vector<SparseMatrix> mats;
      for (const auto& x : ops) mats.push_back(fourier_mode(sigma.shape, x.c, x.q, x.mode));
      const Complex m_sigma = moment(sigma, mats);
      Complex gauss{};
      double k4_mass = 0.0;
      for (std::size_t l = 0; l < mix.size(); ++l) {
        if (mix.weights[l] == 0.0) continue;
        const DenseOperator xi(SystemShape(1, p), mix.components[l].matrix());
        Complex g{};
        for (const auto& [sign, pairs] : pr) {
          Complex prod = static_cast<double>(sign);
          for (const auto& [a, b] : pairs) prod *= fourier_cumulant_closed(xi, k, {ops[a], ops[b]}).closed_form;
          g += prod;
        }
        gauss += mix.weights[l] * g;
        k4_mass += mix.weights[l] * std::abs(fourier_cumulant_closed(xi, k, ops).closed_form);
      }
      pt.deviation = std::max(pt.deviation, std::abs(m_sigma - gauss));
      pt.fourth_cumulant_mass = std::max(pt.fourth_cumulant_mass, k4_mass);
      ++pt.samples;
    }
  if (mixture_out) *mixture_out = cert.approx;
  return pt;
}

/// Consistency of one corollary point: the deviation cannot exceed the
/// mixture distance plus the fourth-cumulant mass of the mixture (Fourier
/// modes have unit norm). The ratio deviation / (1/k + k^{3/2}/V) is reported.
inline VerificationReport verify_corollary(const OperatorExpansion& rho, int k, const CorollaryOptions& opt = {}) {
  VerificationReport rep;
  ReportTimer timer(rep);
  rep.claim = "corollary";
  rep.add_input("V", rho.shape().sites);
  rep.add_input("p", rho.shape().modes_per_site);
  rep.add_input("k", k);
  const auto pt = corollary_point(rho, k, opt);
  rep.lhs = pt.deviation;
  rep.rhs = pt.mixture_distance + pt.fourth_cumulant_mass;
  rep.tolerance = kBoundTol;
  rep.relation = Relation::LessEqual;
  rep.decide();
  rep.notes.push_back("empirical constant deviation/(1/k + k^1.5/V) = " +
                      VerificationReport::format_number(pt.deviation / pt.scale));
  rep.notes.push_back("samples " + std::to_string(pt.samples) + ", mixture distance " +
                      VerificationReport::format_number(pt.mixture_distance));
  return rep;
}

/// Least-squares slope of log(y) against log(x).
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("log_log_slope: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) return std::numeric_limits<double>::quiet_NaN();
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct CorollarySweep {
  std::vector<CorollaryPoint> points;
  double slope = 0.0;
  VerificationReport report;
};

/// Slope of the deviation across k; passes when it lies within `band` of -1.
inline CorollarySweep verify_corollary_slope(const OperatorExpansion& rho, const std::vector<int>& ks,
                                             const CorollaryOptions& opt = {}, double band = 0.3) {
  CorollarySweep out;
  auto& rep = out.report;
  ReportTimer timer(rep);
  rep.claim = "corollary-slope";
  rep.add_input("V", rho.shape().sites);
  rep.add_input("p", rho.shape().modes_per_site);
  std::string kl;
  for (int k : ks) kl += (kl.empty() ? "" : ";") + std::to_string(k);
  rep.add_input("k", kl);
  std::vector<double> xs, ys;
  for (int k : ks) {
    out.points.push_back(corollary_point(rho, k, opt));
    xs.push_back(k);
    ys.push_back(out.points.back().deviation);
  }
  out.slope = log_log_slope(xs, ys);
  rep.lhs = std::abs(out.slope + 1.0);
  rep.rhs = band;
  rep.tolerance = 0.0;
  rep.relation = Relation::LessEqual;
  rep.decide();
  rep.notes.push_back("slope " + VerificationReport::format_number(out.slope) + " (property-based scaling check)");
  if (!std::isfinite(out.slope)) rep.notes.push_back("deviation vanished at some k; slope undefined");
  return out;
}

}  // namespace fermicert
