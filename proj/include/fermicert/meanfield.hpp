// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file meanfield.hpp
 * @brief Permutation-invariant k-body Hamiltonians, exact ground states, the
 *        best i.i.d. mode product state, and the resulting mean-field gap
 *        certificate.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "fermicert/cumulants.hpp"
#include "fermicert/definetti.hpp"

namespace fermicert {

using SiteTuple = std::vector<int>;  // 1-based, distinct; site t of the template goes to tuple[t-1]

/// All ascending k-subsets of {1..V}, lexicographic.
inline std::vector<SiteTuple> all_k_subsets(int sites, int k) {
  if (k < 1 || k > sites) throw DomainError("all_k_subsets: need 1 <= k <= V");
  std::vector<SiteTuple> out;
  SiteTuple cur(k);
  std::iota(cur.begin(), cur.end(), 1);
  for (;;) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == sites - k + i + 1) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

struct HamiltonianSpec {
  SystemShape shape{2, 1};
  int k = 1;
  std::vector<SiteTuple> subsets;     // empty is an error
  OperatorExpansion term_template{SystemShape(1, 1)};  // on SystemShape(k, p)
  bool rescale = false;               // divide an over-norm template instead of rejecting it
};

struct NormalizedTemplate {
  OperatorExpansion term;
  double norm = 0.0;    // of the template as given
  double factor = 1.0;  // applied rescaling
};

inline constexpr double kNormTol = 1e-9;

inline NormalizedTemplate normalize_template(const HamiltonianSpec& spec) {
  const auto& ts = spec.term_template.shape();
  if (ts.sites != spec.k || ts.modes_per_site != spec.shape.modes_per_site)
    throw DomainError("hamiltonian: template shape " + ts.str() + " does not match k=" + std::to_string(spec.k) +
                      ", p=" + std::to_string(spec.shape.modes_per_site));
  const Matrix t = to_matrix(spec.term_template).mat;
  if (hermiticity_residual(t) > 1e-10) throw DomainError("hamiltonian: template is not Hermitian");
  NormalizedTemplate out{spec.term_template, operator_norm(t), 1.0};
  if (out.norm > 1.0 + kNormTol) {
    if (!spec.rescale)
      throw DomainError("hamiltonian: template norm " + VerificationReport::format_number(out.norm) + " exceeds 1");
    out.factor = 1.0 / out.norm;
    out.term = Complex(out.factor) * out.term;
  }
  return out;
}

/// Moves a template word to the sites of `tuple`, reordering into canonical form.
inline std::pair<int, MajoranaWord> transplant_word(MajoranaWord w, const SystemShape& from, const SystemShape& to,
                                                    const SiteTuple& tuple) {
  std::vector<ModeIndex> seq;
  for (const auto& m : w.indices(from)) seq.push_back({tuple[m.site - 1], m.majorana});
  return canonicalize(seq, to);
}

/// (1/|S|) sum_S H_S as a Majorana expansion.
inline OperatorExpansion hamiltonian_expansion(const HamiltonianSpec& spec, double* factor = nullptr) {
  if (spec.subsets.empty()) throw DomainError("hamiltonian: no subsets");
  for (const auto& s : spec.subsets) {
    if (static_cast<int>(s.size()) != spec.k) throw DomainError("hamiltonian: subset size differs from k");
    SiteTuple sorted = s;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 1 ||
        sorted.back() > spec.shape.sites)
      throw DomainError("hamiltonian: subset sites must be distinct and within 1..V");
  }
  const auto nt = normalize_template(spec);
  if (factor) *factor = nt.factor;
  OperatorExpansion h(spec.shape);
  const double w = 1.0 / static_cast<double>(spec.subsets.size());
  for (const auto& s : spec.subsets)
    for (const auto& [word, c] : nt.term.terms()) {
      const auto [sign, moved] = transplant_word(word, nt.term.shape(), spec.shape, s);
      h.add_term(moved, c * (w * sign));
    }
  return h;
}

inline DenseOperator build_hamiltonian(const HamiltonianSpec& spec) {
  auto h = to_matrix(hamiltonian_expansion(spec));
  const double res = hermiticity_residual(h.mat);
  if (res > 1e-10) throw DomainError("hamiltonian: result not Hermitian (residual " + std::to_string(res) + ")");
  h.mat = 0.5 * (h.mat + h.mat.adjoint()).eval();
  return h;
}

struct GroundState {
  double energy = 0.0;
  DenseOperator rho;
  int degeneracy = 0;
};

inline constexpr double kDegeneracyTol = 1e-9;

/// Lowest eigenvalue; the state is the normalized projector onto the ground space.
inline GroundState ground_state(const DenseOperator& h, double degeneracy_tol = kDegeneracyTol) {
  require_hermitian(h.mat, "ground_state");
  const auto es = hermitian_eig(h.mat);
  GroundState out;
  out.energy = es.values.minCoeff();
  Matrix proj = Matrix::Zero(h.dim(), h.dim());
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) <= out.energy + degeneracy_tol) {
      proj += es.vectors.col(i) * es.vectors.col(i).adjoint();
      ++out.degeneracy;
    }
  out.rho = DenseOperator(h.shape, proj / static_cast<double>(out.degeneracy));
  return out;
}

struct ProductEnergyOptions {
  int restarts = 8;
  int iters = 400;
  std::uint64_t seed = 1;
  double tol = 1e-13;  // stop once an accepted step improves by less
};

struct ProductEnergy {
  Matrix xi;
  double energy = std::numeric_limits<double>::infinity();
  int best_restart = 0;
};

namespace detail {

/// Minimizes Re tr(X xi^{(x)k}) over even xi = BB^dag / tr(BB^dag) by
/// gradient descent in B with backtracking.
inline ProductEnergy minimize_product_energy(const std::vector<MatrixEntry>& x, int k, int p,
                                             const ProductEnergyOptions& opt) {
  if (opt.restarts < 1) throw DomainError("min_product_energy: restarts must be positive");
  auto energy = [&](const Matrix& b) { return product_trace(x, state_from_factor(b), k, p).real(); };
  ProductEnergy best;
  const Eigen::Index d = Eigen::Index{1} << p;
  for (int restart = 0; restart < opt.restarts; ++restart) {
    std::seed_seq seq{opt.seed, static_cast<std::uint64_t>(restart)};
    Rng rng(seq);
    Matrix b = restart == 0 ? Matrix(Matrix::Identity(d, d) / std::sqrt(static_cast<double>(d)))
                            : random_factor(p, rng);
    double e = energy(b);
    double step = 1.0;
    for (int t = 0; t < opt.iters; ++t) {
      const Matrix xi = state_from_factor(b);
      const Matrix grad = factor_gradient(environment_sum(x, xi, k, p), b);
      const double gn2 = grad.squaredNorm();
      if (gn2 < 1e-30) break;
      auto move = [&](double h) {
        Matrix trial = b - h * grad;
        normalize_factor(trial);
        return std::pair{trial, energy(trial)};
      };
      step = std::min(1.0, 2.0 * step);
      int bt = 0;
      auto [trial, et] = move(step);
      while (et > e - 1e-4 * step * gn2 && ++bt < 40) std::tie(trial, et) = move(step *= 0.5);
      const bool accepted = bt < 40;
      // keep halving while it still helps; the B-parametrization overshoots near pure states
      while (accepted) {
        auto [t2, e2] = move(0.5 * step);
        if (e2 >= et) break;
        step *= 0.5;
        trial = std::move(t2);
        et = e2;
      }
      if (accepted) {
        if (e - et < opt.tol) t = opt.iters;
        b = std::move(trial);
        e = et;
      }
      if (!accepted) break;
    }
    if (e < best.energy) {
      best.energy = e;
      best.xi = state_from_factor(b);
      best.best_restart = restart;
    }
  }
  return best;
}

}  // namespace detail

/// min over even xi of tr(H xi^{(x)V}), working on the full operator.
inline ProductEnergy min_product_energy(const DenseOperator& h, const ProductEnergyOptions& opt = {}) {
  require_hermitian(h.mat, "min_product_energy");
  return detail::minimize_product_energy(detail::nonzero_entries(h.mat), h.shape.sites, h.shape.modes_per_site, opt);
}

/// Same minimum through the template alone: for even xi every H_S has the
/// expectation tr(T xi^{(x)k}).
inline ProductEnergy min_product_energy(const HamiltonianSpec& spec, const ProductEnergyOptions& opt = {}) {
  const auto nt = normalize_template(spec);
  return detail::minimize_product_energy(detail::nonzero_entries(to_matrix(nt.term).mat), spec.k,
                                         spec.shape.modes_per_site, opt);
}

/// tr(H xi^{(x)V}) on the full operator.
inline double product_energy(const DenseOperator& h, const Matrix& xi) {
  return detail::product_trace(detail::nonzero_entries(h.mat), xi, h.shape.sites, h.shape.modes_per_site).real();
}

/// tr(H sum_l a_l xi_l^{(x)V}), by linearity.
inline double mixture_energy(const DenseOperator& h, const ProductMixture& mix) {
  const auto x = detail::nonzero_entries(h.mat);
  double e = 0.0;
  for (std::size_t l = 0; l < mix.size(); ++l)
    if (mix.weights[l] != 0.0)
      e += mix.weights[l] *
           detail::product_trace(x, mix.components[l].matrix(), h.shape.sites, h.shape.modes_per_site).real();
  return e;
}

/// Largest |K_4| over all ladder 4-tuples of a single-site state; zero for Gaussian states.
inline double fourth_cumulant_defect(const Matrix& xi) {
  const int p = std::countr_zero(static_cast<std::uint64_t>(xi.rows()));
  const DenseOperator rho(SystemShape(1, p), xi);
  std::vector<LadderIndex> all;
  for (int a = 1; a <= p; ++a)
    for (int c : {kCreate, kAnnihilate}) all.push_back(LadderIndex::real(c, 1, a));
  const int n = static_cast<int>(all.size());
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) worst = std::max(worst, std::abs(cumulant(rho, {all[i], all[j], all[l], all[m]})));
  return worst;
}

/// 2^{2p} k^{3/2} / V
inline double gs_bound(int sites, int p, int k) {
  return std::ldexp(1.0, 2 * p) * std::pow(static_cast<double>(k), 1.5) / static_cast<double>(sites);
}

struct GsBoundOptions {
  ProductEnergyOptions product{};
  InvarianceOptions invariance{};
  double invariance_tol = 1e-8;
  double tol = 1e-6;
  int retry_factor = 4;  // restarts multiplier for the second attempt after a failure
};

struct MeanFieldResult {
  double e_product_min = 0.0;
  double e_product_full = 0.0;  // same xi evaluated on the full operator
  double e_ground = 0.0;
  double gap = 0.0;
  double bound = 0.0;
  double composite = 0.0;  // Theorem-1 route: lemma3 + spin term at this k
  int degeneracy = 0;
  double rescale_factor = 1.0;
  bool precondition_ok = true;
  bool pass = false;
  std::string label;
  Matrix xi;
  VerificationReport report;
};

inline MeanFieldResult verify_gs_bound(const HamiltonianSpec& spec, const GsBoundOptions& opt = {}) {
  MeanFieldResult out;
  auto& rep = out.report;
  ReportTimer timer(rep);
  rep.claim = "gs-bound";
  const int v = spec.shape.sites, p = spec.shape.modes_per_site, k = spec.k;
  rep.add_input("V", v);
  rep.add_input("p", p);
  rep.add_input("k", k);
  rep.add_input("subsets", static_cast<int>(spec.subsets.size()));
  rep.add_input("restarts", opt.product.restarts);
  rep.add_input("iters", opt.product.iters);
  rep.add_input("seed", std::to_string(opt.product.seed));

  double factor = 1.0;
  const auto h = to_matrix(hamiltonian_expansion(spec, &factor));
  out.rescale_factor = factor;
  if (factor != 1.0) rep.notes.push_back("template rescaled by " + VerificationReport::format_number(factor));
  const auto gs = ground_state(h);
  out.e_ground = gs.energy;
  out.degeneracy = gs.degeneracy;
  if (gs.degeneracy > 1) rep.notes.push_back("ground space degeneracy " + std::to_string(gs.degeneracy));

  auto inv_opt = opt.invariance;
  inv_opt.tol = opt.invariance_tol;
  const auto inv = check_invariance(gs.rho, inv_opt);
  out.precondition_ok = inv.invariant(opt.invariance_tol);

  auto attempt = [&](const ProductEnergyOptions& po) {
    const auto pe = min_product_energy(spec, po);
    out.e_product_min = pe.energy;
    out.xi = pe.xi;
    out.e_product_full = product_energy(h, pe.xi);
    out.gap = out.e_product_min - out.e_ground;
  };
  attempt(opt.product);
  out.bound = gs_bound(v, p, k);
  out.composite = k < v ? theorem1_bound(v, p, k) : std::numeric_limits<double>::infinity();
  auto certified = [&] { return out.gap >= -kBoundTol && out.gap <= out.bound + opt.tol; };
  if (!certified()) {
    auto po = opt.product;
    po.restarts *= opt.retry_factor;
    po.seed += 1;
    attempt(po);
    rep.notes.push_back("retried with " + std::to_string(po.restarts) + " restarts");
  }

  rep.lhs = out.gap;
  rep.rhs = out.bound;
  rep.tolerance = opt.tol;
  rep.relation = Relation::LessEqual;
  rep.decide();
  if (out.gap < -kBoundTol) {
    rep.pass = false;
    rep.notes.push_back("negative gap: product energy below the ground energy");
  }
  const double route_gap = std::abs(out.e_product_full - out.e_product_min);
  if (route_gap > 1e-9) {
    rep.pass = false;
    rep.notes.push_back("template and full-operator product energies differ by " +
                        VerificationReport::format_number(route_gap));
  }
  rep.notes.push_back("E_GS " + VerificationReport::format_number(out.e_ground) + ", min product energy " +
                      VerificationReport::format_number(out.e_product_min));
  rep.notes.push_back("composite via theorem1 distance " + VerificationReport::format_number(out.composite));
  if (!out.precondition_ok) {
    rep.pass = false;
    out.label = "precondition failed";
    rep.notes.push_back("precondition failed: ground state not permutation invariant (violation " +
                        VerificationReport::format_number(std::max(inv.condition1_max_violation,
                                                                   inv.condition2_max_violation)) +
                        ")");
  } else {
    out.label = rep.pass ? "certified" : "bound violated";
  }
  out.pass = rep.pass;
  return out;
}

// ---------------------------------------------------------------------------
// Hamiltonian families

/// 1 - 2 f^dag f on one site of one mode.
inline OperatorExpansion onsite_template() {
  // f^dag f = (1 + i m^1 m^2)/2
  return OperatorExpansion::word(SystemShape(1, 1), {{1, 1}, {1, 2}}, Complex(0.0, -1.0));
}

/// Dense two-site operator turned back into an expansion.
inline OperatorExpansion template_from_dense(const SystemShape& s, const SparseMatrix& m) {
  return to_expansion(DenseOperator(s, Matrix(m)));
}

/// f_1^dag f_2 + f_2^dag f_1 on two sites of one mode.
inline OperatorExpansion hopping_template() {
  const SystemShape s(2, 1);
  const SparseMatrix h = ladder_operator(s, kCreate, 1, 1) * ladder_operator(s, kAnnihilate, 2, 1) +
                         ladder_operator(s, kCreate, 2, 1) * ladder_operator(s, kAnnihilate, 1, 1);
  return template_from_dense(s, h);
}

/// i m_1^1 m_2^1 on two sites of one mode.
inline OperatorExpansion majorana_pair_template() {
  return OperatorExpansion::word(SystemShape(2, 1), {{1, 1}, {2, 1}}, Complex(0.0, 1.0));
}

struct HubbardParams {
  double u = 1.0;
  double hop = 1.0;
  double exchange = 1.0;
};

/// Two sites, modes up = 1 and down = 2: U sum_j (n_up - 1/2)(n_dn - 1/2)
/// - t sum_s (f_1s^dag f_2s + h.c.) + J S_1 . S_2. Not normalized.
inline OperatorExpansion hubbard_template(const HubbardParams& hp = {}) {
  const SystemShape s(2, 2);
  auto c = [&](int site, int mode) { return ladder_operator(s, kCreate, site, mode); };
  auto a = [&](int site, int mode) { return ladder_operator(s, kAnnihilate, site, mode); };
  const auto dim = static_cast<Eigen::Index>(s.fock_dim());
  SparseMatrix id(dim, dim);
  id.setIdentity();
  SparseMatrix h(dim, dim);
  for (int j = 1; j <= 2; ++j) h += hp.u * ((c(j, 1) * a(j, 1) - 0.5 * id) * (c(j, 2) * a(j, 2) - 0.5 * id));
  for (int m = 1; m <= 2; ++m) h += -hp.hop * (c(1, m) * a(2, m) + c(2, m) * a(1, m));
  // S^z = (n_up - n_dn)/2, S^+ = f_up^dag f_dn
  auto sz = [&](int j) { return SparseMatrix(0.5 * (c(j, 1) * a(j, 1) - c(j, 2) * a(j, 2))); };
  auto sp = [&](int j) { return SparseMatrix(c(j, 1) * a(j, 2)); };
  auto sm = [&](int j) { return SparseMatrix(c(j, 2) * a(j, 1)); };
  h += hp.exchange * (sz(1) * sz(2) + 0.5 * (sp(1) * sm(2) + sm(1) * sp(2)));
  return template_from_dense(s, h);
}

}  // namespace fermicert
