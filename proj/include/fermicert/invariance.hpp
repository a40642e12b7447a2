// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file invariance.hpp
 * @brief Permutation invariance of fermionic states, the mu-family example
 *        states, and certification of the anti-symmetry suppression bound.
 *
 * A state is permutation invariant when
 *   (1) tr(rho w) = tr(rho pi(w)) for every word w and every site
 *       permutation pi that keeps the Majoranas of w in increasing order, and
 *   (2) the same holds for all pi when w is even on every site.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "fermicert/fock.hpp"
#include "fermicert/random.hpp"
#include "fermicert/report.hpp"

namespace fermicert {

inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kInvarianceTol = 1e-9;
inline constexpr double kBoundTol = 1e-9;

/// Site-block view of a word: pi(w) is computed by moving whole 2p-bit blocks.
/// Only pairs of occupied sites whose relative order flips contribute a sign.
struct PermutedWord {
  int sign = 1;
  MajoranaWord word;
  bool order_preserving = true;
};

inline PermutedWord permute_word_blocks(const SitePermutation& pi, MajoranaWord w, const SystemShape& shape) {
  const int width = shape.majoranas_per_site();
  const std::uint64_t block_mask = (width == 64) ? ~0ULL : ((1ULL << width) - 1);
  PermutedWord out;
  int inversions = 0;
  int counts[64];
  std::uint64_t blocks[64];
  for (int j = 0; j < shape.sites; ++j) {
    blocks[j] = (w.bits >> (j * width)) & block_mask;
    counts[j] = std::popcount(blocks[j]);
  }
  for (int j = 0; j < shape.sites; ++j) {
    if (!counts[j]) continue;
    const int target = pi(j + 1) - 1;
    out.word.bits |= blocks[j] << (target * width);
    for (int l = j + 1; l < shape.sites; ++l)
      if (counts[l] && pi(l + 1) - 1 < target) {
        inversions += counts[j] * counts[l];
        out.order_preserving = false;
      }
  }
  out.sign = (inversions % 2 == 0) ? 1 : -1;
  return out;
}

/// True iff relabelling the sites of w by pi keeps its Majorana sequence increasing.
inline bool is_order_preserving(const SitePermutation& pi, MajoranaWord w, const SystemShape& shape) {
  if (pi.size() != shape.sites) throw DomainError("is_order_preserving: permutation size mismatch");
  auto idx = w.indices(shape);
  for (auto& x : idx) x.site = pi(x.site);
  return std::is_sorted(idx.begin(), idx.end()) && std::adjacent_find(idx.begin(), idx.end()) == idx.end();
}

/// tr(rho w) read off an expansion: rho = sum c_u u gives dim * c_w * (-1)^{r(r-1)/2}.
inline Complex expectation(const OperatorExpansion& rho, MajoranaWord w) {
  const int r = w.degree();
  const double sign = ((r * (r - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  return std::ldexp(1.0, rho.shape().num_modes()) * sign * rho.coefficient(w);
}

inline Complex expectation(const DenseOperator& rho, MajoranaWord w) { return trace_with_word(rho, w); }

struct InvarianceOptions {
  int degree_cap = 4;
  double tol = kInvarianceTol;
  int exhaustive_max_sites = 6;    // all V! permutations up to this size
  int sampled_permutations = 512;  // beyond it: transpositions + seeded random draws
  std::uint64_t seed = 20240611;
  bool require_state = true;
};

struct InvarianceReport {
  double condition1_max_violation = 0.0;
  double condition2_max_violation = 0.0;
  double full_max_violation = 0.0;  // all permutations, all words
  long long checked_words = 0;
  long long checked_permutations = 0;
  bool exhaustive = true;
  bool fully_invariant = true;

  bool invariant(double tol = kInvarianceTol) const {
    return condition1_max_violation < tol && condition2_max_violation < tol;
  }
};

namespace detail {

inline std::vector<SitePermutation> invariance_permutations(int v, const InvarianceOptions& opt, bool& exhaustive) {
  std::vector<SitePermutation> perms;
  std::vector<int> im(v);
  std::iota(im.begin(), im.end(), 1);
  if (v <= opt.exhaustive_max_sites) {
    exhaustive = true;
    do perms.emplace_back(im);
    while (std::next_permutation(im.begin(), im.end()));
    return perms;
  }
  exhaustive = false;
  perms.push_back(SitePermutation::identity(v));
  for (int a = 1; a <= v; ++a)
    for (int b = a + 1; b <= v; ++b) perms.push_back(SitePermutation::transposition(v, a, b));
  Rng rng(opt.seed);
  for (int s = 0; s < opt.sampled_permutations; ++s) perms.push_back(random_permutation(v, rng));
  return perms;
}

template <class Expect>
InvarianceReport check_invariance_with(const SystemShape& shape, Expect&& expect, const InvarianceOptions& opt) {
  std::vector<MajoranaWord> words;
  std::unordered_map<std::uint64_t, Complex> table;
  for_each_word(shape.num_majoranas(), opt.degree_cap, [&](MajoranaWord w) {
    words.push_back(w);
    table.emplace(w.bits, expect(w));
  });
  InvarianceReport rep;
  const auto perms = invariance_permutations(shape.sites, opt, rep.exhaustive);
  rep.checked_words = static_cast<long long>(words.size());
  rep.checked_permutations = static_cast<long long>(perms.size());
  for (const auto& pi : perms)
    for (const auto& w : words) {
      const auto pw = permute_word_blocks(pi, w, shape);
      const double viol = std::abs(table.at(w.bits) - static_cast<double>(pw.sign) * table.at(pw.word.bits));
      rep.full_max_violation = std::max(rep.full_max_violation, viol);
      if (pw.order_preserving) rep.condition1_max_violation = std::max(rep.condition1_max_violation, viol);
      if (w.even_on_every_site(shape)) rep.condition2_max_violation = std::max(rep.condition2_max_violation, viol);
    }
  rep.fully_invariant = rep.full_max_violation < opt.tol;
  return rep;
}

}  // namespace detail

inline InvarianceReport check_invariance(const DenseOperator& rho, const InvarianceOptions& opt = {}) {
  if (opt.require_state) {
    const auto v = check_state(rho);
    if (!v.ok())
      throw DomainError("check_invariance: input is not a valid state (min eigenvalue " +
                        std::to_string(v.min_eigenvalue) + ")");
  }
  return detail::check_invariance_with(rho.shape, [&](MajoranaWord w) { return expectation(rho, w); }, opt);
}

inline InvarianceReport check_invariance(const OperatorExpansion& rho, const InvarianceOptions& opt = {}) {
  if (opt.require_state) {
    const auto v = check_state(to_matrix(rho));
    if (!v.ok())
      throw DomainError("check_invariance: input is not a valid state (min eigenvalue " +
                        std::to_string(v.min_eigenvalue) + ")");
  }
  return detail::check_invariance_with(rho.shape(), [&](MajoranaWord w) { return expectation(rho, w); }, opt);
}

// ---------------------------------------------------------------------------
// mu-family example states

struct MuFamilyParams {
  int sites = 6;
  int modes_per_site = 1;
  double mu = 0.0;
};

/// (1/2^{pV}) (1 + i tan(pi/2V) mu sum_{j<l} m_j^1 m_l^1), without any positivity check.
inline OperatorExpansion mu_family_expansion(const MuFamilyParams& params) {
  if (params.sites < 2) throw DomainError("mu family: V must be at least 2");
  if (params.modes_per_site < 1) throw DomainError("mu family: p must be at least 1");
  if (!(std::abs(params.mu) <= 1.0)) throw DomainError("mu family: |mu| must not exceed 1");
  const SystemShape shape(params.sites, params.modes_per_site);
  const double norm = std::ldexp(1.0, -shape.num_modes());
  auto rho = OperatorExpansion::scalar(shape, norm);
  const double t = std::tan(std::numbers::pi / (2.0 * params.sites)) * params.mu;
  for (int j = 1; j <= params.sites; ++j)
    for (int l = j + 1; l <= params.sites; ++l)
      rho.add_term(make_word({{j, 1}, {l, 1}}, shape), Complex(0.0, t * norm));
  return rho;
}

/// Largest |mu| for which the mu family is positive semidefinite at size V.
/// The spectrum of i sum_{j<l} m_j m_l is {sum_s +-eps_s}, with +-eps_s the
/// eigenvalues of i A for the sign matrix A_{jl} = sgn(l - j).
inline double mu_family_max_admissible_mu(int sites) {
  Matrix ia = Matrix::Zero(sites, sites);
  for (int j = 0; j < sites; ++j)
    for (int l = 0; l < sites; ++l)
      if (j != l) ia(j, l) = Complex(0.0, j < l ? 1.0 : -1.0);
  const RealVector ev = hermitian_eigenvalues(ia);
  double top = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) top += std::max(0.0, ev(i));
  return 1.0 / (std::tan(std::numbers::pi / (2.0 * sites)) * top);
}

/// The mu family as a checked state: throws DomainError (with the minimum
/// eigenvalue) when the operator is not positive at the requested size.
inline OperatorExpansion mu_family_state(const MuFamilyParams& params) {
  auto rho = mu_family_expansion(params);
  const auto v = check_state(to_matrix(rho));
  if (!v.ok())
    throw DomainError("mu family (V=" + std::to_string(params.sites) + ", p=" + std::to_string(params.modes_per_site) +
                      ", mu=" + std::to_string(params.mu) + ") is not a valid state: min eigenvalue " +
                      std::to_string(v.min_eigenvalue) + " (admissible |mu| <= " +
                      std::to_string(mu_family_max_admissible_mu(params.sites)) + ")");
  return rho;
}

// ---------------------------------------------------------------------------
// Suppression of the anti-symmetric character

struct Lemma3Options {
  bool require_state = true;  // validity + invariance preconditions
  InvarianceOptions invariance{};
  double tol = kBoundTol;
};

/// (2/sqrt 3) 2^{2p} (k-1)^{3/2} / V
inline double lemma3_bound(int sites, int p, int k) {
  return (2.0 / std::sqrt(3.0)) * std::ldexp(1.0, 2 * p) * std::pow(static_cast<double>(k - 1), 1.5) /
         static_cast<double>(sites);
}

/// || rho_[k] - C(rho)_[k] ||_1 for the reductions to the first k sites.
inline double lemma3_lhs(const DenseOperator& rho, int k) {
  const auto c_rho = global_channel_C(rho);
  const auto a = reduce_to_first_sites(rho, k);
  const auto b = reduce_to_first_sites(c_rho, k);
  return trace_norm(a.mat - b.mat);
}

namespace detail {

/// Shared precondition gate for the suppression and de Finetti certificates.
/// Returns the dense state; throws DomainError listing every violated condition.
inline DenseOperator require_invariant_state(const OperatorExpansion& rho, int k, bool require_state,
                                             const InvarianceOptions& inv, const char* who) {
  const auto& shape = rho.shape();
  std::vector<std::string> violated;
  if (shape.sites < 6) violated.push_back("V >= 6");
  if (k < 1 || k >= shape.sites) violated.push_back("1 <= k < V");
  auto dense = to_matrix(rho);
  if (require_state) {
    const auto v = check_state(dense);
    if (!v.ok()) violated.push_back("valid state (min eigenvalue " + std::to_string(v.min_eigenvalue) + ")");
    else {
      auto inv_opt = inv;
      inv_opt.require_state = false;
      const auto rep = check_invariance(rho, inv_opt);
      if (!rep.invariant(inv.tol))
        violated.push_back("permutation invariance (violations " + std::to_string(rep.condition1_max_violation) +
                           ", " + std::to_string(rep.condition2_max_violation) + ")");
    }
  }
  if (!violated.empty()) {
    std::string msg = std::string(who) + ": precondition violated:";
    for (const auto& s : violated) msg += " [" + s + "]";
    throw DomainError(msg);
  }
  return dense;
}

}  // namespace detail

inline VerificationReport verify_lemma3(const OperatorExpansion& rho, int k, const Lemma3Options& opt = {}) {
  VerificationReport rep;
  ReportTimer timer(rep);
  rep.claim = "lemma3";
  const auto& shape = rho.shape();
  rep.add_input("V", shape.sites);
  rep.add_input("p", shape.modes_per_site);
  rep.add_input("k", k);
  const auto dense = detail::require_invariant_state(rho, k, opt.require_state, opt.invariance, "verify_lemma3");
  if (!opt.require_state) rep.notes.push_back("state/invariance preconditions not enforced");

  rep.lhs = lemma3_lhs(dense, k);
  rep.rhs = lemma3_bound(shape.sites, shape.modes_per_site, k);
  rep.tolerance = opt.tol;
  rep.relation = Relation::LessEqual;
  if (k == 1) rep.notes.push_back("k=1: single-site observables are even, lhs must vanish");
  rep.decide();
  if (k == 1 && rep.lhs != 0.0) {
    rep.pass = false;
    rep.notes.push_back("k=1 lhs is not exactly zero");
  }
  return rep;
}

}  // namespace fermicert
