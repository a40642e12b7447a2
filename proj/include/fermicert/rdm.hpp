// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file rdm.hpp
 * @brief One-particle reduced density matrices, the closed-form spectrum of
 *        circulant 1-RDMs, Pauli-band checks, and the block structure for
 *        several modes per site.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "fermicert/cumulants.hpp"

namespace fermicert {

struct OneRDM {
  SystemShape shape{1, 1};
  Matrix gamma;                     // Gamma_{jk} = <f_j^dag f_k>, site-major mode order
  double hermiticity_residual = 0;  // before symmetrization
};

inline OneRDM one_rdm(const DenseOperator& rho) {
  const auto v = check_state(rho);
  if (!v.ok()) throw DomainError("one_rdm: input is not a valid state (min eigenvalue " + std::to_string(v.min_eigenvalue) + ")");
  const auto& s = rho.shape;
  const int n = s.num_modes();
  std::vector<SparseMatrix> create, annihilate;
  for (int j = 1; j <= s.sites; ++j)
    for (int a = 1; a <= s.modes_per_site; ++a) {
      create.push_back(ladder_operator(s, kCreate, j, a));
      annihilate.push_back(ladder_operator(s, kAnnihilate, j, a));
    }
  OneRDM out;
  out.shape = s;
  out.gamma = Matrix::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) out.gamma(x, y) = moment(rho, {create[x], annihilate[y]});
  out.hermiticity_residual = hermiticity_residual(out.gamma);
  out.gamma = 0.5 * (out.gamma + out.gamma.adjoint()).eval();
  return out;
}

/// Var(N) with N the total number operator, diagonal in the occupation basis.
inline double particle_number_variance(const DenseOperator& rho) {
  double m1 = 0.0, m2 = 0.0;
  for (Eigen::Index b = 0; b < rho.mat.rows(); ++b) {
    const double w = rho.mat(b, b).real(), n = std::popcount(static_cast<std::uint64_t>(b));
    m1 += w * n;
    m2 += w * n * n;
  }
  return m2 - m1 * m1;
}

/// Integer particle number is only meaningful for number eigenstates.
inline bool is_number_eigenstate(const DenseOperator& rho, double tol = 1e-10) {
  return particle_number_variance(rho) < tol;
}

struct CirculantParams {
  int sites = 2;
  double a = 0.0;  // diagonal, N/V
  Complex b{};     // <f_j^dag f_k> for j > k
};

/// Gamma with a on the diagonal, b below and conj(b) above it.
inline Matrix circulant_matrix(const CirculantParams& c) {
  Matrix g = Matrix::Zero(c.sites, c.sites);
  for (int j = 0; j < c.sites; ++j)
    for (int k = 0; k < c.sites; ++k) g(j, k) = j == k ? Complex(c.a) : (j > k ? c.b : std::conj(c.b));
  return g;
}

class SingularityError : public DomainError {
 public:
  SingularityError(const std::string& what, int k) : DomainError(what), k_(k) {}
  int k() const { return k_; }

 private:
  int k_;
};

struct CirculantFormula {
  std::vector<double> values;  // lambda_k, k = 0..V-1 (NaN where singular)
  std::vector<int> singular;   // k with a vanishing denominator
  bool real_branch = true;
};

inline constexpr double kSingularDenominator = 1e-12;

/// Eigenvalues of the circulant 1-RDM in closed form, both branches.
inline CirculantFormula circulant_formula(const CirculantParams& c) {
  if (c.sites < 2) throw DomainError("circulant spectrum: V must be at least 2");
  const int v = c.sites;
  CirculantFormula out;
  out.values.resize(v);
  out.real_branch = c.b.imag() == 0.0;
  if (out.real_branch) {
    // k = 0 written as a + b(V-1) so it matches that form bit for bit
    for (int k = 0; k < v; ++k) out.values[k] = k == 0 ? c.a + c.b.real() * (v - 1) : c.a - c.b.real();
    return out;
  }
  const double mod = std::abs(c.b), phi = std::arg(c.b);
  for (int k = 0; k < v; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / v;
    const double den = 1.0 - std::cos(theta - 2.0 * phi / v);
    if (std::abs(den) < kSingularDenominator) {
      out.values[k] = std::numeric_limits<double>::quiet_NaN();
      out.singular.push_back(k);
      continue;
    }
    out.values[k] = c.a + mod * (std::cos(theta + (v - 2) * phi / v) - std::cos(phi)) / den;
  }
  return out;
}

/// As circulant_formula, but a vanishing denominator raises SingularityError naming k.
inline std::vector<double> circulant_spectrum(const CirculantParams& c) {
  auto f = circulant_formula(c);
  if (!f.singular.empty())
    throw SingularityError("circulant spectrum: vanishing denominator at k=" + std::to_string(f.singular.front()),
                           f.singular.front());
  return f.values;
}

struct SpectrumComparison {
  std::vector<double> formula;  // by k
  std::vector<double> direct;   // sorted ascending
  std::vector<double> matched;  // direct eigenvalue paired with formula[k] (direct fallback at singular k)
  std::vector<int> singular;
  double max_deviation = 0.0;   // over non-singular k
};

/// Formula against direct diagonalization; each formula value is paired with the
/// nearest unused direct eigenvalue, singular k take the remaining ones.
inline SpectrumComparison compare_circulant_spectrum(const CirculantParams& c) {
  const auto f = circulant_formula(c);
  SpectrumComparison out;
  out.formula = f.values;
  out.singular = f.singular;
  const RealVector ev = hermitian_eigenvalues(circulant_matrix(c));
  out.direct.assign(ev.data(), ev.data() + ev.size());
  std::vector<bool> used(out.direct.size(), false);
  out.matched.assign(f.values.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<int> order(f.values.size());
  std::iota(order.begin(), order.end(), 0);
  for (int k : order) {
    if (std::isnan(f.values[k])) continue;
    int best = -1;
    for (std::size_t i = 0; i < out.direct.size(); ++i)
      if (!used[i] && (best < 0 || std::abs(out.direct[i] - f.values[k]) < std::abs(out.direct[best] - f.values[k])))
        best = static_cast<int>(i);
    used[best] = true;
    out.matched[k] = out.direct[best];
    out.max_deviation = std::max(out.max_deviation, std::abs(out.direct[best] - f.values[k]));
  }
  for (int k : f.singular)
    for (std::size_t i = 0; i < used.size(); ++i)
      if (!used[i]) {
        used[i] = true;
        out.matched[k] = out.direct[i];
        break;
      }
  return out;
}

/// 8 / (sqrt(3) V)
inline double offdiagonal_bound(int sites) { return 8.0 / (std::sqrt(3.0) * sites); }

/// Mean of the entries strictly below the diagonal (single mode per site).
inline Complex mean_lower_entry(const Matrix& g) {
  Complex acc{};
  int count = 0;
  for (Eigen::Index j = 0; j < g.rows(); ++j)
    for (Eigen::Index k = 0; k < j; ++k) {
      acc += g(j, k);
      ++count;
    }
  return count ? acc / static_cast<double>(count) : Complex{};
}

struct PauliOptions {
  bool invariant_source = false;  // enables the |b| bound
  double band_tol = 1e-10;
  double trace_tol = 1e-9;
  double bound_tol = 1e-9;
};

/// Eigenvalues of Gamma within [0, 1]; eigenvalue sum equals the particle
/// number; |b| <= 8/(sqrt(3) V) for invariant sources with one mode per site.
inline VerificationReport verify_pauli_constraints(const OneRDM& g, const PauliOptions& opt = {}) {
  VerificationReport rep;
  ReportTimer timer(rep);
  rep.claim = "pauli-constraints";
  rep.add_input("V", g.shape.sites);
  rep.add_input("p", g.shape.modes_per_site);
  const RealVector ev = hermitian_eigenvalues(g.gamma);
  const double lo = ev.minCoeff(), hi = ev.maxCoeff();
  rep.lhs = std::max({0.0, -lo, hi - 1.0});
  rep.rhs = 0.0;
  rep.tolerance = opt.band_tol;
  rep.relation = Relation::LessEqual;
  rep.decide();
  rep.notes.push_back("eigenvalues in [" + VerificationReport::format_number(lo) + ", " +
                      VerificationReport::format_number(hi) + "]");
  if (lo < -opt.band_tol) rep.notes.push_back("negative eigenvalue");
  if (hi > 1.0 + opt.band_tol) rep.notes.push_back("eigenvalue above one");

  const double n = g.gamma.trace().real();
  const double trace_gap = std::abs(ev.sum() - n);
  if (trace_gap > opt.trace_tol) {
    rep.pass = false;
    rep.notes.push_back("eigenvalue sum differs from particle number by " + VerificationReport::format_number(trace_gap));
  }
  rep.notes.push_back("particle number " + VerificationReport::format_number(n));
  if (opt.invariant_source && g.shape.modes_per_site == 1) {
    const double b = std::abs(mean_lower_entry(g.gamma));
    const double bound = offdiagonal_bound(g.shape.sites);
    rep.notes.push_back("|b| = " + VerificationReport::format_number(b) + " vs 8/(sqrt3 V) = " +
                        VerificationReport::format_number(bound));
    if (b > bound + opt.bound_tol) {
      rep.pass = false;
      rep.notes.push_back("off-diagonal bound violated");
    }
  }
  return rep;
}

struct BlockStructure {
  Matrix a;               // p x p diagonal block
  Matrix b;               // p x p block above the diagonal (its adjoint sits below)
  double residual = 0.0;  // max |Gamma - ansatz|
  double particles_per_site = 0.0;
};

/// Least-squares fit of Gamma to the block-circulant ansatz: block means.
inline BlockStructure block_rdm_structure(const OneRDM& g) {
  const int v = g.shape.sites, p = g.shape.modes_per_site;
  if (v < 2) throw DomainError("block_rdm_structure: needs at least two sites");
  BlockStructure out;
  out.a = Matrix::Zero(p, p);
  out.b = Matrix::Zero(p, p);
  for (int j = 0; j < v; ++j) out.a += g.gamma.block(j * p, j * p, p, p);
  out.a /= static_cast<double>(v);
  int count = 0;
  for (int j = 0; j < v; ++j)
    for (int l = j + 1; l < v; ++l) {
      out.b += g.gamma.block(j * p, l * p, p, p);
      out.b += g.gamma.block(l * p, j * p, p, p).adjoint();
      count += 2;
    }
  out.b /= static_cast<double>(count);
  for (int j = 0; j < v; ++j)
    for (int l = 0; l < v; ++l) {
      const Matrix model = j == l ? out.a : (j < l ? out.b : Matrix(out.b.adjoint()));
      out.residual = std::max(out.residual, (g.gamma.block(j * p, l * p, p, p) - model).cwiseAbs().maxCoeff());
    }
  out.particles_per_site = out.a.trace().real();
  return out;
}

inline BlockStructure block_rdm_structure(const DenseOperator& rho) { return block_rdm_structure(one_rdm(rho)); }

}  // namespace fermicert
