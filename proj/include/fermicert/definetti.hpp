// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file definetti.hpp
 * @brief Mode product states, convex mixtures of their k-fold powers, and a
 *        trace-norm optimizer that produces an explicit de Finetti witness.
 *
 * Single-site states are parametrized as xi = B B^dagger / tr(B B^dagger)
 * with B block diagonal in the two local parity sectors, so every iterate is
 * an even state. For one mode per site both sectors are one-dimensional and
 * xi is diagonal.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <bit>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fermicert/invariance.hpp"

namespace fermicert {

inline constexpr double kComponentTol = 1e-9;

/// Local parity of a single-site basis index.
inline int local_parity(std::uint64_t b) { return std::popcount(b) % 2; }

/// Even density matrix on one site with p modes.
class SingleSiteState {
 public:
  explicit SingleSiteState(Matrix m) : mat_(std::move(m)) {
    const auto d = mat_.rows();
    if (d < 2 || mat_.cols() != d || (d & (d - 1)) != 0)
      throw DomainError("SingleSiteState: dimension must be 2^p with p >= 1");
    modes_ = std::countr_zero(static_cast<std::uint64_t>(d));
    const auto v = check_state(DenseOperator(SystemShape(1, modes_), mat_));
    if (!v.hermitian_ok || !v.trace_ok || !v.positive_ok)
      throw DomainError("SingleSiteState: not a density matrix (min eigenvalue " + std::to_string(v.min_eigenvalue) +
                        ")");
    even_ = v.parity_ok;
    if (!even_) throw DomainError("SingleSiteState: state is not parity even");
  }

  int modes() const { return modes_; }
  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }
  bool even() const { return even_; }
  double purity() const { return (mat_ * mat_).trace().real(); }

  /// Largest modulus of an entry off the diagonal.
  double off_diagonal_mass() const {
    double m = 0.0;
    for (Eigen::Index r = 0; r < dim(); ++r)
      for (Eigen::Index c = 0; c < dim(); ++c)
        if (r != c) m = std::max(m, std::abs(mat_(r, c)));
    return m;
  }

 private:
  Matrix mat_;
  int modes_ = 1;
  bool even_ = true;
};

/// xi^{(x)k} on k sites: the ordinary tensor power under the site-major ordering.
inline DenseOperator product_power(const SingleSiteState& xi, int k) {
  if (k < 1) throw DomainError("product_power: k must be at least 1");
  const SystemShape shape(k, xi.modes());
  (void)shape.fock_dim();  // cap check
  Matrix out = xi.matrix();
  for (int i = 1; i < k; ++i) out = kron(out, xi.matrix());
  return {shape, std::move(out)};
}

struct ProductMixture {
  std::vector<double> weights;
  std::vector<SingleSiteState> components;

  std::size_t size() const { return weights.size(); }
  int modes() const { return components.empty() ? 0 : components.front().modes(); }

  /// sum_l a_l xi_l^{(x)k}
  DenseOperator state(int k) const {
    if (components.empty()) throw DomainError("ProductMixture: no components");
    auto out = DenseOperator::zero(SystemShape(k, modes()));
    for (std::size_t l = 0; l < size(); ++l)
      if (weights[l] != 0.0) out.mat += weights[l] * product_power(components[l], k).mat;
    return out;
  }

  std::string to_text() const {
    std::ostringstream os;
    os << std::setprecision(17) << "weights " << size() << '\n';
    for (std::size_t l = 0; l < size(); ++l) os << (l ? " " : "") << weights[l];
    os << '\n';
    for (std::size_t l = 0; l < size(); ++l) os << "component " << l + 1 << '\n' << matrix_to_text(components[l].matrix());
    return os.str();
  }
};

namespace detail {

struct MatrixEntry {
  std::uint64_t row;
  std::uint64_t col;
  Complex value;
};

inline std::vector<MatrixEntry> nonzero_entries(const Matrix& m) {
  std::vector<MatrixEntry> out;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      if (m(r, c) != Complex{}) out.push_back({static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(c), m(r, c)});
  return out;
}

/// tr(X xi^{(x)k}) from the nonzero entries of X.
inline Complex product_trace(const std::vector<MatrixEntry>& x, const Matrix& xi, int k, int p) {
  const std::uint64_t mask = (1ULL << p) - 1;
  Complex acc{};
  for (const auto& e : x) {
    Complex f = e.value;
    for (int t = 0; t < k; ++t) {
      const int shift = (k - 1 - t) * p;
      f *= xi(static_cast<Eigen::Index>((e.col >> shift) & mask), static_cast<Eigen::Index>((e.row >> shift) & mask));
      if (f == Complex{}) break;
    }
    acc += f;
  }
  return acc;
}

/// sum_s E_s with tr(X (xi ... Y at s ... xi)) = tr(E_s Y); this is the derivative
/// of tr(X xi^{(x)k}) in xi.
inline Matrix environment_sum(const std::vector<MatrixEntry>& x, const Matrix& xi, int k, int p) {
  const std::uint64_t mask = (1ULL << p) - 1;
  Matrix env = Matrix::Zero(xi.rows(), xi.cols());
  std::vector<Complex> pre(k + 1), suf(k + 1);
  std::vector<Eigen::Index> ii(k), jj(k);
  for (const auto& e : x) {
    for (int t = 0; t < k; ++t) {
      const int shift = (k - 1 - t) * p;
      ii[t] = static_cast<Eigen::Index>((e.row >> shift) & mask);
      jj[t] = static_cast<Eigen::Index>((e.col >> shift) & mask);
    }
    pre[0] = 1.0;
    for (int t = 0; t < k; ++t) pre[t + 1] = pre[t] * xi(jj[t], ii[t]);
    suf[k] = 1.0;
    for (int t = k - 1; t >= 0; --t) suf[t] = suf[t + 1] * xi(jj[t], ii[t]);
    for (int s = 0; s < k; ++s) env(ii[s], jj[s]) += e.value * pre[s] * suf[s + 1];
  }
  return env;
}

inline void mask_to_even(Matrix& b) {
  for (Eigen::Index r = 0; r < b.rows(); ++r)
    for (Eigen::Index c = 0; c < b.cols(); ++c)
      if (local_parity(r) != local_parity(c)) b(r, c) = 0.0;
}

inline void normalize_factor(Matrix& b) {
  const double n = b.norm();
  if (n > 0.0) b /= n;
}

inline Matrix state_from_factor(const Matrix& b) {
  Matrix m = b * b.adjoint();
  m = 0.5 * (m + m.adjoint());
  return m / m.trace().real();
}

inline Matrix factor_from_state(const Matrix& xi) {
  const auto es = hermitian_eig(xi);
  RealVector root = es.values.cwiseMax(0.0).cwiseSqrt();
  Matrix b = es.vectors * root.asDiagonal() * es.vectors.adjoint();
  mask_to_even(b);
  normalize_factor(b);
  return b;
}

inline Matrix random_factor(int p, Rng& rng) {
  Matrix b = random_matrix(Eigen::Index{1} << p, rng);
  mask_to_even(b);
  normalize_factor(b);
  return b;
}

/// Descent direction in B for a function with df = Re tr(G dxi), xi = BB^dagger/t.
inline Matrix factor_gradient(const Matrix& g, const Matrix& b) {
  const Matrix m = b * b.adjoint();
  const double t = m.trace().real();
  const Matrix xi = m / t;
  Matrix h = g - (g * xi).trace() * Matrix::Identity(g.rows(), g.cols());
  Matrix grad = 2.0 * h * b / t;
  mask_to_even(grad);
  return grad;
}

/// Euclidean projection onto the probability simplex.
inline std::vector<double> project_to_simplex(std::vector<double> v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  for (auto& x : v) x = std::max(0.0, x - theta);
  return v;
}

struct DifferenceSpectrum {
  double distance = 0.0;
  Matrix sign;  // sign(Delta) = V sgn(Lambda) V^dagger
};

inline DifferenceSpectrum difference_spectrum(const Matrix& delta) {
  const auto es = hermitian_eig(delta);
  DifferenceSpectrum out;
  RealVector sgn(es.values.size());
  for (Eigen::Index i = 0; i < sgn.size(); ++i) {
    out.distance += std::abs(es.values(i));
    sgn(i) = es.values(i) > 0.0 ? 1.0 : (es.values(i) < 0.0 ? -1.0 : 0.0);
  }
  out.sign = es.vectors * sgn.asDiagonal() * es.vectors.adjoint();
  return out;
}

}  // namespace detail

struct MixtureOptions {
  int components = -1;  // -1: 2p + 2
  int restarts = 8;
  int iters = 500;
  std::uint64_t seed = 1;
  double step = 0.5;           // c in c / sqrt(t)
  int patience = 100;          // stop a restart after this many iterations without progress
  double target = 1e-12;       // stop as soon as the distance drops below this
  std::optional<ProductMixture> warm_start;
};

struct MixtureResult {
  ProductMixture mixture;
  double distance = 0.0;
  int best_restart = 0;
  long long iterations = 0;
};

/// Trace-norm fit of sum_l a_l xi_l^{(x)k} to rho_k. Weights and components
/// take projected subgradient steps from the same sign(Delta) in each
/// iteration. The returned distance is recomputed from the returned mixture.
inline MixtureResult best_mixture_approx(const DenseOperator& rho_k, const MixtureOptions& opt) {
  const auto validity = check_state(rho_k);
  if (!validity.ok())
    throw DomainError("best_mixture_approx: input is not a valid state (min eigenvalue " +
                      std::to_string(validity.min_eigenvalue) + ")");
  const int k = rho_k.shape.sites;
  const int p = rho_k.shape.modes_per_site;
  const int r = opt.components > 0 ? opt.components : 2 * p + 2;
  if (opt.restarts < 1 || opt.iters < 0) throw DomainError("best_mixture_approx: restarts >= 1 and iters >= 0 required");
  if (opt.warm_start && (opt.warm_start->modes() != p || static_cast<int>(opt.warm_start->size()) > r))
    throw DomainError("best_mixture_approx: warm start does not fit (modes or component count)");

  const Matrix& rho = rho_k.mat;
  const Matrix marginal = global_channel_C(partial_trace_sites(rho_k, {1})).mat;

  MixtureResult best;
  best.distance = std::numeric_limits<double>::infinity();
  std::vector<Matrix> best_factors;
  std::vector<double> best_weights;

  for (int restart = 0; restart < opt.restarts; ++restart) {
    std::seed_seq seq{opt.seed, static_cast<std::uint64_t>(restart)};
    Rng rng(seq);
    std::vector<Matrix> factors;
    std::vector<double> weights;
    if (restart == 0) {
      if (opt.warm_start) {
        for (std::size_t l = 0; l < opt.warm_start->size(); ++l) {
          factors.push_back(detail::factor_from_state(opt.warm_start->components[l].matrix()));
          weights.push_back(opt.warm_start->weights[l]);
        }
      } else {
        factors.push_back(detail::factor_from_state(marginal));
        weights.push_back(1.0);
      }
      while (static_cast<int>(factors.size()) < r) {
        factors.push_back(detail::random_factor(p, rng));
        weights.push_back(0.0);
      }
    } else {
      for (int l = 0; l < r; ++l) factors.push_back(detail::random_factor(p, rng));
      weights.assign(r, 1.0 / r);
    }

    std::vector<Matrix> xis(r);
    auto evaluate = [&]() {
      Matrix mix = Matrix::Zero(rho.rows(), rho.cols());
      for (int l = 0; l < r; ++l) {
        xis[l] = detail::state_from_factor(factors[l]);
        if (weights[l] == 0.0) continue;
        Matrix pw = xis[l];
        for (int i = 1; i < k; ++i) pw = kron(pw, xis[l]);
        mix += weights[l] * pw;
      }
      return detail::difference_spectrum(rho - mix);
    };

    double local_best = std::numeric_limits<double>::infinity();
    int since_progress = 0;
    for (int t = 0;; ++t) {
      const auto ds = evaluate();
      ++best.iterations;
      if (ds.distance < local_best - 1e-10) since_progress = 0;
      else ++since_progress;
      local_best = std::min(local_best, ds.distance);
      if (ds.distance < best.distance) {
        best.distance = ds.distance;
        best.best_restart = restart;
        best_factors = factors;
        best_weights = weights;
      }
      if (t >= opt.iters || ds.distance < opt.target || since_progress > opt.patience) break;

      const double eta = opt.step / std::sqrt(static_cast<double>(t + 1));
      const auto sign_entries = detail::nonzero_entries(ds.sign);
      std::vector<double> moved = weights;
      for (int l = 0; l < r; ++l) {
        // d distance / d a_l = -tr(S xi_l^{(x)k})
        const double g = -detail::product_trace(sign_entries, xis[l], k, p).real();
        moved[l] -= eta * g;
      }
      for (int l = 0; l < r; ++l) {
        if (weights[l] == 0.0) continue;
        const Matrix env = detail::environment_sum(sign_entries, xis[l], k, p);
        const Matrix grad = detail::factor_gradient(-weights[l] * env, factors[l]);
        const double gn = grad.norm();
        if (gn > 0.0) {
          factors[l] -= (eta / gn) * grad;
          detail::normalize_factor(factors[l]);
        }
      }
      weights = detail::project_to_simplex(moved);
    }
  }

  for (std::size_t l = 0; l < best_factors.size(); ++l) {
    best.mixture.weights.push_back(best_weights[l]);
    best.mixture.components.emplace_back(detail::state_from_factor(best_factors[l]));
  }
  best.distance = trace_norm(rho - best.mixture.state(k).mat);
  return best;
}

// ---------------------------------------------------------------------------

/// 2 * 2^{2p} k / V, as stated.
inline double theorem1_spin_term(int sites, int p, int k) {
  return 2.0 * std::ldexp(1.0, 2 * p) * k / static_cast<double>(sites);
}

/// 2 * 2^p k / V, the constant produced by the spin de Finetti step.
inline double theorem1_spin_term_tight(int sites, int p, int k) {
  return 2.0 * std::ldexp(1.0, p) * k / static_cast<double>(sites);
}

inline double theorem1_bound(int sites, int p, int k) {
  return lemma3_bound(sites, p, k) + theorem1_spin_term(sites, p, k);
}

struct Theorem1Options {
  MixtureOptions mixture{};
  bool require_state = true;
  InvarianceOptions invariance{};
  double tol = kBoundTol;
};

struct ComponentCheck {
  bool all_even = true;
  double max_off_diagonal = 0.0;  // meaningful for p = 1
  bool diagonal_ok = true;
};

inline ComponentCheck check_components(const ProductMixture& mix) {
  ComponentCheck out;
  for (const auto& c : mix.components) {
    const auto v = check_state(DenseOperator(SystemShape(1, c.modes()), c.matrix()));
    out.all_even = out.all_even && v.ok() && c.even();
    out.max_off_diagonal = std::max(out.max_off_diagonal, c.off_diagonal_mass());
  }
  if (mix.modes() == 1) out.diagonal_ok = out.max_off_diagonal < 1e-8;
  return out;
}

struct Theorem1Certificate {
  VerificationReport report;
  MixtureResult approx;
  ComponentCheck components;
};

inline Theorem1Certificate verify_theorem1(const OperatorExpansion& rho, int k, const Theorem1Options& opt = {}) {
  Theorem1Certificate cert;
  auto& rep = cert.report;
  ReportTimer timer(rep);
  rep.claim = "theorem1";
  const auto& shape = rho.shape();
  const int v = shape.sites, p = shape.modes_per_site;
  const int r = opt.mixture.components > 0 ? opt.mixture.components : 2 * p + 2;
  rep.add_input("V", v);
  rep.add_input("p", p);
  rep.add_input("k", k);
  rep.add_input("r", r);
  rep.add_input("restarts", opt.mixture.restarts);
  rep.add_input("iters", opt.mixture.iters);
  rep.add_input("seed", std::to_string(opt.mixture.seed));
  const auto dense = detail::require_invariant_state(rho, k, opt.require_state, opt.invariance, "verify_theorem1");
  if (!opt.require_state) rep.notes.push_back("state/invariance preconditions not enforced");

  cert.approx = best_mixture_approx(reduce_to_first_sites(dense, k), opt.mixture);
  cert.components = check_components(cert.approx.mixture);

  rep.lhs = cert.approx.distance;
  rep.rhs = theorem1_bound(v, p, k);
  rep.tolerance = opt.tol;
  rep.relation = Relation::LessEqual;
  rep.decide();

  const double tight = lemma3_bound(v, p, k) + theorem1_spin_term_tight(v, p, k);
  rep.notes.push_back("suppression term " + VerificationReport::format_number(lemma3_bound(v, p, k)) +
                      ", spin term (stated, 2*4^p*k/V) " + VerificationReport::format_number(theorem1_spin_term(v, p, k)));
  rep.notes.push_back("composite with spin term 2*2^p*k/V: " + VerificationReport::format_number(tight) +
                      (rep.lhs <= tight + opt.tol ? " (also satisfied)" : " (not satisfied)"));
  if (rep.rhs > 2.0) rep.notes.push_back("bound exceeds trace-distance diameter 2");
  if (!cert.components.all_even) {
    rep.pass = false;
    rep.notes.push_back("a mixture component failed the even-state check");
  }
  if (!cert.components.diagonal_ok) {
    rep.pass = false;
    rep.notes.push_back("p=1 component off-diagonal mass " + VerificationReport::format_number(cert.components.max_off_diagonal));
  }
  return cert;
}

}  // namespace fermicert
