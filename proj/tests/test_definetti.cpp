// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <numbers>

#include "fermicert/definetti.hpp"

namespace fermicert {
namespace {

const double kTan12 = std::tan(std::numbers::pi / 12);

SingleSiteState random_site_state(int p, Rng& rng) {
  return SingleSiteState(random_even_state(SystemShape(1, p), rng).mat);
}

SingleSiteState diagonal_state(double occupied) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0 - occupied;
  m(1, 1) = occupied;
  return SingleSiteState(m);
}

MixtureOptions quick(std::uint64_t seed) {
  MixtureOptions o;
  o.seed = seed;
  o.restarts = 2;
  o.iters = 300;
  return o;
}

TEST(SingleSiteState, Validation) {
  EXPECT_THROW(SingleSiteState(Matrix::Identity(3, 3) / 3.0), DomainError);
  EXPECT_THROW(SingleSiteState(Matrix::Identity(2, 2)), DomainError);  // trace 2
  Matrix odd = Matrix::Identity(2, 2) / 2.0;
  odd(0, 1) = odd(1, 0) = 0.25;
  EXPECT_THROW(SingleSiteState{odd}, DomainError);
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(SingleSiteState{neg}, DomainError);
  const SingleSiteState ok(Matrix::Identity(4, 4) / 4.0);
  EXPECT_EQ(ok.modes(), 2);
  EXPECT_TRUE(ok.even());
  EXPECT_NEAR(ok.purity(), 0.25, 1e-15);
}

TEST(ProductPower, Examples) {
  Rng rng(1);
  const auto xi = random_site_state(2, rng);
  EXPECT_EQ((product_power(xi, 1).mat - xi.matrix()).cwiseAbs().maxCoeff(), 0.0);
  const auto vac = product_power(diagonal_state(0.0), 2);
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = 1.0;
  EXPECT_EQ((vac.mat - expect).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(product_power(xi, 0), DomainError);
  EXPECT_THROW(product_power(xi, 7), ResourceError);
}

TEST(ProductPower, CorrelationsFactorizeOverSites) {
  Rng rng(2);
  for (int p : {1, 2}) {
    const auto xi = random_site_state(p, rng);
    const auto pw = product_power(xi, 2);
    const SystemShape one(1, p);
    for_each_word(pw.shape.num_majoranas(), 4, [&](MajoranaWord w) {
      const int width = 2 * p;
      const MajoranaWord first{w.bits & ((1ULL << width) - 1)};
      const MajoranaWord second{w.bits >> width};
      const Complex lhs = expectation(pw, w);
      const Complex rhs = expectation(DenseOperator(one, xi.matrix()), first) *
                          expectation(DenseOperator(one, xi.matrix()), second);
      EXPECT_LT(std::abs(lhs - rhs), 1e-12) << format_word(w, pw.shape);
    });
  }
}

TEST(Internals, SimplexProjection) {
  const auto a = detail::project_to_simplex({0.2, 0.3, 0.5});
  EXPECT_NEAR(a[0], 0.2, 1e-15);
  EXPECT_NEAR(a[2], 0.5, 1e-15);
  const auto b = detail::project_to_simplex({2.0, 0.0, -1.0});
  EXPECT_DOUBLE_EQ(b[0], 1.0);
  EXPECT_DOUBLE_EQ(b[1], 0.0);
  const auto c = detail::project_to_simplex({0.5, 0.5, 0.5, 0.5});
  for (double x : c) EXPECT_NEAR(x, 0.25, 1e-15);
}

TEST(Internals, ProductTraceMatchesDense) {
  Rng rng(3);
  for (int p : {1, 2}) {
    const auto xi = random_site_state(p, rng);
    const int k = p == 1 ? 4 : 2;
    const Matrix x = random_matrix(Eigen::Index{1} << (k * p), rng);
    const Complex dense = (x * product_power(xi, k).mat).trace();
    EXPECT_LT(std::abs(detail::product_trace(detail::nonzero_entries(x), xi.matrix(), k, p) - dense), 1e-12);
  }
}

TEST(Internals, EnvironmentIsTheDerivative) {
  Rng rng(4);
  const int p = 2, k = 2;
  const auto xi = random_site_state(p, rng).matrix();
  const Matrix x = random_hermitian(16, rng);
  const auto entries = detail::nonzero_entries(x);
  const Matrix env = detail::environment_sum(entries, xi, k, p);
  const Matrix dir = random_hermitian(4, rng);
  const double h = 1e-6;
  const Complex fd = (detail::product_trace(entries, xi + h * dir, k, p) -
                      detail::product_trace(entries, xi - h * dir, k, p)) / (2 * h);
  EXPECT_NEAR(std::abs(fd - (env * dir).trace()), 0.0, 1e-7);
  EXPECT_LT(hermiticity_residual(env), 1e-12);
}

TEST(Internals, FactorGradientMatchesFiniteDifference) {
  Rng rng(5);
  const int p = 2;
  Matrix b = detail::random_factor(p, rng);
  const Matrix g = random_hermitian(4, rng);
  auto f = [&](const Matrix& bb) { return (g * detail::state_from_factor(bb)).trace().real(); };
  Matrix dir = random_matrix(4, rng);
  detail::mask_to_even(dir);
  const double h = 1e-6;
  const double fd = (f(b + h * dir) - f(b - h * dir)) / (2 * h);
  const Matrix grad = detail::factor_gradient(g, b);
  const double analytic = (grad.adjoint() * dir).trace().real();
  EXPECT_NEAR(fd, analytic, 1e-7);
}

TEST(BestMixture, ExactProductPowerIsFound) {
  Rng rng(6);
  for (int p : {1, 2}) {
    const auto xi = random_site_state(p, rng);
    MixtureOptions o = quick(1);
    o.components = 1;
    const auto res = best_mixture_approx(product_power(xi, 2), o);
    EXPECT_LT(res.distance, 1e-6);
  }
}

TEST(BestMixture, MaximallyMixedIsAProductPower) {
  MixtureOptions o = quick(2);
  o.components = 1;
  EXPECT_LT(best_mixture_approx(DenseOperator::maximally_mixed(SystemShape(3, 1)), o).distance, 1e-6);
  EXPECT_LT(best_mixture_approx(DenseOperator::maximally_mixed(SystemShape(2, 2)), o).distance, 1e-6);
}

TEST(BestMixture, RecoversATwoComponentMixture) {
  // the start is the averaged marginal, which is not optimal here
  ProductMixture target;
  target.weights = {0.3, 0.7};
  target.components = {diagonal_state(0.1), diagonal_state(0.8)};
  const auto rho = target.state(3);
  MixtureOptions o;
  o.seed = 7;
  const auto marginal_only = trace_norm(rho.mat - product_power(diagonal_state(0.3 * 0.1 + 0.7 * 0.8), 3).mat);
  const auto res = best_mixture_approx(rho, o);
  EXPECT_LT(res.distance, 0.25 * marginal_only);
  EXPECT_LT(res.distance, 0.02);
}

TEST(BestMixture, MuFamilyTwoSiteReduction) {
  for (double mu : {0.5, -0.5, mu_family_max_admissible_mu(6)}) {
    const auto rho = to_matrix(mu_family_state({6, 1, mu}));
    const auto res = best_mixture_approx(reduce_to_first_sites(rho, 2), quick(3));
    EXPECT_LE(res.distance, std::abs(mu) * kTan12 + 1e-9);
    EXPECT_LE(res.distance, theorem1_bound(6, 1, 2));
    const auto cc = check_components(res.mixture);
    EXPECT_TRUE(cc.all_even);
    EXPECT_LT(cc.max_off_diagonal, 1e-8);
  }
}

TEST(BestMixture, Deterministic) {
  Rng rng(8);
  const auto rho = random_even_state(SystemShape(2, 1), rng);
  const auto a = best_mixture_approx(rho, quick(9)), b = best_mixture_approx(rho, quick(9));
  EXPECT_EQ(a.distance, b.distance);
  EXPECT_EQ(a.mixture.to_text(), b.mixture.to_text());
}

TEST(BestMixture, WarmStartedExtraComponentNeverHurts) {
  Rng rng(10);
  for (int p : {1, 2}) {
    const auto rho = random_even_state(SystemShape(2, p), rng);
    MixtureOptions o = quick(11);
    o.components = 1;
    auto prev = best_mixture_approx(rho, o);
    for (int r = 2; r <= 4; ++r) {
      o.components = r;
      o.warm_start = prev.mixture;
      const auto next = best_mixture_approx(rho, o);
      EXPECT_LE(next.distance, prev.distance + 1e-9) << "p=" << p << " r=" << r;
      prev = next;
    }
  }
}

TEST(BestMixture, ComponentsAreEvenStates) {
  Rng rng(12);
  for (int p : {1, 2}) {
    const auto res = best_mixture_approx(random_even_state(SystemShape(2, p), rng), quick(13));
    const auto cc = check_components(res.mixture);
    EXPECT_TRUE(cc.all_even);
    if (p == 1) EXPECT_LT(cc.max_off_diagonal, 1e-8);
    double total = 0.0;
    for (double a : res.mixture.weights) {
      EXPECT_GE(a, 0.0);
      total += a;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(BestMixture, InvalidInputRejected) {
  EXPECT_THROW(best_mixture_approx(DenseOperator::identity(SystemShape(2, 1)), quick(1)), DomainError);
}

TEST(Theorem1, Bounds) {
  EXPECT_NEAR(theorem1_bound(6, 1, 2), 0.769800358919501 + 8.0 * 2 / 6, 1e-12);
  // k = 3: 2.1773 + 4 = 6.1773
  EXPECT_NEAR(theorem1_bound(6, 1, 3), (2.0 / std::sqrt(3.0)) * 4.0 * std::pow(2.0, 1.5) / 6.0 + 4.0, 1e-12);
  EXPECT_NEAR(theorem1_bound(6, 1, 3), 6.177324216593, 1e-9);
  EXPECT_NEAR(theorem1_spin_term_tight(6, 2, 3), 2.0 * 4 * 3 / 6.0, 1e-15);
}

TEST(Theorem1, MaximallyMixedAnyK) {
  for (int k = 1; k < 6; ++k) {
    const auto cert = verify_theorem1(mu_family_state({6, 1, 0.0}), k, {quick(14)});
    EXPECT_TRUE(cert.report.pass);
    EXPECT_LT(cert.report.lhs, 1e-6);
  }
}

TEST(Theorem1, MuFamilyPasses) {
  const auto cert2 = verify_theorem1(mu_family_state({6, 1, 0.5}), 2, {quick(15)});
  EXPECT_TRUE(cert2.report.pass);
  EXPECT_LE(cert2.report.lhs, 0.5 * kTan12 + 1e-9);
  const auto cert3 = verify_theorem1(mu_family_state({6, 1, 0.5}), 3, {quick(15)});
  EXPECT_TRUE(cert3.report.pass);
  bool flagged = false;
  for (const auto& n : cert3.report.notes) flagged = flagged || n.find("diameter") != std::string::npos;
  EXPECT_TRUE(flagged);
}

TEST(Theorem1, PreconditionsEnforced) {
  EXPECT_THROW(verify_theorem1(mu_family_expansion({6, 1, 1.0}), 2, {quick(1)}), DomainError);
  EXPECT_THROW(verify_theorem1(mu_family_state({6, 1, 0.5}), 0, {quick(1)}), DomainError);
}

TEST(Theorem1, ConvexMixtureTextHasAllComponents) {
  const auto cert = verify_theorem1(mu_family_state({6, 1, 0.5}), 2, {quick(16)});
  const auto text = cert.approx.mixture.to_text();
  EXPECT_NE(text.find("weights 4"), std::string::npos);
  EXPECT_NE(text.find("component 4"), std::string::npos);
}

}  // namespace
}  // namespace fermicert
