// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <map>
#include <numbers>
#include <set>

#include "fermicert/cumulants.hpp"
#include "oracles.hpp"

namespace fermicert {
namespace {

DenseOperator single_site(std::vector<double> diag) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag[i];
  return {SystemShape(1, n == 2 ? 1 : 2), m};
}

// occupation 2/3 on one mode
DenseOperator third_state() { return single_site({1.0 / 3, 2.0 / 3}); }
// (|00><00| + |11><11|)/2 on two modes: pair-correlated, not Gaussian
DenseOperator pair_state() { return single_site({0.5, 0.0, 0.0, 0.5}); }

// Brute-force cumulant from the partition definition with oracle partitions and Kronecker ladders.
Complex oracle_cumulant(const oracle::M& rho, const std::vector<oracle::M>& ops) {
  const int w = static_cast<int>(ops.size());
  std::map<std::vector<int>, Complex> k;
  auto mom = [&](const std::vector<int>& idx) {
    oracle::M prod = oracle::M::Identity(rho.rows(), rho.cols());
    for (int i : idx) prod = prod * ops[i - 1];
    return (rho * prod).trace();
  };
  std::vector<std::vector<int>> subsets;
  for (int mask = 1; mask < (1 << w); ++mask) {
    if (__builtin_popcount(mask) % 2) continue;
    std::vector<int> s;
    for (int i = 0; i < w; ++i)
      if (mask >> i & 1) s.push_back(i + 1);
    subsets.push_back(s);
  }
  std::sort(subsets.begin(), subsets.end(), [](auto& a, auto& b) { return a.size() < b.size(); });
  for (const auto& s : subsets) {
    Complex acc = mom(s);
    for (const auto& part : oracle::all_set_partitions(static_cast<int>(s.size()))) {
      if (part.size() == 1) continue;
      bool even = true;
      for (const auto& b : part) even = even && b.size() % 2 == 0;
      if (!even) continue;
      std::vector<int> seq;
      Complex prod = 1.0;
      for (const auto& b : part) {
        std::vector<int> mapped;
        for (int i : b) mapped.push_back(s[i - 1]);
        seq.insert(seq.end(), mapped.begin(), mapped.end());
        prod *= k.at(mapped);
      }
      acc -= static_cast<double>(oracle::permutation_sign(seq)) * prod;
    }
    k[s] = acc;
  }
  std::vector<int> all(w);
  std::iota(all.begin(), all.end(), 1);
  return k.at(all);
}

oracle::M oracle_ladder(int c, int site, int mode, int v, int p) {
  const oracle::M f = oracle::annihilation(site, mode, v, p);
  return c == kAnnihilate ? f : oracle::M(f.adjoint());
}

TEST(EvenPartitions, Counts) {
  EXPECT_EQ(even_partitions(2).size(), 1u);
  EXPECT_EQ(even_partitions(4).size(), 4u);
  EXPECT_EQ(even_partitions(6).size(), 31u);
  EXPECT_EQ(even_partitions(8).size(), 379u);
  EXPECT_THROW(even_partitions(3), DomainError);
  EXPECT_THROW(even_partitions(0), DomainError);
}

TEST(EvenPartitions, MatchBruteForceEnumeration) {
  for (int w : {2, 4, 6, 8}) {
    std::set<std::vector<std::vector<int>>> brute, ours;
    for (const auto& part : oracle::all_set_partitions(w)) {
      bool even = true;
      for (const auto& b : part) even = even && b.size() % 2 == 0;
      if (even) brute.insert(part);
    }
    for (const auto& p : even_partitions(w)) {
      for (std::size_t i = 1; i < p.blocks.size(); ++i) EXPECT_LT(p.blocks[i - 1].front(), p.blocks[i].front());
      ours.insert(p.blocks);
    }
    EXPECT_EQ(ours.size(), even_partitions(w).size());  // duplicate free
    EXPECT_EQ(ours, brute);
  }
}

TEST(EvenPartitions, Signs) {
  EXPECT_EQ(partition_sign({{{1, 2}, {3, 4}}}), 1);
  EXPECT_EQ(partition_sign({{{1, 3}, {2, 4}}}), -1);
  EXPECT_EQ(partition_sign({{{1, 4}, {2, 3}}}), 1);
  EXPECT_EQ(partition_sign({{{1, 2, 3, 4}}}), 1);
}

TEST(Ladder, MatchesKroneckerOracle) {
  for (auto [v, p] : {std::pair{1, 1}, {2, 1}, {3, 1}, {2, 2}}) {
    const SystemShape s(v, p);
    for (int j = 1; j <= v; ++j)
      for (int a = 1; a <= p; ++a)
        for (int c : {kAnnihilate, kCreate}) {
          const Matrix ours = Matrix(ladder_operator(s, c, j, a));
          EXPECT_LT((ours - oracle_ladder(c, j, a, v, p)).cwiseAbs().maxCoeff(), 1e-15);
        }
  }
  EXPECT_THROW(ladder_operator(SystemShape(2, 1), kAnnihilate, 3, 1), DomainError);
  EXPECT_THROW(ladder_operator(SystemShape(2, 1), 0, 1, 1), DomainError);
}

TEST(Ladder, CanonicalAnticommutation) {
  const SystemShape s(2, 2);
  for (int j = 1; j <= 2; ++j)
    for (int a = 1; a <= 2; ++a)
      for (int l = 1; l <= 2; ++l)
        for (int b = 1; b <= 2; ++b) {
          const Matrix f = Matrix(ladder_operator(s, kAnnihilate, j, a));
          const Matrix gd = Matrix(ladder_operator(s, kCreate, l, b));
          const Matrix g = Matrix(ladder_operator(s, kAnnihilate, l, b));
          const double delta = (j == l && a == b) ? 1.0 : 0.0;
          EXPECT_LT((f * gd + gd * f - delta * Matrix::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-15);
          EXPECT_LT((f * g + g * f).cwiseAbs().maxCoeff(), 1e-15);
        }
}

TEST(Moment, VacuumExamples) {
  const auto vac = single_site({1.0, 0.0});
  EXPECT_NEAR(std::abs(moment(vac, {LadderIndex::real(kAnnihilate, 1, 1), LadderIndex::real(kCreate, 1, 1)}) - 1.0),
              0.0, 1e-15);
  EXPECT_EQ(moment(vac, {LadderIndex::real(kCreate, 1, 1), LadderIndex::real(kAnnihilate, 1, 1)}), Complex{});
}

TEST(Moment, MuFamilyHoppingAgainstDenseOracle) {
  const auto rho = to_matrix(mu_family_expansion({6, 1, 1.0}));
  const Complex ours = moment(rho, {LadderIndex::real(kCreate, 1, 1), LadderIndex::real(kAnnihilate, 2, 1)});
  const oracle::M op = oracle_ladder(kCreate, 1, 1, 6, 1) * oracle_ladder(kAnnihilate, 2, 1, 6, 1);
  const Complex expect = (rho.mat * op).trace();
  EXPECT_LT(std::abs(ours - expect), 1e-14);
  // only the m_1^1 m_2^1 part of f_1^dag f_2 has a nonzero expectation, -i tan(pi/12)
  EXPECT_NEAR(std::abs(ours - Complex(0, -std::tan(std::numbers::pi / 12) / 4)), 0.0, 1e-14);
}

TEST(Moment, OddMomentsVanishForEvenStates) {
  Rng rng(1);
  const auto rho = random_even_state(SystemShape(2, 1), rng);
  for (int c1 : {1, -1})
    for (int c2 : {1, -1})
      for (int c3 : {1, -1}) {
        EXPECT_LT(std::abs(moment(rho, {LadderIndex::real(c1, 1, 1)})), 1e-12);
        EXPECT_LT(std::abs(moment(rho, {LadderIndex::real(c1, 1, 1), LadderIndex::real(c2, 2, 1),
                                        LadderIndex::real(c3, 1, 1)})),
                  1e-12);
      }
}

TEST(Cumulant, SecondEqualsMoment) {
  Rng rng(2);
  const auto rho = random_even_state(SystemShape(2, 1), rng);
  const std::vector<LadderIndex> ops{LadderIndex::real(kCreate, 1, 1), LadderIndex::real(kAnnihilate, 2, 1)};
  EXPECT_EQ(cumulant(rho, ops), moment(rho, ops));
  EXPECT_THROW(cumulant(rho, {LadderIndex::real(kCreate, 1, 1)}), DomainError);
}

TEST(Cumulant, VacuumHasNoHigherCumulants) {
  const auto vac = DenseOperator(SystemShape(2, 1), [] {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    return m;
  }());
  std::vector<LadderIndex> all;
  for (int j = 1; j <= 2; ++j)
    for (int c : {1, -1}) all.push_back(LadderIndex::real(c, j, 1));
  for (const auto& a : all)
    for (const auto& b : all)
      for (const auto& c : all)
        for (const auto& d : all) EXPECT_LT(std::abs(cumulant(vac, {a, b, c, d})), 1e-10);
}

TEST(Cumulant, SingleModeStatesAreGaussian) {
  // every even one-mode state is Gaussian: K_4 vanishes for all operator choices
  const auto rho = third_state();
  const std::vector<LadderIndex> ops{LadderIndex::real(kCreate, 1, 1), LadderIndex::real(kAnnihilate, 1, 1),
                                     LadderIndex::real(kCreate, 1, 1), LadderIndex::real(kAnnihilate, 1, 1)};
  EXPECT_LT(std::abs(cumulant(rho, ops)), 1e-15);
  std::vector<oracle::M> dense;
  for (const auto& x : ops) dense.push_back(oracle_ladder(x.c, 1, 1, 1, 1));
  EXPECT_LT(std::abs(oracle_cumulant(rho.mat, dense)), 1e-15);
  // moments recombine: <n n> = <n> = 2/3 = m12 m34 - m13 m24 + m14 m23
  EXPECT_NEAR(moment(rho, ops).real(), 2.0 / 3, 1e-15);
}

TEST(Cumulant, PairStateFourthCumulant) {
  const auto rho = pair_state();
  const std::vector<LadderIndex> a{LadderIndex::real(kCreate, 1, 1), LadderIndex::real(kAnnihilate, 1, 1),
                                   LadderIndex::real(kCreate, 1, 2), LadderIndex::real(kAnnihilate, 1, 2)};
  const std::vector<LadderIndex> b{LadderIndex::real(kCreate, 1, 1), LadderIndex::real(kCreate, 1, 2),
                                   LadderIndex::real(kAnnihilate, 1, 2), LadderIndex::real(kAnnihilate, 1, 1)};
  EXPECT_NEAR(std::abs(cumulant(rho, a) - 0.25), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(cumulant(rho, b) - 0.25), 0.0, 1e-15);
}

TEST(Cumulant, MatchesBruteForcePartitionOracle) {
  Rng rng(3);
  for (auto [v, p] : {std::pair{1, 2}, {2, 1}, {3, 1}, {1, 3}}) {
    const auto rho = random_even_state(SystemShape(v, p), rng);
    std::uniform_int_distribution<int> site(1, v), mode(1, p), sign(0, 1);
    for (int w : {2, 4, 6})
      for (int t = 0; t < 6; ++t) {
        std::vector<LadderIndex> ops;
        std::vector<oracle::M> dense;
        for (int i = 0; i < w; ++i) {
          ops.push_back(LadderIndex::real(sign(rng) ? 1 : -1, site(rng), mode(rng)));
          dense.push_back(oracle_ladder(ops.back().c, ops.back().site, ops.back().mode, v, p));
        }
        EXPECT_LT(std::abs(cumulant(rho, ops) - oracle_cumulant(rho.mat, dense)), 1e-10);
      }
  }
}

TEST(Cumulant, MomentCumulantRecombination) {
  Rng rng(4);
  const auto rho = random_even_state(SystemShape(1, 3), rng);
  std::uniform_int_distribution<int> mode(1, 3), sign(0, 1);
  for (int t = 0; t < 10; ++t) {
    std::vector<LadderIndex> ops;
    for (int i = 0; i < 6; ++i) ops.push_back(LadderIndex::real(sign(rng) ? 1 : -1, 1, mode(rng)));
    Complex recombined{};
    for (const auto& part : even_partitions(6)) {
      Complex prod = static_cast<double>(partition_sign(part));
      for (const auto& b : part.blocks) {
        std::vector<LadderIndex> sub;
        for (int i : b) sub.push_back(ops[i - 1]);
        prod *= cumulant(rho, sub);
      }
      recombined += prod;
    }
    EXPECT_LT(std::abs(recombined - moment(rho, ops)), 1e-10);
  }
}

TEST(Fourier, ModesAreCanonical) {
  const SystemShape s(3, 1);
  for (int q = fourier_q_min(3); q <= fourier_q_max(3); ++q)
    for (int r = fourier_q_min(3); r <= fourier_q_max(3); ++r) {
      const Matrix a = Matrix(fourier_mode(s, kAnnihilate, q, 1));
      const Matrix bd = Matrix(fourier_mode(s, kCreate, r, 1));
      EXPECT_LT((a * bd + bd * a - (q == r ? 1.0 : 0.0) * Matrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_LT((Matrix(fourier_mode(s, kCreate, q, 1)) - a.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    }
  EXPECT_THROW(fourier_mode(s, kAnnihilate, 2, 1), DomainError);
  EXPECT_THROW(fourier_mode(s, kAnnihilate, -2, 1), DomainError);
}

TEST(Fourier, SecondCumulantDeltaRule) {
  Rng rng(5);
  for (int v : {2, 3, 4}) {
    const auto rho = third_state();
    for (int q1 = fourier_q_min(v); q1 <= fourier_q_max(v); ++q1)
      for (int q2 = fourier_q_min(v); q2 <= fourier_q_max(v); ++q2) {
        const std::vector<LadderIndex> ops{LadderIndex::fourier(kCreate, q1, 1), LadderIndex::fourier(kAnnihilate, q2, 1)};
        const auto fc = fourier_cumulant(rho, v, ops);
        ASSERT_TRUE(fc.direct);
        if (q1 == q2) {
          EXPECT_NEAR(std::abs(fc.closed_form - 2.0 / 3), 0.0, 1e-15);
          EXPECT_NEAR(std::abs(*fc.direct - 2.0 / 3), 0.0, 1e-12);
        } else {
          EXPECT_EQ(fc.closed_form, Complex{});
          EXPECT_LT(std::abs(*fc.direct), 1e-15);
        }
      }
  }
}

TEST(Fourier, ClosedFormEqualsDirectWithDistinctTriples) {
  Rng rng(6);
  for (int v : {2, 3}) {
    const auto rho = random_even_state(SystemShape(1, 2), rng);
    std::uniform_int_distribution<int> q(fourier_q_min(v), fourier_q_max(v)), mode(1, 2), sign(0, 1);
    int checked = 0;
    for (int t = 0; t < 60; ++t) {
      std::vector<LadderIndex> ops;
      for (int i = 0; i < 4; ++i) ops.push_back(LadderIndex::fourier(sign(rng) ? 1 : -1, q(rng), mode(rng)));
      const auto fc = fourier_cumulant(rho, v, ops);
      if (fc.skipped) continue;
      ++checked;
      EXPECT_LT(std::abs(*fc.direct - fc.closed_form), 1e-9);
    }
    EXPECT_GT(checked, 10);
  }
}

TEST(Fourier, RepeatedTriplesAreSkipped) {
  const auto fc = fourier_cumulant(third_state(), 3,
                                   {LadderIndex::fourier(kCreate, 0, 1), LadderIndex::fourier(kCreate, 0, 1)});
  EXPECT_TRUE(fc.skipped);
  EXPECT_FALSE(fc.direct);
  EXPECT_NE(fc.note.find("distinct"), std::string::npos);
}

TEST(Suppression, GaussianBothSidesZero) {
  const std::vector<LadderIndex> ops{LadderIndex::fourier(kCreate, 0, 1), LadderIndex::fourier(kAnnihilate, 0, 1),
                                     LadderIndex::fourier(kCreate, 1, 1), LadderIndex::fourier(kAnnihilate, 1, 1)};
  const auto rep = verify_suppression(third_state(), 4, ops);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.lhs, 1e-12);
  EXPECT_LT(rep.rhs, 1e-12);
}

TEST(Suppression, ResonantEqualityForNonGaussianState) {
  for (int v = 2; v <= 5; ++v) {
    const std::vector<LadderIndex> ops{LadderIndex::fourier(kCreate, 0, 1), LadderIndex::fourier(kAnnihilate, 0, 1),
                                       LadderIndex::fourier(kCreate, 0, 2), LadderIndex::fourier(kAnnihilate, 0, 2)};
    const auto rep = verify_suppression(pair_state(), v, ops);
    EXPECT_TRUE(rep.pass);
    EXPECT_NEAR(rep.lhs * v / 0.25, 1.0, 1e-9);
    EXPECT_NEAR(rep.rhs, 0.25 / v, 1e-15);
  }
}

TEST(Suppression, OffResonantIsZero) {
  const std::vector<LadderIndex> ops{LadderIndex::fourier(kCreate, 1, 1), LadderIndex::fourier(kAnnihilate, 0, 1),
                                     LadderIndex::fourier(kCreate, 0, 2), LadderIndex::fourier(kAnnihilate, 0, 2)};
  const auto rep = verify_suppression(pair_state(), 3, ops);
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.lhs, 1e-12);
}

TEST(Suppression, RequiresMoreThanTwoOperators) {
  EXPECT_THROW(verify_suppression(third_state(), 3,
                                  {LadderIndex::fourier(kCreate, 0, 1), LadderIndex::fourier(kAnnihilate, 0, 1)}),
               DomainError);
}

TEST(Corollary, Pairings) {
  EXPECT_EQ(pairings(4).size(), 3u);
  EXPECT_EQ(pairings(6).size(), 15u);
}

TEST(Corollary, LogLogSlope) {
  EXPECT_NEAR(log_log_slope({2, 3, 4, 5}, {0.5, 1.0 / 3, 0.25, 0.2}), -1.0, 1e-12);
  EXPECT_TRUE(std::isnan(log_log_slope({1, 2}, {0.0, 1.0})));
}

TEST(Corollary, MaximallyMixedHasNoDeviation) {
  CorollaryOptions opt;
  opt.theorem1.mixture.restarts = 1;
  const auto rep = verify_corollary(mu_family_state({6, 1, 0.0}), 3, opt);
  EXPECT_LT(rep.lhs, 1e-12);
  EXPECT_TRUE(rep.pass);
}

TEST(Corollary, ProductInputDeviationIsTheFourthCumulant) {
  // pair_state^{(x)6}: the deviation is |K_4^xi| / k on resonant Fourier tuples
  const SystemShape s(6, 2);
  const auto xi = to_expansion(pair_state());
  OperatorExpansion rho = OperatorExpansion::scalar(s, 1.0);
  for (int j = 1; j <= 6; ++j) {
    OperatorExpansion placed(s);
    for (const auto& [w, c] : xi.terms()) placed.add_term(MajoranaWord{w.bits << (4 * (j - 1))}, c);
    rho = multiply(rho, placed);
  }
  CorollaryOptions opt;
  opt.theorem1.mixture.restarts = 1;
  opt.max_q_tuples = 8;
  std::vector<double> ks, devs;
  for (int k : {2, 3}) {
    const auto pt = corollary_point(rho, k, opt);
    EXPECT_NEAR(pt.deviation, 0.25 / k, 1e-10);
    EXPECT_LT(pt.mixture_distance, 1e-10);
    ks.push_back(k);
    devs.push_back(pt.deviation);
  }
  EXPECT_NEAR(log_log_slope(ks, devs), -1.0, 1e-8);
}

}  // namespace
}  // namespace fermicert
