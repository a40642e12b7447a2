// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

// Seeded generators for random operators, states and permutations.

#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "fermicert/fock.hpp"

namespace fermicert {

using Rng = std::mt19937_64;

inline Complex random_complex(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

/// Random expansion with `terms` words drawn uniformly from all 4^{pV} words.
inline OperatorExpansion random_expansion(const SystemShape& shape, int terms, Rng& rng) {
  OperatorExpansion out(shape);
  const int n = shape.num_majoranas();
  std::uniform_int_distribution<std::uint64_t> pick(0, (n == 64) ? ~0ULL : ((1ULL << n) - 1));
  for (int t = 0; t < terms; ++t) {
    const MajoranaWord w{pick(rng)};
    out.add_term(w, random_complex(rng));
  }
  return out;
}

inline Matrix random_matrix(Eigen::Index dim, Rng& rng) {
  Matrix m(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r) m(r, c) = random_complex(rng);
  return m;
}

inline Matrix random_hermitian(Eigen::Index dim, Rng& rng) {
  const Matrix g = random_matrix(dim, rng);
  return 0.5 * (g + g.adjoint());
}

/// Random density matrix respecting the global parity superselection rule.
inline DenseOperator random_even_state(const SystemShape& shape, Rng& rng) {
  const auto dim = static_cast<Eigen::Index>(shape.fock_dim());
  const Matrix g = random_matrix(dim, rng);
  Matrix rho = g * g.adjoint();
  for (Eigen::Index c = 0; c < dim; ++c)
    for (Eigen::Index r = 0; r < dim; ++r)
      if (global_parity(r) != global_parity(c)) rho(r, c) = 0.0;
  rho /= rho.trace().real();
  return {shape, rho};
}

inline SitePermutation random_permutation(int v, Rng& rng) {
  std::vector<int> im(v);
  std::iota(im.begin(), im.end(), 1);
  std::shuffle(im.begin(), im.end(), rng);
  return SitePermutation(std::move(im));
}

}  // namespace fermicert
