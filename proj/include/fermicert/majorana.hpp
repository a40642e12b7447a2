// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file majorana.hpp
 * @brief Exact symbolic algebra of Majorana words and their linear combinations.
 *
 * A MajoranaWord is the canonical (strictly increasing) product
 * m_{x1} m_{x2} ... m_{xr}, stored as a bitmask over Majorana positions
 * (site-1)*2p + (majorana-1). Products track the anti-commutation sign
 * {m_x, m_y} = 2 delta_xy exactly; m_x^2 = 1 is applied on the fly.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fermicert/shape.hpp"

namespace fermicert {

using Complex = std::complex<double>;

inline constexpr double kDefaultPruneThreshold = 1e-14;

struct MajoranaWord {
  std::uint64_t bits = 0;

  static MajoranaWord identity() { return {}; }

  int degree() const { return std::popcount(bits); }
  bool is_identity() const { return bits == 0; }

  /// Number of Majoranas sitting on `site` (1-based).
  int count_on_site(int site, const SystemShape& shape) const {
    const int width = shape.majoranas_per_site();
    const std::uint64_t mask = ((width == 64) ? ~0ULL : ((1ULL << width) - 1)) << ((site - 1) * width);
    return std::popcount(bits & mask);
  }

  bool even_on_every_site(const SystemShape& shape) const {
    for (int j = 1; j <= shape.sites; ++j)
      if (count_on_site(j, shape) % 2 != 0) return false;
    return true;
  }

  std::vector<ModeIndex> indices(const SystemShape& shape) const {
    std::vector<ModeIndex> out;
    out.reserve(degree());
    for (std::uint64_t b = bits; b != 0; b &= b - 1) out.push_back(mode_index_at(std::countr_zero(b), shape));
    return out;
  }

  auto operator<=>(const MajoranaWord&) const = default;
};

/// Sign picked up when the product a*b of two canonical words is reordered.
/// Each Majorana of b must pass every larger Majorana of a.
inline int product_sign(MajoranaWord a, MajoranaWord b) {
  int swaps = 0;
  for (std::uint64_t rest = b.bits; rest != 0; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    const std::uint64_t above = (j == 63) ? 0 : (a.bits >> (j + 1));
    swaps += std::popcount(above);
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

/// Sorts an arbitrary Majorana sequence into canonical order, applying m^2 = 1.
inline std::pair<int, MajoranaWord> canonicalize(const std::vector<ModeIndex>& seq, const SystemShape& shape) {
  std::vector<int> pos(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) pos[i] = bit_position(seq[i], shape);
  // insertion sort counting strict inversions; equal neighbours commute trivially
  int inversions = 0;
  for (std::size_t i = 1; i < pos.size(); ++i) {
    const int v = pos[i];
    std::size_t j = i;
    while (j > 0 && pos[j - 1] > v) {
      pos[j] = pos[j - 1];
      --j;
      ++inversions;
    }
    pos[j] = v;
  }
  MajoranaWord w;
  for (int p : pos) w.bits ^= (1ULL << p);
  return {(inversions % 2 == 0) ? 1 : -1, w};
}

inline MajoranaWord make_word(const std::vector<ModeIndex>& seq, const SystemShape& shape) {
  auto [sign, w] = canonicalize(seq, shape);
  if (sign != 1 || w.degree() != static_cast<int>(seq.size()))
    throw DomainError("make_word: indices must be strictly increasing");
  return w;
}

/// Site permutation pi on [1..V], stored as images: map[j-1] = pi(j).
class SitePermutation {
 public:
  SitePermutation() = default;
  explicit SitePermutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<int> seen(images_.size(), 0);
    for (int v : images_) {
      if (v < 1 || v > static_cast<int>(images_.size()) || seen[v - 1]++)
        throw DomainError("SitePermutation: not a bijection on [1..V]");
    }
  }

  static SitePermutation identity(int v) {
    std::vector<int> im(v);
    std::iota(im.begin(), im.end(), 1);
    return SitePermutation(std::move(im));
  }

  static SitePermutation transposition(int v, int a, int b) {
    auto p = identity(v);
    std::swap(p.images_.at(a - 1), p.images_.at(b - 1));
    return p;
  }

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int site) const { return images_.at(site - 1); }
  const std::vector<int>& images() const { return images_; }

  /// (this o other)(j) = this(other(j)).
  SitePermutation compose(const SitePermutation& other) const {
    std::vector<int> im(images_.size());
    for (std::size_t j = 0; j < im.size(); ++j) im[j] = images_.at(other.images_.at(j) - 1);
    return SitePermutation(std::move(im));
  }

  SitePermutation inverse() const {
    std::vector<int> im(images_.size());
    for (std::size_t j = 0; j < im.size(); ++j) im[images_[j] - 1] = static_cast<int>(j) + 1;
    return SitePermutation(std::move(im));
  }

  bool operator==(const SitePermutation&) const = default;

 private:
  std::vector<int> images_;
};

/// pi(m_{j1}^{a1} ... m_{jr}^{ar}) = m_{pi(j1)}^{a1} ... m_{pi(jr)}^{ar}, re-canonicalized.
inline std::pair<int, MajoranaWord> permute_word(const SitePermutation& pi, MajoranaWord w, const SystemShape& shape) {
  if (pi.size() != shape.sites) throw DomainError("permute_word: permutation size does not match shape");
  auto idx = w.indices(shape);
  for (auto& x : idx) x.site = pi(x.site);
  return canonicalize(idx, shape);
}

/// Sparse complex linear combination of Majorana words on a fixed shape.
class OperatorExpansion {
 public:
  using Terms = std::map<MajoranaWord, Complex>;

  OperatorExpansion() = default;
  explicit OperatorExpansion(SystemShape shape, double prune_threshold = kDefaultPruneThreshold)
      : shape_(shape), prune_(prune_threshold) {}

  static OperatorExpansion scalar(SystemShape shape, Complex c) {
    OperatorExpansion e(shape);
    e.add_term(MajoranaWord::identity(), c);
    return e;
  }

  static OperatorExpansion word(SystemShape shape, const std::vector<ModeIndex>& seq, Complex c = 1.0) {
    OperatorExpansion e(shape);
    auto [sign, w] = canonicalize(seq, shape);
    e.add_term(w, c * static_cast<double>(sign));
    return e;
  }

  const SystemShape& shape() const { return shape_; }
  const Terms& terms() const { return terms_; }
  double prune_threshold() const { return prune_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  Complex coefficient(MajoranaWord w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Complex{} : it->second;
  }

  void add_term(MajoranaWord w, Complex c) {
    if (shape_.num_majoranas() < 64 && (w.bits >> shape_.num_majoranas()) != 0)
      throw DomainError("add_term: word outside shape " + shape_.str());
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) it->second += c;
    if (std::abs(it->second) < prune_) terms_.erase(it);
  }

  OperatorExpansion& operator+=(const OperatorExpansion& o) {
    require_same_shape(o);
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  OperatorExpansion& operator-=(const OperatorExpansion& o) {
    require_same_shape(o);
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  OperatorExpansion& operator*=(Complex s) {
    Terms out;
    for (const auto& [w, c] : terms_)
      if (std::abs(c * s) >= prune_) out.emplace(w, c * s);
    terms_ = std::move(out);
    return *this;
  }

  friend OperatorExpansion operator+(OperatorExpansion a, const OperatorExpansion& b) { return a += b; }
  friend OperatorExpansion operator-(OperatorExpansion a, const OperatorExpansion& b) { return a -= b; }
  friend OperatorExpansion operator*(Complex s, OperatorExpansion a) { return a *= s; }

  /// Max |coefficient difference|; used for approximate equality.
  double max_abs_difference(const OperatorExpansion& o) const {
    require_same_shape(o);
    double m = 0.0;
    for (const auto& [w, c] : terms_) m = std::max(m, std::abs(c - o.coefficient(w)));
    for (const auto& [w, c] : o.terms_)
      if (!terms_.count(w)) m = std::max(m, std::abs(c));
    return m;
  }

  void require_same_shape(const OperatorExpansion& o) const {
    if (!(shape_ == o.shape_))
      throw DomainError("shape mismatch: " + shape_.str() + " vs " + o.shape_.str());
  }

 private:
  SystemShape shape_{};
  double prune_ = kDefaultPruneThreshold;
  Terms terms_;
};

inline OperatorExpansion multiply(const OperatorExpansion& a, const OperatorExpansion& b) {
  a.require_same_shape(b);
  OperatorExpansion out(a.shape(), a.prune_threshold());
  for (const auto& [wa, ca] : a.terms())
    for (const auto& [wb, cb] : b.terms())
      out.add_term(MajoranaWord{wa.bits ^ wb.bits}, ca * cb * static_cast<double>(product_sign(wa, wb)));
  return out;
}

/// Word reversal gives (-1)^{r(r-1)/2}; coefficients are conjugated.
inline OperatorExpansion adjoint(const OperatorExpansion& a) {
  OperatorExpansion out(a.shape(), a.prune_threshold());
  for (const auto& [w, c] : a.terms()) {
    const int r = w.degree();
    const double sign = ((r * (r - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    out.add_term(w, sign * std::conj(c));
  }
  return out;
}

inline OperatorExpansion apply_permutation(const SitePermutation& pi, const OperatorExpansion& a) {
  OperatorExpansion out(a.shape(), a.prune_threshold());
  for (const auto& [w, c] : a.terms()) {
    auto [sign, pw] = permute_word(pi, w, a.shape());
    out.add_term(pw, c * static_cast<double>(sign));
  }
  return out;
}

enum class Parity { Even = +1, Odd = -1 };

/// C^sigma_{P_j}: keeps the words whose Majorana count on `site` has the requested parity.
inline OperatorExpansion parity_project(const OperatorExpansion& a, int site, Parity sigma) {
  if (site < 1 || site > a.shape().sites) throw DomainError("parity_project: site out of range");
  OperatorExpansion out(a.shape(), a.prune_threshold());
  const int want = (sigma == Parity::Even) ? 0 : 1;
  for (const auto& [w, c] : a.terms())
    if (w.count_on_site(site, a.shape()) % 2 == want) out.add_term(w, c);
  return out;
}

/// C = C^+_{P_V} o ... o C^+_{P_1}: keeps words that are even on every site.
inline OperatorExpansion global_channel_C(const OperatorExpansion& a) {
  OperatorExpansion out(a.shape(), a.prune_threshold());
  for (const auto& [w, c] : a.terms())
    if (w.even_on_every_site(a.shape())) out.add_term(w, c);
  return out;
}

// Text format: one term per line, "re im (j1,a1)(j2,a2)...", identity written as "1".

inline std::string format_word(MajoranaWord w, const SystemShape& shape) {
  if (w.is_identity()) return "1";
  std::string s;
  for (const auto& x : w.indices(shape)) s += "(" + std::to_string(x.site) + "," + std::to_string(x.majorana) + ")";
  return s;
}

inline std::string to_text(const OperatorExpansion& a) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& [w, c] : a.terms()) os << c.real() << ' ' << c.imag() << ' ' << format_word(w, a.shape()) << '\n';
  return os.str();
}

inline OperatorExpansion parse_expansion(const std::string& text, const SystemShape& shape) {
  OperatorExpansion out(shape);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    double re = 0, im = 0;
    std::string rest;
    if (!(ls >> re >> im)) throw DomainError("expansion line " + std::to_string(lineno) + ": expected 're im word'");
    std::getline(ls, rest);
    rest.erase(std::remove_if(rest.begin(), rest.end(), [](char ch) { return ch == ' ' || ch == '\t' || ch == '\r'; }),
               rest.end());
    std::vector<ModeIndex> seq;
    if (rest != "1") {
      std::size_t i = 0;
      while (i < rest.size()) {
        int j = 0, a = 0;
        char close = 0;
        if (rest[i] != '(' || std::sscanf(rest.c_str() + i, "(%d,%d%c", &j, &a, &close) != 3 || close != ')')
          throw DomainError("expansion line " + std::to_string(lineno) + ": malformed word '" + rest + "'");
        seq.push_back({j, a});
        i = rest.find(')', i) + 1;
      }
      if (seq.empty()) throw DomainError("expansion line " + std::to_string(lineno) + ": missing word");
    }
    auto [sign, w] = canonicalize(seq, shape);
    out.add_term(w, Complex(re, im) * static_cast<double>(sign));
  }
  return out;
}

}  // namespace fermicert
