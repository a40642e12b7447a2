// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file runner.hpp
 * @brief Verification suites behind the command-line tool. Each suite turns a
 *        RunConfig into reports and deterministic CSV tables.
 */

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fermicert/meanfield.hpp"
#include "fermicert/random.hpp"
#include "fermicert/rdm.hpp"

namespace fermicert {

/// Bad flags, missing files, malformed fixtures.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitResource = 3 };

struct RunConfig {
  std::string command;

  // state source: mu | product | maximally-mixed | file
  std::string family = "mu";
  std::vector<int> sites{6};
  int modes = 1;
  std::vector<double> mus{0.5};
  std::vector<std::string> diag;  // product / clt single-site diagonal, fractions allowed
  std::string state_file;
  std::string state_format = "expansion";  // expansion | matrix
  bool unchecked = false;                  // evaluate non-states / skip preconditions

  std::vector<int> ks;  // empty: every admissible k
  std::optional<std::uint64_t> seed;
  int restarts = 8;
  int iters = 500;
  int components = -1;

  int cases = 500;        // check-algebra
  int lemma_cases = 200;  // lemma 1 / lemma 2 instances

  std::vector<int> weights{4};  // cumulant orders for verify-clt
  bool exhaustive = false;      // verify-clt: every (c, q) tuple instead of resonant ones
  int max_q_tuples = 16;

  double a = 0.5;  // rdm-spectrum
  double b_re = 0.0;
  double b_im = 0.0;
  bool from_state = false;  // rdm-spectrum: fit a, b from the state's 1-RDM

  std::vector<std::string> hamiltonians{"onsite", "hopping", "hubbard"};
  std::string template_file;
  int template_k = 2;
  std::string subsets = "all-k-subsets";
  bool rescale = true;

  std::string out_dir = "fermicert_out";
};

struct CsvTable {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_text() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
  }
};

inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}
inline std::string csv_bool(bool b) { return b ? "1" : "0"; }

struct SuiteResult {
  std::string command;
  std::vector<VerificationReport> reports;
  std::vector<CsvTable> tables;

  bool pass() const {
    for (const auto& r : reports)
      if (!r.pass) return false;
    return !reports.empty();
  }
  std::size_t failures() const {
    std::size_t n = 0;
    for (const auto& r : reports) n += r.pass ? 0 : 1;
    return n;
  }
};

// ---------------------------------------------------------------------------
// Inputs

inline std::string read_file(const std::string& path) {
  if (path.empty()) throw ConfigError("no file path given");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// "0.25", "1/3", "-2/7"
inline double parse_fraction(const std::string& s) {
  try {
    const auto slash = s.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(s, &used);
      if (used != s.size()) throw ConfigError("");
      return v;
    }
    const double num = std::stod(s.substr(0, slash), &used);
    if (used != slash) throw ConfigError("");
    const std::string den_s = s.substr(slash + 1);
    const double den = std::stod(den_s, &used);
    if (used != den_s.size() || den == 0.0) throw ConfigError("");
    return num / den;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + s + "'");
  }
}

/// Single-site state diag(values) on p modes, p from the length.
inline DenseOperator single_site_from_diag(const std::vector<std::string>& diag) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  if (n < 2 || (n & (n - 1)) != 0) throw ConfigError("--diag needs 2^p entries");
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = parse_fraction(diag[i]);
  return {SystemShape(1, std::countr_zero(static_cast<std::uint64_t>(n))), m};
}

inline std::string mu_label(double mu) { return VerificationReport::format_number(mu); }

/// The state selected by the config on V sites; `mu` only matters for the mu family.
inline OperatorExpansion load_state(const RunConfig& cfg, int v, double mu) {
  if (cfg.family == "mu") {
    const MuFamilyParams params{v, cfg.modes, mu};
    return cfg.unchecked ? mu_family_expansion(params) : mu_family_state(params);
  }
  if (cfg.family == "maximally-mixed") return mu_family_state({v, cfg.modes, 0.0});
  if (cfg.family == "product") {
    if (cfg.diag.empty()) throw ConfigError("family product needs --diag");
    return product_state_expansion(single_site_from_diag(cfg.diag), v);
  }
  if (cfg.family == "file") {
    const SystemShape shape(v, cfg.modes);
    const std::string text = read_file(cfg.state_file);
    try {
      if (cfg.state_format == "expansion") return parse_expansion(text, shape);
      if (cfg.state_format == "matrix") {
        auto dense = dense_from_text(text, shape);
        if (dense.dim() != static_cast<Eigen::Index>(shape.fock_dim()))
          throw ConfigError("matrix fixture dimension " + std::to_string(dense.dim()) + " does not match " + shape.str());
        return to_expansion(dense);
      }
    } catch (const DomainError& e) {
      throw ConfigError(std::string("fixture ") + cfg.state_file + ": " + e.what());
    }
    throw ConfigError("unknown --state-format " + cfg.state_format);
  }
  throw ConfigError("unknown --family " + cfg.family);
}

inline std::vector<double> state_parameters(const RunConfig& cfg) {
  return cfg.family == "mu" ? cfg.mus : std::vector<double>{0.0};
}

inline std::vector<int> admissible_ks(const RunConfig& cfg, int v, int lo = 1) {
  if (!cfg.ks.empty()) return cfg.ks;
  std::vector<int> out;
  for (int k = lo; k < v; ++k) out.push_back(k);
  return out;
}

inline std::uint64_t require_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw ConfigError(cfg.command + ": --seed is required for optimizer commands");
  return *cfg.seed;
}

inline MixtureOptions mixture_options(const RunConfig& cfg) {
  MixtureOptions m;
  m.components = cfg.components;
  m.restarts = cfg.restarts;
  m.iters = cfg.iters;
  m.seed = require_seed(cfg);
  return m;
}

// ---------------------------------------------------------------------------
// check-algebra: symbolic vs dense, Lemma 1 and Lemma 2 properties

inline SuiteResult suite_check_algebra(const RunConfig& cfg) {
  SuiteResult out{"check-algebra", {}, {}};
  const std::uint64_t seed = cfg.seed.value_or(1);
  const std::vector<SystemShape> shapes{SystemShape(1, 1), SystemShape(2, 1), SystemShape(3, 1),
                                        SystemShape(4, 1), SystemShape(1, 2), SystemShape(2, 2)};
  CsvTable alg{"algebra", {"case", "V", "p", "product", "adjoint", "permutation"}, {}};
  VerificationReport rep;
  {
    ReportTimer timer(rep);
    rep.claim = "algebra";
    rep.add_input("cases", cfg.cases);
    rep.add_input("seed", std::to_string(seed));
    Rng rng(seed);
    double worst = 0.0;
    for (int c = 0; c < cfg.cases; ++c) {
      const auto& s = shapes[c % shapes.size()];
      const auto a = random_expansion(s, 6, rng);
      const auto b = random_expansion(s, 6, rng);
      const auto pi = random_permutation(s.sites, rng);
      const Matrix am = to_matrix(a).mat, bm = to_matrix(b).mat;
      const double d_prod = (to_matrix(multiply(a, b)).mat - am * bm).cwiseAbs().maxCoeff();
      const double d_adj = (to_matrix(adjoint(a)).mat - am.adjoint()).cwiseAbs().maxCoeff();
      const Matrix u = permutation_unitary(pi, s).mat;
      const double d_perm = (to_matrix(apply_permutation(pi, a)).mat - u * am * u.adjoint()).cwiseAbs().maxCoeff();
      worst = std::max({worst, d_prod, d_adj, d_perm});
      alg.rows.push_back({std::to_string(c), std::to_string(s.sites), std::to_string(s.modes_per_site),
                          csv_number(d_prod), csv_number(d_adj), csv_number(d_perm)});
    }
    rep.lhs = worst;
    rep.rhs = 0.0;
    rep.tolerance = 1e-10;
    rep.decide();
  }
  out.reports.push_back(rep);
  out.tables.push_back(std::move(alg));

  // Lemma 1: pinching by a site parity cannot raise the operator norm.
  // Lemma 2: |tr(rho A)|^2 <= tr(rho A A^dag).
  CsvTable lem{"lemmas", {"case", "lemma", "V", "p", "lhs", "rhs"}, {}};
  VerificationReport l1, l2;
  {
    ReportTimer t1(l1);
    l1.claim = "lemma1";
    l1.add_input("cases", cfg.lemma_cases);
    Rng rng(seed + 1);
    double worst = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < cfg.lemma_cases; ++c) {
      const auto& s = shapes[c % shapes.size()];
      const auto a = to_matrix(random_expansion(s, 8, rng));
      const int site = 1 + c % s.sites;
      const auto sigma = (c / 2) % 2 ? Parity::Odd : Parity::Even;
      const double lhs = operator_norm(parity_project(a, site, sigma)), rhs = operator_norm(a);
      worst = std::max(worst, lhs - rhs);
      lem.rows.push_back({std::to_string(c), "1", std::to_string(s.sites), std::to_string(s.modes_per_site),
                          csv_number(lhs), csv_number(rhs)});
    }
    l1.lhs = worst;
    l1.rhs = 0.0;
    l1.tolerance = kBoundTol;
    l1.decide();
    l1.notes.push_back("lhs is max over cases of ||C_P(A)|| - ||A||");
  }
  {
    ReportTimer t2(l2);
    l2.claim = "lemma2";
    l2.add_input("cases", cfg.lemma_cases);
    Rng rng(seed + 2);
    double worst = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < cfg.lemma_cases; ++c) {
      const auto& s = shapes[c % shapes.size()];
      const auto rho = random_even_state(s, rng);
      const Matrix a = random_matrix(rho.dim(), rng);
      const double lhs = std::norm((rho.mat * a).trace());
      const double rhs = (rho.mat * a * a.adjoint()).trace().real();
      worst = std::max(worst, lhs - rhs);
      lem.rows.push_back({std::to_string(c), "2", std::to_string(s.sites), std::to_string(s.modes_per_site),
                          csv_number(lhs), csv_number(rhs)});
    }
    l2.lhs = worst;
    l2.rhs = 0.0;
    l2.tolerance = kBoundTol;
    l2.decide();
    l2.notes.push_back("lhs is max over cases of |tr(rho A)|^2 - tr(rho A A^dag)");
  }
  out.reports.push_back(l1);
  out.reports.push_back(l2);
  out.tables.push_back(std::move(lem));
  return out;
}

// ---------------------------------------------------------------------------

inline SuiteResult suite_check_invariance(const RunConfig& cfg) {
  SuiteResult out{"check-invariance", {}, {}};
  CsvTable t{"invariance", {"V", "p", "mu", "condition1", "condition2", "full", "words", "permutations", "exhaustive"}, {}};
  for (int v : cfg.sites)
    for (double mu : state_parameters(cfg)) {
      VerificationReport rep;
      ReportTimer timer(rep);
      rep.claim = "invariance";
      rep.add_input("V", v);
      rep.add_input("p", cfg.modes);
      if (cfg.family == "mu") rep.add_input("mu", mu);
      const auto rho = load_state(cfg, v, mu);
      InvarianceOptions io;
      io.require_state = !cfg.unchecked;
      const auto inv = check_invariance(rho, io);
      rep.lhs = std::max(inv.condition1_max_violation, inv.condition2_max_violation);
      rep.rhs = 0.0;
      rep.tolerance = kInvarianceTol;
      rep.decide();
      rep.notes.push_back(std::string(inv.fully_invariant ? "fully invariant" : "not fully invariant") +
                          " (all-permutation violation " + VerificationReport::format_number(inv.full_max_violation) +
                          ")");
      if (!inv.exhaustive) rep.notes.push_back("sampled permutations");
      t.rows.push_back({std::to_string(v), std::to_string(cfg.modes), mu_label(mu),
                        csv_number(inv.condition1_max_violation), csv_number(inv.condition2_max_violation),
                        csv_number(inv.full_max_violation), std::to_string(inv.checked_words),
                        std::to_string(inv.checked_permutations), csv_bool(inv.exhaustive)});
      out.reports.push_back(std::move(rep));
    }
  out.tables.push_back(std::move(t));
  return out;
}

// ---------------------------------------------------------------------------

inline SuiteResult suite_lemma3(const RunConfig& cfg) {
  SuiteResult out{"verify-lemma3", {}, {}};
  CsvTable t{"lemma3", {"V", "p", "mu", "k", "lhs", "rhs", "pass"}, {}};
  for (int v : cfg.sites)
    for (double mu : state_parameters(cfg)) {
      // the lemma bounds expectation values of the operator itself, so a mu-family
      // operator that fails positivity is still evaluated, with a note
      bool as_operator = cfg.unchecked;
      if (cfg.family == "mu" && !as_operator)
        as_operator = !check_state(to_matrix(mu_family_expansion({v, cfg.modes, mu}))).ok();
      RunConfig local = cfg;
      local.unchecked = as_operator;
      const auto rho = load_state(local, v, mu);
      for (int k : admissible_ks(cfg, v)) {
        Lemma3Options lo;
        lo.require_state = !as_operator;
        auto rep = verify_lemma3(rho, k, lo);
        if (cfg.family == "mu") rep.add_input("mu", mu);
        if (as_operator) {
          const auto validity = check_state(to_matrix(rho));
          if (!validity.ok())
            rep.notes.push_back("input is not a state (min eigenvalue " +
                                VerificationReport::format_number(validity.min_eigenvalue) +
                                "); evaluated as an operator only");
        }
        t.rows.push_back({std::to_string(v), std::to_string(cfg.modes), mu_label(mu), std::to_string(k),
                          csv_number(rep.lhs), csv_number(rep.rhs), csv_bool(rep.pass)});
        out.reports.push_back(std::move(rep));
      }
    }
  out.tables.push_back(std::move(t));
  return out;
}

inline SuiteResult suite_theorem1(const RunConfig& cfg) {
  SuiteResult out{"verify-theorem1", {}, {}};
  CsvTable t{"theorem1",
             {"V", "p", "mu", "k", "distance", "bound", "tight_bound", "pass", "components_even", "max_off_diagonal"},
             {}};
  for (int v : cfg.sites)
    for (double mu : state_parameters(cfg)) {
      const auto rho = load_state(cfg, v, mu);
      const int p = rho.shape().modes_per_site;
      for (int k : admissible_ks(cfg, v)) {
        Theorem1Options to;
        to.mixture = mixture_options(cfg);
        to.require_state = !cfg.unchecked;
        auto cert = verify_theorem1(rho, k, to);
        if (cfg.family == "mu") cert.report.add_input("mu", mu);
        t.rows.push_back({std::to_string(v), std::to_string(p), mu_label(mu), std::to_string(k),
                          csv_number(cert.approx.distance), csv_number(cert.report.rhs),
                          csv_number(lemma3_bound(v, p, k) + theorem1_spin_term_tight(v, p, k)),
                          csv_bool(cert.report.pass), csv_bool(cert.components.all_even),
                          csv_number(cert.components.max_off_diagonal)});
        out.reports.push_back(std::move(cert.report));
      }
    }
  out.tables.push_back(std::move(t));
  return out;
}

// ---------------------------------------------------------------------------
// verify-clt

inline std::string ops_label(const std::vector<LadderIndex>& ops) {
  std::string s;
  for (const auto& x : ops)
    s += (s.empty() ? "" : " ") + std::string(x.c == kCreate ? "a+" : "a") + "(" + std::to_string(x.mode) + "," +
         std::to_string(x.q) + ")";
  return s;
}

/// Every tuple of w Fourier ladder operators on V sites.
inline std::vector<std::vector<LadderIndex>> all_fourier_tuples(int v, int p, int w) {
  std::vector<LadderIndex> alphabet;
  for (int q = fourier_q_min(v); q <= fourier_q_max(v); ++q)
    for (int m = 1; m <= p; ++m)
      for (int c : {kCreate, kAnnihilate}) alphabet.push_back(LadderIndex::fourier(c, q, m));
  std::vector<std::vector<LadderIndex>> out;
  std::vector<std::size_t> idx(w, 0);
  for (;;) {
    std::vector<LadderIndex> t;
    for (auto i : idx) t.push_back(alphabet[i]);
    out.push_back(std::move(t));
    int pos = w - 1;
    while (pos >= 0 && ++idx[pos] == alphabet.size()) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

/// Resonant tuples for a cumulant order: the default corollary patterns for w = 4,
/// alternating creation / annihilation on mode 1 otherwise.
inline std::vector<std::vector<LadderIndex>> resonant_tuples(int v, int p, int w, int limit) {
  std::vector<std::vector<std::pair<int, int>>> patterns;
  if (w == 4) patterns = default_corollary_patterns(p);
  else {
    std::vector<std::pair<int, int>> pat;
    for (int i = 0; i < w; ++i) pat.emplace_back(i % 2 ? kAnnihilate : kCreate, 1);
    patterns.push_back(pat);
  }
  std::vector<std::vector<LadderIndex>> out;
  for (const auto& pat : patterns)
    for (auto& t : resonant_fourier_ops(v, pat, limit)) out.push_back(std::move(t));
  return out;
}

inline SuiteResult suite_clt(const RunConfig& cfg) {
  SuiteResult out{"verify-clt", {}, {}};
  const auto single = single_site_from_diag(cfg.diag.empty() ? std::vector<std::string>{"1/3", "2/3"} : cfg.diag);
  const int p = single.shape.modes_per_site;
  CsvTable eq{"clt_fourier", {"V", "w", "ops", "direct_re", "direct_im", "closed_re", "closed_im", "abs_diff", "skipped"},
              {}};
  CsvTable sup{"clt_suppression", {"V", "w", "ops", "lhs", "rhs", "single_site_abs", "ratio"}, {}};
  for (int v : cfg.sites)
    for (int w : cfg.weights) {
      if (w < 2 || w % 2) throw ConfigError("verify-clt: cumulant orders must be even and at least 2");
      const auto tuples = cfg.exhaustive ? all_fourier_tuples(v, p, w) : resonant_tuples(v, p, w, cfg.max_q_tuples);

      // closed form against the direct Fourier cumulant
      VerificationReport lem;
      {
        ReportTimer timer(lem);
        lem.claim = "lemma4-w" + std::to_string(w);
        lem.add_input("V", v);
        lem.add_input("p", p);
        lem.add_input("tuples", static_cast<int>(tuples.size()));
        lem.add_input("exhaustive", cfg.exhaustive ? "1" : "0");
        double worst = 0.0, delta_worst = 0.0;
        int skipped = 0;
        for (const auto& ops : tuples) {
          const auto fc = fourier_cumulant(single, v, ops);
          if (fc.skipped) {
            ++skipped;
            eq.rows.push_back({std::to_string(v), std::to_string(w), ops_label(ops), "", "", "", "", "", "1"});
            continue;
          }
          const double d = std::abs(*fc.direct - fc.closed_form);
          worst = std::max(worst, d);
          if (w == 2) {
            // second cumulants decouple: K(a_q^c, a_q'^c') = delta(c q + c' q' = 0 mod V) K^rho
            const bool resonant = fourier_phase_sum(v, ops) != 0.0;
            delta_worst = std::max(delta_worst, std::abs(*fc.direct - (resonant ? fc.single_site : Complex{})));
          }
          eq.rows.push_back({std::to_string(v), std::to_string(w), ops_label(ops), csv_number(fc.direct->real()),
                             csv_number(fc.direct->imag()), csv_number(fc.closed_form.real()),
                             csv_number(fc.closed_form.imag()), csv_number(d), "0"});
        }
        lem.lhs = std::max(worst, delta_worst);
        lem.rhs = 0.0;
        lem.tolerance = kBoundTol;
        lem.decide();
        if (skipped) lem.notes.push_back(std::to_string(skipped) + " tuples skipped: repeated (c, mode, q)");
        if (w == 2) lem.notes.push_back("delta rule max deviation " + VerificationReport::format_number(delta_worst));
      }
      out.reports.push_back(std::move(lem));
      if (w == 2) continue;

      // suppression, plus the equality case on resonant tuples
      VerificationReport ratio;
      ratio.claim = "hudson-ratio-w" + std::to_string(w);
      ratio.add_input("V", v);
      ratio.add_input("p", p);
      ratio.relation = Relation::Equal;
      ratio.rhs = 1.0;
      ratio.tolerance = 1e-9;
      double worst_ratio_dev = -1.0, worst_ratio = std::numeric_limits<double>::quiet_NaN();
      bool undefined = false;
      double worst_sup = -std::numeric_limits<double>::infinity();
      VerificationReport sup_rep;
      sup_rep.claim = "hudson-w" + std::to_string(w);
      sup_rep.add_input("V", v);
      sup_rep.add_input("p", p);
      {
        ReportTimer timer(sup_rep);
        for (const auto& ops : resonant_tuples(v, p, w, cfg.max_q_tuples)) {
          if (!distinct_triples(ops)) continue;
          const auto r = verify_suppression(single, v, ops);
          const double k_abs = r.rhs / std::pow(static_cast<double>(v), (2.0 - w) / 2.0);
          const double q = k_abs > 1e-14 ? r.lhs / r.rhs : std::numeric_limits<double>::quiet_NaN();
          if (std::isnan(q)) undefined = true;
          else if (std::abs(q - 1.0) > worst_ratio_dev) {
            worst_ratio_dev = std::abs(q - 1.0);
            worst_ratio = q;
          }
          if (r.lhs - r.rhs > worst_sup) {
            worst_sup = r.lhs - r.rhs;
            sup_rep.lhs = r.lhs;
            sup_rep.rhs = r.rhs;
          }
          sup.rows.push_back({std::to_string(v), std::to_string(w), ops_label(ops), csv_number(r.lhs), csv_number(r.rhs),
                              csv_number(k_abs), std::isnan(q) ? "nan" : csv_number(q)});
        }
        sup_rep.tolerance = kBoundTol;
        sup_rep.decide();
        sup_rep.notes.push_back("lhs/rhs shown for the tuple closest to violation");
      }
      ratio.lhs = undefined ? std::numeric_limits<double>::quiet_NaN() : worst_ratio;
      ratio.decide();
      if (undefined)
        ratio.notes.push_back("single-site cumulant vanishes (|K_w| < 1e-14): lhs V^{(w-2)/2} / |K_w| is 0/0");
      out.reports.push_back(std::move(sup_rep));
      out.reports.push_back(std::move(ratio));
    }
  out.tables.push_back(std::move(eq));
  out.tables.push_back(std::move(sup));
  return out;
}

// ---------------------------------------------------------------------------

inline SuiteResult suite_corollary(const RunConfig& cfg) {
  SuiteResult out{"verify-corollary", {}, {}};
  CsvTable t{"corollary",
             {"V", "p", "mu", "k", "deviation", "mixture_distance", "fourth_cumulant_mass", "scale", "samples"},
             {}};
  for (int v : cfg.sites)
    for (double mu : state_parameters(cfg)) {
      const auto rho = load_state(cfg, v, mu);
      const int p = rho.shape().modes_per_site;
      CorollaryOptions co;
      co.theorem1.mixture = mixture_options(cfg);
      co.theorem1.require_state = !cfg.unchecked;
      co.max_q_tuples = cfg.max_q_tuples;
      std::vector<int> ks = admissible_ks(cfg, v, 2);
      if (cfg.ks.empty() && ks.size() > 4) ks.resize(4);
      auto sweep = verify_corollary_slope(rho, ks, co);
      for (const auto& pt : sweep.points) {
        VerificationReport rep;
        rep.claim = "corollary";
        rep.add_input("V", v);
        rep.add_input("p", p);
        rep.add_input("k", pt.k);
        rep.lhs = pt.deviation;
        rep.rhs = pt.mixture_distance + pt.fourth_cumulant_mass;
        rep.tolerance = kBoundTol;
        rep.decide();
        rep.notes.push_back("empirical constant deviation/(1/k + k^1.5/V) = " +
                            VerificationReport::format_number(pt.deviation / pt.scale));
        out.reports.push_back(std::move(rep));
        t.rows.push_back({std::to_string(v), std::to_string(p), mu_label(mu), std::to_string(pt.k),
                          csv_number(pt.deviation), csv_number(pt.mixture_distance),
                          csv_number(pt.fourth_cumulant_mass), csv_number(pt.scale), std::to_string(pt.samples)});
      }
      if (cfg.family == "mu") sweep.report.add_input("mu", mu);
      out.reports.push_back(std::move(sweep.report));
    }
  out.tables.push_back(std::move(t));
  return out;
}

// ---------------------------------------------------------------------------

inline SuiteResult suite_rdm(const RunConfig& cfg) {
  SuiteResult out{"rdm-spectrum", {}, {}};
  CsvTable t{"rdm_spectrum", {"V", "mu", "k", "lambda_formula", "lambda_direct", "abs_delta", "singular"}, {}};
  auto add_spectrum = [&](const CirculantParams& c, double mu, const std::string& source) {
    const auto cmp = compare_circulant_spectrum(c);
    VerificationReport rep;
    ReportTimer timer(rep);
    rep.claim = "rdm-spectrum";
    rep.add_input("V", c.sites);
    rep.add_input("a", c.a);
    rep.add_input("b_re", c.b.real());
    rep.add_input("b_im", c.b.imag());
    rep.add_input("source", source);
    rep.lhs = cmp.max_deviation;
    rep.rhs = 0.0;
    rep.tolerance = 1e-10;
    rep.decide();
    for (int k : cmp.singular)
      rep.notes.push_back("denominator vanishes at k=" + std::to_string(k) + "; eigenvalue taken from direct solver");
    if (c.b.imag() == 0.0) {
      // real branch at k = 0, exactly
      const double expect = c.a + c.b.real() * (c.sites - 1);
      if (cmp.formula[0] != expect) {
        rep.pass = false;
        rep.notes.push_back("k=0 value differs from a + b(V-1)");
      }
    }
    for (int k = 0; k < c.sites; ++k) {
      const bool sing = std::isnan(cmp.formula[k]);
      t.rows.push_back({std::to_string(c.sites), mu_label(mu), std::to_string(k), sing ? "nan" : csv_number(cmp.formula[k]),
                        csv_number(cmp.matched[k]), sing ? "nan" : csv_number(std::abs(cmp.formula[k] - cmp.matched[k])),
                        csv_bool(sing)});
    }
    out.reports.push_back(std::move(rep));
  };
  if (!cfg.from_state) {
    for (int v : cfg.sites) add_spectrum({v, cfg.a, Complex(cfg.b_re, cfg.b_im)}, 0.0, "params");
  } else {
    for (int v : cfg.sites)
      for (double mu : state_parameters(cfg)) {
        const auto rho = to_matrix(load_state(cfg, v, mu));
        const auto g = one_rdm(rho);
        if (g.shape.modes_per_site != 1) {
          const auto bs = block_rdm_structure(g);
          VerificationReport rep;
          rep.claim = "rdm-blocks";
          rep.add_input("V", v);
          rep.add_input("p", g.shape.modes_per_site);
          rep.lhs = bs.residual;
          rep.rhs = 0.0;
          rep.tolerance = 1e-9;
          rep.decide();
          rep.notes.push_back("max |B| " + VerificationReport::format_number(bs.b.cwiseAbs().maxCoeff()));
          out.reports.push_back(std::move(rep));
        } else {
          const Complex b = mean_lower_entry(g.gamma);
          const double a = g.gamma.trace().real() / v;
          const CirculantParams c{v, a, b};
          add_spectrum(c, mu, "state");
          // the fitted circulant must be the 1-RDM itself
          VerificationReport fit;
          fit.claim = "rdm-circulant";
          fit.add_input("V", v);
          fit.lhs = (g.gamma - circulant_matrix(c)).cwiseAbs().maxCoeff();
          fit.rhs = 0.0;
          fit.tolerance = 1e-9;
          fit.decide();
          out.reports.push_back(std::move(fit));
        }
        auto pauli = verify_pauli_constraints(g, {.invariant_source = !cfg.unchecked});
        if (cfg.family == "mu") pauli.add_input("mu", mu);
        out.reports.push_back(std::move(pauli));
      }
  }
  out.tables.push_back(std::move(t));
  return out;
}

// ---------------------------------------------------------------------------

inline std::vector<SiteTuple> parse_subsets(const std::string& text, int sites, int k) {
  if (text == "all-k-subsets") return all_k_subsets(sites, k);
  std::vector<SiteTuple> out;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    SiteTuple t;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      try {
        t.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw ConfigError("cannot parse subset entry '" + item + "'");
      }
    }
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

inline HamiltonianSpec hamiltonian_family(const RunConfig& cfg, const std::string& name, int v) {
  HamiltonianSpec spec;
  spec.rescale = cfg.rescale;
  if (name == "onsite") {
    spec.shape = SystemShape(v, 1);
    spec.k = 1;
    spec.term_template = onsite_template();
  } else if (name == "hopping") {
    spec.shape = SystemShape(v, 1);
    spec.k = 2;
    spec.term_template = hopping_template();
  } else if (name == "pair") {
    spec.shape = SystemShape(v, 1);
    spec.k = 2;
    spec.term_template = majorana_pair_template();
  } else if (name == "hubbard") {
    spec.shape = SystemShape(v, 2);
    spec.k = 2;
    spec.term_template = hubbard_template();
  } else if (name == "file") {
    spec.shape = SystemShape(v, cfg.modes);
    spec.k = cfg.template_k;
    try {
      spec.term_template = parse_expansion(read_file(cfg.template_file), SystemShape(cfg.template_k, cfg.modes));
    } catch (const DomainError& e) {
      throw ConfigError(std::string("template ") + cfg.template_file + ": " + e.what());
    }
  } else {
    throw ConfigError("unknown --hamiltonian " + name);
  }
  spec.subsets = parse_subsets(name == "file" ? cfg.subsets : "all-k-subsets", v, spec.k);
  return spec;
}

inline SuiteResult suite_gs(const RunConfig& cfg) {
  SuiteResult out{"gs-bound", {}, {}};
  CsvTable t{"gs_bound",
             {"hamiltonian", "V", "p", "k", "e_ground", "e_product", "gap", "bound", "composite", "degeneracy", "label"},
             {}};
  ProductEnergyOptions po;
  po.restarts = cfg.restarts;
  po.iters = cfg.iters;
  po.seed = require_seed(cfg);
  for (const auto& name : cfg.hamiltonians)
    for (int v : cfg.sites) {
      const auto spec = hamiltonian_family(cfg, name, v);
      auto r = verify_gs_bound(spec, {.product = po});
      r.report.add_input("hamiltonian", name);
      r.report.notes.push_back("label: " + r.label);
      t.rows.push_back({name, std::to_string(v), std::to_string(spec.shape.modes_per_site), std::to_string(spec.k),
                        csv_number(r.e_ground), csv_number(r.e_product_min), csv_number(r.gap), csv_number(r.bound),
                        csv_number(r.composite), std::to_string(r.degeneracy), r.label});
      out.reports.push_back(std::move(r.report));
    }
  out.tables.push_back(std::move(t));
  return out;
}

// ---------------------------------------------------------------------------
// all: a fixed desk-scale sweep of every suite

inline std::vector<SuiteResult> suite_all(const RunConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  std::vector<SuiteResult> out;
  auto base = [&](const std::string& command) {
    RunConfig c;
    c.command = command;
    c.seed = seed;
    return c;
  };
  {
    auto c = base("check-algebra");
    out.push_back(suite_check_algebra(c));
  }
  {
    auto c = base("check-invariance");
    c.mus = {0.0, 0.5, -0.5};
    out.push_back(suite_check_invariance(c));
  }
  {
    auto c = base("verify-lemma3");
    c.sites = {6, 8};
    c.mus = {0.0, 0.5, -0.5};
    out.push_back(suite_lemma3(c));
  }
  {
    auto c = base("verify-theorem1");
    c.sites = {6};
    c.mus = {0.0, 0.5, -0.5};
    c.restarts = 2;
    c.iters = 200;
    out.push_back(suite_theorem1(c));
  }
  {
    auto c = base("verify-clt");
    c.sites = {2, 3, 4};
    c.weights = {2, 4};
    c.exhaustive = true;
    auto clt = suite_clt(c);
    // diag(1/3, 2/3) is Gaussian, so the ratio check runs on the pair state instead
    std::erase_if(clt.reports, [](const VerificationReport& r) { return r.claim.starts_with("hudson-ratio"); });
    auto pair = base("verify-clt");
    pair.diag = {"1/2", "0", "0", "1/2"};
    pair.sites = {3, 4};
    pair.weights = {4};
    auto more = suite_clt(pair);
    for (auto& r : more.reports) clt.reports.push_back(std::move(r));
    for (auto& t : more.tables) {
      t.name += "_pair";
      clt.tables.push_back(std::move(t));
    }
    out.push_back(std::move(clt));
  }
  {
    auto c = base("verify-corollary");
    c.family = "product";
    c.diag = {"1/2", "0", "0", "1/2"};
    c.modes = 2;
    c.sites = {6};
    c.ks = {2, 3, 4};
    c.restarts = 1;
    c.max_q_tuples = 8;
    out.push_back(suite_corollary(c));
  }
  {
    auto c = base("rdm-spectrum");
    c.sites = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    c.b_re = 0.05;
    out.push_back(suite_rdm(c));
    auto s = base("rdm-spectrum");
    s.from_state = true;
    s.mus = {0.5, -0.5};
    auto more = suite_rdm(s);
    for (auto& r : more.reports) out.back().reports.push_back(std::move(r));
    for (auto& t : more.tables) {
      t.name += "_state";
      out.back().tables.push_back(std::move(t));
    }
  }
  {
    auto c = base("gs-bound");
    c.restarts = 4;
    c.iters = 300;
    out.push_back(suite_gs(c));
  }
  return out;
}

inline std::vector<SuiteResult> run_suites(const RunConfig& cfg) {
  const auto& c = cfg.command;
  if (c == "check-algebra") return {suite_check_algebra(cfg)};
  if (c == "check-invariance") return {suite_check_invariance(cfg)};
  if (c == "verify-lemma3") return {suite_lemma3(cfg)};
  if (c == "verify-theorem1") return {suite_theorem1(cfg)};
  if (c == "verify-clt") return {suite_clt(cfg)};
  if (c == "verify-corollary") return {suite_corollary(cfg)};
  if (c == "rdm-spectrum") return {suite_rdm(cfg)};
  if (c == "gs-bound") return {suite_gs(cfg)};
  if (c == "all") return suite_all(cfg);
  throw ConfigError("unknown command " + c);
}

/// Writes report.txt and one CSV per table into the output directory.
inline void write_outputs(const std::string& dir, const std::vector<SuiteResult>& suites) {
  std::filesystem::create_directories(dir);
  std::ofstream rep(std::filesystem::path(dir) / "report.txt");
  for (const auto& s : suites) {
    rep << "== " << s.command << " (" << s.reports.size() << " reports, " << s.failures() << " failed)\n";
    for (const auto& r : s.reports) rep << r.to_text() << '\n';
    for (const auto& t : s.tables) std::ofstream(std::filesystem::path(dir) / (t.name + ".csv")) << t.to_text();
  }
  if (!rep) throw ConfigError("cannot write to " + dir);
}

/// Runs a command end to end. Returns the process exit code.
inline int run(const RunConfig& cfg, std::ostream& log) {
  try {
    const auto suites = run_suites(cfg);
    write_outputs(cfg.out_dir, suites);
    std::size_t total = 0, failed = 0;
    for (const auto& s : suites) {
      for (const auto& r : s.reports) log << r.to_text() << '\n';
      log << "suite " << s.command << ": " << s.reports.size() - s.failures() << "/" << s.reports.size() << " pass\n";
      total += s.reports.size();
      failed += s.failures();
    }
    log << "summary: " << total << " reports, " << total - failed << " pass, " << failed << " fail\n";
    return failed == 0 && total > 0 ? kExitPass : kExitFail;
  } catch (const ResourceError& e) {
    log << "resource cap: " << e.what() << '\n';
    return kExitResource;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    log << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace fermicert
