// Copyright 2026 The fermicert Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cli.hpp
 * @brief Argument parsing for the fermicert executable. Kept in a header so
 *        tests can drive the whole tool in-process.
 */

#pragma once

#include <CLI11.hpp>

#include <iostream>
#include <ostream>

#include "fermicert/runner.hpp"

namespace fermicert {

inline constexpr const char* kCsvHelp = R"(Outputs (in --out):
  report.txt           every verification report with inputs, lhs, rhs, verdict
  algebra.csv          case,V,p,product,adjoint,permutation (max |symbolic - dense|)
  lemmas.csv           case,lemma,V,p,lhs,rhs
  invariance.csv       V,p,mu,condition1,condition2,full,words,permutations,exhaustive
  lemma3.csv           V,p,mu,k,lhs,rhs,pass
  theorem1.csv         V,p,mu,k,distance,bound,tight_bound,pass,components_even,max_off_diagonal
  clt_fourier.csv      V,w,ops,direct_re,direct_im,closed_re,closed_im,abs_diff,skipped
  clt_suppression.csv  V,w,ops,lhs,rhs,single_site_abs,ratio
  corollary.csv        V,p,mu,k,deviation,mixture_distance,fourth_cumulant_mass,scale,samples
  rdm_spectrum.csv     V,mu,k,lambda_formula,lambda_direct,abs_delta,singular
  gs_bound.csv         hamiltonian,V,p,k,e_ground,e_product,gap,bound,composite,degeneracy,label
Numbers are printed with %.12e; CSVs carry no timings, so equal seeds give equal files.
Exit codes: 0 all pass, 1 some check failed, 2 bad usage or input, 3 resource cap hit.
Environment: FERMICERT_MODE_CAP raises the dense mode cap (default 12).)";

/// Parses argv into a RunConfig and runs it. Returns the exit code.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Numerical certificates for fermionic de Finetti bounds"};
  app.footer(kCsvHelp);
  app.set_config("--config", "", "TOML/INI file with option values");
  app.require_subcommand(1);

  RunConfig cfg;
  std::uint64_t seed = 0;

  auto add_state = [&](CLI::App* sub) {
    sub->add_option("--family", cfg.family, "mu | product | maximally-mixed | file")
        ->check(CLI::IsMember({"mu", "product", "maximally-mixed", "file"}));
    sub->add_option("-V,--V,--sites", cfg.sites, "number of sites (list)")->check(CLI::Range(1, 64));
    sub->add_option("-p,--p,--modes", cfg.modes, "modes per site")->check(CLI::Range(1, 8));
    sub->add_option("--mu", cfg.mus, "mu values for the mu family (list)");
    sub->add_option("--diag", cfg.diag, "single-site diagonal for --family product, fractions allowed");
    sub->add_option("--state-file", cfg.state_file, "state fixture for --family file");
    sub->add_option("--state-format", cfg.state_format, "expansion | matrix")
        ->check(CLI::IsMember({"expansion", "matrix"}));
    sub->add_flag("--unchecked", cfg.unchecked, "evaluate inputs that are not valid states");
  };
  auto add_k = [&](CLI::App* sub) { sub->add_option("-k,--k", cfg.ks, "subsystem sizes (default: all admissible)"); };
  auto add_optimizer = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "RNG seed (required)");
    sub->add_option("--restarts", cfg.restarts, "optimizer restarts")->check(CLI::PositiveNumber);
    sub->add_option("--iters", cfg.iters, "iterations per restart")->check(CLI::PositiveNumber);
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("-o,--out", cfg.out_dir, "output directory"); };

  auto* alg = app.add_subcommand("check-algebra", "symbolic Majorana algebra against dense matrices");
  alg->add_option("--cases", cfg.cases, "random algebra cases")->check(CLI::NonNegativeNumber);
  alg->add_option("--lemma-cases", cfg.lemma_cases, "random lemma 1 / lemma 2 instances")
      ->check(CLI::NonNegativeNumber);
  alg->add_option("--seed", seed, "RNG seed (default 1)");

  auto* inv = app.add_subcommand("check-invariance", "permutation invariance conditions of a state");
  auto* l3 = app.add_subcommand("verify-lemma3", "off-diagonal parity blocks of reduced states");
  auto* t1 = app.add_subcommand("verify-theorem1", "product-mixture approximation of reduced states");
  auto* clt = app.add_subcommand("verify-clt", "Fourier cumulants of product states");
  auto* cor = app.add_subcommand("verify-corollary", "fourth-cumulant consistency and 1/k scaling");
  auto* rdm = app.add_subcommand("rdm-spectrum", "circulant 1-RDM spectra and Pauli constraints");
  auto* gs = app.add_subcommand("gs-bound", "mean-field ground-state energy gap");
  auto* all = app.add_subcommand("all", "fixed sweep over every suite");

  for (auto* s : {inv, l3, t1, cor}) add_state(s);
  for (auto* s : {l3, t1, cor}) add_k(s);
  for (auto* s : {t1, cor, gs, all}) add_optimizer(s);
  t1->add_option("--components", cfg.components, "mixture components (default: automatic)");
  cor->add_option("--max-q-tuples", cfg.max_q_tuples, "resonant Fourier tuples per pattern");

  clt->add_option("--diag", cfg.diag, "single-site diagonal, fractions allowed (default 1/3 2/3)");
  clt->add_option("-V,--V,--sites", cfg.sites, "number of sites (list)")->check(CLI::Range(1, 64));
  clt->add_option("-w,--weights", cfg.weights, "cumulant orders (even, list)");
  clt->add_flag("--exhaustive", cfg.exhaustive, "every (c, mode, q) tuple instead of resonant ones");
  clt->add_option("--max-q-tuples", cfg.max_q_tuples, "resonant Fourier tuples per pattern");

  add_state(rdm);
  rdm->add_option("-a,--a", cfg.a, "diagonal entry");
  rdm->add_option("--b,--b-re", cfg.b_re, "real part of the lower off-diagonal entry");
  rdm->add_option("--b-im", cfg.b_im, "imaginary part of the lower off-diagonal entry");
  rdm->add_flag("--from-state", cfg.from_state, "build the 1-RDM from the selected state");

  gs->add_option("-V,--V,--sites", cfg.sites, "number of sites (list)")->check(CLI::Range(1, 64));
  gs->add_option("-p,--p,--modes", cfg.modes, "modes per site for --hamiltonian file");
  gs->add_option("--hamiltonian", cfg.hamiltonians, "onsite | hopping | pair | hubbard | file (list)");
  gs->add_option("--template-file", cfg.template_file, "k-site term template (expansion text)");
  gs->add_option("--template-k", cfg.template_k, "sites in the template");
  gs->add_option("--subsets", cfg.subsets, "all-k-subsets or groups like 1,2;2,3");
  gs->add_flag("--rescale,!--no-rescale", cfg.rescale, "scale templates with norm above one");

  for (auto* s : {alg, inv, l3, t1, clt, cor, rdm, gs, all}) add_out(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitPass : kExitUsage;
  }

  for (auto* s : app.get_subcommands()) {
    cfg.command = s->get_name();
    if (auto* o = s->get_option_no_throw("--seed"); o && o->count() > 0) cfg.seed = seed;
  }
  return run(cfg, out);
}

}  // namespace fermicert
