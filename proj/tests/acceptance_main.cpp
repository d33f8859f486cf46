// Acceptance gate: one line per criterion, exit code = number of failures.
// Every suite is budgeted to finish well under a minute on a laptop.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "povmic/propositions.hpp"
#include "povmic/rank_search.hpp"
#include "povmic/rng.hpp"
#include "povmic/subspace.hpp"
#include "povmic/tomography.hpp"

using namespace povmic;

namespace {

struct Gate {
  std::ostringstream log;
  bool ok = true;

  void demand(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      log << "    failed: " << what << "\n";
    }
  }
};

// 1. A span-8 qutrit measurement is pure-state complete but not complete, and
//    span dimension below 9 always means not complete.
bool criterion_qutrit_counts(Gate& g) {
  Povm q8 = make_qutrit_case2();
  CertifyReport psic = certify_povm(q8, Property::psic);
  CertifyReport ic = certify_povm(q8, Property::ic);
  g.demand(psic.verdict == Verdict::yes && psic.strength == Strength::exact,
           "span-8 qutrit not certified pure-state complete");
  g.demand(ic.verdict == Verdict::no, "span-8 qutrit certified complete");
  g.demand(psic.span_dim == 8, "span-8 qutrit has span " + std::to_string(psic.span_dim));

  // Build qutrit measurements with every span dimension 1..8.
  OperatorSubspace full = OperatorSubspace::full(3);
  OperatorSubspace comp_line = complement(OperatorSubspace::span_of({make_qutrit_case2().effect(0)}));
  for (int k = 0; k <= 7; ++k) {
    std::vector<Hermitian> gens = {Hermitian::identity(3)};
    // Traceless directions from the span-8 instance's own complement basis
    // would collapse; use the canonical traceless complement of the identity.
    OperatorSubspace traceless = complement(OperatorSubspace::span_of({Hermitian::identity(3)}));
    for (int i = 0; i < k; ++i) gens.push_back(traceless.basis()[i]);
    Povm p = gen_from_span(gens);
    CertifyReport r = certify_povm(p, Property::ic);
    g.demand(r.span_dim == k + 1,
             "constructed span " + std::to_string(k + 1) + " came out " +
                 std::to_string(r.span_dim));
    g.demand(r.verdict == Verdict::no && r.strength == Strength::exact,
             "span " + std::to_string(k + 1) + " qutrit not certified incomplete");
  }
  return g.ok;
}

// 2. For qubits, pure-state completeness and completeness coincide on 100
//    seeded random measurements with 1..6 outcomes.
bool criterion_qubit_equivalence(Gate& g) {
  for (int i = 0; i < 100; ++i) {
    int outcomes = 1 + (i % 6);
    Povm p = gen_random(2, outcomes, 1000 + i);
    Verdict ic = certify_povm(p, Property::ic).verdict;
    Verdict psic = certify_povm(p, Property::psic).verdict;
    g.demand(ic == psic, "mismatch at seed " + std::to_string(1000 + i) + " (" +
                             std::to_string(outcomes) + " outcomes)");
  }
  return g.ok;
}

// 3. The three-summand complement decomposition is orthogonal, contained and
//    dimensionally exact on 50 seeded pairs.
bool criterion_complement_decomposition(Gate& g) {
  for (int i = 0; i < 50; ++i) {
    int d_a = 2 + (i % 2);
    int d_b = 3 + ((i / 2) % 2);
    int n_a = 2 + (i % (d_a * d_a + 1));
    int n_b = 2 + ((i / 3) % (d_b * d_b + 1));
    Povm a = gen_random(d_a, n_a, 2000 + i);
    Povm b = gen_random(d_b, n_b, 3000 + i);
    BipartiteComplementReport rep = bipartite_complement(a, b);
    std::string tag = " (pair " + std::to_string(i) + ")";
    g.demand(rep.max_cross_inner <= 1e-9, "summands not orthogonal" + tag);
    g.demand(rep.max_containment_residual <= 1e-9, "summand leaks out" + tag);
    g.demand(rep.dims_match, "dimension count off" + tag);
  }
  return g.ok;
}

bool run_healthy_suite(Gate& g, const PropositionReport& rep, const std::string& tag) {
  for (const auto& c : rep.checks) {
    g.demand(c.pass, tag + ": " + c.name + " (margin " + std::to_string(c.margin) + ")");
  }
  g.demand(!rep.refuted, tag + ": unexpectedly refuted");
  return g.ok;
}

bool run_corrupt_suite(Gate& g, const PropositionReport& rep, const std::string& tag) {
  g.demand(rep.refuted, tag + ": corruption not detected");
  g.demand(rep.witness_states.has_value(), tag + ": no witness pair");
  g.demand(rep.witness_stats_distance <= 1e-9,
           tag + ": witness statistics differ by " +
               std::to_string(rep.witness_stats_distance));
  return g.ok;
}

// 4. Complete x pure-state-complete products over (2,3), (2,4), (3,4).
bool criterion_product_psic(Gate& g) {
  HarnessOptions opts;
  opts.pair_samples = 10000;
  opts.search_trials = 64;
  for (auto [da, db] : std::vector<std::pair<int, int>>{{2, 3}, {2, 4}, {3, 4}}) {
    std::string tag = "(" + std::to_string(da) + "," + std::to_string(db) + ")";
    run_healthy_suite(g, check_prop1(da, db, opts), tag);
    HarnessOptions fast = opts;
    fast.pair_samples = 200;
    run_corrupt_suite(g, check_prop1(da, db, fast, true), tag + " corrupted");
  }
  return g.ok;
}

// 5. Span-8 qutrit left factor with both generator spectra, right dim 3 and 4.
bool criterion_span8_products(Gate& g) {
  HarnessOptions opts;
  opts.pair_samples = 10000;
  opts.search_trials = 64;
  RVector s1(3), s2(3);
  s1 << 1, 1, -2;
  s2 << 1, 2, -3;
  for (const RVector& s : {s1, s2}) {
    for (int db : {3, 4}) {
      std::ostringstream tag;
      tag << "s=(" << s(0) << "," << s(1) << "," << s(2) << "), db=" << db;
      run_healthy_suite(g, check_prop2(db, s, opts), tag.str());
    }
  }
  HarnessOptions fast;
  fast.pair_samples = 200;
  fast.search_trials = 16;
  run_corrupt_suite(g, check_prop2(3, s1, fast, true), "corrupted left factor");
  return g.ok;
}

// 6. Verifiable completeness: exact inertia floor, pure/mixed separation, and
//    the qutrit equivalence with completeness in both directions.
bool criterion_verifiable_products(Gate& g) {
  HarnessOptions opts;
  opts.pair_samples = 10000;
  opts.search_trials = 64;
  for (int da : {2, 3}) {
    std::string tag = "da=" + std::to_string(da);
    PropositionReport rep = check_prop3(da, 4, opts);
    run_healthy_suite(g, rep, tag);
    for (const auto& c : rep.checks) {
      if (c.name == "exact_min_rank_pm") {
        g.demand(c.pass && c.margin >= 0.0, tag + ": exact inertia floor not 2");
      }
    }
  }
  run_healthy_suite(g, check_prop4(opts), "qutrit equivalence");

  HarnessOptions fast;
  fast.pair_samples = 200;
  fast.search_trials = 16;
  run_corrupt_suite(g, check_prop3(3, 4, fast, true), "span-8 left factor");
  run_corrupt_suite(g, check_prop3(2, 4, fast, false, true), "one-sided right factor");
  return g.ok;
}

// 7. Interlacing on 1000 draws plus the block-unitary machinery.
bool criterion_interlacing_machinery(Gate& g) {
  InterlacingReport rep = interlacing_suite(1000, 0);
  g.demand(rep.pass, "interlacing violated");
  g.demand(rep.worst_slack >= -1e-9,
           "worst slack " + std::to_string(rep.worst_slack));
  run_healthy_suite(g, check_proof_unitaries(0), "machinery");
  return g.ok;
}

// 8. Randomized minimum-rank searches match the grid oracle on 50 seeded
//    subspaces of traceless operators, both plain rank and signed rank.
bool criterion_oracle_equivalence(Gate& g) {
  Rng rng(4000);
  int built = 0;
  while (built < 50) {
    int d = 3 + (built % 2);
    int dim = 1 + (built % 2);
    std::vector<Hermitian> gens;
    for (int j = 0; j < dim; ++j) {
      Hermitian h = random_hermitian(d, rng);
      gens.push_back(h + (-h.trace() / d) * Hermitian::identity(d));
    }
    OperatorSubspace sub = OperatorSubspace::span_of(gens);
    if (sub.dim() != dim) continue;
    ++built;

    RankCertificate fast = min_rank_search(sub, 64, built);
    RankCertificate slow =
        brute_force_min_rank(sub, 720, RankCertificate::Target::rank, kRankFoundTol);
    g.demand(fast.min_found == slow.min_found,
             "rank disagreement at case " + std::to_string(built) + ": " +
                 std::to_string(fast.min_found) + " vs " + std::to_string(slow.min_found));

    RankCertificate fast_pm = min_rank_pm_search(sub, 64, built);
    RankCertificate slow_pm =
        brute_force_min_rank(sub, 720, RankCertificate::Target::rank_pm, kRankFoundTol);
    g.demand(fast_pm.min_found == slow_pm.min_found,
             "signed-rank disagreement at case " + std::to_string(built) + ": " +
                 std::to_string(fast_pm.min_found) + " vs " +
                 std::to_string(slow_pm.min_found));
  }
  return g.ok;
}

// 9. Tomography: exact linear inversion, pure-state fits through two
//    span-deficient measurements, and gradient/finite-difference agreement.
bool criterion_tomography(Gate& g) {
  Povm sic = gen_sic_qubit();
  Povm ic3 = make_ic_random(3, 17);
  Rng rng(5000);
  for (int i = 0; i < 50; ++i) {
    const Povm& p = i % 2 ? sic : ic3;
    Hermitian rho = random_density_matrix(p.dim(), rng);
    LinearReconstruction rec = linear_inversion(p, born_probabilities(p, rho));
    g.demand(max_abs_diff(rec.state.mat(), rho.mat()) <= 1e-8,
             "linear inversion error at state " + std::to_string(i));
  }

  Povm q8 = make_qutrit_case2();
  RVector s2(3);
  s2 << 1, 2, -3;
  Povm prod9 = tensor_povm(make_qutrit_case2(), make_qutrit_case2(s2));
  Rng prng(6000);
  for (int i = 0; i < 50; ++i) {
    const Povm& p = i % 2 ? q8 : prod9;
    Hermitian psi = random_pure_state(p.dim(), prng);
    StatisticsVector stats = born_probabilities(p, psi);
    PureFit fit = pure_state_fit(p, stats, 16, 7000 + i);
    if (fit.stats_distance > 1e-9) fit = pure_state_fit(p, stats, 64, 8000 + i);
    double fidelity = hs_inner(fit.state, psi);
    g.demand(fidelity >= 1.0 - 1e-6,
             "pure fit fidelity " + std::to_string(fidelity) + " at state " +
                 std::to_string(i) + " (dim " + std::to_string(p.dim()) + ")");
  }

  Povm fd_povm = gen_random(3, 7, 31);
  Rng frng(9000);
  RVector flat(7);
  for (int x = 0; x < 7; ++x) flat(x) = 1.0 / 7.0;
  StatisticsVector fake{flat};
  const double h = 1e-6;
  for (int rep = 0; rep < 10; ++rep) {
    CVector psi = random_pure_vector(3, frng);
    CVector grad = pure_fit_gradient(fd_povm, fake, psi);
    for (int i = 0; i < 3; ++i) {
      for (int part = 0; part < 2; ++part) {
        CVector step = CVector::Zero(3);
        step(i) = part == 0 ? Complex(h, 0) : Complex(0, h);
        double fd = (pure_fit_objective(fd_povm, fake, psi + step) -
                     pure_fit_objective(fd_povm, fake, psi - step)) /
                    (2 * h);
        double an = part == 0 ? grad(i).real() : grad(i).imag();
        g.demand(std::abs(fd - an) <= 1e-5 * std::max(1.0, std::abs(an)),
                 "gradient mismatch " + std::to_string(fd) + " vs " + std::to_string(an));
      }
    }
  }
  return g.ok;
}

// 10. Multipartite products of qubit/qutrit factors, factorized dimensions,
//     and a lifted witness for every corrupted instance.
bool criterion_multipartite(Gate& g) {
  HarnessOptions opts;
  opts.pair_samples = 2000;
  opts.search_trials = 64;

  std::vector<std::vector<int>> factor_lists = {{2, 3}, {3, 3}, {2, 2, 3}};
  for (const auto& factors : factor_lists) {
    std::ostringstream tag;
    tag << "factors [";
    for (std::size_t i = 0; i < factors.size(); ++i) tag << (i ? "," : "") << factors[i];
    tag << "]";
    run_healthy_suite(g, check_multipartite(factors, opts), tag.str());
    HarnessOptions fast = opts;
    fast.pair_samples = 200;
    run_corrupt_suite(g, check_multipartite(factors, fast, 0), tag.str() + " corrupted");
  }

  // The large factorized products get half the search budget; the healthy
  // suites only need the minimizer to settle, not to hunt.
  HarnessOptions dims_opts = opts;
  dims_opts.search_trials = 32;
  std::vector<std::array<int, 4>> splits = {{1, 0, 1, 1}, {2, 0, 0, 1}, {0, 1, 1, 1}};
  for (const auto& s : splits) {
    std::ostringstream tag;
    tag << "dims split " << s[0] << "/" << s[1] << "/" << s[2] << "/" << s[3];
    run_healthy_suite(g, check_factorized_dims(s[0], s[1], s[2], s[3], dims_opts), tag.str());
    HarnessOptions fast = opts;
    fast.pair_samples = 200;
    run_corrupt_suite(g, check_factorized_dims(s[0], s[1], s[2], s[3], fast, s[0] + s[1]),
                      tag.str() + " corrupted");
  }
  return g.ok;
}

}  // namespace

int main() {
  using Runner = std::function<bool(Gate&)>;
  std::vector<std::pair<std::string, Runner>> criteria = {
      {"qutrit span-8 counts", criterion_qutrit_counts},
      {"qubit equivalence on 100 random measurements", criterion_qubit_equivalence},
      {"bipartite complement decomposition on 50 pairs", criterion_complement_decomposition},
      {"complete x pure-state-complete products", criterion_product_psic},
      {"span-8 qutrit products", criterion_span8_products},
      {"verifiable completeness products", criterion_verifiable_products},
      {"interlacing and block-unitary machinery", criterion_interlacing_machinery},
      {"randomized search equals grid oracle", criterion_oracle_equivalence},
      {"tomography round trips", criterion_tomography},
      {"multipartite and factorized dimensions", criterion_multipartite},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Gate gate;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criteria[i].second(gate);
    } catch (const std::exception& e) {
      gate.log << "    exception: " << e.what() << "\n";
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2zu. %s (%.1f s)\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), secs);
    if (!ok) {
      ++failures;
      std::cout << gate.log.str();
    }
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
