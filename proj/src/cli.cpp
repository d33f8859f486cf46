#include "povmic/cli.hpp"

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "povmic/io.hpp"
#include "povmic/propositions.hpp"
#include "povmic/rank_search.hpp"
#include "povmic/subspace.hpp"
#include "povmic/tomography.hpp"

namespace povmic {

namespace {

std::string join_invocation(const std::vector<std::string>& args) {
  std::string out = "povmic";
  for (const auto& a : args) {
    out += " ";
    out += a;
  }
  return out;
}

RVector parse_reals(const std::string& csv) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  RVector out(static_cast<int>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) out(static_cast<int>(i)) = vals[i];
  return out;
}

std::vector<int> parse_ints(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

void emit(const std::string& out_path, const std::string& json) {
  if (out_path.empty()) {
    std::cout << json;
  } else {
    write_text_file(out_path, json);
  }
}

Povm load_povm(const std::string& path) {
  Povm p = povm_from_json(read_text_file(path));
  auto violations = validate(p);
  if (!violations.empty()) {
    std::ostringstream os;
    os << path << ": not a valid measurement:";
    for (const auto& v : violations) os << " " << v.what << " (" << v.magnitude << ")";
    throw std::invalid_argument(os.str());
  }
  return p;
}

void print_checks(const PropositionReport& rep) {
  for (const auto& c : rep.checks) {
    std::cout << "  " << (c.pass ? "[ok]  " : "[FAIL]") << " " << c.name
              << "  margin=" << c.margin << "\n";
  }
  if (rep.refuted) {
    std::cout << "refuted: witness pair attached (statistics distance "
              << rep.witness_stats_distance << ")\n";
  } else {
    std::cout << (rep.all_pass() ? "consistent" : "INCONSISTENT") << "\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"finite-outcome measurement completeness toolkit"};
  app.require_subcommand(1);
  const std::string invocation = join_invocation(args);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a measurement file");
  std::string gen_kind, gen_out, gen_s = "1,1,-2", gen_gens;
  int gen_dim = 3, gen_outcomes = 9;
  std::uint64_t gen_seed = 0;
  gen->add_option("kind", gen_kind, "sic2 | random | from-span | qutrit-psic | dim4-vpsic")
      ->required()
      ->check(CLI::IsMember({"sic2", "random", "from-span", "qutrit-psic", "dim4-vpsic"}));
  gen->add_option("--out", gen_out, "output measurement JSON path")->required();
  gen->add_option("--dim", gen_dim, "dimension (random)");
  gen->add_option("--outcomes", gen_outcomes, "outcome count (random)");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("--s", gen_s, "comma-separated diagonal, sums to zero (qutrit-psic)");
  gen->add_option("--gens", gen_gens, "generator matrices JSON (from-span)");

  // certify
  auto* certify = app.add_subcommand("certify", "decide a completeness property");
  std::string cert_path, cert_property, cert_out;
  int cert_trials = 64;
  std::uint64_t cert_seed = 0;
  double cert_tol = 1e-8;
  certify->add_option("povm", cert_path, "measurement JSON path")->required();
  certify->add_option("--property", cert_property, "ic | psic | vpsic")
      ->required()
      ->check(CLI::IsMember({"ic", "psic", "vpsic"}));
  certify->add_option("--trials", cert_trials, "search starts per phase");
  certify->add_option("--seed", cert_seed, "search seed");
  certify->add_option("--tol", cert_tol, "span tolerance");
  certify->add_option("--out", cert_out, "report JSON path");

  // tensor
  auto* tensor = app.add_subcommand("tensor", "tensor two measurements");
  std::string tensor_a, tensor_b, tensor_out;
  tensor->add_option("a", tensor_a, "left measurement JSON")->required();
  tensor->add_option("b", tensor_b, "right measurement JSON")->required();
  tensor->add_option("--out", tensor_out, "output measurement JSON path")->required();

  // check
  auto* check = app.add_subcommand("check", "run a consistency suite");
  std::string check_prop, check_s = "1,1,-2", check_factors = "2,3", check_out;
  int check_da = -1, check_db = -1, check_na = 1, check_ma = 0, check_nb = 0, check_mb = 1;
  int check_trials = 64, check_pairs = 10000, check_corrupt_index = -1;
  bool check_corrupt_a = false, check_corrupt_b = false, check_case2_alice = false;
  std::uint64_t check_seed = 0;
  check->add_option("prop", check_prop, "1 | 2 | 3 | 4 | multi | dims")
      ->required()
      ->check(CLI::IsMember({"1", "2", "3", "4", "multi", "dims"}));
  check->add_option("--da", check_da, "left dimension");
  check->add_option("--db", check_db, "right dimension");
  check->add_option("--s", check_s, "span-8 qutrit diagonal (prop 2)");
  check->add_option("--factors", check_factors, "comma-separated 2/3 list (multi)");
  check->add_option("--na", check_na, "qubit factors on the left (dims)");
  check->add_option("--ma", check_ma, "qutrit factors on the left (dims)");
  check->add_option("--nb", check_nb, "qubit factors on the right (dims)");
  check->add_option("--mb", check_mb, "qutrit factors on the right (dims)");
  check->add_flag("--corrupt-a", check_corrupt_a, "break the left premise, expect a witness");
  check->add_flag("--corrupt-b", check_corrupt_b, "break the right premise, expect a witness");
  check->add_option("--corrupt-index", check_corrupt_index, "factor to break (multi)");
  check->add_flag("--case2-alice", check_case2_alice,
                  "span-8 qutrit instead of a complete left factor (prop 3)");
  check->add_option("--trials", check_trials, "search starts per phase");
  check->add_option("--pairs", check_pairs, "random state pairs per suite");
  check->add_option("--seed", check_seed, "suite seed");
  check->add_option("--out", check_out, "report JSON path");

  // reconstruct
  auto* rec = app.add_subcommand("reconstruct", "estimate a state from statistics");
  std::string rec_povm, rec_stats, rec_mode, rec_reference, rec_out;
  int rec_starts = 16;
  std::uint64_t rec_seed = 0;
  rec->add_option("povm", rec_povm, "measurement JSON path")->required();
  rec->add_option("stats", rec_stats, "statistics JSON path")->required();
  rec->add_option("--mode", rec_mode, "linear | pure")
      ->required()
      ->check(CLI::IsMember({"linear", "pure"}));
  rec->add_option("--starts", rec_starts, "restarts (pure)");
  rec->add_option("--seed", rec_seed, "fit seed");
  rec->add_option("--reference", rec_reference, "reference state JSON for fidelity");
  rec->add_option("--out", rec_out, "report JSON path");

  // born
  auto* born = app.add_subcommand("born", "outcome statistics of a state");
  std::string born_povm, born_state, born_out;
  born->add_option("povm", born_povm, "measurement JSON path")->required();
  born->add_option("state", born_state, "density matrix JSON path")->required();
  born->add_option("--out", born_out, "statistics JSON path");

  // explore
  auto* explore = app.add_subcommand(
      "explore", "probe a product of two span-deficient measurements (no theorem applies)");
  int explore_da = 4, explore_db = 3, explore_trials = 64, explore_pairs = 2000;
  std::uint64_t explore_seed = 0;
  std::string explore_out;
  explore->add_option("--da", explore_da, "left dimension (>= 4)");
  explore->add_option("--db", explore_db, "right dimension (>= 3)");
  explore->add_option("--trials", explore_trials, "search starts per phase");
  explore->add_option("--pairs", explore_pairs, "random pure pairs");
  explore->add_option("--seed", explore_seed, "seed");
  explore->add_option("--out", explore_out, "report JSON path");

  std::vector<const char*> argv;
  argv.push_back("povmic");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      Povm p = [&] {
        if (gen_kind == "sic2") return gen_sic_qubit();
        if (gen_kind == "random") return gen_random(gen_dim, gen_outcomes, gen_seed);
        if (gen_kind == "qutrit-psic") return make_qutrit_case2(parse_reals(gen_s));
        if (gen_kind == "dim4-vpsic") return make_dim4_vpsic();
        if (gen_gens.empty()) {
          throw std::invalid_argument("gen from-span needs --gens");
        }
        auto [dim, mats] = matrices_from_json(read_text_file(gen_gens));
        (void)dim;
        return gen_from_span(mats);
      }();
      write_text_file(gen_out, povm_to_json(p));
      std::cout << "wrote " << p.size() << "-outcome dim-" << p.dim() << " measurement to "
                << gen_out << "\n";
      return 0;
    }

    if (certify->parsed()) {
      Povm p = load_povm(cert_path);
      Property prop = cert_property == "ic"     ? Property::ic
                      : cert_property == "psic" ? Property::psic
                                                : Property::vpsic;
      CertifyReport rep = certify_povm(p, prop, {cert_trials, cert_tol}, cert_seed);
      std::cout << "property " << to_string(rep.property) << ": " << to_string(rep.verdict)
                << " (" << to_string(rep.strength) << ")\n"
                << "span " << rep.span_dim << "/" << p.dim() * p.dim() << ", complement "
                << rep.complement_dim << "\n"
                << rep.note << "\n";
      if (rep.witness_states) {
        std::cout << "witness pair statistics distance: " << rep.witness_stats_distance
                  << "\n";
      }
      emit(cert_out,
           certify_report_json(rep, {kToolVersion, invocation, cert_seed}));
      if (rep.verdict == Verdict::yes) return 0;
      if (rep.verdict == Verdict::no) return 2;
      return 3;
    }

    if (tensor->parsed()) {
      Povm a = load_povm(tensor_a);
      Povm b = load_povm(tensor_b);
      Povm ab = tensor_povm(a, b);
      write_text_file(tensor_out, povm_to_json(ab));
      std::cout << "wrote " << ab.size() << "-outcome dim-" << ab.dim()
                << " product measurement to " << tensor_out << "\n";
      return 0;
    }

    if (check->parsed()) {
      HarnessOptions opts{check_pairs, check_trials, check_seed};
      PropositionReport rep;
      if (check_prop == "1") {
        int da = check_da < 0 ? 2 : check_da;
        int db = check_db < 0 ? 3 : check_db;
        rep = check_prop1(da, db, opts, check_corrupt_b);
      } else if (check_prop == "2") {
        int db = check_db < 0 ? 3 : check_db;
        rep = check_prop2(db, parse_reals(check_s), opts, check_corrupt_a);
      } else if (check_prop == "3") {
        int da = check_da < 0 ? 2 : check_da;
        int db = check_db < 0 ? 4 : check_db;
        if (check_case2_alice && check_da < 0) da = 3;
        rep = check_prop3(da, db, opts, check_case2_alice, check_corrupt_b);
      } else if (check_prop == "4") {
        rep = check_prop4(opts);
      } else if (check_prop == "multi") {
        rep = check_multipartite(parse_ints(check_factors), opts, check_corrupt_index);
      } else {
        int corrupt = check_corrupt_index;
        if (corrupt < 0 && check_corrupt_a) corrupt = 0;
        if (corrupt < 0 && check_corrupt_b) corrupt = check_na + check_ma;
        rep = check_factorized_dims(check_na, check_ma, check_nb, check_mb, opts, corrupt);
      }
      std::cout << "suite " << rep.proposition << ":\n";
      print_checks(rep);
      emit(check_out,
           proposition_report_json(rep, {kToolVersion, invocation, check_seed}));
      return rep.consistent() ? 0 : 2;
    }

    if (rec->parsed()) {
      Povm p = load_povm(rec_povm);
      StatisticsVector stats = stats_from_json(read_text_file(rec_stats));
      ReconstructionOutput out;
      out.mode = rec_mode;
      if (rec_mode == "linear") {
        LinearReconstruction lr = linear_inversion(p, stats);
        out.state = lr.state;
        out.residual = lr.residual;
        out.span_dim = lr.span_dim;
        RVector fitted = p.vectorized_effects() * hs_vec(lr.state);
        out.stats_distance = (fitted - stats.probabilities).cwiseAbs().maxCoeff();
      } else {
        PureFit fit = pure_state_fit(p, stats, rec_starts, rec_seed);
        out.state = fit.state;
        out.residual = fit.objective;
        out.stats_distance = fit.stats_distance;
        out.span_dim = operator_span(p).dim();
        CertifyReport psic = certify_povm(p, Property::psic, {16, 1e-8}, rec_seed);
        if (psic.verdict != Verdict::yes) {
          out.warning =
              "measurement not certified pure-state complete; the fit may not be unique";
        }
      }
      if (!rec_reference.empty()) {
        Hermitian ref = state_from_json(read_text_file(rec_reference));
        out.fidelity_reference = hs_inner(out.state, ref);
      }
      std::cout << "mode " << out.mode << ": residual " << out.residual
                << ", statistics distance " << out.stats_distance << "\n";
      if (out.fidelity_reference) {
        std::cout << "fidelity to reference: " << *out.fidelity_reference << "\n";
      }
      if (out.warning) std::cout << "warning: " << *out.warning << "\n";
      emit(rec_out,
           reconstruction_report_json(out, {kToolVersion, invocation, rec_seed}));
      return 0;
    }

    if (born->parsed()) {
      Povm p = load_povm(born_povm);
      Hermitian rho = state_from_json(read_text_file(born_state));
      StatisticsVector stats = born_probabilities(p, rho);
      std::cout << "computed " << stats.probabilities.size() << " outcome probabilities\n";
      emit(born_out, stats_to_json(stats, born_povm));
      return 0;
    }

    if (explore->parsed()) {
      HarnessOptions opts{explore_pairs, explore_trials, explore_seed};
      PropositionReport rep = explore_product_psic(explore_da, explore_db, opts);
      std::cout << "exploratory probe (no theorem backs this configuration):\n";
      print_checks(rep);
      emit(explore_out,
           proposition_report_json(rep, {kToolVersion, invocation, explore_seed}));
      return rep.consistent() ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace povmic
