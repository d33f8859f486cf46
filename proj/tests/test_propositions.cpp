#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "povmic/propositions.hpp"
#include "povmic/rng.hpp"

using namespace povmic;

namespace {

const CheckResult& find_check(const PropositionReport& rep, const std::string& name) {
  for (const auto& c : rep.checks) {
    if (c.name == name) return c;
  }
  FAIL("missing check: " + name);
  static CheckResult dummy;
  return dummy;
}

HarnessOptions smoke(int pairs = 300, int trials = 16, std::uint64_t seed = 0) {
  HarnessOptions o;
  o.pair_samples = pairs;
  o.search_trials = trials;
  o.seed = seed;
  return o;
}

}  // namespace

TEST_CASE("builders produce what their names say") {
  REQUIRE(is_ic(make_ic_random(2, 0)).ic);
  REQUIRE(is_ic(make_ic_random(3, 0)).ic);
  REQUIRE(is_ic(make_ic_random(4, 0)).ic);

  Povm q8 = make_qutrit_case2();
  REQUIRE(q8.size() == 8);
  REQUIRE(validate(q8).empty());
  REQUIRE(qutrit_classify(q8).kind == QutritCase::single_full_rank);

  RVector s(3);
  s << 1, 2, -3;
  REQUIRE(qutrit_classify(make_qutrit_case2(s)).kind == QutritCase::single_full_rank);

  Povm v4 = make_dim4_vpsic();
  REQUIRE(v4.dim() == 4);
  REQUIRE(validate(v4).empty());
  REQUIRE(certify_povm(v4, Property::vpsic).verdict == Verdict::yes);
  // One-sided verifiability implies pure-state completeness but not
  // completeness: the complement line has rank 4 on both sides.
  REQUIRE(certify_povm(v4, Property::psic, {16, 1e-8}, 0).verdict == Verdict::yes);
  REQUIRE(certify_povm(v4, Property::ic).verdict == Verdict::no);

  REQUIRE(certify_povm(make_non_psic(2), Property::psic).verdict == Verdict::no);
  REQUIRE(certify_povm(make_non_psic(3), Property::psic).verdict == Verdict::no);
}

TEST_CASE("complete times pure-state-complete stays pure-state-complete") {
  PropositionReport rep = check_prop1(2, 3, smoke());
  REQUIRE(rep.consistent());
  REQUIRE(find_check(rep, "complement_dim").pass);
  REQUIRE(find_check(rep, "complement_min_rank").margin >= 0.0);
  REQUIRE(find_check(rep, "pure_pairs_distinguished").pass);
  REQUIRE_FALSE(rep.refuted);
}

TEST_CASE("breaking the right factor is detected with a witness") {
  PropositionReport rep = check_prop1(2, 3, smoke(100), true);
  REQUIRE(rep.refuted);
  REQUIRE(rep.witness_states.has_value());
  REQUIRE(rep.witness_stats_distance <= 1e-9);
  REQUIRE(find_check(rep, "lifted_difference_hidden").pass);
  REQUIRE_FALSE(rep.consistent());
}

TEST_CASE("span-8 left factor suite") {
  RVector s(3);
  s << 1, 2, -3;
  PropositionReport rep = check_prop2(3, s, smoke());
  REQUIRE(rep.consistent());
  REQUIRE(find_check(rep, "a_span8_full_rank_line").pass);
  REQUIRE(find_check(rep, "decomposition_dim").pass);
  REQUIRE(find_check(rep, "decomposition_orthogonal").pass);

  PropositionReport bad = check_prop2(3, s, smoke(100), true);
  REQUIRE(bad.refuted);
  REQUIRE(bad.witness_stats_distance <= 1e-9);
}

TEST_CASE("verifiable-completeness product suite") {
  PropositionReport rep = check_prop3(2, 4, smoke());
  REQUIRE(rep.consistent());
  REQUIRE(find_check(rep, "exact_min_rank_pm").pass);
  REQUIRE(find_check(rep, "complement_block_interlacing").pass);
  REQUIRE(find_check(rep, "pure_mixed_distinguished").pass);

  PropositionReport one_sided = check_prop3(3, 4, smoke(100), true);
  REQUIRE(one_sided.refuted);
  REQUIRE(find_check(one_sided, "one_sided_element_found").pass);
  REQUIRE(one_sided.witness_stats_distance <= 1e-9);

  PropositionReport bad = check_prop3(2, 4, smoke(100), false, true);
  REQUIRE(bad.refuted);
  REQUIRE(find_check(bad, "corrupted_b_not_verifiable").pass);
}

TEST_CASE("qutrit verifiability equals completeness") {
  PropositionReport rep = check_prop4(smoke(200));
  REQUIRE(rep.consistent());
  REQUIRE(find_check(rep, "span8_generator_one_sided").pass);
  REQUIRE(find_check(rep, "span8_verifiability_matches_completeness").pass);
  REQUIRE(find_check(rep, "full_span_verifiability_matches_completeness").pass);
}

TEST_CASE("many small factors") {
  PropositionReport rep = check_multipartite({2, 3}, smoke(200));
  REQUIRE(rep.consistent());
  REQUIRE(find_check(rep, "span_dim_multiplies").pass);

  PropositionReport bad = check_multipartite({2, 3}, smoke(100), 0);
  REQUIRE(bad.refuted);
  REQUIRE(bad.witness_stats_distance <= 1e-9);
  REQUIRE(find_check(bad, "lifted_difference_hidden").pass);

  REQUIRE_THROWS_AS(check_multipartite({2}, smoke()), std::invalid_argument);
  REQUIRE_THROWS_AS(check_multipartite({2, 5}, smoke()), std::invalid_argument);
  REQUIRE_THROWS_AS(check_multipartite({3, 3, 3, 3}, smoke()), std::invalid_argument);
}

TEST_CASE("factorized dimensions") {
  PropositionReport rep = check_factorized_dims(1, 0, 1, 1, smoke(100, 8));
  REQUIRE(rep.consistent());
  REQUIRE(find_check(rep, "span_a_factorizes").pass);
  REQUIRE(find_check(rep, "span_b_factorizes").pass);
  REQUIRE(find_check(rep, "span_product_multiplies").pass);

  PropositionReport bad = check_factorized_dims(1, 0, 1, 1, smoke(50, 8), 1);
  REQUIRE(bad.refuted);
  REQUIRE(bad.witness_stats_distance <= 1e-9);

  REQUIRE_THROWS_AS(check_factorized_dims(3, 2, 0, 1, smoke()), std::invalid_argument);
}

TEST_CASE("exploration is labeled as such") {
  PropositionReport rep = explore_product_psic(4, 3, smoke(100, 8));
  REQUIRE(rep.proposition == "explore");
  bool labeled = false;
  for (const auto& [k, v] : rep.instance) {
    if (k == "status" && v.find("exploratory") != std::string::npos) labeled = true;
  }
  REQUIRE(labeled);
}

TEST_CASE("interlacing on frozen and random inputs") {
  Hermitian t = Hermitian::diagonal((RVector(4) << 4, 3, 2, 1).finished());
  InterlacingReport r = check_interlacing(t, {0, 1});
  REQUIRE(r.pass);
  REQUIRE(r.worst_slack >= 0.0);
  REQUIRE(r.comparisons == 4);

  InterlacingReport suite = interlacing_suite(100, 0);
  REQUIRE(suite.pass);
  REQUIRE(suite.worst_slack >= -1e-9);

  REQUIRE_THROWS_AS(check_interlacing(t, {0, 0}), std::invalid_argument);
  REQUIRE_THROWS_AS(check_interlacing(t, {0, 9}), std::invalid_argument);
}

TEST_CASE("proof machinery identities") {
  PropositionReport rep = check_proof_unitaries(0);
  REQUIRE(rep.all_pass());
  REQUIRE(find_check(rep, "block_unitary_unitary").pass);
  REQUIRE(find_check(rep, "diagonal_block_formula").pass);
  REQUIRE(find_check(rep, "offdiagonal_conjugations").pass);
  REQUIRE(find_check(rep, "offdiagonal_rank_bound").pass);
  REQUIRE(find_check(rep, "trig_gram_rank").pass);
}

TEST_CASE("reports are deterministic") {
  PropositionReport r1 = check_prop1(2, 3, smoke(100, 8, 5));
  PropositionReport r2 = check_prop1(2, 3, smoke(100, 8, 5));
  REQUIRE(r1.checks.size() == r2.checks.size());
  for (std::size_t i = 0; i < r1.checks.size(); ++i) {
    REQUIRE(r1.checks[i].name == r2.checks[i].name);
    REQUIRE(r1.checks[i].margin == r2.checks[i].margin);
  }
}

TEST_CASE("dimension bookkeeping identity") {
  // (da^2 - ra) rb + ra (db^2 - rb) + (da^2 - ra)(db^2 - rb)
  //   = da^2 db^2 - ra rb for every split.
  for (int da2 : {4, 9}) {
    for (int ra : {3, 4, 8}) {
      if (ra > da2) continue;
      for (int db2 : {9, 16}) {
        for (int rb : {8, 9, 15}) {
          if (rb > db2) continue;
          long lhs = static_cast<long>(da2 - ra) * rb + static_cast<long>(ra) * (db2 - rb) +
                     static_cast<long>(da2 - ra) * (db2 - rb);
          REQUIRE(lhs == static_cast<long>(da2) * db2 - static_cast<long>(ra) * rb);
        }
      }
    }
  }
}
