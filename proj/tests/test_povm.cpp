#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "povmic/povm.hpp"
#include "povmic/rng.hpp"

using namespace povmic;

TEST_CASE("tetrahedral qubit measurement geometry") {
  Povm sic = gen_sic_qubit();
  REQUIRE(sic.dim() == 2);
  REQUIRE(sic.size() == 4);
  REQUIRE(validate(sic).empty());

  // tr(E_x E_y) = (1 + n_x . n_y) / 8 with pairwise dot -1/3: 1/4 on the
  // diagonal, 1/12 off it.
  for (int x = 0; x < 4; ++x) {
    REQUIRE(sic.effect(x).trace() == Catch::Approx(0.5).margin(1e-14));
    for (int y = 0; y < 4; ++y) {
      double expect = x == y ? 0.25 : 1.0 / 12.0;
      REQUIRE(hs_inner(sic.effect(x), sic.effect(y)) ==
              Catch::Approx(expect).margin(1e-14));
    }
  }
}

TEST_CASE("born rule on a frozen state") {
  Povm sic = gen_sic_qubit();
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  StatisticsVector stats = born_probabilities(sic, Hermitian(m));
  RVector expect(4);
  const double a = (1.0 + 1.0 / std::sqrt(3.0)) / 4.0;
  const double b = (1.0 - 1.0 / std::sqrt(3.0)) / 4.0;
  expect << a, b, b, a;
  REQUIRE((stats.probabilities - expect).cwiseAbs().maxCoeff() < 1e-14);
  REQUIRE(stats.probabilities.sum() == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("born rule rejects non-states") {
  Povm sic = gen_sic_qubit();
  CMatrix m(2, 2);
  m << Complex(2, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0);
  REQUIRE_THROWS_AS(born_probabilities(sic, Hermitian(m)), std::invalid_argument);
}

TEST_CASE("validation flags broken measurements") {
  RVector top(2), bottom(2);
  top << 2, 0;
  bottom << -1, 1;
  std::vector<Hermitian> effects = {Hermitian::diagonal(top), Hermitian::diagonal(bottom)};
  auto violations = validate(Povm(2, effects));
  REQUIRE_FALSE(violations.empty());

  // Effects that do not close to the identity.
  std::vector<Hermitian> open = {Hermitian::diagonal((RVector(2) << 0.5, 0.5).finished())};
  REQUIRE_FALSE(validate(Povm(2, open)).empty());
}

TEST_CASE("tensor product measurement layout") {
  Povm sic = gen_sic_qubit();
  Povm prod = tensor_povm(sic, sic);
  REQUIRE(prod.dim() == 4);
  REQUIRE(prod.size() == 16);
  REQUIRE(validate(prod).empty());
  // Right index fastest: outcome (x, y) sits at x * 4 + y.
  REQUIRE(prod.labels()[1] == "0,1");
  REQUIRE(max_abs_diff(prod.effect(6).mat(),
                       tensor_prod(sic.effect(1), sic.effect(2)).mat()) < 1e-14);

  Povm triple = tensor_povm_n({sic, sic, sic});
  REQUIRE(triple.dim() == 8);
  REQUIRE(triple.size() == 64);
  REQUIRE(triple.labels()[5] == "0,1,1");
}

TEST_CASE("span-driven generation") {
  std::vector<Hermitian> gens = {Hermitian::identity(2), pauli_z()};
  Povm p = gen_from_span(gens);
  REQUIRE(validate(p).empty());
  REQUIRE(p.size() == 2);

  // Identity missing from the span: no measurement can exist.
  REQUIRE_THROWS_AS(gen_from_span({pauli_z()}), std::invalid_argument);
}

TEST_CASE("random measurements are valid and reproducible") {
  Povm p1 = gen_random(3, 9, 123);
  Povm p2 = gen_random(3, 9, 123);
  REQUIRE(validate(p1).empty());
  for (std::size_t x = 0; x < p1.size(); ++x) {
    REQUIRE(max_abs_diff(p1.effect(x).mat(), p2.effect(x).mat()) == 0.0);
  }
  REQUIRE(max_abs_diff(gen_random(3, 9, 124).effect(0).mat(), p1.effect(0).mat()) > 1e-6);
}

TEST_CASE("vectorized effects match the inner-product map") {
  Povm p = gen_random(2, 5, 7);
  RMatrix m = p.vectorized_effects();
  REQUIRE(m.rows() == 5);
  REQUIRE(m.cols() == 4);
  Rng rng(3);
  Hermitian rho = random_density_matrix(2, rng);
  RVector via_matrix = m * hs_vec(rho);
  StatisticsVector direct = born_probabilities(p, rho);
  REQUIRE((via_matrix - direct.probabilities).cwiseAbs().maxCoeff() < 1e-12);
}
