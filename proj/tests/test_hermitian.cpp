#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "povmic/hermitian.hpp"
#include "povmic/rng.hpp"

using namespace povmic;

TEST_CASE("constructor symmetrizes and rejects junk") {
  CMatrix m(2, 2);
  m << Complex(1, 0), Complex(2, 3), Complex(2, -3), Complex(4, 0);
  Hermitian h(m);
  REQUIRE(max_abs_diff(h.mat(), m) < 1e-15);

  CMatrix skew(2, 2);
  skew << Complex(0, 0), Complex(1, 0), Complex(-1, 0), Complex(0, 0);
  REQUIRE_THROWS_AS(Hermitian(skew), std::invalid_argument);
}

TEST_CASE("eigendecomposition on a frozen matrix") {
  CMatrix m(2, 2);
  m << Complex(2, 0), Complex(1, 0), Complex(1, 0), Complex(2, 0);
  Hermitian h(m);
  EigenSystem es = eigh(h);
  // Eigenvalues of [[2,1],[1,2]] are 3 and 1, sorted descending.
  REQUIRE(es.values(0) == Catch::Approx(3.0).margin(1e-12));
  REQUIRE(es.values(1) == Catch::Approx(1.0).margin(1e-12));
  CMatrix rebuilt = es.vectors * es.values.asDiagonal().toDenseMatrix().cast<Complex>() *
                    es.vectors.adjoint();
  REQUIRE(max_abs_diff(rebuilt, h.mat()) < 1e-12);
}

TEST_CASE("Hilbert-Schmidt geometry of the Pauli basis") {
  Hermitian x = pauli_x(), y = pauli_y(), z = pauli_z();
  Hermitian id = Hermitian::identity(2);
  REQUIRE(hs_inner(x, y) == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(hs_inner(x, z) == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(hs_inner(y, z) == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(hs_inner(x, id) == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(hs_norm(x) == Catch::Approx(std::sqrt(2.0)));
  REQUIRE(hs_norm(id) == Catch::Approx(std::sqrt(2.0)));
}

TEST_CASE("vectorization is a real isometry") {
  // Frozen 2x2 case first: diagonal entries, then sqrt(2)-scaled real and
  // imaginary parts of the strictly upper triangle.
  CMatrix m(2, 2);
  m << Complex(1, 0), Complex(2, 3), Complex(2, -3), Complex(4, 0);
  RVector v = hs_vec(Hermitian(m));
  REQUIRE(v.size() == 4);
  REQUIRE(v(0) == Catch::Approx(1.0));
  REQUIRE(v(1) == Catch::Approx(4.0));
  REQUIRE(v(2) == Catch::Approx(2.0 * std::sqrt(2.0)));
  REQUIRE(v(3) == Catch::Approx(3.0 * std::sqrt(2.0)));
  REQUIRE(v.squaredNorm() == Catch::Approx(43.0));

  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    Hermitian a = random_hermitian(4, rng);
    Hermitian b = random_hermitian(4, rng);
    REQUIRE(hs_vec(a).dot(hs_vec(b)) == Catch::Approx(hs_inner(a, b)).margin(1e-10));
    REQUIRE(max_abs_diff(hs_unvec(hs_vec(a), 4).mat(), a.mat()) < 1e-12);
  }
}

TEST_CASE("tensor product ordering") {
  Hermitian a = Hermitian::diagonal((RVector(2) << 1, -1).finished());
  Hermitian b = Hermitian::diagonal((RVector(3) << 1, 1, -2).finished());
  Hermitian ab = tensor_prod(a, b);
  RVector expect(6);
  expect << 1, 1, -2, -1, -1, 2;
  REQUIRE(max_abs_diff(ab.mat(), Hermitian::diagonal(expect).mat()) < 1e-15);
  REQUIRE(ab.trace() == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("rank counters") {
  RVector d1(3);
  d1 << 1, 1e-12, 0;
  REQUIRE(rank_eps(Hermitian::diagonal(d1)) == 1);
  RVector d2(3);
  d2 << 1, 1, -2;
  REQUIRE(rank_eps(Hermitian::diagonal(d2)) == 3);
  REQUIRE(rank_pm(Hermitian::diagonal(d2)) == 1);
  RVector d3(4);
  d3 << 1, 1, -1, -1;
  REQUIRE(rank_pm(Hermitian::diagonal(d3)) == 2);
  RVector d4(2);
  d4 << 1, -1;
  REQUIRE(rank_pm(Hermitian::diagonal(d4)) == 1);
}

TEST_CASE("random states are states") {
  Rng rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    Hermitian rho = random_density_matrix(3, rng);
    REQUIRE(rho.trace() == Catch::Approx(1.0).margin(1e-12));
    EigenSystem es = eigh(rho);
    REQUIRE(es.values.minCoeff() > -1e-12);

    Hermitian psi = random_pure_state(3, rng);
    REQUIRE(psi.trace() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(rank_eps(psi) == 1);
  }
}

TEST_CASE("isometries compress without distortion") {
  Rng rng(7);
  CMatrix v = random_isometry(5, 3, rng);
  REQUIRE(max_abs_diff(v.adjoint() * v, CMatrix::Identity(3, 3)) < 1e-12);

  // A unitary compression (square isometry) preserves the spectrum.
  CMatrix u = random_isometry(4, 4, rng);
  Hermitian t = random_hermitian(4, rng);
  Hermitian c = compress(t, u);
  RVector s1 = eigh(t).values;
  RVector s2 = eigh(c).values;
  REQUIRE((s1 - s2).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("rng streams are deterministic and independent") {
  Rng a(42), b(42);
  for (int i = 0; i < 8; ++i) REQUIRE(a.next_u64() == b.next_u64());
  Rng c = Rng(42).child(1);
  Rng d = Rng(42).child(2);
  REQUIRE(c.next_u64() != d.next_u64());
}
