#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace povmic {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

class Rng;

/// Dense selfadjoint matrix over C^d. Construction symmetrizes the input to
/// (M + M^dag)/2; inputs whose asymmetry exceeds asym_tol relative to
/// max(1, max-abs entry) are rejected as malformed rather than repaired.
class Hermitian {
 public:
  Hermitian() = default;
  explicit Hermitian(CMatrix m, double asym_tol = 1e-9);

  static Hermitian zero(int dim);
  static Hermitian identity(int dim);
  static Hermitian diagonal(const RVector& entries);
  /// Projector-style outer product v v^dag (not normalized).
  static Hermitian outer(const CVector& v);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& mat() const { return m_; }
  double trace() const { return m_.trace().real(); }

 private:
  CMatrix m_;
};

Hermitian operator+(const Hermitian& a, const Hermitian& b);
Hermitian operator-(const Hermitian& a, const Hermitian& b);
Hermitian operator-(const Hermitian& a);
Hermitian operator*(double s, const Hermitian& a);

/// Eigenvalues in descending order; vectors.col(j) pairs with values[j].
struct EigenSystem {
  RVector values;
  CMatrix vectors;
};

/// Hilbert-Schmidt inner product tr(S T); real for selfadjoint arguments.
double hs_inner(const Hermitian& s, const Hermitian& t);
double hs_norm(const Hermitian& t);

EigenSystem eigh(const Hermitian& t);

/// Number of eigenvalues with |lambda| > tol * max(1, max_j |lambda_j|).
int rank_eps(const Hermitian& t, double tol = 1e-8);

/// min(#strictly positive, #strictly negative) eigenvalues at the same
/// relative threshold as rank_eps.
int rank_pm(const Hermitian& t, double tol = 1e-8);

/// Kronecker product; row index of the result is (j * t.dim() + m) for row j
/// of s and row m of t.
Hermitian tensor_prod(const Hermitian& s, const Hermitian& t);

/// Compression iso^dag T iso onto the column span of iso. Columns must be
/// orthonormal: max-abs deviation of the Gram matrix from the identity above
/// 1e-8 is an error.
Hermitian compress(const Hermitian& t, const CMatrix& iso);

/// Isometric real coordinates for selfadjoint matrices: d diagonal entries,
/// then sqrt(2)*Re and sqrt(2)*Im of each strictly upper entry (row-major).
/// Euclidean inner products of these vectors equal Hilbert-Schmidt ones.
RVector hs_vec(const Hermitian& t);
Hermitian hs_unvec(const RVector& v, int dim);

Hermitian pauli_x();
Hermitian pauli_y();
Hermitian pauli_z();

double max_abs_diff(const Hermitian& a, const Hermitian& b);
double max_abs_diff(const CMatrix& a, const CMatrix& b);

/// GUE-like matrix: independent Gaussian entries, symmetrized.
Hermitian random_hermitian(int dim, Rng& rng);
/// Normalized Gaussian vector (Haar distributed on the unit sphere).
CVector random_pure_vector(int dim, Rng& rng);
Hermitian random_pure_state(int dim, Rng& rng);
/// Wishart G G^dag scaled to unit trace; full rank almost surely.
Hermitian random_density_matrix(int dim, Rng& rng);
/// Q factor of a Gaussian matrix; rows >= cols required.
CMatrix random_isometry(int rows, int cols, Rng& rng);

}  // namespace povmic
