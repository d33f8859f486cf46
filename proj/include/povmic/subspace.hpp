#pragma once

#include <optional>
#include <string>
#include <vector>

#include "povmic/hermitian.hpp"
#include "povmic/povm.hpp"

namespace povmic {

/// Real-linear subspace of the selfadjoint matrices on C^d, held as an
/// orthonormal (Hilbert-Schmidt) basis. The Gram matrix of the basis must be
/// the identity within 1e-9.
class OperatorSubspace {
 public:
  OperatorSubspace(int ambient_dim, std::vector<Hermitian> basis);

  /// All selfadjoint matrices on C^d (canonical basis, dimension d^2).
  static OperatorSubspace full(int ambient_dim);
  /// Orthonormalized span of arbitrary selfadjoint matrices.
  static OperatorSubspace span_of(const std::vector<Hermitian>& gens, double tol = 1e-10);

  int ambient_dim() const { return ambient_dim_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Hermitian>& basis() const { return basis_; }

  /// Coordinates of T against the basis (length dim()).
  RVector coords(const Hermitian& t) const;
  Hermitian project(const Hermitian& t) const;
  /// Hilbert-Schmidt norm of T - project(T).
  double residual(const Hermitian& t) const;
  /// Element sum_i c_i B_i.
  Hermitian element(const RVector& c) const;

 private:
  int ambient_dim_;
  std::vector<Hermitian> basis_;
};

/// Span of the effects of a POVM. The identity always lies in the result
/// (effects sum to it); its absence at tolerance 1e-8 is an error.
OperatorSubspace operator_span(const Povm& povm, double tol = 1e-8);

/// Orthogonal complement within the selfadjoint matrices. When the identity
/// lies in `sub`, every element of the complement is traceless.
OperatorSubspace complement(const OperatorSubspace& sub);

struct IcReport {
  bool ic;
  int span_dim;
};

/// Informationally complete iff the effect span has dimension d^2.
IcReport is_ic(const Povm& povm, double tol = 1e-8);

/// True iff rho1 - rho2 is orthogonal to every effect, i.e. the two states
/// produce identical outcome statistics. Decided by projecting the difference
/// onto the effect span and comparing the norm against tol.
bool difference_in_kernel(const Povm& povm, const Hermitian& rho1, const Hermitian& rho2,
                          double tol = 1e-9);

/// The orthogonal complement of R(A (x) B) splits into three mutually
/// orthogonal tensor families, built here from the factor spans:
///   R(A)~ (x) R(B),  R(A) (x) R(B)~,  R(A)~ (x) R(B)~
/// with ~ the complement on the factor. Residuals and dimension bookkeeping
/// against the directly computed product complement are reported.
struct BipartiteComplementReport {
  OperatorSubspace compl_a_span_b;
  OperatorSubspace span_a_compl_b;
  OperatorSubspace compl_a_compl_b;
  double max_cross_inner;        // orthogonality between the three families
  double max_containment_residual;  // projection of family elements onto R(A(x)B)
  int dim_sum;                   // sum of the three family dimensions
  int product_complement_dim;    // d_A^2 d_B^2 - dim R(A) dim R(B)
  bool dims_match;
};

BipartiteComplementReport bipartite_complement(const Povm& a, const Povm& b,
                                               double tol = 1e-8);

enum class QutritCase {
  ic,               // span dimension 9
  single_full_rank, // span dimension 8, complement spanned by a rank-3 matrix
  other
};

struct QutritClassification {
  QutritCase kind;
  int span_dim;
  int complement_dim;
  std::optional<Hermitian> generator;  // unit-norm complement generator when dim 1
  RVector generator_eigenvalues;       // descending, empty unless generator set
  // For `other`: least rank seen in the complement and the element achieving it.
  int min_rank_found = 0;
  std::optional<Hermitian> min_rank_witness;
};

/// Trichotomy for 3-dimensional measurements: informationally complete, or
/// complement spanned by a single full-rank (necessarily traceless, zero
/// eigenvalue sum) matrix, or neither. In the last case the complement always
/// admits small-rank elements and a searched witness is attached.
QutritClassification qutrit_classify(const Povm& a, double tol = 1e-8);

}  // namespace povmic
