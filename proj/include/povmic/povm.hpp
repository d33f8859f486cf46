#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "povmic/hermitian.hpp"

namespace povmic {

/// Finite-outcome measurement: a list of selfadjoint effects on C^d.
/// The type holds whatever it is given; physical constraints (each effect
/// positive semidefinite, effects summing to the identity) are reported by
/// validate() as data rather than enforced at construction, so that slightly
/// off inputs can be inspected instead of rejected.
class Povm {
 public:
  Povm(int dim, std::vector<Hermitian> effects, std::vector<std::string> labels = {});

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(effects_.size()); }
  const std::vector<Hermitian>& effects() const { return effects_; }
  const Hermitian& effect(int x) const { return effects_.at(x); }
  const std::vector<std::string>& labels() const { return labels_; }

  /// Rows are hs_vec of the effects; shape size() x dim()^2.
  RMatrix vectorized_effects() const;

 private:
  int dim_;
  std::vector<Hermitian> effects_;
  std::vector<std::string> labels_;
};

struct Violation {
  std::string what;
  double magnitude;
};

/// Empty result means the POVM is physical at tolerance tol: every effect has
/// min eigenvalue >= -tol * max(1, its norm) and the effects sum to the
/// identity within tol (max-abs entrywise).
std::vector<Violation> validate(const Povm& povm, double tol = 1e-9);

struct StatisticsVector {
  RVector probabilities;
};

/// Outcome probabilities tr(rho A(x)). The state must be a density matrix:
/// PSD within 1e-8 and unit trace within 1e-8, else an exception.
StatisticsVector born_probabilities(const Povm& povm, const Hermitian& state);

/// Product measurement with effects A(x) (x) B(y); y varies fastest and labels
/// join as "x,y".
Povm tensor_povm(const Povm& a, const Povm& b);
Povm tensor_povm_n(const std::vector<Povm>& factors);

/// Tetrahedral qubit measurement: four effects (I + n_x . sigma)/4 with the
/// n_x the unit tetrahedron directions; spans all of the selfadjoint 2x2
/// matrices.
Povm gen_sic_qubit();

/// Measurement whose effect span equals the real span of `basis` (which must
/// contain the identity). With G_1..G_m an orthonormal basis of the traceless
/// part of that span, the effects are A_i = (I + eps G_i)/(m+1) plus the
/// closing effect I - sum_i A_i, with eps shrunk until everything is PSD.
/// Yields m+1 outcomes for an (m+1)-dimensional span.
Povm gen_from_span(const std::vector<Hermitian>& basis);

/// Wishart-generated random measurement: M_x = G_x G_x^dag, then normalized by
/// W^{-1/2} (.) W^{-1/2} with W the total. Deterministic per seed; a singular
/// total triggers a resample, failing after 10 attempts.
Povm gen_random(int dim, int n_outcomes, std::uint64_t seed);

}  // namespace povmic
