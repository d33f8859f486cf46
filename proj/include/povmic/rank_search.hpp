#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "povmic/hermitian.hpp"
#include "povmic/povm.hpp"
#include "povmic/subspace.hpp"

namespace povmic {

/// Relative tail-energy threshold below which a rank drop counts as found.
inline constexpr double kRankFoundTol = 1e-10;
/// Tail energies in (kRankFoundTol, kRankBorderlineTol] are inconclusive.
inline constexpr double kRankBorderlineTol = 1e-6;
/// Sentinel rank for searches over the zero subspace.
inline constexpr int kNoElement = std::numeric_limits<int>::max();

/// Outcome of a minimum-rank hunt over the unit sphere of a subspace.
///
/// Ranks here are energy ranks: the least r whose tail eigenvalue energy
/// (sum of squares beyond the r largest magnitudes) is at most tol relative
/// to the total; the +/- variant drops the positive and negative tails
/// separately and takes min(#positive, #negative). A witness achieving
/// min_found is kept as unit coefficients against the subspace basis.
/// borderline_found records any strictly smaller value that was only reached
/// at borderline confidence (tail energy within kRankBorderlineTol).
struct RankCertificate {
  enum class Target { rank, rank_pm };
  enum class Method { exhaustive, randomized };

  Target target = Target::rank;
  Method method = Method::randomized;
  int min_found = kNoElement;
  int borderline_found = kNoElement;
  RVector witness_coeffs;
  double witness_tail = 0.0;
  long evaluations = 0;
  int trials = 0;
  double tol = kRankFoundTol;
};

/// Multi-start projected descent for the least rank over unit-norm elements
/// of `sub`. Deterministic for a given (sub, trials, seed).
RankCertificate min_rank_search(const OperatorSubspace& sub, int trials, std::uint64_t seed,
                                double found_tol = kRankFoundTol);

/// Same machinery aimed at rank_pm. Descent minimizes the positive-side tail
/// energy; the sign flip T -> -T (which swaps positive and negative counts)
/// is covered by the start distribution, so single-signed witnesses such as
/// diag(2,-1,-1) are reachable.
RankCertificate min_rank_pm_search(const OperatorSubspace& sub, int trials,
                                   std::uint64_t seed, double found_tol = kRankFoundTol);

/// Exhaustive grid oracle with local refinement; subspace dimension <= 3
/// only. Used as an independent cross-check of the randomized searches.
RankCertificate brute_force_min_rank(const OperatorSubspace& sub, int grid_points_per_angle,
                                     RankCertificate::Target target,
                                     double found_tol = kRankFoundTol);

/// For traceless t of rank 2 (spectrum {l, -l}): the two pure eigenstates.
/// Their difference is proportional to t, so any POVM with t orthogonal to
/// its effect span cannot tell them apart.
std::pair<Hermitian, Hermitian> psic_witness_states(const Hermitian& t, double tol = 1e-8);

/// For traceless t with rank_pm(t) = 1: a (pure, mixed) pair differing by a
/// multiple of t. The sign is oriented so t has exactly one strictly positive
/// eigenvalue l1 with unit vector u; returns (u u^dag, u u^dag - t/l1).
std::pair<Hermitian, Hermitian> vpsic_witness_states(const Hermitian& t, double tol = 1e-8);

enum class Property { ic, psic, vpsic };
enum class Verdict { yes, no, undetermined };
enum class Strength { exact, empirical };

struct CertifyBudget {
  int trials = 64;
  double span_tol = 1e-8;
};

struct CertifyReport {
  Property property = Property::ic;
  Verdict verdict = Verdict::undetermined;
  Strength strength = Strength::exact;
  int span_dim = 0;
  int complement_dim = 0;
  std::optional<RankCertificate> certificate;
  std::optional<Hermitian> witness_element;
  std::optional<std::pair<Hermitian, Hermitian>> witness_states;
  double witness_stats_distance = 0.0;
  std::string note;
};

/// Decide IC / pure-state IC / verifiably-pure-state IC for a measurement.
///
/// Exact structural paths: IC always; dimension shortcuts (any deficient
/// qubit span refutes PSIC, any deficient span in dimension <= 3 refutes
/// VPSIC); one-dimensional complements via the generator spectrum. Larger
/// complements fall back to the randomized searches (plus the grid oracle
/// when the complement dimension allows it); a clean witness yields an exact
/// "no", nothing found yields an empirical "yes", borderline tails yield
/// "undetermined".
CertifyReport certify_povm(const Povm& povm, Property property, CertifyBudget budget = {},
                           std::uint64_t seed = 0);

std::string to_string(Property p);
std::string to_string(Verdict v);
std::string to_string(Strength s);

}  // namespace povmic
