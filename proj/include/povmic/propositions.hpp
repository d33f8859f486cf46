#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "povmic/povm.hpp"
#include "povmic/rank_search.hpp"
#include "povmic/subspace.hpp"

namespace povmic {

struct CheckResult {
  std::string name;
  bool pass;
  double margin;  // >= 0: clearance above the bar; < 0: size of the failure
};

/// Outcome of one consistency run. `refuted` is set when a deliberately
/// corrupted premise produced its witness pair, i.e. the run demonstrates a
/// failure rather than a confirmation; the checks then assert that the
/// demonstration worked.
struct PropositionReport {
  std::string proposition;
  std::vector<std::pair<std::string, std::string>> instance;
  std::vector<CheckResult> checks;
  std::uint64_t seed = 0;
  bool refuted = false;
  std::optional<std::pair<Hermitian, Hermitian>> witness_states;
  double witness_stats_distance = 0.0;

  bool all_pass() const;
  bool consistent() const { return all_pass() && !refuted; }
};

struct HarnessOptions {
  int pair_samples = 10000;
  int search_trials = 64;
  std::uint64_t seed = 0;
};

/// Random measurement with full effect span, retrying derived seeds until the
/// span is complete.
Povm make_ic_random(int dim, std::uint64_t seed);

/// Measurement whose effect span is exactly the orthogonal complement of the
/// line through s (s traceless, nonzero).
Povm make_complement_line(int dim, const Hermitian& s);

/// Qutrit measurement with effect span of dimension 8 whose complement is
/// spanned by diag(s); requires s summing to zero with all entries nonzero.
/// Distinguishes all pure states but not all mixed ones.
Povm make_qutrit_case2(const RVector& s);
Povm make_qutrit_case2();  // s = (1, 1, -2)

/// Four-dimensional measurement with complement spanned by diag(1,1,-1,-1):
/// pure states are distinguished from all states, but the span is deficient.
Povm make_dim4_vpsic();

/// Measurement with complement spanned by diag(1,-1,0,...): the two extreme
/// basis states are indistinguishable, so pure-state completeness fails.
Povm make_non_psic(int dim);

// --- Product-of-measurements consistency runs -------------------------------

/// Complete A times pure-state-complete B keeps pure-state completeness.
/// corrupt_b swaps B for a non-PSIC measurement and demands the witness.
PropositionReport check_prop1(int d_a, int d_b, const HarnessOptions& opts = {},
                              bool corrupt_b = false);

/// Span-8 qutrit A times pure-state-complete B keeps pure-state completeness,
/// with the product complement splitting into the two expected summands.
/// corrupt_a swaps A for a non-PSIC qutrit and demands the witness.
PropositionReport check_prop2(int d_b, const RVector& s, const HarnessOptions& opts = {},
                              bool corrupt_a = false);

/// Complete A times verifiably-pure-state-complete B keeps verifiability:
/// every product complement element has at least two eigenvalues of each
/// sign. case2_alice replaces A by a span-8 qutrit (premise broken, a
/// one-sided element must be found); corrupt_b replaces B by a measurement
/// whose complement generator is one-sided.
PropositionReport check_prop3(int d_a, int d_b, const HarnessOptions& opts = {},
                              bool case2_alice = false, bool corrupt_b = false);

/// For qutrits, verifiability coincides with full completeness; products with
/// a complete qutrit factor inherit verifiability from the other factor.
PropositionReport check_prop4(const HarnessOptions& opts = {});

/// N qubit/qutrit factors, each pure-state complete, give a pure-state
/// complete product. corrupt_index >= 0 breaks that factor and demands the
/// lifted witness.
PropositionReport check_multipartite(const std::vector<int>& factors,
                                     const HarnessOptions& opts = {}, int corrupt_index = -1);

/// Both sides factorized into qubits and qutrits: d_A = 2^{n_a} 3^{m_a},
/// d_B = 2^{n_b} 3^{m_b}, every factor pure-state complete. A nonnegative
/// corrupt_index breaks that factor (position in the combined list) and
/// expects a lifted witness pair instead.
PropositionReport check_factorized_dims(int n_a, int m_a, int n_b, int m_b,
                                        const HarnessOptions& opts = {},
                                        int corrupt_index = -1);

/// Exploratory only: product of two span-deficient pure-state-complete
/// measurements with d_a >= 4. No theorem backs the outcome; the report is
/// always empirical and a small-rank find is flagged, not treated as a bug.
PropositionReport explore_product_psic(int d_a, int d_b, const HarnessOptions& opts = {});

// --- Spectral machinery ------------------------------------------------------

struct InterlacingReport {
  bool pass;
  double worst_slack;  // most negative inequality slack seen (>= -1e-9 passes)
  int comparisons;
};

/// Compression of t onto the coordinates in block_cols (all distinct, within
/// range). Checks lambda_j(T) >= lambda_j(T_c) >= lambda_{j+n-k}(T) for all j.
InterlacingReport check_interlacing(const Hermitian& t, const std::vector<int>& block_cols);

/// Random (matrix, coordinate-block) draws, dims 4..10, all run through
/// check_interlacing.
InterlacingReport interlacing_suite(int draws, std::uint64_t seed);

/// The 3x3-block unitary with phase twists alpha, beta used to rotate a
/// block matrix so that its first diagonal block picks up independent
/// trigonometric combinations of the off-diagonal blocks; each block is
/// block_dim x block_dim.
CMatrix phase_block_unitary(double alpha, double beta, int block_dim);

/// Verifies the three algebraic ingredients behind the product results:
/// unitarity and the diagonal-block formula for phase_block_unitary, the
/// 2x2-block conjugation identities turning an off-diagonal block into real
/// symmetric data (with the rank bound), and linear independence of the seven
/// trigonometric functions 1, cos a, sin a, cos b, sin b, cos(b-a), sin(b-a).
PropositionReport check_proof_unitaries(std::uint64_t seed);

}  // namespace povmic
