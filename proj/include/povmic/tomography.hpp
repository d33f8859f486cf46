#pragma once

#include <cstdint>
#include <optional>

#include "povmic/povm.hpp"
#include "povmic/subspace.hpp"

namespace povmic {

/// Coefficients alpha with sum_x alpha_x A_x = O, when O lies in the span of
/// the effects. Minimum-norm solution; throws std::invalid_argument if the
/// residual exceeds tol times the norm of O.
RVector expectation_coeffs(const Povm& povm, const Hermitian& observable, double tol = 1e-8);

struct LinearReconstruction {
  Hermitian state;
  double residual;    // Hilbert-Schmidt distance between fitted stats and input
  int span_dim;
};

/// Least-squares inversion of the Born map restricted to the effect span,
/// followed by a trace correction. Exact statistics of any state are
/// recovered exactly up to the span's blind directions.
LinearReconstruction linear_inversion(const Povm& povm, const StatisticsVector& stats);

struct PureFit {
  CVector vector;            // unit vector, phase-gauged
  Hermitian state;           // outer product of the vector
  double objective;          // sum of squared probability residuals
  double stats_distance;     // max-abs deviation of fitted stats from input
  int restarts_used;
};

/// Multi-start projected gradient descent for the best pure state explaining
/// the statistics. Deterministic for a fixed seed.
PureFit pure_state_fit(const Povm& povm, const StatisticsVector& stats, int starts = 16,
                       std::uint64_t seed = 0);

/// Objective and analytic gradient used by pure_state_fit, exposed for
/// verification against finite differences.
double pure_fit_objective(const Povm& povm, const StatisticsVector& stats, const CVector& psi);
CVector pure_fit_gradient(const Povm& povm, const StatisticsVector& stats, const CVector& psi);

/// Max-abs difference between the Born statistics of two states.
double statistics_distance(const Povm& povm, const Hermitian& rho1, const Hermitian& rho2);

}  // namespace povmic
