#include "povmic/tomography.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

#include "povmic/rng.hpp"

namespace povmic {

namespace {

/// Born image without density-matrix validation; reconstruction intermediates
/// may carry small negative eigenvalues.
RVector raw_statistics(const Povm& povm, const Hermitian& rho) {
  RVector p(povm.size());
  for (int x = 0; x < povm.size(); ++x) p(x) = hs_inner(povm.effect(x), rho);
  return p;
}

}  // namespace

RVector expectation_coeffs(const Povm& povm, const Hermitian& observable, double tol) {
  if (observable.dim() != povm.dim()) {
    throw std::invalid_argument("expectation_coeffs: dimension mismatch");
  }
  RMatrix m = povm.vectorized_effects();  // n x d^2
  RVector target = hs_vec(observable);
  Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(m.transpose());
  RVector alpha = cod.solve(target);
  double residual = (m.transpose() * alpha - target).norm();
  if (residual > tol * std::max(1.0, target.norm())) {
    throw std::invalid_argument("expectation_coeffs: observable is outside the effect span");
  }
  return alpha;
}

LinearReconstruction linear_inversion(const Povm& povm, const StatisticsVector& stats) {
  const int n = povm.size();
  const int d = povm.dim();
  if (stats.probabilities.size() != n) {
    throw std::invalid_argument("linear_inversion: statistics length mismatch");
  }
  OperatorSubspace span = operator_span(povm);
  const int r = span.dim();
  RMatrix g(n, r);
  for (int x = 0; x < n; ++x) {
    RVector coords = span.coords(povm.effect(x));
    g.row(x) = coords.transpose();
  }
  Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(g);
  RVector beta = cod.solve(stats.probabilities);
  Hermitian rho = span.element(beta);
  double shift = (1.0 - rho.trace()) / d;
  rho = rho + shift * Hermitian::identity(d);
  RVector fitted = raw_statistics(povm, rho);
  LinearReconstruction out;
  out.state = rho;
  out.residual = (fitted - stats.probabilities).norm();
  out.span_dim = r;
  return out;
}

double pure_fit_objective(const Povm& povm, const StatisticsVector& stats, const CVector& psi) {
  double f = 0.0;
  for (int x = 0; x < povm.size(); ++x) {
    double px = (psi.adjoint() * povm.effect(x).mat() * psi).value().real();
    double r = px - stats.probabilities(x);
    f += r * r;
  }
  return f;
}

CVector pure_fit_gradient(const Povm& povm, const StatisticsVector& stats, const CVector& psi) {
  CVector g = CVector::Zero(psi.size());
  for (int x = 0; x < povm.size(); ++x) {
    const CMatrix& a = povm.effect(x).mat();
    double px = (psi.adjoint() * a * psi).value().real();
    double r = px - stats.probabilities(x);
    g += 4.0 * r * (a * psi);
  }
  return g;
}

namespace {

/// Real symmetric embedding of a Hermitian matrix: with z = (Re psi, Im psi),
/// psi^dag A psi = z^T M z.
RMatrix real_embedding(const CMatrix& a) {
  const int d = static_cast<int>(a.rows());
  RMatrix m(2 * d, 2 * d);
  m.topLeftCorner(d, d) = a.real();
  m.topRightCorner(d, d) = -a.imag();
  m.bottomLeftCorner(d, d) = a.imag();
  m.bottomRightCorner(d, d) = a.real();
  return m;
}

/// Levenberg-Marquardt refinement of the quadratic residuals r_x = z^T M_x z - p_x
/// over the unnormalized real parametrization. The damping term also absorbs the
/// global-phase null direction of the Jacobian.
CVector quadratic_polish(const std::vector<RMatrix>& ms, const RVector& probs,
                         const CVector& psi0) {
  const int d = static_cast<int>(psi0.size());
  const int n = static_cast<int>(ms.size());
  RVector z(2 * d);
  z << psi0.real(), psi0.imag();
  auto eval = [&](const RVector& w, RVector& r) {
    double f = 0.0;
    for (int x = 0; x < n; ++x) {
      r(x) = w.dot(ms[x] * w) - probs(x);
      f += r(x) * r(x);
    }
    return f;
  };
  RVector r(n), rt(n);
  double f = eval(z, r);
  double lambda = 1e-3;
  for (int iter = 0; iter < 80 && f > 1e-28 && lambda < 1e10; ++iter) {
    RMatrix jac(n, 2 * d);
    for (int x = 0; x < n; ++x) jac.row(x) = 2.0 * (ms[x] * z).transpose();
    RMatrix h = jac.transpose() * jac;
    h.diagonal().array() += lambda;
    RVector delta = h.ldlt().solve(-jac.transpose() * r);
    RVector zt = z + delta;
    double ft = eval(zt, rt);
    if (ft < f) {
      z = zt;
      r = rt;
      f = ft;
      lambda = std::max(lambda * 0.3, 1e-12);
    } else {
      lambda *= 5.0;
    }
  }
  CVector psi(d);
  for (int i = 0; i < d; ++i) psi(i) = Complex(z(i), z(d + i));
  psi.normalize();
  return psi;
}

void gauge_phase(CVector& psi) {
  int arg = 0;
  double best = 0.0;
  for (int i = 0; i < psi.size(); ++i) {
    if (std::abs(psi(i)) > best) {
      best = std::abs(psi(i));
      arg = i;
    }
  }
  if (best > 0.0) psi *= std::conj(psi(arg)) / best;
}

}  // namespace

PureFit pure_state_fit(const Povm& povm, const StatisticsVector& stats, int starts,
                       std::uint64_t seed) {
  const int d = povm.dim();
  if (stats.probabilities.size() != povm.size()) {
    throw std::invalid_argument("pure_state_fit: statistics length mismatch");
  }
  if (starts < 1) throw std::invalid_argument("pure_state_fit: starts must be >= 1");

  std::vector<RMatrix> embedded;
  embedded.reserve(povm.size());
  for (int x = 0; x < povm.size(); ++x) embedded.push_back(real_embedding(povm.effect(x).mat()));

  CVector best_psi;
  double best_f = std::numeric_limits<double>::infinity();
  int used = 0;

  for (int s = 0; s < starts; ++s) {
    Rng rng = Rng(seed).child(s);
    CVector psi = random_pure_vector(d, rng);
    double f = pure_fit_objective(povm, stats, psi);
    double step = 0.1;
    for (int iter = 0; iter < 300 && step > 1e-12 && f > 1e-22; ++iter) {
      CVector g = pure_fit_gradient(povm, stats, psi);
      Complex overlap = psi.dot(g);
      CVector tangent = g - overlap.real() * psi;
      double tn = tangent.norm();
      if (tn < 1e-15) break;
      CVector trial = psi - (step / tn) * tangent;
      trial.normalize();
      double ft = pure_fit_objective(povm, stats, trial);
      if (ft < f) {
        psi = trial;
        f = ft;
        step *= 1.6;
      } else {
        step *= 0.5;
      }
    }
    CVector polished = quadratic_polish(embedded, stats.probabilities, psi);
    double fp = pure_fit_objective(povm, stats, polished);
    if (fp < f) {
      psi = polished;
      f = fp;
    }
    ++used;
    if (f < best_f) {
      best_f = f;
      best_psi = psi;
    }
    if (best_f < 1e-22) break;
  }

  gauge_phase(best_psi);
  PureFit out;
  out.vector = best_psi;
  out.state = Hermitian::outer(best_psi);
  out.objective = best_f;
  RVector fitted = raw_statistics(povm, out.state);
  out.stats_distance = (fitted - stats.probabilities).cwiseAbs().maxCoeff();
  out.restarts_used = used;
  return out;
}

double statistics_distance(const Povm& povm, const Hermitian& rho1, const Hermitian& rho2) {
  RVector p1 = raw_statistics(povm, rho1);
  RVector p2 = raw_statistics(povm, rho2);
  return (p1 - p2).cwiseAbs().maxCoeff();
}

}  // namespace povmic
