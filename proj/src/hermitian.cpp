#include "povmic/hermitian.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "povmic/rng.hpp"

namespace povmic {

Hermitian::Hermitian(CMatrix m, double asym_tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("Hermitian: matrix must be square and non-empty");
  }
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > asym_tol * scale) {
    throw std::invalid_argument("Hermitian: input is not selfadjoint (asymmetry " +
                                std::to_string(asym) + ")");
  }
  m_ = 0.5 * (m + m.adjoint().eval());
}

Hermitian Hermitian::zero(int dim) { return Hermitian(CMatrix::Zero(dim, dim)); }

Hermitian Hermitian::identity(int dim) { return Hermitian(CMatrix::Identity(dim, dim)); }

Hermitian Hermitian::diagonal(const RVector& entries) {
  CMatrix m = entries.cast<Complex>().asDiagonal();
  return Hermitian(std::move(m));
}

Hermitian Hermitian::outer(const CVector& v) { return Hermitian(v * v.adjoint()); }

Hermitian operator+(const Hermitian& a, const Hermitian& b) {
  return Hermitian(a.mat() + b.mat());
}

Hermitian operator-(const Hermitian& a, const Hermitian& b) {
  return Hermitian(a.mat() - b.mat());
}

Hermitian operator-(const Hermitian& a) { return Hermitian(-a.mat()); }

Hermitian operator*(double s, const Hermitian& a) { return Hermitian(s * a.mat()); }

double hs_inner(const Hermitian& s, const Hermitian& t) {
  if (s.dim() != t.dim()) {
    throw std::invalid_argument("hs_inner: dimension mismatch");
  }
  // tr(S T) = sum_{jk} S_jk T_kj, computed without forming the product.
  return s.mat().cwiseProduct(t.mat().transpose()).sum().real();
}

double hs_norm(const Hermitian& t) { return t.mat().norm(); }

EigenSystem eigh(const Hermitian& t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(t.mat());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigh: eigensolver failed to converge");
  }
  int d = t.dim();
  EigenSystem out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = CMatrix(d, d);
  for (int j = 0; j < d; ++j) out.vectors.col(j) = solver.eigenvectors().col(d - 1 - j);
  return out;
}

namespace {

RVector eigenvalues_only(const Hermitian& t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(t.mat(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalues: solver failed to converge");
  }
  return solver.eigenvalues();
}

}  // namespace

int rank_eps(const Hermitian& t, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("rank_eps: tol must be positive");
  RVector ev = eigenvalues_only(t);
  double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  return static_cast<int>((ev.cwiseAbs().array() > tol * scale).count());
}

int rank_pm(const Hermitian& t, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("rank_pm: tol must be positive");
  RVector ev = eigenvalues_only(t);
  double cut = tol * std::max(1.0, ev.cwiseAbs().maxCoeff());
  int pos = static_cast<int>((ev.array() > cut).count());
  int neg = static_cast<int>((ev.array() < -cut).count());
  return std::min(pos, neg);
}

Hermitian tensor_prod(const Hermitian& s, const Hermitian& t) {
  int ds = s.dim();
  int dt = t.dim();
  CMatrix out(ds * dt, ds * dt);
  for (int j = 0; j < ds; ++j) {
    for (int k = 0; k < ds; ++k) {
      out.block(j * dt, k * dt, dt, dt) = s.mat()(j, k) * t.mat();
    }
  }
  return Hermitian(std::move(out));
}

Hermitian compress(const Hermitian& t, const CMatrix& iso) {
  if (iso.rows() != t.dim()) {
    throw std::invalid_argument("compress: isometry row count does not match matrix");
  }
  if (iso.cols() < 1 || iso.cols() > iso.rows()) {
    throw std::invalid_argument("compress: isometry must have between 1 and dim columns");
  }
  CMatrix gram = iso.adjoint() * iso;
  double dev = (gram - CMatrix::Identity(iso.cols(), iso.cols())).cwiseAbs().maxCoeff();
  if (dev > 1e-8) {
    throw std::invalid_argument("compress: columns not orthonormal (deviation " +
                                std::to_string(dev) + ")");
  }
  return Hermitian(iso.adjoint() * t.mat() * iso);
}

RVector hs_vec(const Hermitian& t) {
  int d = t.dim();
  RVector v(d * d);
  int p = 0;
  for (int j = 0; j < d; ++j) v(p++) = t.mat()(j, j).real();
  const double r2 = std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      v(p++) = r2 * t.mat()(j, k).real();
      v(p++) = r2 * t.mat()(j, k).imag();
    }
  }
  return v;
}

Hermitian hs_unvec(const RVector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw std::invalid_argument("hs_unvec: coordinate vector has wrong length");
  }
  CMatrix m = CMatrix::Zero(dim, dim);
  int p = 0;
  for (int j = 0; j < dim; ++j) m(j, j) = v(p++);
  const double inv_r2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      double re = v(p++) * inv_r2;
      double im = v(p++) * inv_r2;
      m(j, k) = Complex(re, im);
      m(k, j) = Complex(re, -im);
    }
  }
  return Hermitian(std::move(m));
}

Hermitian pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return Hermitian(std::move(m));
}

Hermitian pauli_y() {
  CMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return Hermitian(std::move(m));
}

Hermitian pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return Hermitian(std::move(m));
}

double max_abs_diff(const Hermitian& a, const Hermitian& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("max_abs_diff: dimension mismatch");
  return (a.mat() - b.mat()).cwiseAbs().maxCoeff();
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  return (a - b).cwiseAbs().maxCoeff();
}

Hermitian random_hermitian(int dim, Rng& rng) {
  CMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) g(j, k) = rng.cgaussian();
  return Hermitian(0.5 * (g + g.adjoint().eval()));
}

CVector random_pure_vector(int dim, Rng& rng) {
  CVector v(dim);
  for (int j = 0; j < dim; ++j) v(j) = rng.cgaussian();
  return v / v.norm();
}

Hermitian random_pure_state(int dim, Rng& rng) {
  return Hermitian::outer(random_pure_vector(dim, rng));
}

Hermitian random_density_matrix(int dim, Rng& rng) {
  CMatrix g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) g(j, k) = rng.cgaussian();
  CMatrix w = g * g.adjoint();
  return Hermitian(w / w.trace().real());
}

CMatrix random_isometry(int rows, int cols, Rng& rng) {
  if (cols > rows) throw std::invalid_argument("random_isometry: cols > rows");
  CMatrix g(rows, cols);
  for (int j = 0; j < rows; ++j)
    for (int k = 0; k < cols; ++k) g(j, k) = rng.cgaussian();
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  return q;
}

}  // namespace povmic
