#include "povmic/povm.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

#include "povmic/rng.hpp"

namespace povmic {

Povm::Povm(int dim, std::vector<Hermitian> effects, std::vector<std::string> labels)
    : dim_(dim), effects_(std::move(effects)), labels_(std::move(labels)) {
  if (dim_ < 1) throw std::invalid_argument("Povm: dim must be >= 1");
  if (effects_.empty()) throw std::invalid_argument("Povm: at least one effect required");
  for (const auto& e : effects_) {
    if (e.dim() != dim_) throw std::invalid_argument("Povm: effect dimension mismatch");
  }
  if (labels_.empty()) {
    labels_.reserve(effects_.size());
    for (std::size_t x = 0; x < effects_.size(); ++x) labels_.push_back(std::to_string(x));
  } else if (labels_.size() != effects_.size()) {
    throw std::invalid_argument("Povm: label count differs from effect count");
  }
}

RMatrix Povm::vectorized_effects() const {
  RMatrix m(size(), dim_ * dim_);
  for (int x = 0; x < size(); ++x) m.row(x) = hs_vec(effects_[x]).transpose();
  return m;
}

std::vector<Violation> validate(const Povm& povm, double tol) {
  std::vector<Violation> out;
  CMatrix total = CMatrix::Zero(povm.dim(), povm.dim());
  for (int x = 0; x < povm.size(); ++x) {
    const Hermitian& e = povm.effect(x);
    total += e.mat();
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(e.mat(), Eigen::EigenvaluesOnly);
    double lo = solver.eigenvalues().minCoeff();
    double scale = std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
    if (lo < -tol * scale) {
      out.push_back({"effect " + povm.labels()[x] + " has negative eigenvalue", -lo});
    }
  }
  double dev = (total - CMatrix::Identity(povm.dim(), povm.dim())).cwiseAbs().maxCoeff();
  if (dev > tol) {
    out.push_back({"effects do not sum to the identity", dev});
  }
  return out;
}

StatisticsVector born_probabilities(const Povm& povm, const Hermitian& state) {
  if (state.dim() != povm.dim()) {
    throw std::invalid_argument("born_probabilities: state dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(state.mat(), Eigen::EigenvaluesOnly);
  double lo = solver.eigenvalues().minCoeff();
  double scale = std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
  if (lo < -1e-8 * scale) {
    throw std::invalid_argument("born_probabilities: state is not PSD");
  }
  if (std::abs(state.trace() - 1.0) > 1e-8) {
    throw std::invalid_argument("born_probabilities: state trace is not 1");
  }
  StatisticsVector stats;
  stats.probabilities = RVector(povm.size());
  for (int x = 0; x < povm.size(); ++x) {
    stats.probabilities(x) = hs_inner(state, povm.effect(x));
  }
  return stats;
}

Povm tensor_povm(const Povm& a, const Povm& b) {
  std::vector<Hermitian> effects;
  std::vector<std::string> labels;
  effects.reserve(a.size() * b.size());
  labels.reserve(a.size() * b.size());
  for (int x = 0; x < a.size(); ++x) {
    for (int y = 0; y < b.size(); ++y) {
      effects.push_back(tensor_prod(a.effect(x), b.effect(y)));
      labels.push_back(a.labels()[x] + "," + b.labels()[y]);
    }
  }
  return Povm(a.dim() * b.dim(), std::move(effects), std::move(labels));
}

Povm tensor_povm_n(const std::vector<Povm>& factors) {
  if (factors.empty()) throw std::invalid_argument("tensor_povm_n: no factors");
  Povm out = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor_povm(out, factors[i]);
  return out;
}

Povm gen_sic_qubit() {
  const double s = 1.0 / std::sqrt(3.0);
  const double dirs[4][3] = {
      {s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  Hermitian sx = pauli_x(), sy = pauli_y(), sz = pauli_z();
  std::vector<Hermitian> effects;
  for (const auto& n : dirs) {
    CMatrix m = 0.25 * (CMatrix::Identity(2, 2) + n[0] * sx.mat() + n[1] * sy.mat() +
                        n[2] * sz.mat());
    effects.emplace_back(std::move(m));
  }
  return Povm(2, std::move(effects));
}

namespace {

double spectral_norm(const Hermitian& t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(t.mat(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double min_eigenvalue(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

Povm gen_from_span(const std::vector<Hermitian>& basis) {
  if (basis.empty()) throw std::invalid_argument("gen_from_span: empty basis");
  const int d = basis.front().dim();
  for (const auto& b : basis) {
    if (b.dim() != d) throw std::invalid_argument("gen_from_span: mixed dimensions");
  }

  // The identity must lie in the span: project hs_vec(I) onto the row space.
  RMatrix rows(basis.size(), d * d);
  for (std::size_t i = 0; i < basis.size(); ++i) rows.row(i) = hs_vec(basis[i]).transpose();
  Eigen::BDCSVD<RMatrix> full_svd(rows, Eigen::ComputeThinV);
  double sig0 = full_svd.singularValues().size() ? full_svd.singularValues()(0) : 0.0;
  int span_rank = 0;
  for (int i = 0; i < full_svd.singularValues().size(); ++i) {
    if (full_svd.singularValues()(i) > 1e-10 * sig0) ++span_rank;
  }
  RVector vid = hs_vec(Hermitian::identity(d));
  RVector in_span = RVector::Zero(d * d);
  for (int i = 0; i < span_rank; ++i) {
    in_span += full_svd.matrixV().col(i).dot(vid) * full_svd.matrixV().col(i);
  }
  if ((vid - in_span).norm() > 1e-8 * vid.norm()) {
    throw std::invalid_argument("gen_from_span: identity not in the basis span");
  }

  // Orthonormal basis of the traceless part of the span.
  RMatrix traceless(basis.size(), d * d);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Hermitian t = basis[i] + (-basis[i].trace() / d) * Hermitian::identity(d);
    traceless.row(i) = hs_vec(t).transpose();
  }
  Eigen::BDCSVD<RMatrix> svd(traceless, Eigen::ComputeThinV);
  double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  std::vector<Hermitian> g;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (top > 0.0 && svd.singularValues()(i) > 1e-10 * top) {
      g.push_back(hs_unvec(svd.matrixV().col(i), d));
    }
  }
  const int m = static_cast<int>(g.size());
  if (m == 0) {
    return Povm(d, {Hermitian::identity(d)});
  }

  double max_spec = 0.0;
  CMatrix g_sum = CMatrix::Zero(d, d);
  for (const auto& gi : g) {
    max_spec = std::max(max_spec, spectral_norm(gi));
    g_sum += gi.mat();
  }
  double eps = 0.9 / max_spec;

  std::vector<Hermitian> effects;
  for (int attempt = 0; attempt < 60; ++attempt) {
    effects.clear();
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& gi : g) {
      CMatrix a = (CMatrix::Identity(d, d) + eps * gi.mat()) / (m + 1);
      sum += a;
      effects.emplace_back(std::move(a));
    }
    CMatrix closing = CMatrix::Identity(d, d) - sum;
    if (min_eigenvalue(closing) >= -1e-12) {
      effects.emplace_back(std::move(closing));
      return Povm(d, std::move(effects));
    }
    eps *= 0.5;
  }
  throw std::runtime_error("gen_from_span: could not make the closing effect PSD");
}

Povm gen_random(int dim, int n_outcomes, std::uint64_t seed) {
  if (dim < 1 || n_outcomes < 1) {
    throw std::invalid_argument("gen_random: dim and n_outcomes must be >= 1");
  }
  for (std::uint64_t attempt = 0; attempt < 10; ++attempt) {
    Rng rng = Rng(seed).child(attempt);
    std::vector<CMatrix> raw;
    CMatrix total = CMatrix::Zero(dim, dim);
    for (int x = 0; x < n_outcomes; ++x) {
      CMatrix gx(dim, dim);
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k) gx(j, k) = rng.cgaussian();
      CMatrix mx = gx.adjoint() * gx;
      total += mx;
      raw.push_back(std::move(mx));
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(total);
    RVector ev = solver.eigenvalues();
    if (ev.minCoeff() <= 1e-10 * ev.maxCoeff()) continue;
    CMatrix w_inv_half = solver.eigenvectors() *
                         ev.cwiseSqrt().cwiseInverse().asDiagonal() *
                         solver.eigenvectors().adjoint();
    std::vector<Hermitian> effects;
    effects.reserve(raw.size());
    for (const auto& mx : raw) {
      effects.emplace_back(w_inv_half * mx * w_inv_half, 1e-6);
    }
    return Povm(dim, std::move(effects));
  }
  throw std::runtime_error("gen_random: total matrix stayed singular after 10 attempts");
}

}  // namespace povmic
