#include "povmic/subspace.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

#include "povmic/rank_search.hpp"

namespace povmic {

namespace {

RMatrix stack_rows(const std::vector<Hermitian>& mats, int d) {
  RMatrix rows(mats.size(), d * d);
  for (std::size_t i = 0; i < mats.size(); ++i) rows.row(i) = hs_vec(mats[i]).transpose();
  return rows;
}

}  // namespace

OperatorSubspace::OperatorSubspace(int ambient_dim, std::vector<Hermitian> basis)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
  if (ambient_dim_ < 1) throw std::invalid_argument("OperatorSubspace: ambient dim >= 1");
  for (const auto& b : basis_) {
    if (b.dim() != ambient_dim_) {
      throw std::invalid_argument("OperatorSubspace: basis dimension mismatch");
    }
  }
  if (basis_.size() > static_cast<std::size_t>(ambient_dim_) * ambient_dim_) {
    throw std::invalid_argument("OperatorSubspace: more basis elements than dimensions");
  }
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    for (std::size_t j = i; j < basis_.size(); ++j) {
      double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(hs_inner(basis_[i], basis_[j]) - want) > 1e-9) {
        throw std::invalid_argument("OperatorSubspace: basis is not orthonormal");
      }
    }
  }
}

OperatorSubspace OperatorSubspace::full(int ambient_dim) {
  std::vector<Hermitian> basis;
  const int d = ambient_dim;
  basis.reserve(d * d);
  for (int j = 0; j < d; ++j) {
    CMatrix m = CMatrix::Zero(d, d);
    m(j, j) = 1.0;
    basis.emplace_back(std::move(m));
  }
  const double r = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      CMatrix x = CMatrix::Zero(d, d);
      x(j, k) = r;
      x(k, j) = r;
      basis.emplace_back(std::move(x));
      CMatrix y = CMatrix::Zero(d, d);
      y(j, k) = Complex(0, -r);
      y(k, j) = Complex(0, r);
      basis.emplace_back(std::move(y));
    }
  }
  return OperatorSubspace(d, std::move(basis));
}

OperatorSubspace OperatorSubspace::span_of(const std::vector<Hermitian>& gens, double tol) {
  if (gens.empty()) throw std::invalid_argument("span_of: no generators");
  const int d = gens.front().dim();
  RMatrix rows = stack_rows(gens, d);
  Eigen::BDCSVD<RMatrix> svd(rows, Eigen::ComputeThinV);
  double top = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  std::vector<Hermitian> basis;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (top > 0.0 && svd.singularValues()(i) > tol * top) {
      basis.push_back(hs_unvec(svd.matrixV().col(i), d));
    }
  }
  return OperatorSubspace(d, std::move(basis));
}

RVector OperatorSubspace::coords(const Hermitian& t) const {
  if (t.dim() != ambient_dim_) throw std::invalid_argument("coords: dimension mismatch");
  RVector c(dim());
  for (int i = 0; i < dim(); ++i) c(i) = hs_inner(basis_[i], t);
  return c;
}

Hermitian OperatorSubspace::project(const Hermitian& t) const {
  RVector c = coords(t);
  CMatrix acc = CMatrix::Zero(ambient_dim_, ambient_dim_);
  for (int i = 0; i < dim(); ++i) acc += c(i) * basis_[i].mat();
  return Hermitian(std::move(acc));
}

double OperatorSubspace::residual(const Hermitian& t) const {
  return (t.mat() - project(t).mat()).norm();
}

Hermitian OperatorSubspace::element(const RVector& c) const {
  if (c.size() != dim()) throw std::invalid_argument("element: coefficient count mismatch");
  CMatrix acc = CMatrix::Zero(ambient_dim_, ambient_dim_);
  for (int i = 0; i < dim(); ++i) acc += c(i) * basis_[i].mat();
  return Hermitian(std::move(acc));
}

OperatorSubspace operator_span(const Povm& povm, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("operator_span: tol must be positive");
  const int d = povm.dim();
  RMatrix rows = povm.vectorized_effects();
  Eigen::BDCSVD<RMatrix> svd(rows, Eigen::ComputeThinV);
  double top = svd.singularValues()(0);
  std::vector<Hermitian> basis;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (top > 0.0 && svd.singularValues()(i) > tol * top) {
      basis.push_back(hs_unvec(svd.matrixV().col(i), d));
    }
  }
  OperatorSubspace span(d, std::move(basis));
  if (span.residual(Hermitian::identity(d)) > 1e-8 * std::sqrt(static_cast<double>(d))) {
    throw std::runtime_error("operator_span: identity missing from the effect span");
  }
  return span;
}

OperatorSubspace complement(const OperatorSubspace& sub) {
  const int d = sub.ambient_dim();
  if (sub.dim() == 0) return OperatorSubspace::full(d);
  RMatrix rows = stack_rows(sub.basis(), d);
  Eigen::BDCSVD<RMatrix> svd(rows, Eigen::ComputeFullV);
  std::vector<Hermitian> basis;
  for (int i = sub.dim(); i < d * d; ++i) {
    basis.push_back(hs_unvec(svd.matrixV().col(i), d));
  }
  return OperatorSubspace(d, std::move(basis));
}

IcReport is_ic(const Povm& povm, double tol) {
  OperatorSubspace span = operator_span(povm, tol);
  return {span.dim() == povm.dim() * povm.dim(), span.dim()};
}

bool difference_in_kernel(const Povm& povm, const Hermitian& rho1, const Hermitian& rho2,
                          double tol) {
  if (rho1.dim() != povm.dim() || rho2.dim() != povm.dim()) {
    throw std::invalid_argument("difference_in_kernel: dimension mismatch");
  }
  OperatorSubspace span = operator_span(povm);
  return span.coords(rho1 - rho2).norm() <= tol;
}

namespace {

OperatorSubspace tensor_family(const OperatorSubspace& left, const OperatorSubspace& right) {
  std::vector<Hermitian> basis;
  basis.reserve(left.dim() * right.dim());
  for (const auto& l : left.basis()) {
    for (const auto& r : right.basis()) basis.push_back(tensor_prod(l, r));
  }
  return OperatorSubspace(left.ambient_dim() * right.ambient_dim(), std::move(basis));
}

}  // namespace

BipartiteComplementReport bipartite_complement(const Povm& a, const Povm& b, double tol) {
  OperatorSubspace span_a = operator_span(a, tol);
  OperatorSubspace span_b = operator_span(b, tol);
  OperatorSubspace compl_a = complement(span_a);
  OperatorSubspace compl_b = complement(span_b);

  OperatorSubspace fam1 = tensor_family(compl_a, span_b);
  OperatorSubspace fam2 = tensor_family(span_a, compl_b);
  OperatorSubspace fam3 = tensor_family(compl_a, compl_b);

  double cross = 0.0;
  const OperatorSubspace* fams[3] = {&fam1, &fam2, &fam3};
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      for (const auto& e : fams[i]->basis()) {
        for (const auto& f : fams[j]->basis()) {
          cross = std::max(cross, std::abs(hs_inner(e, f)));
        }
      }
    }
  }

  Povm product = tensor_povm(a, b);
  OperatorSubspace span_ab = operator_span(product, tol);
  double contain = 0.0;
  for (const auto* fam : fams) {
    for (const auto& e : fam->basis()) {
      // Membership in the complement of R(A(x)B) is the vanishing of the
      // projection onto the span itself.
      contain = std::max(contain, span_ab.coords(e).norm());
    }
  }

  int d2 = product.dim() * product.dim();
  int expected = d2 - span_a.dim() * span_b.dim();
  int dim_sum = fam1.dim() + fam2.dim() + fam3.dim();

  return BipartiteComplementReport{std::move(fam1),
                                   std::move(fam2),
                                   std::move(fam3),
                                   cross,
                                   contain,
                                   dim_sum,
                                   expected,
                                   dim_sum == expected && span_ab.dim() == d2 - expected};
}

QutritClassification qutrit_classify(const Povm& a, double tol) {
  if (a.dim() != 3) throw std::invalid_argument("qutrit_classify: dimension must be 3");
  OperatorSubspace span = operator_span(a, tol);
  OperatorSubspace comp = complement(span);

  QutritClassification out;
  out.span_dim = span.dim();
  out.complement_dim = comp.dim();

  if (comp.dim() == 0) {
    out.kind = QutritCase::ic;
    return out;
  }
  if (comp.dim() == 1) {
    const Hermitian& s = comp.basis()[0];
    EigenSystem es = eigh(s);
    out.generator = s;
    out.generator_eigenvalues = es.values;
    if (rank_eps(s, tol) == 3) {
      out.kind = QutritCase::single_full_rank;
      return out;
    }
    out.kind = QutritCase::other;
    out.min_rank_found = rank_eps(s, tol);
    out.min_rank_witness = s;
    return out;
  }

  out.kind = QutritCase::other;
  RankCertificate cert = min_rank_search(comp, 64, 0);
  out.min_rank_found = cert.min_found;
  if (cert.witness_coeffs.size() > 0) {
    out.min_rank_witness = comp.element(cert.witness_coeffs);
  }
  return out;
}

}  // namespace povmic
