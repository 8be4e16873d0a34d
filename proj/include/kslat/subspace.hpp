#pragma once

#include <span>
#include <string>
#include <vector>

#include "kslat/linalg.hpp"

namespace kslat {

/// A linear subspace of C^n held as an orthonormal basis plus its orthogonal
/// projector. The zero subspace has an empty basis and a zero projector.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(Eigen::Index ambient_dim) {
    return Subspace(ambient_dim, ComplexMatrix(ambient_dim, 0));
  }

  static Subspace full(Eigen::Index ambient_dim) {
    return Subspace(ambient_dim, ComplexMatrix::Identity(ambient_dim, ambient_dim));
  }

  /// `basis` columns must already be orthonormal.
  static Subspace from_orthonormal_columns(const ComplexMatrix& basis) {
    return Subspace(basis.rows(), basis);
  }

  static Subspace from_span(Eigen::Index ambient_dim, std::span<const StateVector> vectors,
                            const TolerancePolicy& tol = {}) {
    for (const auto& v : vectors) {
      if (v.size() != ambient_dim) {
        throw Error(ErrorKind::DimensionMismatch, "span: vector of dimension " + std::to_string(v.size()) +
                                                      " in C^" + std::to_string(ambient_dim));
      }
    }
    const auto q = orthonormalize(vectors, tol);
    ComplexMatrix basis(ambient_dim, static_cast<Eigen::Index>(q.size()));
    for (std::size_t j = 0; j < q.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = q[j];
    return Subspace(ambient_dim, basis);
  }

  /// Dimension is taken from the first vector; an empty list is rejected
  /// because the ambient space would be unknown.
  static Subspace from_span(std::span<const StateVector> vectors, const TolerancePolicy& tol = {}) {
    if (vectors.empty()) throw Error(ErrorKind::EmptyInput, "span of no vectors has no ambient dimension");
    return from_span(vectors.front().size(), vectors, tol);
  }

  Eigen::Index ambient_dim() const { return ambient_dim_; }
  Eigen::Index dim() const { return basis_.cols(); }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_dim_; }
  const ComplexMatrix& basis() const { return basis_; }
  const ComplexMatrix& projector() const { return projector_; }
  std::vector<StateVector> basis_vectors() const { return detail::columns(basis_); }

 private:
  Subspace(Eigen::Index n, ComplexMatrix basis)
      : ambient_dim_(n), basis_(std::move(basis)), projector_(basis_ * basis_.adjoint()) {}

  Eigen::Index ambient_dim_ = 0;
  ComplexMatrix basis_;
  ComplexMatrix projector_;
};

namespace detail {

inline void require_same_ambient(const Subspace& u, const Subspace& v, const char* op) {
  if (u.ambient_dim() != v.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(op) + ": subspaces of C^" + std::to_string(u.ambient_dim()) +
                                                  " and C^" + std::to_string(v.ambient_dim()));
  }
}

}  // namespace detail

inline double projector_distance(const Subspace& u, const Subspace& v) {
  detail::require_same_ambient(u, v, "projector_distance");
  return (u.projector() - v.projector()).norm();
}

inline bool equals(const Subspace& u, const Subspace& v, const TolerancePolicy& tol = {}) {
  return projector_distance(u, v) <= tol.eps_subspace;
}

/// v ⊆ u
inline bool contains(const Subspace& u, const Subspace& v, const TolerancePolicy& tol = {}) {
  detail::require_same_ambient(u, v, "contains");
  const auto n = u.ambient_dim();
  return ((identity(n) - u.projector()) * v.projector()).norm() <= tol.eps_subspace;
}

inline bool contains(const Subspace& u, const StateVector& x, const TolerancePolicy& tol = {}) {
  if (x.size() != u.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "contains: vector dimension");
  return (x - u.projector() * x).norm() <= tol.eps_subspace * x.norm();
}

/// U ∩ V as the common null space of the stacked complements (I - Π_U; I - Π_V).
inline Subspace meet(const Subspace& u, const Subspace& v, const TolerancePolicy& tol = {}) {
  detail::require_same_ambient(u, v, "meet");
  const auto n = u.ambient_dim();
  if (u.is_zero() || v.is_zero()) return Subspace::zero(n);
  ComplexMatrix stacked(2 * n, n);
  stacked.topRows(n) = identity(n) - u.projector();
  stacked.bottomRows(n) = identity(n) - v.projector();
  return Subspace::from_orthonormal_columns(detail::null_basis(stacked, tol));
}

inline Subspace join(const Subspace& u, const Subspace& v, const TolerancePolicy& tol = {}) {
  detail::require_same_ambient(u, v, "join");
  auto vectors = u.basis_vectors();
  const auto more = v.basis_vectors();
  vectors.insert(vectors.end(), more.begin(), more.end());
  return Subspace::from_span(u.ambient_dim(), vectors, tol);
}

inline Subspace ortho_complement(const Subspace& u, const TolerancePolicy& tol = {}) {
  if (u.is_zero()) return Subspace::full(u.ambient_dim());
  return Subspace::from_orthonormal_columns(detail::null_basis(u.basis().adjoint(), tol));
}

/// U ⊕ V = C^n with U ⊥ V.
inline bool is_direct_sum_decomposition(const Subspace& u, const Subspace& v, const TolerancePolicy& tol = {}) {
  detail::require_same_ambient(u, v, "is_direct_sum_decomposition");
  const auto n = u.ambient_dim();
  return meet(u, v, tol).is_zero() && equals(join(u, v, tol), Subspace::full(n), tol) &&
         max_abs(u.projector() * v.projector()) <= tol.eps_entry;
}

}  // namespace kslat
