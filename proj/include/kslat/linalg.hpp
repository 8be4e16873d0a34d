#pragma once

#include <algorithm>
#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kslat/error.hpp"
#include "kslat/tolerance.hpp"

namespace kslat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }
inline ComplexMatrix zero_matrix(Eigen::Index n) { return ComplexMatrix::Zero(n, n); }

inline bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline ComplexMatrix adjoint(const ComplexMatrix& m) { return m.adjoint(); }

inline ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "cannot multiply " + std::to_string(a.rows()) + "x" +
                                                  std::to_string(a.cols()) + " by " + std::to_string(b.rows()) +
                                                  "x" + std::to_string(b.cols()));
  }
  return a * b;
}

namespace detail {

inline Eigen::JacobiSVD<ComplexMatrix> full_svd(const ComplexMatrix& m) {
  return Eigen::JacobiSVD<ComplexMatrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

// Singular values at or below this are treated as zero. Scaled by max(||M||, 1)
// so that an all-zero or tiny matrix never passes vacuously.
inline double rank_cutoff(const Eigen::VectorXd& singular_values, const TolerancePolicy& tol) {
  const double largest = singular_values.size() == 0 ? 0.0 : singular_values(0);
  return tol.eps_rank * std::max(largest, 1.0);
}

inline Eigen::Index rank_from_singular_values(const Eigen::VectorXd& s, double cutoff) {
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;
  return r;
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Appends the
/// normalized residual of each candidate to `basis` unless its norm is at or
/// below `drop_below`. Works for any column-vector type (vectorized matrices
/// included).
template <typename Vec>
void extend_orthonormal(std::vector<Vec>& basis, std::span<const Vec> candidates, double drop_below) {
  for (const auto& c : candidates) {
    Vec r = c;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) r -= q * q.dot(r);
    }
    const double norm = r.norm();
    if (norm > drop_below) basis.push_back(r / norm);
  }
}

/// Orthonormal basis (as columns) of the null space of an arbitrary matrix.
inline ComplexMatrix null_basis(const ComplexMatrix& m, const TolerancePolicy& tol) {
  if (m.rows() == 0) return ComplexMatrix::Identity(m.cols(), m.cols());
  const auto svd = full_svd(m);
  const auto& s = svd.singularValues();
  const Eigen::Index r = rank_from_singular_values(s, rank_cutoff(s, tol));
  return svd.matrixV().rightCols(m.cols() - r);
}

/// Orthonormal basis (as columns) of the column space of an arbitrary matrix.
inline ComplexMatrix range_basis(const ComplexMatrix& m, const TolerancePolicy& tol) {
  if (m.cols() == 0) return ComplexMatrix(m.rows(), 0);
  const auto svd = full_svd(m);
  const auto& s = svd.singularValues();
  const Eigen::Index r = rank_from_singular_values(s, rank_cutoff(s, tol));
  return svd.matrixU().leftCols(r);
}

inline std::vector<StateVector> columns(const ComplexMatrix& m) {
  std::vector<StateVector> out;
  out.reserve(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) out.emplace_back(m.col(j));
  return out;
}

}  // namespace detail

/// Orthonormal basis of span(vectors), built in input order. A vector whose
/// residual after projecting out the earlier ones is at most
/// eps_rank * (largest input norm) is dropped.
inline std::vector<StateVector> orthonormalize(std::span<const StateVector> vectors,
                                               const TolerancePolicy& tol = {}) {
  std::vector<StateVector> basis;
  if (vectors.empty()) return basis;
  const auto dim = vectors.front().size();
  double largest = 0.0;
  for (const auto& v : vectors) {
    if (v.size() != dim) throw Error(ErrorKind::DimensionMismatch, "orthonormalize: vectors of mixed dimension");
    largest = std::max(largest, v.norm());
  }
  if (largest == 0.0) return basis;
  detail::extend_orthonormal(basis, vectors, tol.eps_rank * largest);
  return basis;
}

inline std::size_t numerical_rank(const ComplexMatrix& m, const TolerancePolicy& tol = {}) {
  if (m.size() == 0) return 0;
  const Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  return static_cast<std::size_t>(detail::rank_from_singular_values(s, detail::rank_cutoff(s, tol)));
}

/// Orthonormal basis of ker(M) for square M.
inline std::vector<StateVector> nullspace(const ComplexMatrix& m, const TolerancePolicy& tol = {}) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::NotSquare,
                "nullspace needs a square matrix, got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  return detail::columns(detail::null_basis(m, tol));
}

}  // namespace kslat
