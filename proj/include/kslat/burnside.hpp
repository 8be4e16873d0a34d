#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "kslat/linalg.hpp"
#include "kslat/projector.hpp"
#include "kslat/subspace.hpp"

namespace kslat {

/// Orthonormal basis (trace inner product <A,B> = tr(A^H B)) of the unital
/// algebra generated by a set of operators.
struct AlgebraClosure {
  Eigen::Index ambient_dim = 0;
  std::vector<ComplexMatrix> basis;
  std::size_t dimension = 0;
  std::size_t generations = 0;  // product rounds run
  bool saturated = false;       // dimension == n^2
};

struct IrreducibilityReport {
  bool irreducible = false;
  std::size_t algebra_dimension = 0;
  Eigen::Index ambient_dim = 0;
  std::optional<Subspace> witness;
  bool witness_searched = false;
};

inline constexpr Eigen::Index default_witness_cap = 6;

namespace detail {

inline Eigen::Index common_dimension(std::span<const ComplexMatrix> generators, const char* op) {
  if (generators.empty()) throw Error(ErrorKind::EmptyInput, std::string(op) + ": no generators");
  const auto n = generators.front().rows();
  for (const auto& g : generators) {
    if (g.rows() != g.cols()) throw Error(ErrorKind::NotSquare, std::string(op) + ": generator is not square");
    if (g.rows() != n) throw Error(ErrorKind::DimensionMismatch, std::string(op) + ": generators of mixed dimension");
  }
  return n;
}

inline Eigen::VectorXcd vec(const ComplexMatrix& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

inline ComplexMatrix unvec(const Eigen::VectorXcd& v, Eigen::Index n) {
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

}  // namespace detail

/// Span closure under multiplication, starting from {1} ∪ generators. Each
/// round multiplies every pair of basis elements in which at least one factor
/// is new since the previous round; it stops once a round adds nothing.
inline AlgebraClosure algebra_closure(std::span<const ComplexMatrix> generators, const TolerancePolicy& tol = {}) {
  const auto n = detail::common_dimension(generators, "algebra_closure");
  const auto full = static_cast<std::size_t>(n * n);

  std::vector<Eigen::VectorXcd> seed;
  seed.reserve(generators.size() + 1);
  seed.push_back(detail::vec(identity(n)));
  double largest = seed.front().norm();
  for (const auto& g : generators) {
    seed.push_back(detail::vec(g));
    largest = std::max(largest, seed.back().norm());
  }

  std::vector<Eigen::VectorXcd> basis;
  detail::extend_orthonormal<Eigen::VectorXcd>(basis, seed, tol.eps_rank * std::max(largest, 1.0));

  // Products of unit-Frobenius matrices have Frobenius norm at most 1.
  const double cutoff = tol.eps_rank;
  std::size_t fresh_from = 0;
  std::size_t generations = 0;
  while (basis.size() < full) {
    const std::size_t before = basis.size();
    std::vector<ComplexMatrix> mats;
    mats.reserve(before);
    for (const auto& b : basis) mats.push_back(detail::unvec(b, n));

    std::vector<Eigen::VectorXcd> products;
    for (std::size_t i = 0; i < before; ++i) {
      for (std::size_t j = 0; j < before; ++j) {
        if (i < fresh_from && j < fresh_from) continue;
        products.push_back(detail::vec(mats[i] * mats[j]));
      }
    }
    detail::extend_orthonormal<Eigen::VectorXcd>(basis, products, cutoff);
    ++generations;
    if (basis.size() == before) break;
    fresh_from = before;
  }

  AlgebraClosure out;
  out.ambient_dim = n;
  out.dimension = basis.size();
  out.generations = generations;
  out.saturated = out.dimension == full;
  out.basis.reserve(basis.size());
  for (const auto& b : basis) out.basis.push_back(detail::unvec(b, n));
  return out;
}

namespace detail {

inline bool is_common_witness(const Subspace& u, std::span<const ComplexMatrix> generators,
                              const TolerancePolicy& tol) {
  if (u.is_zero() || u.is_full()) return false;
  return std::all_of(generators.begin(), generators.end(),
                     [&](const ComplexMatrix& g) { return is_invariant(u, g, tol); });
}

}  // namespace detail

/// Best-effort search for a nontrivial subspace invariant under every
/// generator. Candidates, in order:
///   1. the range, then the kernel, of each generator;
///   2. sums of eigenspaces of A = 1*G_1 + 2*G_2 + ..., eigenvalues ordered
///      by (real, imag) ascending and subsets by bitmask;
///   3. single eigenvectors of A, then spans of eigenvector pairs.
/// A returned subspace is always verified invariant. An empty result does
/// not prove irreducibility; algebra_closure decides that.
inline std::optional<Subspace> invariant_subspace_witness(std::span<const ComplexMatrix> generators,
                                                          const TolerancePolicy& tol = {},
                                                          Eigen::Index max_dim = default_witness_cap) {
  const auto n = detail::common_dimension(generators, "invariant_subspace_witness");
  if (n > max_dim) {
    throw Error(ErrorKind::SearchCapExceeded, "witness search is capped at dimension " + std::to_string(max_dim) +
                                                  ", got " + std::to_string(n));
  }
  if (n < 2) return std::nullopt;

  for (const auto& g : generators) {
    for (auto u : {Subspace::from_orthonormal_columns(detail::range_basis(g, tol)),
                   Subspace::from_orthonormal_columns(detail::null_basis(g, tol))}) {
      if (detail::is_common_witness(u, generators, tol)) return u;
    }
  }

  ComplexMatrix a = zero_matrix(n);
  for (std::size_t k = 0; k < generators.size(); ++k) a += static_cast<double>(k + 1) * generators[k];
  const Eigen::ComplexEigenSolver<ComplexMatrix> es(a, true);
  if (es.info() != Eigen::Success) return std::nullopt;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  const auto& lambda = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    if (lambda(i).real() != lambda(j).real()) return lambda(i).real() < lambda(j).real();
    return lambda(i).imag() < lambda(j).imag();
  });

  // Cluster numerically equal eigenvalues; each cluster spans an (approximate,
  // possibly generalized) eigenspace.
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  const double merge = std::sqrt(tol.eps_entry) * scale;
  std::vector<std::vector<StateVector>> clusters;
  std::vector<Complex> centers;
  std::vector<StateVector> eigvecs;
  for (auto i : order) {
    StateVector v = es.eigenvectors().col(i);
    v.normalize();
    eigvecs.push_back(v);
    std::size_t c = 0;
    while (c < centers.size() && std::abs(centers[c] - lambda(i)) > merge) ++c;
    if (c == centers.size()) {
      centers.push_back(lambda(i));
      clusters.emplace_back();
    }
    clusters[c].push_back(v);
  }

  const std::size_t k = clusters.size();
  if (k >= 2) {
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << k); ++mask) {
      std::vector<StateVector> span;
      for (std::size_t c = 0; c < k; ++c) {
        if (mask >> c & 1U) span.insert(span.end(), clusters[c].begin(), clusters[c].end());
      }
      auto u = Subspace::from_span(n, span, tol);
      if (detail::is_common_witness(u, generators, tol)) return u;
    }
  }

  // Degenerate eigenvalues leave the eigenspace basis arbitrary; try lines and
  // planes spanned by the computed eigenvectors.
  for (const auto& v : eigvecs) {
    const StateVector one[] = {v};
    auto u = Subspace::from_span(n, one, tol);
    if (detail::is_common_witness(u, generators, tol)) return u;
  }
  for (std::size_t i = 0; i < eigvecs.size(); ++i) {
    for (std::size_t j = i + 1; j < eigvecs.size(); ++j) {
      const StateVector two[] = {eigvecs[i], eigvecs[j]};
      auto u = Subspace::from_span(n, two, tol);
      if (detail::is_common_witness(u, generators, tol)) return u;
    }
  }
  return std::nullopt;
}

/// Irreducible iff the generated algebra is all of L(C^n). For reducible
/// sets with n <= witness_cap a common invariant subspace is attached when
/// the search finds one.
inline IrreducibilityReport is_irreducible(std::span<const ComplexMatrix> generators, const TolerancePolicy& tol = {},
                                           Eigen::Index witness_cap = default_witness_cap) {
  const auto n = detail::common_dimension(generators, "is_irreducible");
  if (n < 2) throw Error(ErrorKind::AmbientDimOne, "irreducibility needs dim(H) > 1");
  const auto closure = algebra_closure(generators, tol);
  IrreducibilityReport out;
  out.ambient_dim = n;
  out.algebra_dimension = closure.dimension;
  out.irreducible = closure.saturated;
  if (!out.irreducible && n <= witness_cap) {
    out.witness_searched = true;
    out.witness = invariant_subspace_witness(generators, tol, witness_cap);
  }
  return out;
}

/// Matrices of every member of every context, in collection order.
inline std::vector<ComplexMatrix> generators_of(const ContextCollection& collection) {
  std::vector<ComplexMatrix> out;
  for (const auto& c : collection.contexts()) {
    for (const auto& p : c.members()) out.push_back(p.matrix());
  }
  return out;
}

}  // namespace kslat
