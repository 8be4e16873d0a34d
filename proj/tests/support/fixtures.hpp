#pragma once

// Test-only helpers: seeded random generators and reference collections.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "kslat/kslat.hpp"

namespace kslat::testing {

using Rng = std::mt19937_64;

inline Complex random_complex(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng)};
}

inline ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = random_complex(rng);
  return m;
}

inline StateVector random_state(Eigen::Index n, Rng& rng) { return random_matrix(n, 1, rng).col(0); }

/// Haar-ish unitary from the QR factorization of a Gaussian matrix.
inline ComplexMatrix random_unitary(Eigen::Index n, Rng& rng) {
  const Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(n, n, rng));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

/// Orthogonal projector onto k random directions in C^n.
inline ComplexMatrix random_projector_matrix(Eigen::Index n, Eigen::Index k, Rng& rng) {
  const ComplexMatrix u = random_unitary(n, rng).leftCols(k);
  return u * u.adjoint();
}

inline std::vector<StateVector> columns_of(const ComplexMatrix& u) {
  std::vector<StateVector> out;
  for (Eigen::Index j = 0; j < u.cols(); ++j) out.emplace_back(u.col(j));
  return out;
}

inline MaximalContext random_rank1_context(Eigen::Index n, Rng& rng, const std::string& id = "r") {
  return context_from_basis(columns_of(random_unitary(n, rng)), {}, id);
}

/// Context whose members group the columns of a random unitary into blocks of
/// the given sizes.
inline MaximalContext random_block_context(const std::vector<Eigen::Index>& sizes, Rng& rng,
                                           const std::string& id = "b") {
  Eigen::Index n = 0;
  for (auto s : sizes) n += s;
  const ComplexMatrix u = random_unitary(n, rng);
  std::vector<Projector> members;
  Eigen::Index at = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const ComplexMatrix cols = u.middleCols(at, sizes[k]);
    members.push_back(Projector::validate(cols * cols.adjoint(), {}, id + "." + std::to_string(k + 1)));
    at += sizes[k];
  }
  return MaximalContext::validate(std::move(members), {}, id);
}

inline Subspace random_subspace(Eigen::Index n, Eigen::Index k, Rng& rng) {
  return Subspace::from_orthonormal_columns(random_unitary(n, rng).leftCols(k));
}

inline ComplexMatrix perturb(const ComplexMatrix& m, double magnitude, Rng& rng) {
  std::uniform_real_distribution<double> u(-magnitude, magnitude);
  ComplexMatrix out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) += Complex(u(rng), u(rng));
  return out;
}

inline Subspace line(std::initializer_list<Complex> v) {
  StateVector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto z : v) x(i++) = z;
  const StateVector one[] = {x};
  return Subspace::from_span(x.size(), one);
}

/// The 18-ray, 9-context set in C^4. Rays have entries in {0, 1, -1} and are
/// written as strings such as "1-11-1" (a '-' negates the following digit).
inline const std::vector<std::vector<std::string>>& cabello18_contexts() {
  static const std::vector<std::vector<std::string>> contexts = {
      {"0001", "0010", "1100", "1-100"},   {"0001", "0100", "1010", "10-10"},
      {"1-11-1", "1-1-11", "1100", "0011"}, {"1-11-1", "1111", "10-10", "010-1"},
      {"0010", "0100", "1001", "100-1"},   {"1-1-11", "1111", "100-1", "01-10"},
      {"11-11", "111-1", "1-100", "0011"}, {"11-11", "-1111", "1010", "010-1"},
      {"111-1", "-1111", "1001", "01-10"},
  };
  return contexts;
}

inline StateVector ray_from_string(const std::string& s) {
  std::vector<double> entries;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '-') {
      entries.push_back(-(s[i + 1] - '0'));
      ++i;
    } else {
      entries.push_back(s[i] - '0');
    }
  }
  StateVector v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
  return v.normalized();
}

inline ContextCollection cabello18() {
  std::vector<MaximalContext> contexts;
  const auto& groups = cabello18_contexts();
  for (std::size_t k = 0; k < groups.size(); ++k) {
    std::vector<StateVector> basis;
    for (const auto& r : groups[k]) basis.push_back(ray_from_string(r));
    contexts.push_back(context_from_basis(basis, {}, "c" + std::to_string(k + 1), groups[k]));
  }
  return ContextCollection::build(std::move(contexts));
}

/// Collection in C^n where every context contains the projector onto `shared`;
/// the other members are random rank-one projectors onto an orthonormal basis
/// of the complement. `position[k]` is where the shared member sits in context k.
inline ContextCollection shared_ray_collection(const StateVector& shared, const std::vector<std::size_t>& position,
                                               Rng& rng) {
  const auto n = shared.size();
  const StateVector s = shared.normalized();
  const Subspace rest = ortho_complement(Subspace::from_span(n, std::vector<StateVector>{s}));
  std::vector<MaximalContext> contexts;
  for (std::size_t k = 0; k < position.size(); ++k) {
    const ComplexMatrix rotated = rest.basis() * random_unitary(n - 1, rng);
    std::vector<StateVector> basis = columns_of(rotated);
    basis.insert(basis.begin() + static_cast<std::ptrdiff_t>(position[k]), s);
    contexts.push_back(context_from_basis(basis, {}, "k" + std::to_string(k + 1)));
  }
  return ContextCollection::build(std::move(contexts));
}

struct GeneratorSet {
  std::string name;
  std::vector<ComplexMatrix> generators;
  // Closure dimension known by construction, when there is one.
  std::optional<std::size_t> expected_algebra_dim;
};

inline std::vector<ComplexMatrix> matrices_of(const ContextCollection& c) { return generators_of(c); }

inline std::vector<ComplexMatrix> matrices_of(const MaximalContext& ctx) {
  std::vector<ComplexMatrix> out;
  for (const auto& p : ctx.members()) out.push_back(p.matrix());
  return out;
}

/// U [[A, C], [0, B]] U^H with random blocks; C = 0 makes it block diagonal.
inline ComplexMatrix block_operator(const ComplexMatrix& u, Eigen::Index a, Eigen::Index b, bool triangular, Rng& rng) {
  ComplexMatrix m = ComplexMatrix::Zero(a + b, a + b);
  m.topLeftCorner(a, a) = random_matrix(a, a, rng);
  m.bottomRightCorner(b, b) = random_matrix(b, b, rng);
  if (triangular) m.topRightCorner(a, b) = random_matrix(a, b, rng);
  return u * m * u.adjoint();
}

/// Generator sets in dimensions 2 to 4 covering irreducible and reducible
/// cases, fixed by the seed.
inline std::vector<GeneratorSet> generator_corpus(std::uint64_t seed = 2024) {
  Rng rng(seed);
  std::vector<GeneratorSet> out;
  out.push_back({"pauli six", matrices_of(pauli_contexts()), 4});
  for (char axis : {'z', 'x', 'y'}) out.push_back({std::string("pauli ") + axis, matrices_of(pauli::context(axis)), 2});
  out.push_back({"P1z P1x", {pauli::matrix('z', 1), pauli::matrix('x', 1)}, 4});
  out.push_back({"P1x P1y", {pauli::matrix('x', 1), pauli::matrix('y', 1)}, 4});
  out.push_back({"P2z P2y", {pauli::matrix('z', 2), pauli::matrix('y', 2)}, 4});
  out.push_back({"P1x", {pauli::matrix('x', 1)}, 2});
  out.push_back({"1 0 (C^2)", {identity(2), zero_matrix(2)}, 1});
  out.push_back({"1 0 (C^3)", {identity(3), zero_matrix(3)}, 1});
  out.push_back({"cabello18", matrices_of(cabello18()), 16});
  for (int k = 0; k < 9; ++k) {
    const Eigen::Index n = 2 + k % 3;
    out.push_back({"rank1 context n=" + std::to_string(n), matrices_of(random_rank1_context(n, rng)),
                   static_cast<std::size_t>(n)});
  }
  for (int k = 0; k < 9; ++k) {
    const Eigen::Index n = 2 + k % 3;
    auto g = matrices_of(random_rank1_context(n, rng));
    const auto h = matrices_of(random_rank1_context(n, rng));
    g.insert(g.end(), h.begin(), h.end());
    out.push_back({"two contexts n=" + std::to_string(n), g, static_cast<std::size_t>(n * n)});
  }
  for (int k = 0; k < 6; ++k) {
    const Eigen::Index n = 3 + k % 2;
    StateVector v = random_state(n, rng);
    std::vector<std::size_t> pos = {0, static_cast<std::size_t>(k % n), static_cast<std::size_t>(n - 1)};
    out.push_back({"shared ray n=" + std::to_string(n), matrices_of(shared_ray_collection(v, pos, rng)), std::nullopt});
  }
  const std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks = {{1, 1}, {1, 2}, {2, 1}, {2, 2}, {1, 3}, {3, 1}};
  for (const auto& [a, b] : blocks) {
    for (bool triangular : {false, true}) {
      const ComplexMatrix u = random_unitary(a + b, rng);
      std::vector<ComplexMatrix> g;
      for (int i = 0; i < 3; ++i) g.push_back(block_operator(u, a, b, triangular, rng));
      const auto dim = static_cast<std::size_t>(a * a + b * b + (triangular ? a * b : 0));
      out.push_back({std::string(triangular ? "triangular " : "block ") + std::to_string(a) + "+" + std::to_string(b),
                     g, dim});
    }
  }
  for (int k = 0; k < 6; ++k) {
    const Eigen::Index n = 2 + k % 3;
    out.push_back({"generic pair n=" + std::to_string(n), {random_matrix(n, n, rng), random_matrix(n, n, rng)},
                   static_cast<std::size_t>(n * n)});
  }
  return out;
}

}  // namespace kslat::testing
