#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kslat/linalg.hpp"
#include "kslat/subspace.hpp"

namespace kslat {

/// A self-adjoint idempotent matrix as supplied by the user. The matrix is
/// stored verbatim; validation never symmetrizes or re-projects it.
class Projector {
 public:
  static Projector validate(const ComplexMatrix& m, const TolerancePolicy& tol = {}, std::string label = {}) {
    if (m.rows() != m.cols()) {
      throw Error(ErrorKind::NotSquare, "projector '" + label + "' is " + std::to_string(m.rows()) + "x" +
                                            std::to_string(m.cols()));
    }
    if (!all_finite(m)) throw Error(ErrorKind::ValidationError, "projector '" + label + "' has non-finite entries");
    const double herm = max_abs(m - m.adjoint());
    if (herm > tol.eps_entry) {
      throw Error(ErrorKind::NotHermitian, "projector '" + label + "' is not self-adjoint: max|M - M^H| = " +
                                               std::to_string(herm),
                  herm);
    }
    const double idem = max_abs(m * m - m);
    if (idem > tol.eps_entry) {
      throw Error(ErrorKind::NotIdempotent,
                  "projector '" + label + "' is not idempotent: max|M^2 - M| = " + std::to_string(idem), idem);
    }
    return Projector(m, numerical_rank(m, tol), std::move(label), herm, idem);
  }

  const ComplexMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  std::size_t rank() const { return rank_; }
  const std::string& label() const { return label_; }
  double hermitian_residual() const { return hermitian_residual_; }
  double idempotent_residual() const { return idempotent_residual_; }

 private:
  Projector(ComplexMatrix m, std::size_t rank, std::string label, double herm, double idem)
      : matrix_(std::move(m)), rank_(rank), label_(std::move(label)), hermitian_residual_(herm),
        idempotent_residual_(idem) {}

  ComplexMatrix matrix_;
  std::size_t rank_ = 0;
  std::string label_;
  double hermitian_residual_ = 0.0;
  double idempotent_residual_ = 0.0;
};

inline Subspace ran(const Projector& p, const TolerancePolicy& tol = {}) {
  return Subspace::from_orthonormal_columns(detail::range_basis(p.matrix(), tol));
}

inline Subspace ker(const Projector& p, const TolerancePolicy& tol = {}) {
  return Subspace::from_orthonormal_columns(detail::null_basis(p.matrix(), tol));
}

/// Frobenius norm of the part of P·U that leaves U, i.e. ||(I - Π_U) P Π_U||_F.
inline double invariance_residual(const Subspace& u, const ComplexMatrix& op) {
  if (u.ambient_dim() != op.rows() || op.rows() != op.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "invariance test: subspace of C^" + std::to_string(u.ambient_dim()) +
                                                  " against " + std::to_string(op.rows()) + "x" +
                                                  std::to_string(op.cols()) + " operator");
  }
  const auto n = u.ambient_dim();
  return ((identity(n) - u.projector()) * op * u.projector()).norm();
}

inline bool is_invariant(const Subspace& u, const ComplexMatrix& op, const TolerancePolicy& tol = {}) {
  return invariance_residual(u, op) <= tol.eps_subspace;
}

inline bool is_invariant(const Subspace& u, const Projector& p, const TolerancePolicy& tol = {}) {
  return is_invariant(u, p.matrix(), tol);
}

/// Mutually annihilating projectors that resolve the identity.
class MaximalContext {
 public:
  static MaximalContext validate(std::vector<Projector> members, const TolerancePolicy& tol = {},
                                 std::string id = {}) {
    if (members.empty()) throw Error(ErrorKind::EmptyInput, "context '" + id + "' has no members");
    const auto n = members.front().dim();
    for (const auto& p : members) {
      if (p.dim() != n) {
        throw Error(ErrorKind::DimensionMismatch, "context '" + id + "' mixes dimensions " + std::to_string(n) +
                                                      " and " + std::to_string(p.dim()));
      }
    }
    double pairwise = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = 0; j < members.size(); ++j) {
        if (i == j) continue;
        const double r = max_abs(members[i].matrix() * members[j].matrix());
        if (r > tol.eps_entry) {
          throw Error(ErrorKind::PairwiseProductNonzero,
                      "context '" + id + "': members " + std::to_string(i) + " (" + members[i].label() + ") and " +
                          std::to_string(j) + " (" + members[j].label() + ") do not annihilate, max|PiPj| = " +
                          std::to_string(r),
                      r);
        }
        pairwise = std::max(pairwise, r);
      }
    }
    ComplexMatrix sum = zero_matrix(n);
    for (const auto& p : members) sum += p.matrix();
    const double resolution = max_abs(sum - identity(n));
    if (resolution > tol.eps_entry) {
      throw Error(ErrorKind::SumNotIdentity,
                  "context '" + id + "': members do not sum to the identity, max|sum - I| = " +
                      std::to_string(resolution),
                  resolution);
    }
    return MaximalContext(std::move(id), std::move(members), pairwise, resolution);
  }

  const std::string& id() const { return id_; }
  const std::vector<Projector>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  Eigen::Index dim() const { return members_.front().dim(); }
  double pairwise_residual() const { return pairwise_residual_; }
  double resolution_residual() const { return resolution_residual_; }

 private:
  MaximalContext(std::string id, std::vector<Projector> members, double pairwise, double resolution)
      : id_(std::move(id)), members_(std::move(members)), pairwise_residual_(pairwise),
        resolution_residual_(resolution) {}

  std::string id_;
  std::vector<Projector> members_;
  double pairwise_residual_ = 0.0;
  double resolution_residual_ = 0.0;
};

inline MaximalContext context_validate(std::vector<Projector> members, const TolerancePolicy& tol = {},
                                       std::string id = {}) {
  return MaximalContext::validate(std::move(members), tol, std::move(id));
}

/// Rank-one context {v v^H} from an orthonormal basis of C^n. Labels default
/// to "<id>.<k>" with k counted from 1.
inline MaximalContext context_from_basis(std::span<const StateVector> vectors, const TolerancePolicy& tol = {},
                                         std::string id = {}, std::vector<std::string> labels = {}) {
  if (vectors.empty()) throw Error(ErrorKind::EmptyInput, "context '" + id + "' built from no vectors");
  const auto n = vectors.front().size();
  ComplexMatrix b(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != n) {
      throw Error(ErrorKind::DimensionMismatch, "context '" + id + "': basis vectors of mixed dimension");
    }
    b.col(static_cast<Eigen::Index>(k)) = vectors[k];
  }
  const ComplexMatrix gram = b.adjoint() * b;
  const double off = max_abs(gram - ComplexMatrix::Identity(b.cols(), b.cols()));
  if (off > tol.eps_entry) {
    throw Error(ErrorKind::NotOrthonormal,
                "context '" + id + "': basis is not orthonormal, max|B^H B - I| = " + std::to_string(off), off);
  }
  if (b.cols() != n) {
    throw Error(ErrorKind::NotComplete, "context '" + id + "': " + std::to_string(b.cols()) +
                                            " vectors cannot span C^" + std::to_string(n));
  }
  std::vector<Projector> members;
  members.reserve(vectors.size());
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    std::string label = k < labels.size() ? labels[k] : id + "." + std::to_string(k + 1);
    members.push_back(Projector::validate(vectors[k] * vectors[k].adjoint(), tol, std::move(label)));
  }
  return MaximalContext::validate(std::move(members), tol, std::move(id));
}

/// Position of a projector inside a collection.
struct MemberRef {
  std::size_t context = 0;
  std::size_t member = 0;
  friend bool operator==(const MemberRef&, const MemberRef&) = default;
};

/// One shared identity: projectors within eps_subspace (Frobenius) of each
/// other across contexts are the same proposition.
struct RegistryEntry {
  MemberRef representative;
  std::vector<MemberRef> occurrences;
};

class ContextCollection {
 public:
  static ContextCollection build(std::vector<MaximalContext> contexts, const TolerancePolicy& tol = {}) {
    if (contexts.empty()) throw Error(ErrorKind::EmptyInput, "collection has no contexts");
    const auto n = contexts.front().dim();
    for (const auto& c : contexts) {
      if (c.dim() != n) {
        throw Error(ErrorKind::DimensionMismatch, "context '" + c.id() + "' lives in C^" + std::to_string(c.dim()) +
                                                      ", collection in C^" + std::to_string(n));
      }
    }
    ContextCollection out;
    out.ambient_dim_ = n;
    out.tol_ = tol;
    out.identity_of_.resize(contexts.size());
    for (std::size_t c = 0; c < contexts.size(); ++c) {
      for (std::size_t m = 0; m < contexts[c].size(); ++m) {
        const auto& pm = contexts[c].members()[m].matrix();
        std::size_t found = out.registry_.size();
        for (std::size_t r = 0; r < out.registry_.size(); ++r) {
          const auto ref = out.registry_[r].representative;
          if ((contexts[ref.context].members()[ref.member].matrix() - pm).norm() <= tol.eps_subspace) {
            found = r;
            break;
          }
        }
        if (found == out.registry_.size()) out.registry_.push_back({MemberRef{c, m}, {}});
        out.registry_[found].occurrences.push_back(MemberRef{c, m});
        out.identity_of_[c].push_back(found);
      }
    }
    out.contexts_ = std::move(contexts);
    return out;
  }

  Eigen::Index ambient_dim() const { return ambient_dim_; }
  const std::vector<MaximalContext>& contexts() const { return contexts_; }
  const std::vector<RegistryEntry>& registry() const { return registry_; }
  std::size_t identity_count() const { return registry_.size(); }
  const TolerancePolicy& tolerance() const { return tol_; }

  /// Registry identity of member `m` of context `c`.
  std::size_t identity_of(std::size_t c, std::size_t m) const { return identity_of_.at(c).at(m); }
  const std::vector<std::size_t>& identities_of_context(std::size_t c) const { return identity_of_.at(c); }

  const Projector& projector(std::size_t identity) const {
    const auto ref = registry_.at(identity).representative;
    return contexts_[ref.context].members()[ref.member];
  }

  const MaximalContext* find(const std::string& id) const {
    for (const auto& c : contexts_) {
      if (c.id() == id) return &c;
    }
    return nullptr;
  }

 private:
  Eigen::Index ambient_dim_ = 0;
  TolerancePolicy tol_;
  std::vector<MaximalContext> contexts_;
  std::vector<RegistryEntry> registry_;
  std::vector<std::vector<std::size_t>> identity_of_;
};

/// Eigenprojectors of the Pauli matrices sigma_z, sigma_x, sigma_y on C^2.
namespace pauli {

inline ComplexMatrix matrix(char axis, int index) {
  using namespace std::complex_literals;
  ComplexMatrix m(2, 2);
  const double s = index == 1 ? 1.0 : -1.0;
  switch (axis) {
    case 'z':
      if (index == 1) m << 1.0, 0.0, 0.0, 0.0;
      else m << 0.0, 0.0, 0.0, 1.0;
      return m;
    case 'x':
      m << 0.5, 0.5 * s, 0.5 * s, 0.5;
      return m;
    case 'y':
      m << 0.5, -0.5i * s, 0.5i * s, 0.5;
      return m;
    default:
      throw Error(ErrorKind::ValidationError, std::string("unknown Pauli axis '") + axis + "'");
  }
}

inline std::string label(char axis, int index) { return "P" + std::to_string(index) + "^" + axis; }

inline Projector projector(char axis, int index, const TolerancePolicy& tol = {}) {
  return Projector::validate(matrix(axis, index), tol, label(axis, index));
}

inline MaximalContext context(char axis, const TolerancePolicy& tol = {}) {
  return MaximalContext::validate({projector(axis, 1, tol), projector(axis, 2, tol)}, tol, std::string(1, axis));
}

}  // namespace pauli

/// The three Pauli contexts in the order z, x, y.
inline ContextCollection pauli_contexts(const TolerancePolicy& tol = {}) {
  return ContextCollection::build({pauli::context('z', tol), pauli::context('x', tol), pauli::context('y', tol)}, tol);
}

}  // namespace kslat
