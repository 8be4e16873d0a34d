#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kslat/projector.hpp"
#include "kslat/subspace.hpp"

namespace kslat {

/// Finite family of subspaces, deduplicated under subspace equality. The
/// first inserted representative (and its label) wins.
class LatticeFamily {
 public:
  LatticeFamily() = default;
  explicit LatticeFamily(Eigen::Index ambient_dim, const TolerancePolicy& tol = {})
      : ambient_dim_(ambient_dim), tol_(tol) {}

  /// Returns false when an equal element is already present.
  bool insert(Subspace u, std::string label) {
    if (u.ambient_dim() != ambient_dim_) {
      throw Error(ErrorKind::DimensionMismatch, "lattice in C^" + std::to_string(ambient_dim_) +
                                                    " given a subspace of C^" + std::to_string(u.ambient_dim()));
    }
    if (index_of(u)) return false;
    elements_.push_back(std::move(u));
    labels_.push_back(std::move(label));
    return true;
  }

  std::optional<std::size_t> index_of(const Subspace& u) const {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      if (equals(elements_[i], u, tol_)) return i;
    }
    return std::nullopt;
  }

  bool contains(const Subspace& u) const { return index_of(u).has_value(); }

  Eigen::Index ambient_dim() const { return ambient_dim_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Subspace>& elements() const { return elements_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const TolerancePolicy& tolerance() const { return tol_; }

 private:
  Eigen::Index ambient_dim_ = 0;
  TolerancePolicy tol_;
  std::vector<Subspace> elements_;
  std::vector<std::string> labels_;
};

/// Same elements regardless of order.
inline bool same_elements(const LatticeFamily& a, const LatticeFamily& b) {
  if (a.ambient_dim() != b.ambient_dim() || a.size() != b.size()) return false;
  for (const auto& u : a.elements()) {
    if (!b.contains(u)) return false;
  }
  return true;
}

/// {ran(0), ran(P), ker(P), ran(1)}: the four-element family of a single
/// projector. Collapses to two elements when P is 0 or 1.
inline LatticeFamily lat_single(const Projector& p, const TolerancePolicy& tol = {}) {
  const auto n = p.dim();
  LatticeFamily f(n, tol);
  f.insert(Subspace::zero(n), "{0}");
  f.insert(ran(p, tol), "ran(" + p.label() + ")");
  f.insert(ker(p, tol), "ker(" + p.label() + ")");
  f.insert(Subspace::full(n), "H");
  return f;
}

inline constexpr std::size_t default_subset_cap = 20;

/// { ran(sum_{i in S} P_i) : S ⊆ members }, enumerated by subset bitmask in
/// increasing order so element order is deterministic.
inline LatticeFamily lat_context(const MaximalContext& ctx, const TolerancePolicy& tol = {},
                                 std::size_t max_members = default_subset_cap) {
  const auto m = ctx.size();
  if (m > max_members || m >= 63) {
    throw Error(ErrorKind::SubsetLimitExceeded, "context '" + ctx.id() + "' has " + std::to_string(m) +
                                                    " members, subset enumeration is capped at " +
                                                    std::to_string(max_members));
  }
  const auto n = ctx.dim();
  LatticeFamily f(n, tol);
  const std::uint64_t count = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    if (mask == 0) {
      f.insert(Subspace::zero(n), "{0}");
      continue;
    }
    ComplexMatrix sum = zero_matrix(n);
    std::string label;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(mask >> i & 1U)) continue;
      sum += ctx.members()[i].matrix();
      label += (label.empty() ? "" : " + ") + ctx.members()[i].label();
    }
    auto u = Subspace::from_orthonormal_columns(detail::range_basis(sum, tol));
    f.insert(std::move(u), mask == count - 1 && m > 1 ? "H" : "ran(" + label + ")");
  }
  // the full mask is the identity; make sure H is present even if every member is zero
  f.insert(Subspace::full(n), "H");
  return f;
}

/// Elements present in every family. Order and labels follow the first.
inline LatticeFamily lat_intersect(std::span<const LatticeFamily> families) {
  if (families.empty()) throw Error(ErrorKind::EmptyInput, "intersection of no lattice families");
  const auto& first = families.front();
  for (const auto& f : families) {
    if (f.ambient_dim() != first.ambient_dim()) {
      throw Error(ErrorKind::DimensionMismatch, "lattice families of C^" + std::to_string(first.ambient_dim()) +
                                                    " and C^" + std::to_string(f.ambient_dim()));
    }
  }
  LatticeFamily out(first.ambient_dim(), first.tolerance());
  for (std::size_t i = 0; i < first.size(); ++i) {
    const auto& u = first.elements()[i];
    bool everywhere = true;
    for (std::size_t k = 1; k < families.size() && everywhere; ++k) everywhere = families[k].contains(u);
    if (everywhere) out.insert(u, first.labels()[i]);
  }
  return out;
}

/// Exactly { {0}, H }.
inline bool is_trivial(const LatticeFamily& f) {
  const auto n = f.ambient_dim();
  return f.size() == 2 && f.contains(Subspace::zero(n)) && f.contains(Subspace::full(n));
}

/// Every pairwise meet and join of the family is again in the family.
inline bool is_closed_under_meet_join(const LatticeFamily& f) {
  const auto& tol = f.tolerance();
  for (const auto& u : f.elements()) {
    for (const auto& v : f.elements()) {
      if (!f.contains(meet(u, v, tol)) || !f.contains(join(u, v, tol))) return false;
    }
  }
  return true;
}

}  // namespace kslat
