#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "kslat/projector.hpp"

namespace kslat {

enum class TruthValue { zero, one, undefined };

inline std::string_view to_string(TruthValue v) {
  switch (v) {
    case TruthValue::zero: return "0";
    case TruthValue::one: return "1";
    case TruthValue::undefined: return "undefined";
  }
  return "undefined";
}

namespace detail {

inline void require_state(const StateVector& psi, Eigen::Index n) {
  if (psi.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "state of dimension " + std::to_string(psi.size()) +
                                                  " against operators on C^" + std::to_string(n));
  }
  if (!psi.allFinite()) throw Error(ErrorKind::ZeroState, "state has non-finite entries");
  if (psi.norm() == 0.0) throw Error(ErrorKind::ZeroState, "the zero vector is not an admissible state");
}

}  // namespace detail

/// 1 when psi lies in ran(P), 0 when it lies in ker(P), undefined otherwise.
inline TruthValue valuate(const StateVector& psi, const Projector& p, const TolerancePolicy& tol = {}) {
  detail::require_state(psi, p.dim());
  const double norm = psi.norm();
  const StateVector image = p.matrix() * psi;
  if ((image - psi).norm() <= tol.eps_entry * norm) return TruthValue::one;
  if (image.norm() <= tol.eps_entry * norm) return TruthValue::zero;
  return TruthValue::undefined;
}

struct ContextValuation {
  std::vector<TruthValue> values;
  std::optional<int> sum;  // absent when some member is undefined

  bool bivalent() const { return sum.has_value(); }
};

inline ContextValuation context_valuation(const StateVector& psi, const MaximalContext& ctx,
                                          const TolerancePolicy& tol = {}) {
  ContextValuation out;
  int sum = 0;
  bool defined = true;
  for (const auto& p : ctx.members()) {
    const auto v = valuate(psi, p, tol);
    out.values.push_back(v);
    if (v == TruthValue::undefined) defined = false;
    if (v == TruthValue::one) ++sum;
  }
  if (defined) out.sum = sum;
  return out;
}

struct BivalenceReport {
  std::vector<TruthValue> by_identity;          // indexed by registry identity
  std::vector<ContextValuation> by_context;     // collection order
  std::vector<std::size_t> undefined_identities;

  bool bivalent() const { return undefined_identities.empty(); }
};

inline BivalenceReport bivalence_report(const StateVector& psi, const ContextCollection& collection,
                                        const TolerancePolicy& tol = {}) {
  detail::require_state(psi, collection.ambient_dim());
  BivalenceReport out;
  for (std::size_t id = 0; id < collection.identity_count(); ++id) {
    const auto v = valuate(psi, collection.projector(id), tol);
    out.by_identity.push_back(v);
    if (v == TruthValue::undefined) out.undefined_identities.push_back(id);
  }
  for (const auto& ctx : collection.contexts()) out.by_context.push_back(context_valuation(psi, ctx, tol));
  return out;
}

enum class SearchStatus { sat, unsat };

struct AssignmentSearchResult {
  SearchStatus status = SearchStatus::unsat;
  std::optional<std::vector<int>> assignment;  // 0/1 per registry identity
  std::size_t nodes_explored = 0;
};

/// True when `assignment` gives every context exactly one member valued 1.
inline bool is_noncontextual_assignment(const ContextCollection& collection, const std::vector<int>& assignment) {
  if (assignment.size() != collection.identity_count()) return false;
  for (std::size_t c = 0; c < collection.contexts().size(); ++c) {
    int ones = 0;
    for (auto id : collection.identities_of_context(c)) {
      if (assignment[id] != 0 && assignment[id] != 1) return false;
      ones += assignment[id];
    }
    if (ones != 1) return false;
  }
  return true;
}

namespace detail {

class AssignmentSearch {
 public:
  explicit AssignmentSearch(const ContextCollection& c)
      : collection_(c), value_(c.identity_count(), unassigned), contexts_of_(c.identity_count()) {
    for (std::size_t k = 0; k < c.contexts().size(); ++k) {
      for (auto id : c.identities_of_context(k)) contexts_of_[id].push_back(k);
    }
  }

  AssignmentSearchResult run() {
    AssignmentSearchResult out;
    if (descend(0)) {
      out.status = SearchStatus::sat;
      std::vector<int> a(value_.size());
      for (std::size_t i = 0; i < value_.size(); ++i) a[i] = value_[i] == 1 ? 1 : 0;
      out.assignment = std::move(a);
    }
    out.nodes_explored = nodes_;
    return out;
  }

 private:
  static constexpr int unassigned = -1;

  // Visits contexts in collection order; the member carrying the 1 is tried in
  // ascending index, so the first solution is the lexicographically smallest.
  bool descend(std::size_t ctx) {
    if (ctx == collection_.contexts().size()) return true;
    const auto& ids = collection_.identities_of_context(ctx);
    for (std::size_t pick = 0; pick < ids.size(); ++pick) {
      if (value_[ids[pick]] == 0) continue;
      ++nodes_;
      std::vector<std::size_t> trail;
      if (assign(ctx, pick, trail) && descend(ctx + 1)) return true;
      for (auto id : trail) value_[id] = unassigned;
    }
    return false;
  }

  // Puts the 1 on member `pick` and 0 on the rest, then forward-checks every
  // context touched by a newly assigned identity.
  bool assign(std::size_t ctx, std::size_t pick, std::vector<std::size_t>& trail) {
    const auto& ids = collection_.identities_of_context(ctx);
    for (std::size_t m = 0; m < ids.size(); ++m) {
      const int want = m == pick ? 1 : 0;
      const auto id = ids[m];
      if (value_[id] == unassigned) {
        value_[id] = want;
        trail.push_back(id);
      } else if (value_[id] != want) {
        return false;
      }
    }
    for (auto id : trail) {
      for (auto k : contexts_of_[id]) {
        if (!context_consistent(k)) return false;
      }
    }
    return true;
  }

  bool context_consistent(std::size_t k) const {
    int ones = 0;
    bool open = false;
    for (auto id : collection_.identities_of_context(k)) {
      if (value_[id] == 1) ++ones;
      if (value_[id] == unassigned) open = true;
    }
    return ones <= 1 && (ones == 1 || open);
  }

  const ContextCollection& collection_;
  std::vector<int> value_;
  std::vector<std::vector<std::size_t>> contexts_of_;
  std::size_t nodes_ = 0;
};

}  // namespace detail

/// Decides whether a single 0/1 value per projector identity can give every
/// context exactly one 1. Single-threaded and deterministic; on UNSAT the node
/// count is the exhaustion certificate.
inline AssignmentSearchResult ks_assignment_search(const ContextCollection& collection) {
  return detail::AssignmentSearch(collection).run();
}

}  // namespace kslat
