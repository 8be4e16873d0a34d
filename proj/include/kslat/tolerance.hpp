#pragma once

#include <cmath>
#include <string>

#include "kslat/error.hpp"

namespace kslat {

/// Thresholds shared by every module.
///
///  - eps_rank: relative singular-value cutoff for rank, null spaces and
///    orthonormalization.
///  - eps_entry: max-entry residual for operator identities (self-adjointness,
///    idempotence, context axioms, valuation).
///  - eps_subspace: Frobenius distance between orthogonal projectors that
///    still counts as the same subspace.
struct TolerancePolicy {
  double eps_rank = 1e-10;
  double eps_entry = 1e-9;
  double eps_subspace = 1e-8;

  bool valid() const {
    auto ok = [](double x) { return std::isfinite(x) && x > 0.0; };
    return ok(eps_rank) && ok(eps_entry) && ok(eps_subspace) && eps_rank <= eps_entry &&
           eps_entry <= eps_subspace;
  }

  const TolerancePolicy& check() const {
    if (!valid()) {
      throw Error(ErrorKind::InvalidTolerance,
                  "tolerances must be positive with eps_rank <= eps_entry <= eps_subspace (got " +
                      std::to_string(eps_rank) + ", " + std::to_string(eps_entry) + ", " +
                      std::to_string(eps_subspace) + ")");
    }
    return *this;
  }
};

}  // namespace kslat
