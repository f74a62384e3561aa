#pragma once
// Recursive variance-reduced gradient estimator (v, u). A restart replaces
// the estimate with a large-batch (or full) gradient; each step applies a
// paired-sample correction so the estimate tracks the gradient along the
// iterate path with accumulated error controlled by the step sizes.

#include "sreda/core.hpp"
#include "sreda/problems.hpp"
#include "sreda/rng.hpp"

namespace sreda::estimator {

struct EstimatorState {
  Vec v;           // estimate of grad_x f at anchor
  Vec u;           // estimate of grad_y f at anchor
  Iterate anchor;  // point the estimate currently refers to
};

// Restart the estimate at `point` with a batch of size s1 (finite-sum
// problems use the exact full gradient instead; the eval counter is
// charged min(s1, n) calls).
EstimatorState init_restart(const problems::ProblemOracle& o, const Iterate& point,
                            std::uint64_t s1, RngStream& rng, EvalCounter& evals);

// Move the estimate from its anchor to `next` using s2 common-random-
// number sample pairs:
//   v += (1/s2) sum_i [Gx(next; xi_i) - Gx(anchor; xi_i)]   (same for u)
// Charges 2*s2 physical evals (s2 under the paired counting convention).
void recursive_update(EstimatorState& st, const problems::ProblemOracle& o, const Iterate& next,
                      std::uint64_t s2, RngStream& rng, EvalCounter& evals);

}  // namespace sreda::estimator
