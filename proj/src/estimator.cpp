#include "sreda/estimator.hpp"

#include <vector>

namespace sreda::estimator {

EstimatorState init_restart(const problems::ProblemOracle& o, const Iterate& point,
                            std::uint64_t s1, RngStream& rng, EvalCounter& evals) {
  require(s1 >= 1, "init_restart: batch size must be >= 1");
  EstimatorState st;
  st.anchor = point;
  if (o.caps().finite_sum && o.component_count() <= s1) {
    // the batch would cover the whole sum; take the exact full gradient
    GradPair g = problems::full_grad(o, point, evals);
    st.v = std::move(g.gx);
    st.u = std::move(g.gy);
    return st;
  }
  GradPair g = problems::stoch_grad(o, point, s1, rng, evals);
  st.v = std::move(g.gx);
  st.u = std::move(g.gy);
  return st;
}

void recursive_update(EstimatorState& st, const problems::ProblemOracle& o, const Iterate& next,
                      std::uint64_t s2, RngStream& rng, EvalCounter& evals) {
  require(s2 >= 1, "recursive_update: batch size must be >= 1");
  require(st.v.size() == o.d1() && st.u.size() == o.d2(), "recursive_update: state mismatch");
  std::vector<problems::SampleId> ids(s2);
  for (auto& id : ids) id = o.draw_sample(rng);
  GradPair acc;
  acc.gx = std::move(st.v);
  acc.gy = std::move(st.u);
  o.paired_diff_accum(next, st.anchor, ids.data(), s2, acc);
  st.v = std::move(acc.gx);
  st.u = std::move(acc.gy);
  st.anchor = next;
  evals.add_paired(s2);
}

}  // namespace sreda::estimator
