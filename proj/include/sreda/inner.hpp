#pragma once
// Inner loops: the multi-step concave maximizer that advances y and the
// recursive estimator between outer steps, and the epoch-based variance-
// reduced initializers for the strongly-convex y-subproblem.

#include <cstdint>
#include <vector>

#include "sreda/core.hpp"
#include "sreda/estimator.hpp"
#include "sreda/problems.hpp"
#include "sreda/rng.hpp"

namespace sreda::inner {

struct InnerResult {
  Vec y_next;          // the ascent iterate at the sampled stopping index
  Vec v_next, u_next;  // estimator state at that index, adopted by the next outer step
  std::uint64_t s_k = 0;
  // per-t ||u_t|| for t = 0..m+1, filled when keep_trace is set
  std::vector<double> u_norms;
};

// Performs the initial estimator correction from (x_prev, y_cur) to
// (x_new, y_cur), then m+1 ascent steps y_t = y_{t-1} + lambda*u_{t-1}
// with x frozen at x_new, each followed by a paired S2-batch estimator
// update. s_k is drawn uniformly from {0..m} on sk_rng; the returned
// state is the one at index s_k+1. Charges exactly 2*S2*(m+2) physical
// evals. Warns (once per call) if lambda exceeds 2/(mu+ell), the
// contraction precondition of the inner ascent.
InnerResult concave_maximizer(const problems::ProblemOracle& o, const Vec& x_prev,
                              const Vec& x_new, const Vec& y_cur, const Vec& v_in,
                              const Vec& u_in, double lambda, std::uint64_t m, std::uint64_t s2,
                              RngStream& batch_rng, RngStream& sk_rng, EvalCounter& evals,
                              bool keep_trace = false);

// --- strongly convex initializers ------------------------------------------

// Minimization target h(w) = E[H(w; xi)] (or a finite sum), mu-strongly
// convex with ell-Lipschitz gradients.
class ConvexObjective {
 public:
  virtual ~ConvexObjective() = default;
  virtual std::size_t dim() const = 0;
  // 0 means pure expectation form (fresh samples), otherwise finite sum
  virtual std::size_t components() const { return 0; }
  virtual void component_grad_into(const Vec& w, problems::SampleId id, Vec& out) const = 0;
  virtual void exact_grad_into(const Vec& w, Vec& out) const = 0;

  problems::SampleId draw_sample(RngStream& rng) const {
    std::size_t n = components();
    return n ? rng.next_below(n) : rng.next_u64();
  }
};

// h(w) = -f(x0, w): the y-slice of a minimax problem as a convex objective
class YSlice final : public ConvexObjective {
 public:
  YSlice(const problems::ProblemOracle& o, Vec x0) : o_(o), x0_(std::move(x0)) {}
  std::size_t dim() const override { return o_.d2(); }
  std::size_t components() const override {
    return o_.caps().finite_sum ? o_.component_count() : 0;
  }
  void component_grad_into(const Vec& w, problems::SampleId id, Vec& out) const override;
  void exact_grad_into(const Vec& w, Vec& out) const override;

 private:
  const problems::ProblemOracle& o_;
  Vec x0_;
};

// Standalone strongly convex quadratic h(w) = 1/2 w'Qw - b'w for the
// initializer contract tests, with the same two noise modes as the
// minimax problems.
class QuadraticObjective final : public ConvexObjective {
 public:
  Vec Q;  // d x d row-major, symmetric positive definite
  Vec b;
  problems::NoiseSpec noise;
  std::uint64_t noise_seed = 0;
  std::vector<Vec> dQ;  // finite-sum perturbations, zero mean
  std::vector<Vec> db;

  std::size_t dim() const override { return b.size(); }
  std::size_t components() const override {
    return noise.kind == problems::NoiseKind::finite_sum ? dQ.size() : 0;
  }
  void component_grad_into(const Vec& w, problems::SampleId id, Vec& out) const override;
  void exact_grad_into(const Vec& w, Vec& out) const override;

  Vec argmin() const;
};

// Diagonal spectrum linearly spaced over [ell/kappa, ell] with ell = 1.
QuadraticObjective make_quadratic_objective(std::size_t d, double kappa, std::uint64_t seed,
                                            problems::NoiseSpec noise = {});

struct InitConfig {
  double gamma = 0.0;         // step size
  std::uint64_t m_prime = 1;  // inner loop size
  std::uint64_t b = 1;        // epoch batch size (expectation form only)
  std::uint64_t T = 1;        // epoch count
};

// Epoch parameters reaching E||grad h||^2 <= zeta from an initial squared
// gradient norm g0_sq. Ceilings are outermost; integer fields floor to 1;
// the epoch batch is capped at 1e6 to keep desk-scale runs feasible.
InitConfig isarah_config(double ell, double mu, double zeta, double g0_sq);
InitConfig sarah_config(double ell, double mu, double zeta, double g0_sq);

// T epochs; each starts with a batch-b gradient and then runs m'-1
// single-sample recursive correction steps; the epoch output is w at an
// index drawn uniformly from {0..m'}.
Vec isarah(const ConvexObjective& h, const Vec& w0, const InitConfig& cfg, RngStream& rng,
           EvalCounter& evals);

// Finite-sum variant: epochs start from the exact full gradient.
Vec sarah(const ConvexObjective& h, const Vec& w0, const InitConfig& cfg, RngStream& rng,
          EvalCounter& evals);

}  // namespace sreda::inner
