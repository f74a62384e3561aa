#pragma once
// Stationarity measurement and complexity-curve extraction from traces.

#include <optional>
#include <string>
#include <vector>

#include "sreda/core.hpp"
#include "sreda/problems.hpp"
#include "sreda/solvers.hpp"

namespace sreda::metrics {

struct StationarityReport {
  Vec x;
  double phi_grad_norm = 0.0;
  std::string method;     // "exact" or "inner-solve"
  double residual = 0.0;  // ||grad_y f(x, y_hat)|| of the approximate maximizer
  bool converged = true;
};

// Exact route when the problem exposes grad Phi; otherwise deterministic
// full-gradient ascent on y with step 1/ell down to residual <= tol*mu/10,
// reporting ||grad_x f(x, y_hat)||. The error of the fallback is at most
// kappa * residual / mu.
StationarityReport stationarity(const problems::ProblemOracle& o, const Vec& x, double tol,
                                std::uint64_t max_inner = 1000000);

// First cumulative physical eval count at which the exact stationarity
// column falls to eps_target or below; nullopt when it never does.
// Throws InputError when the trace carries no diagnostics.
std::optional<std::uint64_t> evals_to_tolerance(const solvers::RunTrace& trace, double eps_target);

struct ComplexityCurve {
  // (epsilon_target, evals_to_reach); unreached points have evals 0 and
  // reached=false
  struct Point {
    double epsilon = 0.0;
    double evals = 0.0;
    bool reached = true;
  };
  std::vector<Point> points;
};

// Least-squares slope of log(evals) against log(1/epsilon) over reached
// points. Throws InputError with fewer than 3 usable points or when all
// epsilons coincide (rank-deficient fit).
double fit_slope(const ComplexityCurve& curve);

}  // namespace sreda::metrics
