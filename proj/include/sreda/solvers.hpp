#pragma once
// Outer algorithms: the variance-reduced descent-ascent solver (stochastic
// and finite-sum), plain simultaneous SGDA and SGDmax baselines, and
// derivation of all run parameters from (epsilon, ell, mu, sigma, delta_f).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sreda/core.hpp"
#include "sreda/problems.hpp"

#include "json.hpp"

namespace sreda::solvers {

struct SredaParams {
  double epsilon = 0.0;
  double zeta = 0.0;     // initializer target, kappa^-2 eps^2
  double lambda = 0.0;   // inner ascent step, 2/(7 ell)
  double eta_num = 0.0;  // eps/(5 kappa ell)
  double eta_cap = 0.0;  // 1/(10 kappa ell)
  double bound = 0.0;    // certified stationarity bound, (1073/108) eps
  std::uint64_t q = 1;   // restart period
  std::uint64_t S1 = 1;  // restart batch (finite-sum full-gradient mode: = n)
  std::uint64_t S2 = 1;  // inner batch
  std::uint64_t K = 0;   // outer iterations
  std::uint64_t m = 0;   // inner iterations
  bool full_restart = false;  // restarts take the exact full gradient

  nlohmann::json to_json() const;
};

struct BaselineParams {
  double eta = 0.0;
  double lam = 0.0;
  std::uint64_t S = 1;
  std::uint64_t K = 0;
  double zeta = 0.0;                  // max-oracle accuracy (sgdmax)
  std::uint64_t inner_budget = 0;     // max-oracle ascent steps per outer step (sgdmax)

  nlohmann::json to_json() const;
};

// eta = 1/(kappa^2 ell), lam = 1/ell, S = ceil(kappa eps^-2); big-O
// constants fixed at 1 and echoed in trace metadata.
BaselineParams baseline_defaults(double epsilon, const problems::SmoothnessProfile& pr,
                                 std::uint64_t K);

// All ceilings outermost; any integer formula below 1 floors to 1.
// Throws InputError when K or S1 overflow a 64-bit count (pick a larger
// epsilon).
SredaParams derive_params(double epsilon, const problems::SmoothnessProfile& pr, double delta_f);

// Finite-sum regime split at n = kappa^2: above it, q = ceil(sqrt(n)/kappa)
// with exact full-gradient restarts; below it q = S2 = 1.
SredaParams derive_params_finite(double epsilon, const problems::SmoothnessProfile& pr,
                                 double delta_f, std::uint64_t n);

// min(eta_num/||v||, eta_cap); returns the cap at ||v|| = 0.
double step_size(const SredaParams& p, double v_norm);

struct TraceRow {
  std::uint64_t k = 0;
  std::optional<double> eta, v_norm, u_norm;
  std::uint64_t evals_physical = 0;
  std::uint64_t evals_paper = 0;
  std::optional<double> phi_grad_norm, delta_k, Delta_k;
};

struct RunTrace {
  std::vector<TraceRow> rows;  // K+1 rows; the last row is the final iterate
  Vec x_hat;
  std::uint64_t x_hat_index = 0;
  EvalCounter evals;
  bool bound_certified = true;  // false when an iteration cap truncated K
  nlohmann::json metadata;

  std::string to_csv() const;
};

// One full solver run. Streams are derived from (seed, tag): the
// initializer and output index on `init`, restart batches on
// `restart_batch`, inner batches on `inner_batch` and the stopping index
// on `index_sk`, so a run is a pure function of (problem, params, seed).
// cap > 0 truncates K and clears bound_certified.
RunTrace sreda_run(const problems::ProblemOracle& o, const Vec& x0, const SredaParams& p,
                   std::uint64_t seed, bool diagnostics, std::uint64_t cap = 0);

// Finite-sum variant: initialization by full-gradient epochs and exact
// full-gradient restarts.
RunTrace sreda_finite_run(const problems::ProblemOracle& o, const Vec& x0, const SredaParams& p,
                          std::uint64_t seed, bool diagnostics, std::uint64_t cap = 0);

RunTrace sgda_run(const problems::ProblemOracle& o, const Vec& x0, const Vec& y0,
                  const BaselineParams& bp, std::uint64_t seed, bool diagnostics,
                  std::uint64_t cap = 0);

RunTrace sgdmax_run(const problems::ProblemOracle& o, const Vec& x0, const BaselineParams& bp,
                    std::uint64_t seed, bool diagnostics, std::uint64_t cap = 0);

// delta_f upper bound feeding the derived K: Phi(x0) + zeta/(2 mu)
// - Phi*. Requires the phi_star capability.
double delta_f_bound(const problems::ProblemOracle& o, const Vec& x0, double zeta);

}  // namespace sreda::solvers
