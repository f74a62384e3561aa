#include "sreda/metrics.hpp"

#include <cmath>

namespace sreda::metrics {

StationarityReport stationarity(const problems::ProblemOracle& o, const Vec& x, double tol,
                                std::uint64_t max_inner) {
  require(tol > 0, "stationarity: tol must be positive");
  require(x.size() == o.d1(), "stationarity: dimension mismatch");
  StationarityReport rep;
  rep.x = x;
  if (o.caps().phi) {
    rep.method = "exact";
    rep.phi_grad_norm = norm(o.phi_grad(x));
    return rep;
  }
  if (!(o.caps().exact_grad || o.caps().finite_sum))
    throw CapabilityError("stationarity: no deterministic gradient available");

  // deterministic ascent on the strongly concave slice
  rep.method = "inner-solve";
  const auto& pr = o.profile();
  double target = tol * pr.mu / 10.0;
  Vec y(o.d2(), 0.0);
  EvalCounter scratch;
  GradPair g;
  double res = 0.0;
  rep.converged = false;
  for (std::uint64_t it = 0; it < max_inner; ++it) {
    g = problems::full_grad(o, Iterate{x, y}, scratch);
    res = norm(g.gy);
    if (res <= target) {
      rep.converged = true;
      break;
    }
    axpy_inplace(1.0 / pr.ell, g.gy, y);
  }
  g = problems::full_grad(o, Iterate{x, y}, scratch);
  rep.residual = norm(g.gy);
  rep.phi_grad_norm = norm(g.gx);
  return rep;
}

std::optional<std::uint64_t> evals_to_tolerance(const solvers::RunTrace& trace,
                                                double eps_target) {
  bool any = false;
  for (const auto& row : trace.rows) {
    if (!row.phi_grad_norm) continue;
    any = true;
    if (*row.phi_grad_norm <= eps_target) return row.evals_physical;
  }
  if (!any) throw InputError("evals_to_tolerance: trace has no stationarity diagnostics");
  return std::nullopt;
}

double fit_slope(const ComplexityCurve& curve) {
  std::vector<std::pair<double, double>> pts;  // (log(1/eps), log(evals))
  for (const auto& p : curve.points) {
    if (!p.reached) {
      std::fprintf(stderr, "fit_slope: skipping unreached point at epsilon=%g\n", p.epsilon);
      continue;
    }
    require(p.epsilon > 0 && p.evals > 0, "fit_slope: nonpositive point");
    pts.emplace_back(std::log(1.0 / p.epsilon), std::log(p.evals));
  }
  if (pts.size() < 3) throw InputError("fit_slope: need at least 3 reached points");
  double mx = 0, my = 0;
  for (auto& [a, b] : pts) mx += a, my += b;
  mx /= pts.size();
  my /= pts.size();
  double sxx = 0, sxy = 0;
  for (auto& [a, b] : pts) {
    sxx += (a - mx) * (a - mx);
    sxy += (a - mx) * (b - my);
  }
  if (sxx <= 1e-24) throw InputError("fit_slope: degenerate fit (identical epsilons)");
  return sxy / sxx;
}

}  // namespace sreda::metrics
