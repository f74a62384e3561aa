#include "sreda/solvers.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <utility>

#include "sreda/estimator.hpp"
#include "sreda/inner.hpp"
#include "sreda/rng.hpp"

namespace sreda::solvers {

namespace {

std::uint64_t ceil_count(double x, const char* what) {
  if (!std::isfinite(x) || x >= 9.0e18)
    throw InputError(std::string(what) + " overflows a 64-bit count; choose a larger epsilon");
  double c = std::ceil(x);
  return c < 1.0 ? 1 : static_cast<std::uint64_t>(c);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void common_fields(SredaParams& p, double epsilon, const problems::SmoothnessProfile& pr,
                   double delta_f) {
  require(epsilon > 0 && delta_f > 0, "derive_params: epsilon and delta_f must be positive");
  double kappa = pr.kappa();
  p.epsilon = epsilon;
  p.zeta = epsilon * epsilon / (kappa * kappa);
  p.lambda = 2.0 / (7.0 * pr.ell);
  p.eta_num = epsilon / (5.0 * kappa * pr.ell);
  p.eta_cap = 1.0 / (10.0 * kappa * pr.ell);
  p.bound = 1073.0 / 108.0 * epsilon;
  p.m = ceil_count(28.0 * kappa - 1.0, "m");
  p.K = ceil_count(100.0 * kappa * pr.ell * delta_f / (9.0 * epsilon * epsilon), "K");
}

}  // namespace

SredaParams derive_params(double epsilon, const problems::SmoothnessProfile& pr, double delta_f) {
  SredaParams p;
  common_fields(p, epsilon, pr, delta_f);
  double kappa = pr.kappa();
  p.q = ceil_count(1.0 / epsilon, "q");
  p.S1 = ceil_count(24.0 * pr.sigma * pr.sigma * kappa * kappa / (epsilon * epsilon), "S1");
  p.S2 = ceil_count(7368.0 / 175.0 * kappa * static_cast<double>(p.q), "S2");
  p.full_restart = false;
  return p;
}

SredaParams derive_params_finite(double epsilon, const problems::SmoothnessProfile& pr,
                                 double delta_f, std::uint64_t n) {
  require(n >= 1, "derive_params_finite: n must be >= 1");
  SredaParams p;
  common_fields(p, epsilon, pr, delta_f);
  double kappa = pr.kappa();
  p.full_restart = true;
  p.S1 = n;
  if (static_cast<double>(n) >= kappa * kappa) {
    p.q = ceil_count(std::sqrt(static_cast<double>(n)) / kappa, "q");
    p.S2 = ceil_count(7368.0 / 175.0 * kappa * static_cast<double>(p.q), "S2");
  } else {
    p.q = 1;
    p.S2 = 1;
  }
  return p;
}

double step_size(const SredaParams& p, double v_norm) {
  require(v_norm >= 0, "step_size: negative norm");
  if (v_norm == 0.0) return p.eta_cap;
  return std::min(p.eta_num / v_norm, p.eta_cap);
}

BaselineParams baseline_defaults(double epsilon, const problems::SmoothnessProfile& pr,
                                 std::uint64_t K) {
  require(epsilon > 0, "baseline_defaults: epsilon must be positive");
  double kappa = pr.kappa();
  BaselineParams bp;
  bp.eta = 1.0 / (kappa * kappa * pr.ell);
  bp.lam = 1.0 / pr.ell;
  bp.S = ceil_count(kappa / (epsilon * epsilon), "S");
  bp.K = K;
  bp.zeta = epsilon * epsilon / (kappa * kappa);
  bp.inner_budget = ceil_count(kappa * kappa / (epsilon * epsilon), "inner budget");
  return bp;
}

nlohmann::json SredaParams::to_json() const {
  return {{"epsilon", epsilon}, {"zeta", zeta},       {"lambda", lambda},
          {"eta_num", eta_num}, {"eta_cap", eta_cap}, {"bound", bound},
          {"q", q},             {"S1", S1},           {"S2", S2},
          {"K", K},             {"m", m},             {"full_restart", full_restart}};
}

nlohmann::json BaselineParams::to_json() const {
  return {{"eta", eta}, {"lam", lam},   {"S", S},
          {"K", K},     {"zeta", zeta}, {"inner_budget", inner_budget}};
}

std::string RunTrace::to_csv() const {
  std::string out =
      "k,eta_k,v_norm,u_norm,evals_physical,evals_paper,phi_grad_norm,delta_k,Delta_k\n";
  char buf[64];
  auto cell = [&](const std::optional<double>& v) {
    if (v) out += fmt(*v);
    out += ',';
  };
  for (const TraceRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%" PRIu64 ",", r.k);
    out += buf;
    cell(r.eta);
    cell(r.v_norm);
    cell(r.u_norm);
    std::snprintf(buf, sizeof(buf), "%" PRIu64 ",%" PRIu64 ",", r.evals_physical, r.evals_paper);
    out += buf;
    cell(r.phi_grad_norm);
    cell(r.delta_k);
    if (r.Delta_k) out += fmt(*r.Delta_k);
    out += '\n';
  }
  return out;
}

double delta_f_bound(const problems::ProblemOracle& o, const Vec& x0, double zeta) {
  require(o.caps().phi_star, "delta_f_bound: problem lacks a computable Phi*");
  return o.phi_value(x0) + zeta / (2.0 * o.profile().mu) - o.phi_star();
}

namespace {

// exact gradient for diagnostics, computed through the same summation
// path the solver's full-gradient restarts use so that the estimator
// error diagnostic is exactly zero right after a full restart
GradPair diag_grad(const problems::ProblemOracle& o, const Iterate& p) {
  EvalCounter scratch;
  return problems::full_grad(o, p, scratch);
}

void fill_diagnostics(const problems::ProblemOracle& o, const Iterate& it, const Vec* v,
                      const Vec* u, TraceRow& row) {
  GradPair g = diag_grad(o, it);
  row.delta_k = norm_sq(g.gy);
  if (v && u) {
    Vec dv(o.d1()), du(o.d2());
    kernels::sub(v->data(), g.gx.data(), dv.data(), o.d1());
    kernels::sub(u->data(), g.gy.data(), du.data(), o.d2());
    row.Delta_k = norm_sq(dv) + norm_sq(du);
  }
  if (o.caps().phi) row.phi_grad_norm = norm(o.phi_grad(it.x));
}

RunTrace sreda_impl(const problems::ProblemOracle& o, const Vec& x0, const SredaParams& p,
                    std::uint64_t seed, bool diagnostics, std::uint64_t cap, bool finite) {
  require(x0.size() == o.d1(), "sreda_run: x0 dimension mismatch");
  if (finite) require(o.caps().finite_sum, "sreda_finite_run: finite-sum oracle required");
  const auto& pr = o.profile();

  RngStream init_rng = spawn_stream(seed, StreamTag::init, 0);
  RngStream out_rng = spawn_stream(seed, StreamTag::init, 1);
  RngStream restart_rng = spawn_stream(seed, StreamTag::restart_batch);
  RngStream inner_rng = spawn_stream(seed, StreamTag::inner_batch);
  RngStream sk_rng = spawn_stream(seed, StreamTag::index_sk);

  RunTrace tr;
  EvalCounter& evals = tr.evals;
  tr.metadata["algorithm"] = finite ? "sreda-finite" : "sreda";
  tr.metadata["seed"] = seed;
  tr.metadata["params"] = p.to_json();

  // initialize y by driving the y-gradient of the strongly concave slice
  // below zeta
  inner::YSlice slice(o, x0);
  Vec w0(o.d2(), 0.0);
  double g0_sq;
  if (o.caps().exact_grad || o.caps().finite_sum) {
    Vec g0(o.d2());
    slice.exact_grad_into(w0, g0);
    g0_sq = norm_sq(g0);
  } else {
    Vec g(o.d2()), acc(o.d2(), 0.0);
    for (int i = 0; i < 100; ++i) {
      slice.component_grad_into(w0, o.draw_sample(init_rng), g);
      kernels::axpy(0.01, g.data(), acc.data(), o.d2());
    }
    evals.add_batch(100);
    g0_sq = norm_sq(acc);
  }
  inner::InitConfig icfg = finite ? inner::sarah_config(pr.ell, pr.mu, p.zeta, g0_sq)
                                  : inner::isarah_config(pr.ell, pr.mu, p.zeta, g0_sq);
  Vec y = finite ? inner::sarah(slice, w0, icfg, init_rng, evals)
                 : inner::isarah(slice, w0, icfg, init_rng, evals);
  tr.metadata["init_evals_physical"] = evals.physical;
  if (o.caps().exact_grad || o.caps().finite_sum) {
    Vec gy(o.d2());
    slice.exact_grad_into(y, gy);
    double res = norm_sq(gy);
    tr.metadata["init_residual_sq"] = res;
    if (res > p.zeta)
      tr.metadata["warnings"].push_back("initializer residual above target on this seed");
  }

  std::uint64_t k_total = (cap > 0 && cap < p.K) ? cap : p.K;
  tr.bound_certified = k_total == p.K;
  tr.x_hat_index = k_total > 0 ? out_rng.next_below(k_total) : 0;

  Vec x = x0;
  estimator::EstimatorState st;
  for (std::uint64_t k = 0; k < k_total; ++k) {
    if (k % p.q == 0) {
      st = estimator::init_restart(o, Iterate{x, y}, p.S1, restart_rng, evals);
    }
    double vn = norm(st.v);
    double eta = step_size(p, vn);

    TraceRow row;
    row.k = k;
    row.eta = eta;
    row.v_norm = vn;
    row.u_norm = norm(st.u);
    row.evals_physical = evals.physical;
    row.evals_paper = evals.paper;
    if (diagnostics) fill_diagnostics(o, Iterate{x, y}, &st.v, &st.u, row);
    tr.rows.push_back(std::move(row));

    if (k == tr.x_hat_index) tr.x_hat = x;

    Vec x_next = axpy(-eta, st.v, x);
    inner::InnerResult ir = inner::concave_maximizer(o, x, x_next, y, st.v, st.u, p.lambda, p.m,
                                                     p.S2, inner_rng, sk_rng, evals);
    x = std::move(x_next);
    y = std::move(ir.y_next);
    st.v = std::move(ir.v_next);
    st.u = std::move(ir.u_next);
    st.anchor = Iterate{x, y};
  }

  TraceRow last;
  last.k = k_total;
  last.evals_physical = evals.physical;
  last.evals_paper = evals.paper;
  if (diagnostics) fill_diagnostics(o, Iterate{x, y}, nullptr, nullptr, last);
  tr.rows.push_back(std::move(last));

  if (k_total == 0) tr.x_hat = x0;
  if (diagnostics && o.caps().phi) tr.metadata["x_hat_phi_grad_norm"] = norm(o.phi_grad(tr.x_hat));
  return tr;
}

}  // namespace

RunTrace sreda_run(const problems::ProblemOracle& o, const Vec& x0, const SredaParams& p,
                   std::uint64_t seed, bool diagnostics, std::uint64_t cap) {
  return sreda_impl(o, x0, p, seed, diagnostics, cap, false);
}

RunTrace sreda_finite_run(const problems::ProblemOracle& o, const Vec& x0, const SredaParams& p,
                          std::uint64_t seed, bool diagnostics, std::uint64_t cap) {
  return sreda_impl(o, x0, p, seed, diagnostics, cap, true);
}

RunTrace sgda_run(const problems::ProblemOracle& o, const Vec& x0, const Vec& y0,
                  const BaselineParams& bp, std::uint64_t seed, bool diagnostics,
                  std::uint64_t cap) {
  require(x0.size() == o.d1() && y0.size() == o.d2(), "sgda_run: dimension mismatch");
  RngStream rng = spawn_stream(seed, StreamTag::baseline, 0);
  RngStream out_rng = spawn_stream(seed, StreamTag::init, 1);

  RunTrace tr;
  tr.metadata["algorithm"] = "sgda";
  tr.metadata["seed"] = seed;
  tr.metadata["params"] = bp.to_json();

  std::uint64_t k_total = (cap > 0 && cap < bp.K) ? cap : bp.K;
  tr.bound_certified = k_total == bp.K;
  tr.x_hat_index = k_total > 0 ? out_rng.next_below(k_total) : 0;

  Vec x = x0, y = y0;
  for (std::uint64_t k = 0; k < k_total; ++k) {
    // one shared batch per iteration; each sample gives the gradient pair
    GradPair g = problems::stoch_grad(o, Iterate{x, y}, bp.S, rng, tr.evals);

    TraceRow row;
    row.k = k;
    row.eta = bp.eta;
    row.v_norm = norm(g.gx);
    row.u_norm = norm(g.gy);
    row.evals_physical = tr.evals.physical;
    row.evals_paper = tr.evals.paper;
    if (diagnostics) fill_diagnostics(o, Iterate{x, y}, &g.gx, &g.gy, row);
    tr.rows.push_back(std::move(row));
    if (k == tr.x_hat_index) tr.x_hat = x;

    axpy_inplace(-bp.eta, g.gx, x);
    axpy_inplace(bp.lam, g.gy, y);
  }

  TraceRow last;
  last.k = k_total;
  last.evals_physical = tr.evals.physical;
  last.evals_paper = tr.evals.paper;
  if (diagnostics) fill_diagnostics(o, Iterate{x, y}, nullptr, nullptr, last);
  tr.rows.push_back(std::move(last));
  if (k_total == 0) tr.x_hat = x0;
  if (diagnostics && o.caps().phi) tr.metadata["x_hat_phi_grad_norm"] = norm(o.phi_grad(tr.x_hat));
  return tr;
}

RunTrace sgdmax_run(const problems::ProblemOracle& o, const Vec& x0, const BaselineParams& bp,
                    std::uint64_t seed, bool diagnostics, std::uint64_t cap) {
  require(x0.size() == o.d1(), "sgdmax_run: dimension mismatch");
  RngStream rng = spawn_stream(seed, StreamTag::baseline, 1);
  RngStream out_rng = spawn_stream(seed, StreamTag::init, 1);

  RunTrace tr;
  tr.metadata["algorithm"] = "sgdmax";
  tr.metadata["seed"] = seed;
  tr.metadata["params"] = bp.to_json();

  std::uint64_t k_total = (cap > 0 && cap < bp.K) ? cap : bp.K;
  tr.bound_certified = k_total == bp.K;
  tr.x_hat_index = k_total > 0 ? out_rng.next_below(k_total) : 0;

  std::uint64_t inner_evals = 0;
  Vec x = x0, y(o.d2(), 0.0);
  GradPair g;
  for (std::uint64_t k = 0; k < k_total; ++k) {
    // budgeted inner ascent stands in for the max oracle
    for (std::uint64_t t = 0; t < bp.inner_budget; ++t) {
      o.component_grad_into(Iterate{x, y}, o.draw_sample(rng), g);
      tr.evals.add_batch(1);
      ++inner_evals;
      axpy_inplace(bp.lam, g.gy, y);
    }
    GradPair gb = problems::stoch_grad(o, Iterate{x, y}, bp.S, rng, tr.evals);

    TraceRow row;
    row.k = k;
    row.eta = bp.eta;
    row.v_norm = norm(gb.gx);
    row.u_norm = norm(gb.gy);
    row.evals_physical = tr.evals.physical;
    row.evals_paper = tr.evals.paper;
    if (diagnostics) fill_diagnostics(o, Iterate{x, y}, &gb.gx, &gb.gy, row);
    tr.rows.push_back(std::move(row));
    if (k == tr.x_hat_index) tr.x_hat = x;

    axpy_inplace(-bp.eta, gb.gx, x);
  }

  TraceRow last;
  last.k = k_total;
  last.evals_physical = tr.evals.physical;
  last.evals_paper = tr.evals.paper;
  if (diagnostics) fill_diagnostics(o, Iterate{x, y}, nullptr, nullptr, last);
  tr.rows.push_back(std::move(last));
  if (k_total == 0) tr.x_hat = x0;
  tr.metadata["inner_evals_physical"] = inner_evals;
  if (diagnostics && o.caps().phi) tr.metadata["x_hat_phi_grad_norm"] = norm(o.phi_grad(tr.x_hat));
  return tr;
}

}  // namespace sreda::solvers
