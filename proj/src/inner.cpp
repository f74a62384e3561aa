#include "sreda/inner.hpp"

#include <cmath>
#include <cstdio>

#include "sreda/linalg.hpp"

namespace sreda::inner {

InnerResult concave_maximizer(const problems::ProblemOracle& o, const Vec& x_prev,
                              const Vec& x_new, const Vec& y_cur, const Vec& v_in,
                              const Vec& u_in, double lambda, std::uint64_t m, std::uint64_t s2,
                              RngStream& batch_rng, RngStream& sk_rng, EvalCounter& evals,
                              bool keep_trace) {
  const auto& pr = o.profile();
  if (lambda > 2.0 / (pr.mu + pr.ell) * (1.0 + 1e-12)) {
    std::fprintf(stderr, "warning: inner step %.6g exceeds the contraction threshold %.6g\n",
                 lambda, 2.0 / (pr.mu + pr.ell));
  }
  require(v_in.size() == o.d1() && u_in.size() == o.d2(), "concave_maximizer: shape mismatch");

  std::uint64_t sk = sk_rng.next_below(m + 1);

  estimator::EstimatorState st;
  st.v = v_in;
  st.u = u_in;
  st.anchor = Iterate{x_prev, y_cur};

  // correction step: move the estimate to (x_new, y_cur)
  estimator::recursive_update(st, o, Iterate{x_new, y_cur}, s2, batch_rng, evals);

  InnerResult res;
  res.s_k = sk;
  if (keep_trace) res.u_norms.push_back(norm(st.u));

  Vec y = y_cur;
  for (std::uint64_t t = 1; t <= m + 1; ++t) {
    axpy_inplace(lambda, st.u, y);  // ascent on the concave slice
    estimator::recursive_update(st, o, Iterate{x_new, y}, s2, batch_rng, evals);
    if (keep_trace) res.u_norms.push_back(norm(st.u));
    if (t == sk + 1) {
      res.y_next = y;
      res.v_next = st.v;
      res.u_next = st.u;
    }
  }
  return res;
}

// --- objectives -------------------------------------------------------------

void YSlice::component_grad_into(const Vec& w, problems::SampleId id, Vec& out) const {
  GradPair g;
  o_.component_grad_into(Iterate{x0_, w}, id, g);
  out.resize(o_.d2());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = -g.gy[j];
}

void YSlice::exact_grad_into(const Vec& w, Vec& out) const {
  out.assign(o_.d2(), 0.0);
  if (o_.caps().finite_sum) {
    GradPair g;
    double s = 1.0 / static_cast<double>(o_.component_count());
    for (std::size_t i = 0; i < o_.component_count(); ++i) {
      o_.component_grad_into(Iterate{x0_, w}, i, g);
      kernels::axpy(-s, g.gy.data(), out.data(), out.size());
    }
    return;
  }
  GradPair g;
  o_.exact_grad_into(Iterate{x0_, w}, g);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = -g.gy[j];
}

void QuadraticObjective::exact_grad_into(const Vec& w, Vec& out) const {
  std::size_t d = dim();
  out.resize(d);
  linalg::matvec(Q, d, d, w.data(), out.data());
  kernels::axpy(-1.0, b.data(), out.data(), d);
}

void QuadraticObjective::component_grad_into(const Vec& w, problems::SampleId id, Vec& out) const {
  std::size_t d = dim();
  exact_grad_into(w, out);
  switch (noise.kind) {
    case problems::NoiseKind::none:
      break;
    case problems::NoiseKind::gaussian: {
      RngStream ns(noise_seed, StreamTag::noise, id);
      for (std::size_t i = 0; i < d; ++i) out[i] += noise.sigma_g * ns.next_normal();
      break;
    }
    case problems::NoiseKind::finite_sum: {
      if (id >= dQ.size()) throw InputError("component index out of range");
      Vec tmp(d);
      linalg::matvec(dQ[id], d, d, w.data(), tmp.data());
      kernels::axpy(1.0, tmp.data(), out.data(), d);
      kernels::axpy(-1.0, db[id].data(), out.data(), d);
      break;
    }
  }
}

Vec QuadraticObjective::argmin() const { return linalg::solve(Q, dim(), b); }

QuadraticObjective make_quadratic_objective(std::size_t d, double kappa, std::uint64_t seed,
                                            problems::NoiseSpec noise) {
  require(d >= 1 && kappa >= 1.0, "make_quadratic_objective: bad arguments");
  QuadraticObjective h;
  h.noise = noise;
  h.noise_seed = seed;
  h.Q.assign(d * d, 0.0);
  double mu = 1.0 / kappa;
  for (std::size_t i = 0; i < d; ++i) {
    double t = d == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(d - 1);
    h.Q[i * d + i] = mu + (1.0 - mu) * t;
  }
  RngStream rng(seed, StreamTag::scaffold, 5);
  h.b.assign(d, 0.0);
  rng.fill_normal(h.b);
  if (noise.kind == problems::NoiseKind::finite_sum) {
    require(noise.n >= 1, "make_quadratic_objective: finite-sum needs n >= 1");
    double s = noise.spread / std::sqrt(static_cast<double>(d));
    h.dQ.resize(noise.n);
    h.db.resize(noise.n);
    for (std::size_t i = 0; i < noise.n; ++i) {
      Vec G(d * d);
      rng.fill_normal(G);
      h.dQ[i].assign(d * d, 0.0);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) h.dQ[i][r * d + c] = 0.5 * s * (G[r * d + c] + G[c * d + r]);
      h.db[i].assign(d, 0.0);
      rng.fill_normal(h.db[i]);
      kernels::scale(s, h.db[i].data(), d);
    }
    // exactly zero-mean perturbations
    auto center = [](std::vector<Vec>& mats) {
      Vec mean(mats[0].size(), 0.0);
      for (const Vec& m : mats) kernels::axpy(1.0 / mats.size(), m.data(), mean.data(), m.size());
      for (Vec& m : mats) kernels::axpy(-1.0, mean.data(), m.data(), m.size());
    };
    center(h.dQ);
    center(h.db);
  }
  return h;
}

// --- initializers -----------------------------------------------------------

namespace {

std::uint64_t ceil_floor1(double x) {
  require(std::isfinite(x) && x < 9.0e18, "initializer config: value overflows");
  double c = std::ceil(x);
  return c < 1.0 ? 1 : static_cast<std::uint64_t>(c);
}

// One epoch of the recursive estimator descent. v0 is the epoch-start
// gradient estimate at w_start (already charged to evals by the caller).
Vec epoch(const ConvexObjective& h, const Vec& w_start, Vec v, double gamma,
          std::uint64_t m_prime, RngStream& rng, EvalCounter& evals) {
  std::size_t d = h.dim();
  std::uint64_t tprime = rng.next_below(m_prime + 1);
  Vec w_prev = w_start;
  Vec selected = tprime == 0 ? w_start : Vec();
  Vec w = axpy(-gamma, v, w_start);
  if (tprime == 1) selected = w;
  Vec ga(d), gb(d);
  for (std::uint64_t t = 1; t + 1 <= m_prime; ++t) {
    problems::SampleId id = h.draw_sample(rng);
    h.component_grad_into(w, id, ga);
    h.component_grad_into(w_prev, id, gb);
    evals.add_paired(1);
    kernels::add_scaled_diff(1.0, ga.data(), gb.data(), v.data(), d);
    w_prev = w;
    axpy_inplace(-gamma, v, w);
    if (t + 1 == tprime) selected = w;
  }
  return selected;
}

}  // namespace

InitConfig isarah_config(double ell, double mu, double zeta, double g0_sq) {
  require(ell > 0 && mu > 0 && zeta > 0 && g0_sq >= 0, "isarah_config: bad arguments");
  double kappa = ell / mu;
  InitConfig cfg;
  cfg.gamma = 2.0 / (5.0 * ell);
  cfg.m_prime = ceil_floor1(20.0 * kappa - 1.0);
  double b = std::max(20.0 * kappa - 10.0, 20.0 * g0_sq / zeta);
  cfg.b = ceil_floor1(std::min(b, 1.0e6));
  cfg.T = g0_sq <= zeta ? 1 : ceil_floor1(std::log((4.0 / 3.0) * g0_sq / zeta));
  return cfg;
}

InitConfig sarah_config(double ell, double mu, double zeta, double g0_sq) {
  require(ell > 0 && mu > 0 && zeta > 0 && g0_sq >= 0, "sarah_config: bad arguments");
  double kappa = ell / mu;
  InitConfig cfg;
  cfg.gamma = 1.0 / (2.0 * ell);
  cfg.m_prime = ceil_floor1(4.5 * kappa);
  cfg.b = 0;  // epochs use the full gradient
  cfg.T = g0_sq <= zeta ? 1 : ceil_floor1(std::log(g0_sq / zeta) / std::log(9.0 / 7.0));
  return cfg;
}

Vec isarah(const ConvexObjective& h, const Vec& w0, const InitConfig& cfg, RngStream& rng,
           EvalCounter& evals) {
  require(cfg.gamma > 0 && cfg.m_prime >= 1 && cfg.T >= 1 && cfg.b >= 1, "isarah: bad config");
  std::size_t d = h.dim();
  Vec w = w0, v(d), g(d);
  for (std::uint64_t s = 1; s <= cfg.T; ++s) {
    v.assign(d, 0.0);
    double wgt = 1.0 / static_cast<double>(cfg.b);
    for (std::uint64_t i = 0; i < cfg.b; ++i) {
      h.component_grad_into(w, h.draw_sample(rng), g);
      kernels::axpy(wgt, g.data(), v.data(), d);
    }
    evals.add_batch(cfg.b);
    w = epoch(h, w, std::move(v), cfg.gamma, cfg.m_prime, rng, evals);
  }
  return w;
}

Vec sarah(const ConvexObjective& h, const Vec& w0, const InitConfig& cfg, RngStream& rng,
          EvalCounter& evals) {
  require(cfg.gamma > 0 && cfg.m_prime >= 1 && cfg.T >= 1, "sarah: bad config");
  require(h.components() >= 1, "sarah: finite-sum objective required");
  std::size_t d = h.dim();
  Vec w = w0, v(d);
  for (std::uint64_t s = 1; s <= cfg.T; ++s) {
    h.exact_grad_into(w, v);
    evals.add_batch(h.components());
    w = epoch(h, w, std::move(v), cfg.gamma, cfg.m_prime, rng, evals);
  }
  return w;
}

}  // namespace sreda::inner
