#include "sreda/problems.hpp"

#include <cmath>

#include "sreda/linalg.hpp"

namespace sreda::problems {

// ---- ProblemOracle defaults ----

void ProblemOracle::exact_grad_into(const Iterate&, GradPair&) const {
  throw CapabilityError("exact_grad not supported by this problem");
}
double ProblemOracle::f_value(const Iterate&) const {
  throw CapabilityError("f_value not supported by this problem");
}
Vec ProblemOracle::y_star(const Vec&) const {
  throw CapabilityError("y_star not supported by this problem");
}
Vec ProblemOracle::phi_grad(const Vec&) const {
  throw CapabilityError("phi_grad not supported by this problem");
}
double ProblemOracle::phi_value(const Vec&) const {
  throw CapabilityError("phi_value not supported by this problem");
}
double ProblemOracle::phi_star() const {
  throw CapabilityError("phi_star not supported by this problem");
}

void ProblemOracle::paired_diff_accum(const Iterate& a, const Iterate& b, const SampleId* ids,
                                      std::size_t s, GradPair& acc) const {
  GradPair ga, gb;
  ga.set_zero(d1_, d2_);
  gb.set_zero(d1_, d2_);
  double w = 1.0 / static_cast<double>(s);
  for (std::size_t i = 0; i < s; ++i) {
    component_grad_into(a, ids[i], ga);
    component_grad_into(b, ids[i], gb);
    kernels::add_scaled_diff(w, ga.gx.data(), gb.gx.data(), acc.gx.data(), d1_);
    kernels::add_scaled_diff(w, ga.gy.data(), gb.gy.data(), acc.gy.data(), d2_);
  }
}

// ---- QuadraticSaddle ----

namespace {

void saddle_grad(const Vec& A, const Vec& B, const Vec& c, double mu, std::size_t d1,
                 std::size_t d2, const Iterate& p, GradPair& out) {
  // gx = A x + B y, gy = B' x - mu y + c
  out.gx.resize(d1);
  out.gy.resize(d2);
  linalg::matvec(A, d1, d1, p.x.data(), out.gx.data());
  for (std::size_t i = 0; i < d1; ++i)
    out.gx[i] += kernels::dot(B.data() + i * d2, p.y.data(), d2);
  linalg::matvec_t(B, d1, d2, p.x.data(), out.gy.data());
  for (std::size_t j = 0; j < d2; ++j) out.gy[j] += c[j] - mu * p.y[j];
}

double saddle_value(const Vec& A, const Vec& B, const Vec& c, double mu, std::size_t d1,
                    std::size_t d2, const Iterate& p) {
  Vec tmp(d1);
  linalg::matvec(A, d1, d1, p.x.data(), tmp.data());
  double v = 0.5 * kernels::dot(p.x.data(), tmp.data(), d1);
  for (std::size_t i = 0; i < d1; ++i)
    v += p.x[i] * kernels::dot(B.data() + i * d2, p.y.data(), d2);
  v += -0.5 * mu * kernels::norm_sq(p.y.data(), d2) + kernels::dot(c.data(), p.y.data(), d2);
  return v;
}

}  // namespace

void QuadraticSaddle::exact_grad_into(const Iterate& p, GradPair& out) const {
  require(p.x.size() == d1_ && p.y.size() == d2_, "grad: dimension mismatch");
  saddle_grad(A, B, c, mu, d1_, d2_, p, out);
}

double QuadraticSaddle::f_value(const Iterate& p) const {
  return saddle_value(A, B, c, mu, d1_, d2_, p);
}

void QuadraticSaddle::component_grad_into(const Iterate& p, SampleId id, GradPair& out) const {
  if (noise.kind == NoiseKind::finite_sum) {
    if (id >= n_) throw InputError("component index out of range");
    exact_grad_into(p, out);
    // add the component perturbation: dA_i x + dB_i y, dB_i' x + dc_i
    Vec tmp(std::max(d1_, d2_));
    linalg::matvec(dA[id], d1_, d1_, p.x.data(), tmp.data());
    kernels::axpy(1.0, tmp.data(), out.gx.data(), d1_);
    linalg::matvec(dB[id], d1_, d2_, p.y.data(), tmp.data());
    kernels::axpy(1.0, tmp.data(), out.gx.data(), d1_);
    linalg::matvec_t(dB[id], d1_, d2_, p.x.data(), tmp.data());
    kernels::axpy(1.0, tmp.data(), out.gy.data(), d2_);
    kernels::axpy(1.0, dc[id].data(), out.gy.data(), d2_);
    return;
  }
  exact_grad_into(p, out);
  if (noise.kind == NoiseKind::gaussian && noise.sigma_g > 0.0) {
    // additive isotropic noise, a pure function of the sample id so the
    // same id at two points shares the same draw
    RngStream ns(noise_seed, StreamTag::noise, id);
    for (std::size_t i = 0; i < d1_; ++i) out.gx[i] += noise.sigma_g * ns.next_normal();
    for (std::size_t j = 0; j < d2_; ++j) out.gy[j] += noise.sigma_g * ns.next_normal();
  }
}

double QuadraticSaddle::component_value(const Iterate& p, SampleId id) const {
  if (noise.kind == NoiseKind::finite_sum) {
    if (id >= n_) throw InputError("component index out of range");
    double v = f_value(p);
    Vec tmp(d1_);
    linalg::matvec(dA[id], d1_, d1_, p.x.data(), tmp.data());
    v += 0.5 * kernels::dot(p.x.data(), tmp.data(), d1_);
    for (std::size_t i = 0; i < d1_; ++i)
      v += p.x[i] * kernels::dot(dB[id].data() + i * d2_, p.y.data(), d2_);
    v += kernels::dot(dc[id].data(), p.y.data(), d2_);
    return v;
  }
  double v = f_value(p);
  if (noise.kind == NoiseKind::gaussian && noise.sigma_g > 0.0) {
    RngStream ns(noise_seed, StreamTag::noise, id);
    for (std::size_t i = 0; i < d1_; ++i) v += noise.sigma_g * ns.next_normal() * p.x[i];
    for (std::size_t j = 0; j < d2_; ++j) v += noise.sigma_g * ns.next_normal() * p.y[j];
  }
  return v;
}

Vec QuadraticSaddle::y_star(const Vec& x) const {
  require(x.size() == d1_, "y_star: dimension mismatch");
  Vec ys(d2_);
  linalg::matvec_t(B, d1_, d2_, x.data(), ys.data());
  for (std::size_t j = 0; j < d2_; ++j) ys[j] = (ys[j] + c[j]) / mu;
  return ys;
}

Vec QuadraticSaddle::phi_grad(const Vec& x) const {
  Vec ys = y_star(x);
  Vec g(d1_);
  linalg::matvec(A, d1_, d1_, x.data(), g.data());
  for (std::size_t i = 0; i < d1_; ++i) g[i] += kernels::dot(B.data() + i * d2_, ys.data(), d2_);
  return g;
}

double QuadraticSaddle::phi_value(const Vec& x) const {
  Iterate p{x, y_star(x)};
  return f_value(p);
}

double QuadraticSaddle::phi_star() const {
  if (!phi_star_) throw CapabilityError("Phi is unbounded below for this instance");
  return *phi_star_;
}

void QuadraticSaddle::paired_diff_accum(const Iterate& a, const Iterate& b, const SampleId* ids,
                                        std::size_t s, GradPair& acc) const {
  require(s >= 1, "paired_diff_accum: empty batch");
  Vec dx(d1_), dy(d2_);
  kernels::sub(a.x.data(), b.x.data(), dx.data(), d1_);
  kernels::sub(a.y.data(), b.y.data(), dy.data(), d2_);
  // base difference: H (dx, dy); additive noise cancels between the two
  // points of a common-random-number pair
  Vec gx(d1_), gy(d2_), tmp(std::max(d1_, d2_));
  linalg::matvec(A, d1_, d1_, dx.data(), gx.data());
  for (std::size_t i = 0; i < d1_; ++i) gx[i] += kernels::dot(B.data() + i * d2_, dy.data(), d2_);
  linalg::matvec_t(B, d1_, d2_, dx.data(), gy.data());
  for (std::size_t j = 0; j < d2_; ++j) gy[j] -= mu * dy[j];

  if (noise.kind != NoiseKind::finite_sum) {
    kernels::axpy(1.0, gx.data(), acc.gx.data(), d1_);
    kernels::axpy(1.0, gy.data(), acc.gy.data(), d2_);
    return;
  }
  double w = 1.0 / static_cast<double>(s);
  Vec cgx(d1_), cgy(d2_);
  for (std::size_t r = 0; r < s; ++r) {
    SampleId id = ids[r];
    if (id >= n_) throw InputError("component index out of range");
    cgx = gx;
    cgy = gy;
    linalg::matvec(dA[id], d1_, d1_, dx.data(), tmp.data());
    kernels::axpy(1.0, tmp.data(), cgx.data(), d1_);
    linalg::matvec(dB[id], d1_, d2_, dy.data(), tmp.data());
    kernels::axpy(1.0, tmp.data(), cgx.data(), d1_);
    linalg::matvec_t(dB[id], d1_, d2_, dx.data(), tmp.data());
    kernels::axpy(1.0, tmp.data(), cgy.data(), d2_);
    kernels::axpy(w, cgx.data(), acc.gx.data(), d1_);
    kernels::axpy(w, cgy.data(), acc.gy.data(), d2_);
  }
}

namespace {

// apply the block Hessian of component i (i < 0: the average H)
struct HessianApply {
  const QuadraticSaddle& q;
  std::size_t d1, d2;
  double mu;
  long comp;

  void operator()(const double* z, double* out) const {
    const Vec& A = q.A;
    const Vec& B = q.B;
    for (std::size_t i = 0; i < d1; ++i)
      out[i] = kernels::dot(A.data() + i * d1, z, d1) + kernels::dot(B.data() + i * d2, z + d1, d2);
    linalg::matvec_t(B, d1, d2, z, out + d1);
    for (std::size_t j = 0; j < d2; ++j) out[d1 + j] -= mu * z[d1 + j];
    if (comp >= 0) {
      auto id = static_cast<std::size_t>(comp);
      for (std::size_t i = 0; i < d1; ++i)
        out[i] += kernels::dot(q.dA[id].data() + i * d1, z, d1) +
                  kernels::dot(q.dB[id].data() + i * d2, z + d1, d2);
      Vec tmp(d2);
      linalg::matvec_t(q.dB[id], d1, d2, z, tmp.data());
      kernels::axpy(1.0, tmp.data(), out + d1, d2);
    }
  }
};

// sqrt of || (1/n) sum_i H_i^2 ||, the average-Lipschitz constant of the
// component family; equals ||H|| when all components share the Hessian
double average_lipschitz(const QuadraticSaddle& q, std::size_t d1, std::size_t d2, double mu,
                         std::uint64_t seed) {
  std::size_t d = d1 + d2;
  std::size_t n = q.dA.empty() ? 0 : q.dA.size();
  RngStream rng(seed, StreamTag::scaffold, 17);
  auto apply_s = [&](const double* z, double* out) {
    Vec mid(d), acc(d, 0.0);
    if (n == 0) {
      HessianApply h{q, d1, d2, mu, -1};
      h(z, mid.data());
      h(mid.data(), out);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      HessianApply h{q, d1, d2, mu, static_cast<long>(i)};
      h(z, mid.data());
      Vec sq(d);
      h(mid.data(), sq.data());
      kernels::axpy(1.0 / static_cast<double>(n), sq.data(), acc.data(), d);
    }
    for (std::size_t i = 0; i < d; ++i) out[i] = acc[i];
  };
  // spectral norm of the (already squared) PSD operator
  Vec v(d), w(d);
  rng.fill_normal(v);
  kernels::scale(1.0 / norm(v), v.data(), d);
  double lam = 0.0;
  for (int it = 0; it < 400; ++it) {
    apply_s(v.data(), w.data());
    lam = norm(w);
    if (lam == 0.0) return 0.0;
    for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / lam;
  }
  return std::sqrt(lam);
}

}  // namespace

void QuadraticSaddle::finalize(double declared_ell) {
  d1_ = static_cast<std::size_t>(std::sqrt(static_cast<double>(A.size())) + 0.5);
  d2_ = c.size();
  require(A.size() == d1_ * d1_ && B.size() == d1_ * d2_, "finalize: inconsistent shapes");
  n_ = noise.kind == NoiseKind::finite_sum ? dA.size() : 0;

  profile_.ell = declared_ell;
  profile_.mu = mu;
  switch (noise.kind) {
    case NoiseKind::none:
      profile_.sigma = 0.0;
      break;
    case NoiseKind::gaussian:
      // exact for additive isotropic noise
      profile_.sigma = noise.sigma_g * std::sqrt(static_cast<double>(d1_ + d2_));
      break;
    case NoiseKind::finite_sum: {
      // Assumption-5 sigma is a sup over all points; estimate it as the
      // max empirical component variance over 1000 random points
      RngStream rng(noise_seed, StreamTag::scaffold, 23);
      double worst = 0.0;
      GradPair mean, gi;
      Iterate p{Vec(d1_), Vec(d2_)};
      for (int t = 0; t < 1000; ++t) {
        rng.fill_normal(p.x);
        rng.fill_normal(p.y);
        exact_grad_into(p, mean);
        double var = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
          component_grad_into(p, i, gi);
          Vec dx(d1_), dy(d2_);
          kernels::sub(gi.gx.data(), mean.gx.data(), dx.data(), d1_);
          kernels::sub(gi.gy.data(), mean.gy.data(), dy.data(), d2_);
          var += norm_sq(dx) + norm_sq(dy);
        }
        worst = std::max(worst, var / static_cast<double>(n_));
      }
      profile_.sigma = std::sqrt(worst);
      break;
    }
  }

  caps_.exact_grad = true;
  caps_.y_star = true;
  caps_.phi = true;
  caps_.finite_sum = noise.kind == NoiseKind::finite_sum;

  // Phi(x) = 1/2 x'(A + BB'/mu)x + (Bc)'x/mu + |c|^2/(2mu); bounded below
  // iff M = A + BB'/mu is positive semidefinite
  Vec M(d1_ * d1_);
  for (std::size_t i = 0; i < d1_; ++i)
    for (std::size_t j = 0; j < d1_; ++j)
      M[i * d1_ + j] =
          A[i * d1_ + j] + kernels::dot(B.data() + i * d2_, B.data() + j * d2_, d2_) / mu;
  RngStream rng(noise_seed, StreamTag::scaffold, 31);
  auto apply_m = [&](const double* z, double* out) { linalg::matvec(M, d1_, d1_, z, out); };
  double min_eig = linalg::sym_min_eig(d1_, apply_m, rng, 500);
  phi_star_.reset();
  phi_argmin_.reset();
  caps_.phi_star = false;
  if (min_eig > 1e-9) {
    Vec rhs(d1_);
    linalg::matvec(B, d1_, d2_, c.data(), rhs.data());
    for (double& v : rhs) v = -v / mu;
    Vec xs = linalg::solve(M, d1_, rhs);
    phi_argmin_ = xs;
    phi_star_ = phi_value(xs);
    caps_.phi_star = true;
  }
}

std::shared_ptr<QuadraticSaddle> make_quadratic_saddle(std::size_t d1, std::size_t d2,
                                                       double kappa_target, std::uint64_t seed,
                                                       NoiseSpec noise) {
  require(kappa_target >= 1.0, "make_quadratic_saddle: kappa_target must be >= 1");
  auto q = std::make_shared<QuadraticSaddle>();
  q->noise = noise;
  q->noise_seed = seed;
  RngStream rng(seed, StreamTag::scaffold, 0);

  // random symmetric (indefinite) A, coupling B with a decent smallest
  // singular value, small offset c
  Vec G(d1 * d1);
  rng.fill_normal(G);
  q->A.assign(d1 * d1, 0.0);
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d1; ++j) q->A[i * d1 + j] = 0.5 * (G[i * d1 + j] + G[j * d1 + i]);
  q->B.assign(d1 * d2, 0.0);
  rng.fill_normal(q->B);
  kernels::scale(0.5, q->B.data(), q->B.size());
  for (std::size_t i = 0; i < std::min(d1, d2); ++i) q->B[i * d2 + i] += 1.0;
  q->c.assign(d2, 0.0);
  rng.fill_normal(q->c);
  kernels::scale(0.1, q->c.data(), d2);

  // normalize the blocks
  {
    RngStream r2(seed, StreamTag::scaffold, 1);
    auto apply_a = [&](const double* z, double* out) { linalg::matvec(q->A, d1, d1, z, out); };
    double na = linalg::sym_spectral_norm(d1, apply_a, r2);
    if (na > 0.0) kernels::scale(0.4 / na, q->A.data(), q->A.size());
    auto apply_bbt = [&](const double* z, double* out) {
      Vec t(d2);
      linalg::matvec_t(q->B, d1, d2, z, t.data());
      linalg::matvec(q->B, d1, d2, t.data(), out);
    };
    double nb = std::sqrt(linalg::sym_spectral_norm(d1, apply_bbt, r2));
    if (nb > 0.0) kernels::scale(1.0 / nb, q->B.data(), q->B.size());
  }

  if (noise.kind == NoiseKind::finite_sum) {
    require(noise.n >= 1, "make_quadratic_saddle: finite-sum needs n >= 1");
    std::size_t n = noise.n;
    double s = noise.spread / std::sqrt(static_cast<double>(d1 + d2));
    auto center = [](std::vector<Vec>& mats) {
      if (mats.empty()) return;
      Vec mean(mats[0].size(), 0.0);
      for (const Vec& m : mats) kernels::axpy(1.0 / mats.size(), m.data(), mean.data(), m.size());
      for (Vec& m : mats) kernels::axpy(-1.0, mean.data(), m.data(), m.size());
    };
    q->dA.resize(n);
    q->dB.resize(n);
    q->dc.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      Vec Gi(d1 * d1);
      rng.fill_normal(Gi);
      q->dA[i].assign(d1 * d1, 0.0);
      for (std::size_t r = 0; r < d1; ++r)
        for (std::size_t cidx = 0; cidx < d1; ++cidx)
          q->dA[i][r * d1 + cidx] = 0.5 * s * (Gi[r * d1 + cidx] + Gi[cidx * d1 + r]);
      q->dB[i].assign(d1 * d2, 0.0);
      rng.fill_normal(q->dB[i]);
      kernels::scale(s, q->dB[i].data(), q->dB[i].size());
      q->dc[i].assign(d2, 0.0);
      rng.fill_normal(q->dc[i]);
      kernels::scale(s, q->dc[i].data(), d2);
    }
    center(q->dA);
    center(q->dB);
    center(q->dc);
  }

  // fixed point for mu so that kappa = ell(mu)/mu hits the target, with a
  // fallback that shrinks A until Phi is bounded below
  double ell = 1.0;
  for (int attempt = 0; attempt < 20; ++attempt) {
    q->mu = 1.0;
    for (int it = 0; it < 200; ++it) {
      ell = average_lipschitz(*q, d1, d2, q->mu, seed + it);
      double mu_new = ell / kappa_target;
      if (std::fabs(mu_new - q->mu) <= 1e-13 * std::max(1.0, q->mu)) {
        q->mu = mu_new;
        break;
      }
      q->mu = mu_new;
    }
    ell = average_lipschitz(*q, d1, d2, q->mu, seed + 777);
    // rescale f by 1/ell so the declared Lipschitz constant is 1 and
    // mu = 1/kappa
    double inv = 1.0 / ell;
    kernels::scale(inv, q->A.data(), q->A.size());
    kernels::scale(inv, q->B.data(), q->B.size());
    kernels::scale(inv, q->c.data(), q->c.size());
    for (Vec& mv : q->dA) kernels::scale(inv, mv.data(), mv.size());
    for (Vec& mv : q->dB) kernels::scale(inv, mv.data(), mv.size());
    for (Vec& mv : q->dc) kernels::scale(inv, mv.data(), mv.size());
    q->mu *= inv;
    ell = average_lipschitz(*q, d1, d2, q->mu, seed + 778);
    q->finalize(ell * (1.0 + 1e-9));
    if (q->caps().phi_star) break;
    // shrink the x-curvature and lift it slightly: when B is rank-deficient,
    // shrinking alone cannot cure negative curvature in the null directions
    kernels::scale(0.7, q->A.data(), q->A.size());
    for (std::size_t i = 0; i < d1; ++i) q->A[i * d1 + i] += 2e-3;
    for (Vec& m : q->dA) kernels::scale(0.7, m.data(), m.size());
  }
  require(std::fabs(q->profile().kappa() - kappa_target) <= 0.01 * kappa_target,
          "make_quadratic_saddle: failed to hit kappa target");
  return q;
}

// ---- serialization ----

nlohmann::json QuadraticSaddle::to_json() const {
  nlohmann::json j;
  j["kind"] = "quadratic_saddle";
  j["d1"] = d1_;
  j["d2"] = d2_;
  j["A"] = A;
  j["B"] = B;
  j["c"] = c;
  j["mu"] = mu;
  j["noise_seed"] = noise_seed;
  j["declared_ell"] = profile_.ell;
  switch (noise.kind) {
    case NoiseKind::none:
      j["noise"] = {{"kind", "none"}};
      break;
    case NoiseKind::gaussian:
      j["noise"] = {{"kind", "gaussian"}, {"sigma_g", noise.sigma_g}};
      break;
    case NoiseKind::finite_sum:
      j["noise"] = {{"kind", "finite_sum"}, {"n", noise.n}, {"spread", noise.spread}};
      j["dA"] = dA;
      j["dB"] = dB;
      j["dc"] = dc;
      break;
  }
  j["profile"] = {{"ell", profile_.ell}, {"mu", profile_.mu}, {"sigma", profile_.sigma}};
  return j;
}

std::shared_ptr<QuadraticSaddle> QuadraticSaddle::from_json(const nlohmann::json& j) {
  if (j.at("kind") != "quadratic_saddle") throw InputError("unknown problem kind");
  auto q = std::make_shared<QuadraticSaddle>();
  q->A = j.at("A").get<Vec>();
  q->B = j.at("B").get<Vec>();
  q->c = j.at("c").get<Vec>();
  q->mu = j.at("mu").get<double>();
  q->noise_seed = j.at("noise_seed").get<std::uint64_t>();
  const auto& nj = j.at("noise");
  std::string kind = nj.at("kind").get<std::string>();
  if (kind == "none") {
    q->noise.kind = NoiseKind::none;
  } else if (kind == "gaussian") {
    q->noise.kind = NoiseKind::gaussian;
    q->noise.sigma_g = nj.at("sigma_g").get<double>();
  } else if (kind == "finite_sum") {
    q->noise.kind = NoiseKind::finite_sum;
    q->noise.n = nj.at("n").get<std::size_t>();
    q->noise.spread = nj.at("spread").get<double>();
    q->dA = j.at("dA").get<std::vector<Vec>>();
    q->dB = j.at("dB").get<std::vector<Vec>>();
    q->dc = j.at("dc").get<std::vector<Vec>>();
  } else {
    throw InputError("unknown noise kind: " + kind);
  }
  q->finalize(j.at("declared_ell").get<double>());
  return q;
}

// ---- counted operations ----

GradPair stoch_grad(const ProblemOracle& o, const Iterate& point, std::uint64_t batch_size,
                    RngStream& rng, EvalCounter& evals) {
  require(batch_size >= 1, "stoch_grad: batch_size must be >= 1");
  GradPair acc, g;
  acc.set_zero(o.d1(), o.d2());
  double w = 1.0 / static_cast<double>(batch_size);
  for (std::uint64_t i = 0; i < batch_size; ++i) {
    o.component_grad_into(point, o.draw_sample(rng), g);
    kernels::axpy(w, g.gx.data(), acc.gx.data(), o.d1());
    kernels::axpy(w, g.gy.data(), acc.gy.data(), o.d2());
  }
  evals.add_batch(batch_size);
  return acc;
}

GradPair component_grad(const ProblemOracle& o, const Iterate& point, SampleId id,
                        EvalCounter& evals) {
  GradPair g;
  o.component_grad_into(point, id, g);
  evals.add_batch(1);
  return g;
}

std::pair<GradPair, GradPair> component_grad_paired(const ProblemOracle& o, const Iterate& point,
                                                    const Iterate& paired_point, SampleId id,
                                                    EvalCounter& evals) {
  GradPair a, b;
  o.component_grad_into(point, id, a);
  o.component_grad_into(paired_point, id, b);
  evals.add_paired(1);
  return {a, b};
}

GradPair full_grad(const ProblemOracle& o, const Iterate& point, EvalCounter& evals) {
  if (o.caps().finite_sum) {
    GradPair acc, g;
    acc.set_zero(o.d1(), o.d2());
    double w = 1.0 / static_cast<double>(o.component_count());
    for (std::size_t i = 0; i < o.component_count(); ++i) {
      o.component_grad_into(point, i, g);
      kernels::axpy(w, g.gx.data(), acc.gx.data(), o.d1());
      kernels::axpy(w, g.gy.data(), acc.gy.data(), o.d2());
    }
    evals.add_batch(o.component_count());
    return acc;
  }
  if (o.caps().exact_grad) {
    GradPair g;
    o.exact_grad_into(point, g);
    return g;
  }
  throw CapabilityError("full_grad: not finite-sum and no exact gradient");
}

}  // namespace sreda::problems
