#include "sreda/harness.hpp"

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "sreda/estimator.hpp"
#include "sreda/inner.hpp"
#include "sreda/linalg.hpp"
#include "sreda/metrics.hpp"
#include "sreda/rng.hpp"

namespace sreda::harness {

namespace fs = std::filesystem;

// --- config -----------------------------------------------------------------

ExperimentConfig ExperimentConfig::parse(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    cfg.problem = j.at("problem");
    cfg.algorithm = j.value("algorithm", std::string("sreda"));
    cfg.epsilon = j.value("epsilon", 0.1);
    if (j.contains("delta_f") && !j.at("delta_f").is_null())
      cfg.delta_f = j.at("delta_f").get<double>();
    cfg.overrides = j.value("overrides", nlohmann::json::object());
    cfg.seeds = j.value("seeds", std::vector<std::uint64_t>{});
    cfg.cap = j.value("cap", std::uint64_t{0});
    cfg.baseline_iters = j.value("baseline_iters", std::uint64_t{1000});
    cfg.diagnostics = j.value("diagnostics", true);
    cfg.out = j.value("out", std::string("out"));
    if (j.contains("x0")) cfg.x0 = j.at("x0").get<Vec>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  if (cfg.seeds.empty()) throw InputError("config: seeds list must be nonempty");
  if (cfg.epsilon <= 0) throw InputError("config: epsilon must be positive");
  static const char* algos[] = {"sreda", "sreda-finite", "sgda", "sgdmax"};
  bool ok = false;
  for (const char* a : algos) ok = ok || cfg.algorithm == a;
  if (!ok) throw InputError("config: unknown algorithm '" + cfg.algorithm + "'");
  return cfg;
}

std::shared_ptr<problems::ProblemOracle> build_problem(const nlohmann::json& spec) {
  try {
    std::string kind = spec.at("kind").get<std::string>();
    if (kind != "quadratic_saddle") throw InputError("unknown problem kind: " + kind);
    if (spec.contains("A")) return problems::QuadraticSaddle::from_json(spec);
    problems::NoiseSpec noise;
    if (spec.contains("noise")) {
      const auto& nj = spec.at("noise");
      std::string nk = nj.value("kind", std::string("none"));
      if (nk == "none") {
        noise.kind = problems::NoiseKind::none;
      } else if (nk == "gaussian") {
        noise.kind = problems::NoiseKind::gaussian;
        noise.sigma_g = nj.at("sigma_g").get<double>();
      } else if (nk == "finite_sum") {
        noise.kind = problems::NoiseKind::finite_sum;
        noise.n = nj.at("n").get<std::size_t>();
        noise.spread = nj.value("spread", 0.2);
      } else {
        throw InputError("unknown noise kind: " + nk);
      }
    }
    return problems::make_quadratic_saddle(spec.at("d1").get<std::size_t>(),
                                           spec.at("d2").get<std::size_t>(),
                                           spec.value("kappa", 1.0),
                                           spec.value("seed", std::uint64_t{1}), noise);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("problem spec: ") + e.what());
  }
}

namespace {

void apply_overrides(solvers::SredaParams& p, const nlohmann::json& ov) {
  for (auto it = ov.begin(); it != ov.end(); ++it) {
    const std::string& k = it.key();
    if (k == "zeta") p.zeta = it->get<double>();
    else if (k == "lambda") p.lambda = it->get<double>();
    else if (k == "eta_num") p.eta_num = it->get<double>();
    else if (k == "eta_cap") p.eta_cap = it->get<double>();
    else if (k == "q") p.q = it->get<std::uint64_t>();
    else if (k == "S1") p.S1 = it->get<std::uint64_t>();
    else if (k == "S2") p.S2 = it->get<std::uint64_t>();
    else if (k == "K") p.K = it->get<std::uint64_t>();
    else if (k == "m") p.m = it->get<std::uint64_t>();
    else throw InputError("overrides: unknown field '" + k + "'");
  }
}

void apply_overrides(solvers::BaselineParams& p, const nlohmann::json& ov) {
  for (auto it = ov.begin(); it != ov.end(); ++it) {
    const std::string& k = it.key();
    if (k == "eta") p.eta = it->get<double>();
    else if (k == "lam") p.lam = it->get<double>();
    else if (k == "S") p.S = it->get<std::uint64_t>();
    else if (k == "K") p.K = it->get<std::uint64_t>();
    else if (k == "zeta") p.zeta = it->get<double>();
    else if (k == "inner_budget") p.inner_budget = it->get<std::uint64_t>();
    else throw InputError("overrides: unknown field '" + k + "'");
  }
}

}  // namespace

solvers::SredaParams derive_for(const ExperimentConfig& cfg, const problems::ProblemOracle& o,
                                const Vec& x0) {
  const auto& pr = o.profile();
  double kappa = pr.kappa();
  double zeta = cfg.epsilon * cfg.epsilon / (kappa * kappa);
  double delta_f =
      cfg.delta_f ? *cfg.delta_f : solvers::delta_f_bound(o, x0, zeta);
  solvers::SredaParams p =
      cfg.algorithm == "sreda-finite"
          ? solvers::derive_params_finite(cfg.epsilon, pr, delta_f, o.component_count())
          : solvers::derive_params(cfg.epsilon, pr, delta_f);
  apply_overrides(p, cfg.overrides);
  return p;
}

// --- plumbing ---------------------------------------------------------------

void write_file_atomic(const std::string& path, const std::string& content) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot open for writing: " + tmp.string());
    f << content;
  }
  fs::rename(tmp, p);
}

unsigned thread_count() {
  if (const char* env = std::getenv("SREDA_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

namespace {

// run fn(i) for i in [0, n) on the worker pool, in arbitrary order
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  unsigned workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

solvers::RunTrace run_one(const ExperimentConfig& cfg, const problems::ProblemOracle& o,
                          const Vec& x0, const solvers::SredaParams& sp,
                          const solvers::BaselineParams& bp, std::uint64_t seed) {
  if (cfg.algorithm == "sreda")
    return solvers::sreda_run(o, x0, sp, seed, cfg.diagnostics, cfg.cap);
  if (cfg.algorithm == "sreda-finite")
    return solvers::sreda_finite_run(o, x0, sp, seed, cfg.diagnostics, cfg.cap);
  if (cfg.algorithm == "sgda")
    return solvers::sgda_run(o, x0, Vec(o.d2(), 0.0), bp, seed, cfg.diagnostics, cfg.cap);
  return solvers::sgdmax_run(o, x0, bp, seed, cfg.diagnostics, cfg.cap);
}

ExperimentConfig load_config(const std::string& path, const Flags& flags) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot read config: " + path);
  nlohmann::json j = nlohmann::json::parse(f);  // throws json::exception on bad input
  ExperimentConfig cfg = ExperimentConfig::parse(j);
  if (flags.out) cfg.out = *flags.out;
  if (flags.seeds) cfg.seeds = *flags.seeds;
  if (flags.cap) cfg.cap = *flags.cap;
  if (flags.no_diagnostics) cfg.diagnostics = false;
  if (cfg.seeds.empty()) throw InputError("config: seeds list must be nonempty");
  return cfg;
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean_of(v), s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / (v.size() - 1));
}

}  // namespace

// --- subcommands ------------------------------------------------------------

int cli_run(const std::string& config_path, const Flags& flags) {
  ExperimentConfig cfg;
  std::shared_ptr<problems::ProblemOracle> prob;
  try {
    cfg = load_config(config_path, flags);
    prob = build_problem(cfg.problem);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_parse;
  }

  Vec x0 = cfg.x0 ? *cfg.x0 : Vec(prob->d1(), 1.0);
  solvers::SredaParams sp;
  solvers::BaselineParams bp;
  bool is_sreda = cfg.algorithm == "sreda" || cfg.algorithm == "sreda-finite";
  try {
    if (cfg.diagnostics && !(prob->caps().exact_grad || prob->caps().finite_sum))
      throw CapabilityError("diagnostics requested but problem has no exact gradient");
    if (cfg.algorithm == "sreda-finite" && !prob->caps().finite_sum)
      throw CapabilityError("sreda-finite requires a finite-sum problem");
    if (x0.size() != prob->d1()) throw InputError("x0 dimension mismatch");
    if (is_sreda) {
      sp = derive_for(cfg, *prob, x0);
    } else {
      bp = solvers::baseline_defaults(cfg.epsilon, prob->profile(), cfg.baseline_iters);
      apply_overrides(bp, cfg.overrides);
    }
  } catch (const CapabilityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_capability;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_parse;
  }

  std::size_t n = cfg.seeds.size();
  std::vector<solvers::RunTrace> traces(n);
  try {
    parallel_for(n, [&](std::size_t i) {
      traces[i] = run_one(cfg, *prob, x0, sp, bp, cfg.seeds[i]);
      char name[128];
      std::snprintf(name, sizeof(name), "%s/%s_seed%" PRIu64 ".csv", cfg.out.c_str(),
                    cfg.algorithm.c_str(), cfg.seeds[i]);
      write_file_atomic(name, traces[i].to_csv());
    });
  } catch (const CapabilityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_capability;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_failed;
  }

  nlohmann::json summary;
  summary["algorithm"] = cfg.algorithm;
  summary["epsilon"] = cfg.epsilon;
  summary["params"] = is_sreda ? sp.to_json() : bp.to_json();
  summary["seeds"] = cfg.seeds;
  summary["kernels"] = kernels::active().name;
  summary["bound"] = 1073.0 / 108.0 * cfg.epsilon;
  bool certified = true;
  std::vector<double> grads;
  auto per_seed = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = traces[i];
    certified = certified && t.bound_certified;
    nlohmann::json row;
    row["seed"] = cfg.seeds[i];
    row["evals_physical"] = t.evals.physical;
    row["evals_paper"] = t.evals.paper;
    row["x_hat_index"] = t.x_hat_index;
    if (t.metadata.contains("x_hat_phi_grad_norm")) {
      double g = t.metadata["x_hat_phi_grad_norm"].get<double>();
      row["phi_grad_norm_at_x_hat"] = g;
      grads.push_back(g);
    }
    per_seed.push_back(std::move(row));
  }
  summary["per_seed"] = std::move(per_seed);
  summary["bound_certified"] = certified;
  if (!grads.empty()) {
    summary["phi_grad_norm_mean"] = mean_of(grads);
    summary["phi_grad_norm_std"] = std_of(grads);
  }
  write_file_atomic(cfg.out + "/" + cfg.algorithm + "_summary.json", summary.dump(2) + "\n");
  std::printf("wrote %zu trace(s) and summary under %s/\n", n, cfg.out.c_str());
  return exit_ok;
}

int cli_sweep(const std::string& config_path, const std::vector<double>& epsilons,
              const Flags& flags) {
  ExperimentConfig cfg;
  std::shared_ptr<problems::ProblemOracle> prob;
  try {
    cfg = load_config(config_path, flags);
    prob = build_problem(cfg.problem);
    if (epsilons.size() < 3) throw InputError("sweep needs at least 3 epsilon values");
    if (!(prob->caps().exact_grad || prob->caps().finite_sum))
      throw CapabilityError("sweep needs exact stationarity diagnostics");
  } catch (const CapabilityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_capability;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_parse;
  }

  Vec x0 = cfg.x0 ? *cfg.x0 : Vec(prob->d1(), 1.0);
  nlohmann::json summary;
  summary["epsilons"] = epsilons;
  summary["seeds"] = cfg.seeds;
  std::string curves_csv = "algorithm,epsilon,mean_evals_to_eps,reached_seeds\n";

  try {
    for (const std::string algo : {"sreda", "sgda"}) {
      metrics::ComplexityCurve curve;
      for (double eps : epsilons) {
        ExperimentConfig c = cfg;
        c.algorithm = algo;
        c.epsilon = eps;
        c.diagnostics = true;
        solvers::SredaParams sp;
        solvers::BaselineParams bp;
        if (algo == "sreda") sp = derive_for(c, *prob, x0);
        else bp = solvers::baseline_defaults(eps, prob->profile(), c.baseline_iters);

        std::vector<double> reached(c.seeds.size(), -1.0);
        parallel_for(c.seeds.size(), [&](std::size_t i) {
          solvers::RunTrace t = run_one(c, *prob, x0, sp, bp, c.seeds[i]);
          auto ev = metrics::evals_to_tolerance(t, eps);
          if (ev) reached[i] = static_cast<double>(*ev);
        });
        std::vector<double> ok;
        for (double r : reached)
          if (r >= 0) ok.push_back(r);
        metrics::ComplexityCurve::Point pt;
        pt.epsilon = eps;
        pt.reached = !ok.empty();
        pt.evals = ok.empty() ? 0.0 : mean_of(ok);
        curve.points.push_back(pt);
        char line[160];
        std::snprintf(line, sizeof(line), "%s,%.17g,%.17g,%zu\n", algo.c_str(), eps, pt.evals,
                      ok.size());
        curves_csv += line;
      }
      nlohmann::json cj;
      for (const auto& pt : curve.points)
        cj.push_back({{"epsilon", pt.epsilon}, {"evals", pt.evals}, {"reached", pt.reached}});
      summary[algo] = {{"curve", cj}};
      try {
        summary[algo]["slope"] = metrics::fit_slope(curve);
      } catch (const InputError& e) {
        summary[algo]["slope_error"] = e.what();
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_failed;
  }

  write_file_atomic(cfg.out + "/sweep_curves.csv", curves_csv);
  write_file_atomic(cfg.out + "/sweep_summary.json", summary.dump(2) + "\n");
  std::printf("%s\n", summary.dump(2).c_str());
  return exit_ok;
}

int cli_params(double epsilon, double kappa, double ell, double sigma, double delta_f,
               std::optional<std::uint64_t> n) {
  problems::SmoothnessProfile pr{ell, ell / kappa, sigma};
  solvers::SredaParams p;
  try {
    p = n ? solvers::derive_params_finite(epsilon, pr, delta_f, *n)
          : solvers::derive_params(epsilon, pr, delta_f);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_parse;
  }
  std::printf("epsilon   %.17g\n", p.epsilon);
  std::printf("zeta      %.17g\n", p.zeta);
  std::printf("lambda    %.17g\n", p.lambda);
  std::printf("eta_num   %.17g\n", p.eta_num);
  std::printf("eta_cap   %.17g\n", p.eta_cap);
  std::printf("q         %" PRIu64 "\n", p.q);
  std::printf("S1        %" PRIu64 "\n", p.S1);
  std::printf("S2        %" PRIu64 "\n", p.S2);
  std::printf("K         %" PRIu64 "\n", p.K);
  std::printf("m         %" PRIu64 "\n", p.m);
  std::printf("bound     %.17g\n", p.bound);
  // predicted totals: restarts + paired inner updates over the whole run
  double restarts = std::ceil(static_cast<double>(p.K) / p.q) * static_cast<double>(p.S1);
  double inner_paper = static_cast<double>(p.K) * static_cast<double>(p.S2) * (p.m + 2);
  std::printf("predicted restart evals   %.6g\n", restarts);
  std::printf("predicted inner evals     %.6g (physical %.6g)\n", inner_paper, 2 * inner_paper);
  std::printf("predicted total physical  %.6g (+ initializer)\n", restarts + 2 * inner_paper);
  return exit_ok;
}

// --- property-check suite -----------------------------------------------------

namespace {

using problems::NoiseKind;
using problems::NoiseSpec;

bool check_fd_gradients(const problems::ProblemOracle& o, std::uint64_t seed) {
  RngStream rng(seed, StreamTag::scaffold, 101);
  double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    Iterate p{Vec(o.d1()), Vec(o.d2())};
    rng.fill_normal(p.x);
    rng.fill_normal(p.y);
    problems::SampleId id = o.draw_sample(rng);
    GradPair g;
    o.component_grad_into(p, id, g);
    double gnorm = std::sqrt(norm_sq(g.gx) + norm_sq(g.gy));
    for (std::size_t i = 0; i < o.d1() + o.d2(); ++i) {
      Iterate a = p, b = p;
      double& ai = i < o.d1() ? a.x[i] : a.y[i - o.d1()];
      double& bi = i < o.d1() ? b.x[i] : b.y[i - o.d1()];
      ai += h;
      bi -= h;
      double fd = (o.component_value(a, id) - o.component_value(b, id)) / (2 * h);
      double gi = i < o.d1() ? g.gx[i] : g.gy[i - o.d1()];
      if (std::fabs(fd - gi) > 1e-6 * std::max(1.0, gnorm)) return false;
    }
  }
  return true;
}

bool check_pl(std::uint64_t seed) {
  // 2 mu (h(w) - h*) <= |grad h(w)|^2 on a strongly convex quadratic
  auto h = inner::make_quadratic_objective(6, 4.0, seed);
  Vec ws = h.argmin();
  Vec gs(6);
  h.exact_grad_into(ws, gs);
  double mu = 0.25;  // smallest eigenvalue of the spectrum [1/kappa, 1]
  auto value = [&](const Vec& w) {
    Vec t(6);
    linalg::matvec(h.Q, 6, 6, w.data(), t.data());
    return 0.5 * dot(w, t) - dot(h.b, w);
  };
  double hstar = value(ws);
  RngStream rng(seed, StreamTag::scaffold, 102);
  for (int i = 0; i < 200; ++i) {
    Vec w(6);
    rng.fill_normal(w);
    Vec g(6);
    h.exact_grad_into(w, g);
    if (2 * mu * (value(w) - hstar) > norm_sq(g) * (1 + 1e-9)) return false;
  }
  return true;
}

bool check_phi_lipschitz(const problems::ProblemOracle& o, std::uint64_t seed, int pairs) {
  const auto& pr = o.profile();
  double bound = (pr.ell + pr.kappa() * pr.ell) * (1 + 1e-6);
  RngStream rng(seed, StreamTag::scaffold, 103);
  Vec a(o.d1()), b(o.d1()), d(o.d1());
  for (int i = 0; i < pairs; ++i) {
    rng.fill_normal(a);
    rng.fill_normal(b);
    Vec ga = o.phi_grad(a), gb = o.phi_grad(b);
    kernels::sub(ga.data(), gb.data(), d.data(), o.d1());
    Vec ab(o.d1());
    kernels::sub(a.data(), b.data(), ab.data(), o.d1());
    double dn = norm(ab);
    if (dn == 0) continue;
    if (norm(d) > bound * dn) return false;
  }
  return true;
}

bool check_u_decay(std::uint64_t seed) {
  auto q = problems::make_quadratic_saddle(4, 4, 5.0, seed, NoiseSpec{});
  const auto& pr = q->profile();
  double lambda = 2.0 / (7.0 * pr.ell);
  double rho = 1.0 - 2.0 * pr.mu * pr.ell * lambda / (pr.mu + pr.ell);
  RngStream batch(seed, StreamTag::inner_batch, 9);
  RngStream sk(seed, StreamTag::index_sk, 9);
  RngStream init(seed, StreamTag::scaffold, 104);
  Iterate p{Vec(4), Vec(4)};
  init.fill_normal(p.x);
  init.fill_normal(p.y);
  EvalCounter ev;
  GradPair g;
  q->exact_grad_into(p, g);
  auto res = inner::concave_maximizer(*q, p.x, p.x, p.y, g.gx, g.gy, lambda, 6, 1, batch, sk, ev,
                                      true);
  for (std::size_t t = 1; t < res.u_norms.size(); ++t)
    if (res.u_norms[t] * res.u_norms[t] > rho * res.u_norms[t - 1] * res.u_norms[t - 1] * (1 + 1e-9))
      return false;
  return true;
}

bool check_martingale(std::uint64_t seed) {
  NoiseSpec ns;
  ns.kind = NoiseKind::finite_sum;
  ns.n = 40;
  auto q = problems::make_quadratic_saddle(4, 3, 3.0, seed, ns);
  RngStream rng(seed, StreamTag::scaffold, 105);
  Iterate a{Vec(4), Vec(3)}, b{Vec(4), Vec(3)};
  rng.fill_normal(a.x);
  rng.fill_normal(a.y);
  rng.fill_normal(b.x);
  rng.fill_normal(b.y);
  GradPair exact_a, exact_b;
  EvalCounter scratch;
  exact_a = problems::full_grad(*q, a, scratch);
  exact_b = problems::full_grad(*q, b, scratch);

  const int reps = 10000;
  std::size_t d = q->d1() + q->d2();
  Vec mean(d, 0.0), m2(d, 0.0);
  for (int r = 0; r < reps; ++r) {
    problems::SampleId id = q->draw_sample(rng);
    GradPair acc;
    acc.set_zero(q->d1(), q->d2());
    q->paired_diff_accum(a, b, &id, 1, acc);
    for (std::size_t i = 0; i < d; ++i) {
      double v = i < q->d1() ? acc.gx[i] : acc.gy[i - q->d1()];
      double delta = v - mean[i];
      mean[i] += delta / (r + 1);
      m2[i] += delta * (v - mean[i]);
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    double truth = i < q->d1() ? exact_a.gx[i] - exact_b.gx[i]
                               : exact_a.gy[i - q->d1()] - exact_b.gy[i - q->d1()];
    double se = std::sqrt(m2[i] / (reps - 1) / reps);
    if (std::fabs(mean[i] - truth) > 4.0 * se + 1e-12) return false;
  }
  return true;
}

bool check_finite_q1_delta(std::uint64_t seed) {
  NoiseSpec ns;
  ns.kind = NoiseKind::finite_sum;
  ns.n = 30;
  auto q = problems::make_quadratic_saddle(4, 4, 6.0, seed, ns);  // n < kappa^2
  double zeta = 0.04 / (6.0 * 6.0);
  double df = solvers::delta_f_bound(*q, Vec(4, 1.0), zeta);
  auto p = solvers::derive_params_finite(0.2, q->profile(), df, 30);
  if (p.q != 1 || p.S2 != 1) return false;
  auto tr = solvers::sreda_finite_run(*q, Vec(4, 1.0), p, seed, true, 40);
  for (const auto& row : tr.rows)
    if (row.Delta_k && *row.Delta_k != 0.0) return false;
  return true;
}

// straight-line deterministic reimplementation used to cross-check the
// noiseless q=1, S2=1 path of the main solver
bool check_noiseless_equivalence(std::uint64_t seed) {
  auto q = problems::make_quadratic_saddle(3, 3, 4.0, seed, NoiseSpec{});
  const auto& pr = q->profile();
  double zeta = 0.01 / (pr.kappa() * pr.kappa());
  double df = solvers::delta_f_bound(*q, Vec(3, 1.0), zeta);
  auto p = solvers::derive_params(0.1, pr, df);
  p.q = 1;
  p.S1 = 1;
  p.S2 = 1;
  const std::uint64_t cap = 50;
  auto tr = solvers::sreda_run(*q, Vec(3, 1.0), p, seed, true, cap);

  // reference: exact gradients everywhere, same stream layout
  Vec x(3, 1.0);
  GradPair g;
  // initializer replay (values are exact at sigma = 0)
  Vec gy0(3);
  inner::YSlice slice(*q, x);
  slice.exact_grad_into(Vec(3, 0.0), gy0);
  auto icfg = inner::isarah_config(pr.ell, pr.mu, p.zeta, norm_sq(gy0));
  RngStream init(seed, StreamTag::init, 0);
  Vec y(3, 0.0);
  for (std::uint64_t s = 1; s <= icfg.T; ++s) {
    for (std::uint64_t i = 0; i < icfg.b; ++i) init.next_u64();
    std::uint64_t tp = init.next_below(icfg.m_prime + 1);
    Vec w = y, v(3);
    Vec sel = tp == 0 ? w : Vec();
    slice.exact_grad_into(w, v);
    Vec w1 = axpy(-icfg.gamma, v, w);
    if (tp == 1) sel = w1;
    Vec wp = w;
    w = w1;
    for (std::uint64_t t = 1; t + 1 <= icfg.m_prime; ++t) {
      init.next_u64();
      Vec gw(3), gwp(3);
      slice.exact_grad_into(w, gw);
      slice.exact_grad_into(wp, gwp);
      kernels::add_scaled_diff(1.0, gw.data(), gwp.data(), v.data(), 3);
      wp = w;
      axpy_inplace(-icfg.gamma, v, w);
      if (t + 1 == tp) sel = w;
    }
    y = sel;
  }
  RngStream restart(seed, StreamTag::restart_batch);
  RngStream inner_rng(seed, StreamTag::inner_batch);
  RngStream sk_rng(seed, StreamTag::index_sk);
  for (std::uint64_t k = 0; k < cap; ++k) {
    restart.next_u64();  // the restart batch id (value unused at sigma = 0)
    q->exact_grad_into(Iterate{x, y}, g);
    Vec v = g.gx, u = g.gy;
    double eta = std::min(p.eta_num / norm(v), p.eta_cap);
    Vec xn = axpy(-eta, v, x);
    std::uint64_t sk = sk_rng.next_below(p.m + 1);
    // correction to (xn, y), then m+1 ascent steps
    inner_rng.next_u64();
    GradPair gn;
    q->exact_grad_into(Iterate{xn, y}, gn);
    Vec cv = gn.gx, cu = gn.gy;  // exact at sigma = 0: v + (g(xn,y) - g(x,y)) telescopes
    Vec yy = y, sel_y, sel_u;
    (void)cv;
    for (std::uint64_t t = 1; t <= p.m + 1; ++t) {
      axpy_inplace(p.lambda, cu, yy);
      inner_rng.next_u64();
      q->exact_grad_into(Iterate{xn, yy}, gn);
      cu = gn.gy;
      if (t == sk + 1) {
        sel_y = yy;
        sel_u = cu;
      }
    }
    x = xn;
    y = sel_y;
  }
  const auto& last = tr.rows.back();
  if (!last.phi_grad_norm) return false;
  double ref_phi = norm(q->phi_grad(x));
  return std::fabs(*last.phi_grad_norm - ref_phi) <= 1e-12 * std::max(1.0, ref_phi);
}

bool check_determinism(std::uint64_t seed) {
  NoiseSpec ns;
  ns.kind = NoiseKind::gaussian;
  ns.sigma_g = 0.5;
  auto q = problems::make_quadratic_saddle(3, 3, 3.0, seed, ns);
  double zeta = 0.04 / 9.0;
  double df = solvers::delta_f_bound(*q, Vec(3, 1.0), zeta);
  auto p = solvers::derive_params(0.2, q->profile(), df);
  auto a = solvers::sreda_run(*q, Vec(3, 1.0), p, seed, true, 10);
  auto b = solvers::sreda_run(*q, Vec(3, 1.0), p, seed, true, 10);
  return a.to_csv() == b.to_csv();
}

}  // namespace

int cli_check(const Flags&) {
  struct Check {
    const char* name;
    bool ok;
  };
  NoiseSpec gn;
  gn.kind = NoiseKind::gaussian;
  gn.sigma_g = 0.3;
  NoiseSpec fs;
  fs.kind = NoiseKind::finite_sum;
  fs.n = 25;
  auto qg = problems::make_quadratic_saddle(5, 4, 4.0, 11, gn);
  auto qf = problems::make_quadratic_saddle(5, 4, 4.0, 12, fs);

  std::vector<Check> checks;
  checks.push_back({"finite-difference gradients (gaussian noise)", check_fd_gradients(*qg, 21)});
  checks.push_back({"finite-difference gradients (finite sum)", check_fd_gradients(*qf, 22)});
  checks.push_back({"PL inequality on strongly convex quadratic", check_pl(23)});
  checks.push_back({"primal gradient Lipschitz bound", check_phi_lipschitz(*qg, 24, 2000)});
  checks.push_back({"inner ascent contraction (noiseless)", check_u_decay(25)});
  checks.push_back({"estimator increment is conditionally unbiased", check_martingale(26)});
  checks.push_back({"finite-sum q=1 estimator error identically zero", check_finite_q1_delta(27)});
  checks.push_back({"noiseless solver matches straight-line reference", check_noiseless_equivalence(28)});
  checks.push_back({"identical seed reproduces identical trace", check_determinism(29)});

  bool all = true;
  for (const auto& c : checks) {
    std::printf("%-55s %s\n", c.name, c.ok ? "pass" : "FAIL");
    all = all && c.ok;
  }
  return all ? exit_ok : exit_failed;
}

}  // namespace sreda::harness
