#pragma once
// Synthetic minimax problem instances with known constants (ell, mu, sigma)
// and closed-form y*(x), Phi(x), grad Phi(x), behind a uniform sampled-
// gradient oracle.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "sreda/core.hpp"
#include "sreda/rng.hpp"

#include "json.hpp"

namespace sreda::problems {

// One oracle call is identified by a SampleId: a fresh 64-bit draw in the
// stochastic setting, a component index in [0, n) in the finite-sum
// setting. Evaluating the same id at two points uses common random
// numbers.
using SampleId = std::uint64_t;

struct SmoothnessProfile {
  double ell = 1.0;    // average gradient-Lipschitz constant
  double mu = 1.0;     // strong-concavity modulus in y
  double sigma = 0.0;  // gradient variance bound
  double kappa() const { return ell / mu; }
};

struct Capabilities {
  bool exact_grad = false;
  bool y_star = false;
  bool phi = false;
  bool phi_star = false;
  bool finite_sum = false;
};

class ProblemOracle {
 public:
  virtual ~ProblemOracle() = default;

  std::size_t d1() const { return d1_; }
  std::size_t d2() const { return d2_; }
  const SmoothnessProfile& profile() const { return profile_; }
  const Capabilities& caps() const { return caps_; }
  std::size_t component_count() const { return n_; }

  SampleId draw_sample(RngStream& rng) const {
    return caps_.finite_sum ? rng.next_below(n_) : rng.next_u64();
  }

  virtual void component_grad_into(const Iterate& p, SampleId id, GradPair& out) const = 0;
  virtual double component_value(const Iterate& p, SampleId id) const = 0;

  // exact grad of f (diagnostics; zero oracle cost)
  virtual void exact_grad_into(const Iterate& p, GradPair& out) const;
  virtual double f_value(const Iterate& p) const;
  virtual Vec y_star(const Vec& x) const;
  virtual Vec phi_grad(const Vec& x) const;
  virtual double phi_value(const Vec& x) const;
  virtual double phi_star() const;

  // acc += (1/s) * sum_i [G(a; ids[i]) - G(b; ids[i])]
  virtual void paired_diff_accum(const Iterate& a, const Iterate& b, const SampleId* ids,
                                 std::size_t s, GradPair& acc) const;

 protected:
  std::size_t d1_ = 0, d2_ = 0, n_ = 0;
  SmoothnessProfile profile_;
  Capabilities caps_;
};

enum class NoiseKind { none, gaussian, finite_sum };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::none;
  double sigma_g = 0.0;   // per-coordinate std of the additive gaussian mode
  std::size_t n = 0;      // component count, finite-sum mode
  double spread = 0.2;    // relative size of component perturbations
};

// f(x, y) = 1/2 x'Ax + x'By - mu/2 |y|^2 + c'y.
// A symmetric (possibly indefinite), B coupling, exact
// y*(x) = (B'x + c)/mu and grad Phi(x) = Ax + B y*(x).
class QuadraticSaddle final : public ProblemOracle {
 public:
  Vec A;  // d1 x d1 row-major, symmetric
  Vec B;  // d1 x d2 row-major
  Vec c;  // d2
  double mu = 1.0;
  NoiseSpec noise;
  std::uint64_t noise_seed = 0;
  // finite-sum component perturbations (averages are exactly zero)
  std::vector<Vec> dA, dB, dc;

  void component_grad_into(const Iterate& p, SampleId id, GradPair& out) const override;
  double component_value(const Iterate& p, SampleId id) const override;
  void exact_grad_into(const Iterate& p, GradPair& out) const override;
  double f_value(const Iterate& p) const override;
  Vec y_star(const Vec& x) const override;
  Vec phi_grad(const Vec& x) const override;
  double phi_value(const Vec& x) const override;
  double phi_star() const override;
  void paired_diff_accum(const Iterate& a, const Iterate& b, const SampleId* ids, std::size_t s,
                         GradPair& acc) const override;

  // argmin of Phi when it is bounded below
  const std::optional<Vec>& phi_argmin() const { return phi_argmin_; }

  // recompute declared profile, capabilities and Phi* from the matrices
  void finalize(double declared_ell);

  nlohmann::json to_json() const;
  static std::shared_ptr<QuadraticSaddle> from_json(const nlohmann::json& j);

 private:
  std::optional<double> phi_star_;
  std::optional<Vec> phi_argmin_;
};

// Random instance with condition number kappa_target (within 1%) and a
// Phi bounded below so delta_f is exactly computable. Declared ell is the
// spectral norm of the block Hessian [[A, B], [B', -mu I]].
std::shared_ptr<QuadraticSaddle> make_quadratic_saddle(std::size_t d1, std::size_t d2,
                                                       double kappa_target, std::uint64_t seed,
                                                       NoiseSpec noise = {});

// counted oracle operations ------------------------------------------------

// batch average of G(point; xi) over batch_size fresh samples
GradPair stoch_grad(const ProblemOracle& o, const Iterate& point, std::uint64_t batch_size,
                    RngStream& rng, EvalCounter& evals);

GradPair component_grad(const ProblemOracle& o, const Iterate& point, SampleId id,
                        EvalCounter& evals);

// both points evaluated with the same sample (common random numbers)
std::pair<GradPair, GradPair> component_grad_paired(const ProblemOracle& o, const Iterate& point,
                                                    const Iterate& paired_point, SampleId id,
                                                    EvalCounter& evals);

// exact grad of f; costs n calls in finite-sum mode, zero in analytic mode
GradPair full_grad(const ProblemOracle& o, const Iterate& point, EvalCounter& evals);

}  // namespace sreda::problems
