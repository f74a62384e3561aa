#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sreda/estimator.hpp"

using namespace sreda;
using problems::NoiseKind;
using problems::NoiseSpec;

namespace {

NoiseSpec gaussian(double sg) {
  NoiseSpec n;
  n.kind = NoiseKind::gaussian;
  n.sigma_g = sg;
  return n;
}

NoiseSpec fsum(std::size_t count) {
  NoiseSpec n;
  n.kind = NoiseKind::finite_sum;
  n.n = count;
  return n;
}

Iterate random_point(std::size_t d1, std::size_t d2, RngStream& rng) {
  Iterate p{Vec(d1), Vec(d2)};
  rng.fill_normal(p.x);
  rng.fill_normal(p.y);
  return p;
}

}  // namespace

TEST_CASE("noiseless restart and updates track the exact gradient") {
  auto q = problems::make_quadratic_saddle(4, 4, 3.0, 11, NoiseSpec{});
  RngStream rng(1, StreamTag::scaffold, 0);
  EvalCounter evals;
  Iterate p = random_point(4, 4, rng);
  auto st = estimator::init_restart(*q, p, 50, rng, evals);
  GradPair exact;
  for (int step = 0; step < 10; ++step) {
    Iterate next = random_point(4, 4, rng);
    estimator::recursive_update(st, *q, next, 3, rng, evals);
    q->exact_grad_into(next, exact);
    for (int j = 0; j < 4; ++j) {
      CHECK(st.v[j] == doctest::Approx(exact.gx[j]).epsilon(1e-10));
      CHECK(st.u[j] == doctest::Approx(exact.gy[j]).epsilon(1e-10));
    }
    CHECK(st.anchor.x == next.x);
    CHECK(st.anchor.y == next.y);
  }
}

TEST_CASE("eval accounting: batches are physical, pairs are double") {
  auto q = problems::make_quadratic_saddle(3, 3, 2.0, 5, gaussian(0.3));
  RngStream rng(2, StreamTag::scaffold, 0);
  EvalCounter evals;
  Iterate p = random_point(3, 3, rng);
  auto st = estimator::init_restart(*q, p, 40, rng, evals);
  CHECK(evals.physical == 40);
  CHECK(evals.paper == 40);
  estimator::recursive_update(st, *q, random_point(3, 3, rng), 7, rng, evals);
  CHECK(evals.physical == 40 + 14);
  CHECK(evals.paper == 40 + 7);
}

TEST_CASE("finite-sum restart uses the full gradient when the batch covers it") {
  auto q = problems::make_quadratic_saddle(3, 3, 2.0, 7, fsum(15));
  RngStream rng(3, StreamTag::scaffold, 0);
  EvalCounter evals;
  Iterate p = random_point(3, 3, rng);
  auto st = estimator::init_restart(*q, p, 1000, rng, evals);
  CHECK(evals.physical == 15);  // charged n, not the requested 1000
  GradPair exact;
  q->exact_grad_into(p, exact);
  for (int j = 0; j < 3; ++j) {
    CHECK(st.v[j] == doctest::Approx(exact.gx[j]).epsilon(1e-14));
    CHECK(st.u[j] == doctest::Approx(exact.gy[j]).epsilon(1e-14));
  }
}

TEST_CASE("restart batch mean is unbiased with shrinking error") {
  auto q = problems::make_quadratic_saddle(3, 3, 2.0, 9, gaussian(0.5));
  RngStream rng(4, StreamTag::scaffold, 0);
  Iterate p = random_point(3, 3, rng);
  GradPair exact;
  q->exact_grad_into(p, exact);
  double s2tot = q->profile().sigma * q->profile().sigma;
  for (std::uint64_t s1 : {100u, 1600u}) {
    const int reps = 200;
    double mse = 0;
    Vec mean(3, 0.0), meany(3, 0.0);
    for (int r = 0; r < reps; ++r) {
      EvalCounter evals;
      auto st = estimator::init_restart(*q, p, s1, rng, evals);
      for (int j = 0; j < 3; ++j) {
        mse += (st.v[j] - exact.gx[j]) * (st.v[j] - exact.gx[j]) / reps;
        mse += (st.u[j] - exact.gy[j]) * (st.u[j] - exact.gy[j]) / reps;
        mean[j] += st.v[j] / reps;
        meany[j] += st.u[j] / reps;
      }
    }
    // E||mean - grad||^2 = sigma^2 / s1; allow generous monte-carlo slack
    CHECK(mse <= 2.0 * s2tot / s1);
    CHECK(mse >= 0.4 * s2tot / s1);
    for (int j = 0; j < 3; ++j) {
      CHECK(std::fabs(mean[j] - exact.gx[j]) <= 5 * std::sqrt(s2tot / (s1 * reps)));
      CHECK(std::fabs(meany[j] - exact.gy[j]) <= 5 * std::sqrt(s2tot / (s1 * reps)));
    }
  }
}

TEST_CASE("recursive update telescopes: error stays at the restart level") {
  // with additive gaussian noise the paired differences cancel the noise
  // exactly, so after any number of updates the estimate equals the exact
  // gradient at the new anchor plus the original restart error
  auto q = problems::make_quadratic_saddle(4, 3, 3.0, 13, gaussian(0.8));
  RngStream rng(5, StreamTag::scaffold, 0);
  EvalCounter evals;
  Iterate p0 = random_point(4, 3, rng);
  auto st = estimator::init_restart(*q, p0, 30, rng, evals);
  GradPair exact0;
  q->exact_grad_into(p0, exact0);
  Vec err_v(4), err_u(3);
  for (int j = 0; j < 4; ++j) err_v[j] = st.v[j] - exact0.gx[j];
  for (int j = 0; j < 3; ++j) err_u[j] = st.u[j] - exact0.gy[j];
  for (int step = 0; step < 20; ++step) {
    Iterate next = random_point(4, 3, rng);
    estimator::recursive_update(st, *q, next, 2, rng, evals);
    GradPair exact;
    q->exact_grad_into(next, exact);
    for (int j = 0; j < 4; ++j)
      CHECK(st.v[j] - exact.gx[j] == doctest::Approx(err_v[j]).epsilon(1e-10));
    for (int j = 0; j < 3; ++j)
      CHECK(st.u[j] - exact.gy[j] == doctest::Approx(err_u[j]).epsilon(1e-10));
  }
}

TEST_CASE("finite-sum recursive update is unbiased for the gradient difference") {
  auto q = problems::make_quadratic_saddle(3, 3, 2.0, 21, fsum(40));
  RngStream rng(6, StreamTag::scaffold, 0);
  Iterate a = random_point(3, 3, rng), b = random_point(3, 3, rng);
  GradPair ga, gb;
  q->exact_grad_into(a, ga);
  q->exact_grad_into(b, gb);
  const int reps = 4000;
  Vec mean(3, 0.0);
  for (int r = 0; r < reps; ++r) {
    EvalCounter evals;
    estimator::EstimatorState st;
    st.v = Vec(3, 0.0);
    st.u = Vec(3, 0.0);
    st.anchor = a;
    estimator::recursive_update(st, *q, b, 5, rng, evals);
    axpy_inplace(1.0 / reps, st.v, mean);
  }
  for (int j = 0; j < 3; ++j)
    CHECK(std::fabs(mean[j] - (gb.gx[j] - ga.gx[j])) <= 0.02);
}
