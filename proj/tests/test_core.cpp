#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sreda/core.hpp"
#include "sreda/rng.hpp"

using namespace sreda;

TEST_CASE("streams replay exactly and separate by tag and salt") {
  RngStream a(42, StreamTag::inner_batch, 0);
  RngStream b(42, StreamTag::inner_batch, 0);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(42, StreamTag::restart_batch, 0);
  RngStream d(42, StreamTag::inner_batch, 1);
  RngStream e(43, StreamTag::inner_batch, 0);
  RngStream f(42, StreamTag::inner_batch, 0);
  int same_c = 0, same_d = 0, same_e = 0;
  for (int i = 0; i < 64; ++i) {
    std::uint64_t r = f.next_u64();
    same_c += c.next_u64() == r;
    same_d += d.next_u64() == r;
    same_e += e.next_u64() == r;
  }
  CHECK(same_c == 0);
  CHECK(same_d == 0);
  CHECK(same_e == 0);
}

TEST_CASE("next_below stays in range and is roughly uniform") {
  RngStream r(7, StreamTag::index_sk);
  int counts[5] = {0};
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    auto v = r.next_below(5);
    REQUIRE(v < 5);
    ++counts[v];
  }
  for (int c : counts) CHECK(std::fabs(c - n / 5.0) < 5 * std::sqrt(n / 5.0));
}

TEST_CASE("normal draws have standard moments") {
  RngStream r(11, StreamTag::noise);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    double x = r.next_normal();
    s += x;
    s2 += x * x;
  }
  double mean = s / n, var = s2 / n - mean * mean;
  CHECK(std::fabs(mean) < 0.01);
  CHECK(std::fabs(var - 1.0) < 0.02);
}

TEST_CASE("uniforms live in [0,1)") {
  RngStream r(3, StreamTag::scaffold);
  for (int i = 0; i < 10000; ++i) {
    double u = r.next_uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("vector helpers") {
  Vec a{1, 2, 3}, b{4, -5, 6};
  CHECK(dot(a, b) == 12.0);
  CHECK(norm_sq(a) == 14.0);
  CHECK(norm(Vec{3, 4}) == 5.0);
  Vec y = axpy(2.0, a, b);
  CHECK(y == Vec{6, -1, 12});
  CHECK(b == Vec{4, -5, 6});  // axpy returns a copy
  axpy_inplace(-1.0, a, y);
  CHECK(y == Vec{5, -3, 9});
  CHECK(all_finite(y));
  y[1] = std::nan("");
  CHECK(!all_finite(y));
  CHECK_THROWS_AS(dot(a, Vec{1}), ContractViolation);
}

TEST_CASE("eval counter conventions") {
  EvalCounter c;
  c.add_batch(10);
  CHECK(c.physical == 10);
  CHECK(c.paper == 10);
  c.add_paired(4);  // a paired correction term: two points per sample
  CHECK(c.physical == 18);
  CHECK(c.paper == 14);
  c.add(1, 0);
  CHECK(c.physical == 19);
  CHECK(c.paper == 14);
}
