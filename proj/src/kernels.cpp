#include "sreda/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace sreda::kernels {
namespace {

// Reductions keep four independent accumulators striding by 4 and combine
// them as (acc0+acc2)+(acc1+acc3), matching the AVX2 horizontal sum.
double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc[0] += a[i] * b[i];
    acc[1] += a[i + 1] * b[i + 1];
    acc[2] += a[i + 2] * b[i + 2];
    acc[3] += a[i + 3] * b[i + 3];
  }
  double tail = 0.0;
  for (; i < n; ++i) tail += a[i] * b[i];
  return ((acc[0] + acc[2]) + (acc[1] + acc[3])) + tail;
}

double norm_sq_scalar(const double* a, std::size_t n) { return dot_scalar(a, a, n); }

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void sub_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void add_scaled_diff_scalar(double alpha, const double* a, const double* b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * (a[i] - b[i]);
}

void scale_scalar(double alpha, double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] *= alpha;
}

const Ops* pick() {
  const char* env = std::getenv("SREDA_KERNELS");
  if (env && std::strcmp(env, "scalar") == 0) return &scalar_ops;
  if (env && std::strcmp(env, "avx2") == 0) return &avx2_ops;
  return avx2_available() ? &avx2_ops : &scalar_ops;
}

}  // namespace

const Ops scalar_ops = {dot_scalar,        norm_sq_scalar, axpy_scalar,
                        sub_scalar,        add_scaled_diff_scalar,
                        scale_scalar,      "scalar"};

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Ops& active() {
  static const Ops* ops = pick();
  return *ops;
}

}  // namespace sreda::kernels
