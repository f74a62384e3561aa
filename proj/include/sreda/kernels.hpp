#pragma once
// Dense double-precision kernels used by every inner loop.
//
// Two implementations: a scalar reference and an AVX2 variant selected at
// runtime. Both accumulate reductions in the same 4-lane order so results
// are bit-identical; the equivalence tests assert exact equality.

#include <cstddef>
#include <string>

namespace sreda::kernels {

struct Ops {
  double (*dot)(const double*, const double*, std::size_t);
  double (*norm_sq)(const double*, std::size_t);
  // y[i] += alpha * x[i]
  void (*axpy)(double, const double*, double*, std::size_t);
  // out[i] = a[i] - b[i]
  void (*sub)(const double*, const double*, double*, std::size_t);
  // y[i] += alpha * (a[i] - b[i])
  void (*add_scaled_diff)(double, const double*, const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  const char* name;
};

// Scalar reference kernels (4-lane accumulation order).
extern const Ops scalar_ops;
// AVX2 kernels; only valid to call when avx2_available().
extern const Ops avx2_ops;

bool avx2_available();

// Active implementation. Chosen once: AVX2 when the CPU supports it,
// overridable with SREDA_KERNELS=scalar|avx2.
const Ops& active();

inline double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
inline double norm_sq(const double* a, std::size_t n) { return active().norm_sq(a, n); }
inline void axpy(double alpha, const double* x, double* y, std::size_t n) { active().axpy(alpha, x, y, n); }
inline void sub(const double* a, const double* b, double* out, std::size_t n) { active().sub(a, b, out, n); }
inline void add_scaled_diff(double alpha, const double* a, const double* b, double* y, std::size_t n) {
  active().add_scaled_diff(alpha, a, b, y, n);
}
inline void scale(double alpha, double* a, std::size_t n) { active().scale(alpha, a, n); }

}  // namespace sreda::kernels
