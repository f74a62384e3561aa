#include "sreda/linalg.hpp"

#include <cmath>

namespace sreda::linalg {

void matvec(const Vec& m, std::size_t rows, std::size_t cols, const double* x, double* out) {
  for (std::size_t i = 0; i < rows; ++i) out[i] = kernels::dot(m.data() + i * cols, x, cols);
}

void matvec_t(const Vec& m, std::size_t rows, std::size_t cols, const double* x, double* out) {
  for (std::size_t j = 0; j < cols; ++j) out[j] = 0.0;
  for (std::size_t i = 0; i < rows; ++i) kernels::axpy(x[i], m.data() + i * cols, out, cols);
}

Vec solve(Vec a, std::size_t n, Vec b) {
  require(a.size() == n * n && b.size() == n, "solve: dimension mismatch");
  std::vector<std::size_t> piv(n);
  for (std::size_t i = 0; i < n; ++i) piv[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::fabs(a[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      double v = std::fabs(a[i * n + k]);
      if (v > best) best = v, p = i;
    }
    if (best == 0.0) throw InputError("solve: singular matrix");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
      std::swap(b[k], b[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      double f = a[i * n + k] / a[k * n + k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      b[i] -= f * b[k];
    }
  }
  Vec x(n);
  for (std::size_t ir = n; ir-- > 0;) {
    double s = b[ir];
    for (std::size_t j = ir + 1; j < n; ++j) s -= a[ir * n + j] * x[j];
    x[ir] = s / a[ir * n + ir];
  }
  return x;
}

}  // namespace sreda::linalg
