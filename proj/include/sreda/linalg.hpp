#pragma once
// Small dense linear algebra helpers (row-major).

#include <cstddef>

#include "sreda/core.hpp"
#include "sreda/rng.hpp"

namespace sreda::linalg {

// out = M x, M is rows x cols row-major
void matvec(const Vec& m, std::size_t rows, std::size_t cols, const double* x, double* out);
// out = M^T x
void matvec_t(const Vec& m, std::size_t rows, std::size_t cols, const double* x, double* out);

// Spectral norm (largest |eigenvalue|) of a symmetric n x n matrix by
// power iteration on M^2. apply must compute out = M x.
template <typename Apply>
double sym_spectral_norm(std::size_t n, Apply&& apply, RngStream& rng, int iters = 300);

// Smallest eigenvalue of a symmetric matrix, via power iteration on
// (shift*I - M) with shift >= ||M||.
template <typename Apply>
double sym_min_eig(std::size_t n, Apply&& apply, RngStream& rng, int iters = 300);

// Solve A x = b for symmetric or general square A (Gaussian elimination
// with partial pivoting). Throws InputError if singular.
Vec solve(Vec a, std::size_t n, Vec b);

// --- template bodies ---

template <typename Apply>
double sym_spectral_norm(std::size_t n, Apply&& apply, RngStream& rng, int iters) {
  Vec v(n), w(n);
  rng.fill_normal(v);
  double nv = norm(v);
  if (nv == 0.0) v[0] = 1.0, nv = 1.0;
  kernels::scale(1.0 / nv, v.data(), n);
  double lam2 = 0.0;
  for (int it = 0; it < iters; ++it) {
    apply(v.data(), w.data());
    apply(w.data(), v.data());  // v <- M^2 v_old
    lam2 = norm(v);
    if (lam2 == 0.0) return 0.0;
    kernels::scale(1.0 / lam2, v.data(), n);
  }
  return std::sqrt(lam2);
}

template <typename Apply>
double sym_min_eig(std::size_t n, Apply&& apply, RngStream& rng, int iters) {
  double nrm = sym_spectral_norm(n, apply, rng, iters);
  double shift = nrm * 1.01 + 1e-12;
  Vec v(n), w(n);
  rng.fill_normal(v);
  double nv = norm(v);
  if (nv == 0.0) v[0] = 1.0, nv = 1.0;
  kernels::scale(1.0 / nv, v.data(), n);
  double lam = 0.0;
  for (int it = 0; it < iters; ++it) {
    apply(v.data(), w.data());
    // w <- shift*v - M v
    for (std::size_t i = 0; i < n; ++i) w[i] = shift * v[i] - w[i];
    lam = norm(w);
    if (lam == 0.0) break;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / lam;
  }
  return shift - lam;
}

}  // namespace sreda::linalg
