#pragma once
// Shared numeric types and oracle-call accounting.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sreda/kernels.hpp"

namespace sreda {

using Vec = std::vector<double>;

struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const char* msg) {
  if (!cond) throw ContractViolation(msg);
}

// (x, y) pair of the minimax iterate.
struct Iterate {
  Vec x;
  Vec y;
};

// Pair of partial gradients (gx = d/dx, gy = d/dy).
struct GradPair {
  Vec gx;
  Vec gy;

  void set_zero(std::size_t d1, std::size_t d2) {
    gx.assign(d1, 0.0);
    gy.assign(d2, 0.0);
  }
};

inline double dot(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "dot: dimension mismatch");
  return kernels::dot(a.data(), b.data(), a.size());
}

inline double norm_sq(const Vec& a) { return kernels::norm_sq(a.data(), a.size()); }
inline double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }

// a*alpha + b
inline Vec axpy(double alpha, const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "axpy: dimension mismatch");
  Vec out = b;
  kernels::axpy(alpha, a.data(), out.data(), out.size());
  return out;
}

inline void axpy_inplace(double alpha, const Vec& a, Vec& b) {
  require(a.size() == b.size(), "axpy: dimension mismatch");
  kernels::axpy(alpha, a.data(), b.data(), b.size());
}

inline bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

// Counts stochastic-gradient oracle calls. One call = one gradient-pair
// evaluation of one component at one point ("physical"). The "paper"
// column counts one per sample instead, so a paired correction term
// costs 2 physical calls but 1 paper call.
struct EvalCounter {
  std::uint64_t physical = 0;
  std::uint64_t paper = 0;

  void add(std::uint64_t phys, std::uint64_t pap) {
    physical += phys;
    paper += pap;
  }
  void add_batch(std::uint64_t s) { add(s, s); }
  void add_paired(std::uint64_t s) { add(2 * s, s); }
};

}  // namespace sreda
