#include "sreda/rng.hpp"

#include <cmath>

namespace sreda {
namespace {

// splitmix64 finalizer
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, StreamTag tag, std::uint64_t salt) {
  std::uint64_t k = mix(seed);
  k = mix(k ^ (static_cast<std::uint64_t>(tag) * 0xd6e8feb86659fd93ULL));
  key_ = mix(k ^ (salt * 0xa0761d6478bd642fULL));
}

std::uint64_t RngStream::next_u64() { return mix(key_ ^ (counter_++ * 0x9e3779b97f4a7c15ULL)); }

double RngStream::next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  require(bound > 0, "next_below: bound must be positive");
  // rejection sampling on the top bits, no modulo bias
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % bound;
}

double RngStream::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u1, u2;
  do {
    u1 = next_uniform();
  } while (u1 <= 0.0);
  u2 = next_uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 6.283185307179586476925286766559 * u2;
  spare_normal_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

void RngStream::fill_normal(Vec& out) {
  for (double& v : out) v = next_normal();
}

RngStream spawn_stream(std::uint64_t seed, StreamTag tag, std::uint64_t salt) {
  return RngStream(seed, tag, salt);
}

}  // namespace sreda
