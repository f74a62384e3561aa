#pragma once
// Counter-based deterministic RNG with named streams.
//
// A draw is a pure function of (seed, stream tag, salt, counter), so any
// stream can be re-spawned and replayed exactly, and distinct tags give
// statistically independent streams. Batch indices, the inner stopping
// index s_k and gradient noise all live on separate streams.

#include <cstdint>

#include "sreda/core.hpp"

namespace sreda {

enum class StreamTag : std::uint64_t {
  init = 1,
  restart_batch = 2,
  inner_batch = 3,
  index_sk = 4,
  baseline = 5,
  noise = 6,
  scaffold = 7,
};

class RngStream {
 public:
  RngStream() = default;
  RngStream(std::uint64_t seed, StreamTag tag, std::uint64_t salt = 0);

  std::uint64_t next_u64();
  // uniform in [0, 1)
  double next_uniform();
  // uniform integer in [0, bound)
  std::uint64_t next_below(std::uint64_t bound);
  // standard normal (Box-Muller; consumes two uniforms per pair)
  double next_normal();
  void fill_normal(Vec& out);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

RngStream spawn_stream(std::uint64_t seed, StreamTag tag, std::uint64_t salt = 0);

}  // namespace sreda
