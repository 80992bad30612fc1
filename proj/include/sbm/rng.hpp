#pragma once

#include <cstdint>
#include <random>

namespace sbm {

// Mixes a seed and a stream index into a child seed (splitmix64 finalizer).
std::uint64_t derive_child_seed(std::uint64_t seed, std::uint64_t index);

// Deterministic random stream. The same seed always yields the same variate
// sequence; streams obtained through split() with distinct indices are
// decorrelated by construction and never share state with their parent.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  RngStream split(std::uint64_t index) const;

  std::uint64_t next_u64();

  // Uniform draw strictly inside (0,1): never returns an endpoint, so logs of
  // the result are always finite.
  double uniform();
  double uniform(double lo, double hi);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace sbm
