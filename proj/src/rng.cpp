#include "sbm/rng.hpp"

namespace sbm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_child_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

RngStream RngStream::split(std::uint64_t index) const {
  return RngStream(derive_child_seed(seed_, index));
}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
  // 53-bit mantissa, offset by half an ulp to stay inside the open interval.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

}  // namespace sbm
