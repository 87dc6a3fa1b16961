#pragma once

#include <cstdint>

namespace biphase {

// splitmix64 step: advances the state by the golden gamma and returns a
// mixed output word. Counter-based: the k-th output is a pure function of
// (initial state, k), so streams can be replayed and split freely.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derives an independent stream key from (master_seed, trial, round).
// Each coordinate is absorbed through a full mix so that neighbouring
// trials/rounds land in unrelated parts of the state space.
inline std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t trial,
                                std::uint64_t round) {
  std::uint64_t s = master_seed;
  std::uint64_t h = splitmix64_next(s);
  s = h ^ (0xd6e8feb86659fd93ull * (trial + 1));
  h = splitmix64_next(s);
  s = h ^ (0xa5cb3a1d8f2b4e61ull * (round + 1));
  return splitmix64_next(s);
}

class StreamRng {
 public:
  explicit StreamRng(std::uint64_t key) : state_(key) {}

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // uniform in the open interval (0,1); never returns 0 or 1, so it is safe
  // under log().
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace biphase
