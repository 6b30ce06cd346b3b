#pragma once
// Deterministic seeded channel values. The verifier draws nonzero elements of
// F_p per (receiver, transmitter, mode); the simulator derives complex
// Gaussian mode tables from the same generator family.

#include <cstdint>
#include <vector>

#include "bia/fp61.hpp"

namespace bia {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent sub-seed for a named stream of a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
}

// Nonzero field values h(p, q, m), one per (receiver, transmitter, mode).
struct GenericChannelAssignment {
  int K = 0;
  int modes = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> values;  // ((p-1)*K + (q-1))*modes + m

  std::uint64_t value(int p, int q, int m) const {
    return values[(std::size_t(p - 1) * K + (q - 1)) * modes + m];
  }
  std::uint64_t& value(int p, int q, int m) {
    return values[(std::size_t(p - 1) * K + (q - 1)) * modes + m];
  }
};

inline GenericChannelAssignment make_generic_channel(int K, int modes, std::uint64_t seed) {
  GenericChannelAssignment ch;
  ch.K = K;
  ch.modes = modes;
  ch.seed = seed;
  ch.values.resize(std::size_t(K) * K * modes);
  std::uint64_t state = splitmix64(seed ^ 0x42494131ULL);
  for (auto& v : ch.values) {
    state = splitmix64(state);
    v = 1 + state % (fp61::kP - 1);  // uniform nonzero
  }
  return ch;
}

}  // namespace bia
