#include "seqdist/rng.hpp"

#include <bit>

namespace seqdist {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t stream) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = a ^ (trial * 0xd1b54a32d192ed03ULL);
  std::uint64_t b = splitmix64(s);
  s = b ^ (stream * 0x8cb92ba72f3d8dd7ULL);
  return splitmix64(s);
}

Engine make_engine(std::uint64_t master, std::uint64_t trial, std::uint64_t stream) {
  return Engine(derive_seed(master, trial, stream));
}

std::uint64_t uniform_below(Engine& eng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const int bits = std::bit_width(bound - 1);
  for (;;) {
    const std::uint64_t x = eng() >> (64 - bits);
    if (x < bound) return x;
  }
}

}  // namespace seqdist
