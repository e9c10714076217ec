#pragma once

#include <cstdint>
#include <random>

namespace tkcopula {

//! SplitMix64 finalizer.
constexpr std::uint64_t
splitmix64(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

//! Seed of stream `index` under `master`. Each Monte Carlo replicate owns
//! one stream, so results do not depend on how replicates are scheduled.
constexpr std::uint64_t
stream_seed(std::uint64_t master, std::uint64_t index)
{
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

using Engine = std::mt19937_64;

inline Engine
make_engine(std::uint64_t seed)
{
  return Engine(seed);
}

//! Uniform draw on the open interval (0,1): 53 random mantissa bits
//! shifted by half a unit.
inline double
uniform_open01(Engine& engine)
{
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace tkcopula
