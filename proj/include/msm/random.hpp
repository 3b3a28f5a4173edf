#pragma once
// Seeding rules shared by every sampler.
//
// A run seed fans out into child seeds with child_seed(seed, stream).
// The mixing is splitmix64 applied twice, so nearby (seed, stream) pairs
// give unrelated 64-bit states. Each child drives its own mt19937_64.

#include <cstdint>
#include <random>

namespace msm {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

// Stream indices used when one seed has to feed several model factors.
enum class Stream : std::uint64_t {
  Gaussian = 1,
  Bounce = 2,
  Amplitude = 3,
  Durations = 4,
  Delay = 5,
};

constexpr std::uint64_t child_seed(std::uint64_t seed, Stream s) {
  return child_seed(seed, static_cast<std::uint64_t>(s));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Standard normal draw by the polar method. Written out so that paths do
// not depend on the standard library's normal_distribution internals.
double standard_normal(Rng& rng);

// Uniform on the open interval (0, 1).
double uniform_open(Rng& rng);

// Gamma(shape, 1) variate (Marsaglia-Tsang, with the boost for shape < 1).
double standard_gamma(Rng& rng, double shape);

}  // namespace msm
