#include "lab/rng.hpp"

#include <cmath>

namespace lab {
namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

std::uint64_t mix64b(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdULL;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ULL;
  z ^= z >> 33;
  return z;
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) {
  key_ = mix64(mix64(seed) ^ mix64(stream + 1) ^ mix64b(substream + 1));
}

std::uint64_t Rng::next_u64() {
  std::uint64_t z = key_ + (++ctr_) * kGamma;
  return mix64(z);
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform01(); }

double Rng::normal() {
  // Box-Muller; u1 shifted away from 0 so log stays finite.
  double u1 = uniform01();
  double u2 = uniform01();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  return r * std::cos(kTwoPi * u2);
}

Vec Rng::gaussian_vec(int d) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = normal();
  return v;
}

Direction Rng::sphere_uniform(int d) {
  // A Gaussian vector is rotation invariant; renormalizing gives the uniform
  // direction. Resample on the (measure-zero) near-zero event.
  for (;;) {
    Vec g = gaussian_vec(d);
    if (g.norm() > 1e-12) return Direction(g);
  }
}

}  // namespace lab
