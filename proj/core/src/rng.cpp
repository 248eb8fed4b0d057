#include "bsarma/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bsarma {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t state = seed;
  std::uint64_t a = splitmix64(state);
  state ^= 0x6a09e667f3bcc909ULL + stream_id;
  std::uint64_t b = splitmix64(state);
  return std::mt19937_64(a ^ (b * 0x9e3779b97f4a7c15ULL + stream_id));
}

double uniform01(std::mt19937_64& gen) {
  // 53 random bits centered in (0,1); never returns an endpoint.
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& gen) {
  double u1 = uniform01(gen);
  double u2 = uniform01(gen);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double gamma_draw(std::mt19937_64& gen, double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw std::domain_error("gamma_draw: shape must be positive");
  if (shape < 1.0) {
    double u = uniform01(gen);
    return gamma_draw(gen, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = standard_normal(gen);
    double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    double v = t * t * t;
    double u = uniform01(gen);
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace bsarma
