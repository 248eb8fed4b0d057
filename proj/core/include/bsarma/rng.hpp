#pragma once

#include <cstdint>
#include <random>

namespace bsarma {

// One splitmix64 step. Used to turn (seed, stream id) pairs into engine
// seeds so that replication streams are independent of execution order.
std::uint64_t splitmix64(std::uint64_t& state);

// Engine for one reproducible stream. mt19937_64 is fully specified by the
// standard, so identical (seed, stream_id) gives identical draws everywhere.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream_id = 0);

// Uniform draw on the open interval (0,1).
double uniform01(std::mt19937_64& gen);

// Standard normal via Box-Muller. Stateless: consumes exactly two uniforms.
double standard_normal(std::mt19937_64& gen);

// Gamma(shape, 1) draw, Marsaglia-Tsang squeeze method. Shapes below one use
// the boost gamma(a) = gamma(a+1) * U^(1/a), valid for all positive shapes.
double gamma_draw(std::mt19937_64& gen, double shape);

}  // namespace bsarma
