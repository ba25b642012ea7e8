#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "kcd/types.hpp"

namespace kcd {

// A block of coordinate indices selected without replacement. Order is the
// selection order, which downstream solvers treat as significant.
using BlockSelection = std::vector<Index>;

namespace rng {

// Unbiased uniform draw from [0, bound) by masked rejection. Hand-rolled so
// the stream is identical across standard libraries, which
// std::uniform_int_distribution does not guarantee.
inline std::uint64_t uniform_below(std::mt19937_64& engine,
                                   std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: zero bound");
  if (bound == 1) return 0;
  std::uint64_t mask = bound - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    const std::uint64_t draw = engine() & mask;
    if (draw < bound) return draw;
  }
}

// Standard normal via the basic Box-Muller transform, one variate per pair of
// uniforms. Chosen over std::normal_distribution for cross-library
// reproducibility; the discarded second variate keeps the state machine
// trivial.
inline double standard_normal(std::mt19937_64& engine) {
  const double u1 = (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace rng

// Deterministic stream of coordinate selections over [0, domain). A fixed
// seed fixes the entire stream, so a classical run and an s-step run over the
// same seed — which issue the same sequence of next/next_block calls, merely
// grouped differently — select identical coordinate sequences.
class CoordinateStream {
 public:
  CoordinateStream(std::uint64_t seed, Index domain)
      : engine_(seed), domain_(domain) {
    if (domain <= 0) {
      throw std::invalid_argument("CoordinateStream: domain must be positive");
    }
  }

  Index domain() const noexcept { return domain_; }

  // Uniform draw with replacement.
  Index next() {
    return static_cast<Index>(
        rng::uniform_below(engine_, static_cast<std::uint64_t>(domain_)));
  }

  // Uniform draw of b distinct coordinates via a partial Fisher-Yates pass:
  // exactly b bounded draws regardless of collisions (each bounded draw may
  // consume several raw engine words through masked rejection).
  BlockSelection next_block(Index b) {
    if (b <= 0 || b > domain_) {
      throw std::invalid_argument("CoordinateStream: bad block size");
    }
    pool_.resize(static_cast<std::size_t>(domain_));
    for (Index i = 0; i < domain_; ++i) pool_[static_cast<std::size_t>(i)] = i;
    BlockSelection block(static_cast<std::size_t>(b));
    for (Index j = 0; j < b; ++j) {
      const Index pick =
          j + static_cast<Index>(rng::uniform_below(
                  engine_, static_cast<std::uint64_t>(domain_ - j)));
      std::swap(pool_[static_cast<std::size_t>(j)],
                pool_[static_cast<std::size_t>(pick)]);
      block[static_cast<std::size_t>(j)] = pool_[static_cast<std::size_t>(j)];
    }
    return block;
  }

 private:
  std::mt19937_64 engine_;
  Index domain_;
  std::vector<Index> pool_;
};

}  // namespace kcd
