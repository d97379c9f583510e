#pragma once

#include <cstdint>

#include "bsptensor/core.hpp"

namespace bsptensor {

// xorshift64 (Marsaglia's 64-bit shift-register generator, triple 13/7/17).
// Fully specified so random inputs reproduce bit-for-bit everywhere; the
// state must be nonzero, so seed 0 is remapped to a fixed constant.
class Xorshift64 {
 public:
  explicit Xorshift64(std::uint64_t seed)
      : state_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

  std::uint64_t next() {
    std::uint64_t x = state_;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    return state_ = x;
  }

  // Uniform in [0,1), 53 mantissa bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [-1,1).
  double symmetric() { return 2.0 * uniform() - 1.0; }

  Complex next_complex() {
    const double re = symmetric();
    const double im = symmetric();
    return Complex(re, im);
  }

 private:
  std::uint64_t state_;
};

}  // namespace bsptensor
