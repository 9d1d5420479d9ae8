#pragma once

// Seeded generators for property suites. Built on std::mt19937_64, whose
// output sequence is fixed by the standard, so draws are reproducible
// across platforms.

#include <cstdint>
#include <random>

#include "deformq/coeffring.hpp"
#include "deformq/formal.hpp"

namespace dq {

class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  long integer(long lo, long hi);
  /// p/q with |p| <= max_num, 1 <= q <= max_den.
  Rational rational(long max_num = 5, long max_den = 4);

  PolyRep poly(int dim, int max_degree, int max_terms);
  /// Trig polynomial with frequencies in [-max_freq, max_freq]; real-valued when asked.
  TrigRep trig(int dim, int max_freq, int max_modes, bool real_valued = true);

  FormalFunction formal_poly(int dim, int N, int max_degree, int max_terms);
  FormalFunction formal_trig(int dim, int N, int max_freq, int max_modes);

 private:
  std::mt19937_64 engine_;
};

}  // namespace dq
