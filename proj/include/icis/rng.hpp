#pragma once

#include <cstdint>

#include "icis/poly.hpp"

namespace icis {

/// Small deterministic generator (splitmix64) so that seeded runs are
/// byte-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }

  long range(long lo, long hi) {  // inclusive
    return lo + (long)below((std::uint64_t)(hi - lo + 1));
  }

  /// Uniform element; rationals use numerators/denominators up to `height`.
  FieldElem elem(Field f, long height = 20) {
    if (f.is_rational()) {
      long num = range(-height, height);
      long den = range(1, height);
      return f.from_mpq(mpq_class((long)num, (long)den));
    }
    return f.from_index(below(f.spec().order()));
  }

  FieldElem nonzero_elem(Field f, long height = 20) {
    for (int i = 0; i < 1000; ++i) {
      FieldElem e = elem(f, height);
      if (!e.is_zero()) return e;
    }
    return f.one();
  }

 private:
  std::uint64_t state_;
};

}  // namespace icis
