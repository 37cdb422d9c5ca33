// Hand-rolled property-test generators.
#pragma once

#include "ohlab/numkit.hpp"

#include <cstdint>

namespace testing {

// Calls body(rng, case_index) for `count` cases, each with its own stream.
template <typename Body>
void for_cases(std::uint64_t seed, int count, Body&& body) {
  ohlab::Rng master(seed);
  for (int k = 0; k < count; ++k) {
    ohlab::Rng rng(master.next());
    body(rng, k);
  }
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
