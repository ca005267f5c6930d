#pragma once

#include <random>

#include "vinberg/types.hpp"

namespace vinberg::testing {

/// Random rational matrix satisfying the Cartan axioms. Products are drawn from
/// {1, 2, 3} (finite orders 3, 4, 6) and {4, 9/2, 5, 6, 9} (infinite order),
/// then split asymmetrically as A_st = -p/c, A_ts = -c.
inline MatrixQ random_cartan(std::mt19937_64& rng, int n, double zero_prob = 0.35) {
  static const Rational products[] = {1, 2, 3, 4, Rational(9, 2), 5, 6, 9};
  static const Rational splits[] = {1, 1, 2, Rational(1, 2), 3, Rational(1, 3), Rational(3, 2)};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick_p(0, 7), pick_c(0, 6);
  MatrixQ a = MatrixQ::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    a(s, s) = 2;
    for (int t = s + 1; t < n; ++t) {
      if (u(rng) < zero_prob) continue;
      const Rational p = products[pick_p(rng)];
      const Rational c = splits[pick_c(rng)];
      a(s, t) = -p / c;
      a(t, s) = -c;
    }
  }
  return a;
}

}  // namespace vinberg::testing
