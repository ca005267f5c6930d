#pragma once

#include <initializer_list>

#include "vinberg/types.hpp"

namespace vinberg::testing {

inline MatrixQ mq(std::initializer_list<std::initializer_list<Rational>> rows) {
  MatrixQ m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const auto& x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

inline VectorQ vq(std::initializer_list<Rational> xs) {
  VectorQ v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

inline Rational q(long long p, long long d = 1) { return Rational(p, d); }

}  // namespace vinberg::testing
