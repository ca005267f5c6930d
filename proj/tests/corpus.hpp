#pragma once

#include <random>
#include <string>
#include <vector>

#include "vinberg/coxeter.hpp"
#include "vinberg/polytope.hpp"

namespace vinberg::testing {

struct CorpusEntry {
  std::string name;
  CoxeterPolytope polytope;
  bool quasiperfect;  ///< expected, from the vertex links worked out by hand
  bool perfect;
};

CoxeterPolytope triangle_237();          ///< Gram matrix of (2,3,7), approximate
CoxeterPolytope triangle_23inf();        ///< Gram matrix of (2,3,inf), exact
CoxeterPolytope ideal_triangle();        ///< 4I - 2J
CoxeterPolytope triangle_334();          ///< asymmetric rational Cartan, orders (3,3,4)
CoxeterPolytope triangle_product(Rational p);  ///< orders (3,3,inf) with product p on {2,3}
CoxeterPolytope affine_a2_simplex();     ///< A~2 diagram, negative type
CoxeterPolytope tetrahedron_336();       ///< linear diagram 3,3,6 with one ideal vertex
CoxeterPolytope tetrahedron_339();       ///< linear diagram 3,3,inf with product 9
CoxeterPolytope euclidean_square();      ///< square in R^3 with two A~1 blocks
CoxeterPolytope segment(Rational p = 9); ///< [[2,-1],[-p,2]]

/// Hand-built polytopes; the rational ones are exact.
std::vector<CorpusEntry> corpus();

/// Seeded random irreducible negative-type Cartan matrices of size 3..5.
std::vector<MatrixQ> random_negative_cartans(std::uint64_t seed, int count);

}  // namespace vinberg::testing
