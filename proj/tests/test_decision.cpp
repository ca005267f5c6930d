#include <doctest.h>

#include "corpus.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "vinberg/decision.hpp"
#include "vinberg/linalg.hpp"

using namespace vinberg;
using namespace vinberg::testing;

TEST_CASE("finite volume examples") {
  SUBCASE("(2,3,7) perfect") {
    const auto v = decide_finite_volume(triangle_237());
    CHECK(v.answer);
    CHECK(v.routes.size() == 2);
    CHECK(v.routes_agree);
    CHECK_FALSE(v.offending_vertex);
    CHECK_FALSE(v.negative_face);
    REQUIRE(v.rank);
    CHECK(v.rank->irreducible);
    CHECK(v.rank->cartan_rank == 3);
  }
  SUBCASE("ideal triangle") {
    const auto v = decide_finite_volume(ideal_triangle());
    CHECK(v.answer);
    CHECK_FALSE(is_perfect(ideal_triangle()).holds);
  }
  SUBCASE("product 6 vertex") {
    // Facets 2 and 3 meet at the vertex with a_23 a_32 = 6 > 4.
    const auto p = triangle_product(6);
    const auto v = decide_finite_volume(p);
    CHECK_FALSE(v.answer);
    REQUIRE(v.offending_vertex);
    REQUIRE(v.negative_face);
    CHECK(v.offending_vertex->facets == v.negative_face->facets);
    CHECK(v.negative_face->dim == 0);
    const auto& s = v.negative_face->facets;
    REQUIRE(s.size() == 2);
    const MatrixQ a = p.cartan().exact_entries();
    CHECK(a(s[0], s[1]) * a(s[1], s[0]) == 6);
  }
  SUBCASE("joins have a negative type factor face") {
    const auto v = decide_finite_volume(join(ideal_triangle(), ideal_triangle()));
    CHECK_FALSE(v.answer);
    REQUIRE(v.negative_face);
    CHECK(v.negative_face->facets.size() == 3);
  }
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(decide_finite_volume(euclidean_square()), NotNegativeType);
  CHECK_THROWS_AS(decide_unique_domain(segment(4)), NotNegativeType);
  CHECK_THROWS_AS(decide_min_domain_equals_vinberg(tits_polytope(CartanMatrix::validate(mq({{2, -1}, {-1, 2}})))),
                  NotNegativeType);
  CHECK_THROWS_AS(decide_limit_set_fills_boundary_necessary(euclidean_square()), PreconditionError);
}

TEST_CASE("unique domain") {
  CHECK(decide_unique_domain(triangle_237()).answer);
  const auto seg = decide_unique_domain(segment(9));
  CHECK_FALSE(seg.answer);
  CHECK(decide_finite_volume(segment(9)).answer);
  CHECK_FALSE(seg.notes.empty());
  const auto p6 = decide_unique_domain(triangle_product(6));
  CHECK_FALSE(p6.answer);
  CHECK(p6.offending_vertex);
}

TEST_CASE("minimal domain equals the Vinberg domain") {
  const auto jj = decide_min_domain_equals_vinberg(join(ideal_triangle(), ideal_triangle()));
  CHECK(jj.answer);
  CHECK(jj.factors.size() == 2);
  const auto j6 = decide_min_domain_equals_vinberg(join(ideal_triangle(), triangle_product(6)));
  CHECK_FALSE(j6.answer);
  REQUIRE(j6.factors.size() == 2);
  CHECK(j6.factors[0].quasiperfect);
  CHECK_FALSE(j6.factors[1].quasiperfect);
  CHECK(j6.factors[1].facets == IndexSet{3, 4, 5});
  const auto single = decide_min_domain_equals_vinberg(triangle_237());
  CHECK(single.answer);
  CHECK(single.factors.size() == 1);
}

TEST_CASE("limit set fills the boundary, necessary condition") {
  const auto a = decide_limit_set_fills_boundary_necessary(triangle_237());
  CHECK(a.answer);
  CHECK(a.group_kind == GroupKind::Large);
  const auto b = decide_limit_set_fills_boundary_necessary(affine_a2_simplex());
  CHECK_FALSE(b.answer);
  CHECK(b.group_kind == GroupKind::Affine);
  CHECK(decide_finite_volume(affine_a2_simplex()).answer);
  const auto c = decide_limit_set_fills_boundary_necessary(triangle_product(6));
  CHECK_FALSE(c.answer);
  CHECK(c.group_kind == GroupKind::Large);
}

TEST_CASE("corpus consistency") {
  for (const auto& e : corpus()) {
    CAPTURE(e.name);
    const auto& p = e.polytope;
    if (classify_type(p.cartan()).sign != TypeSign::Negative) continue;
    const auto fv = decide_finite_volume(p);
    CHECK(fv.answer == e.quasiperfect);
    if (fv.answer) {
      REQUIRE(fv.rank);
      CHECK(fv.rank->irreducible);
      CHECK(fv.rank->cartan_rank == p.dim() + 1);
    }
    const auto ud = decide_unique_domain(p);
    if (ud.answer) CHECK(decide_min_domain_equals_vinberg(p).answer);
    // Negative type forces a large or affine group, never a finite one.
    const auto g = classify_group(coxeter_from_cartan(p.cartan()), p.eps());
    for (GroupKind k : g.component_kinds) CHECK(k != GroupKind::Spherical);
  }
}

TEST_CASE("route agreement on random Tits polytopes") {
  int yes = 0, no = 0;
  for (const auto& a : random_negative_cartans(2024, 60)) {
    const auto p = tits_polytope(CartanMatrix::validate(a));
    const auto v = decide_finite_volume(p);
    CHECK(v.routes_agree);
    (v.answer ? yes : no) += 1;
  }
  CHECK(yes > 0);
  CHECK(no > 0);
}

TEST_CASE("volume evidence is attached, not decisive") {
  VolumeProtocol proto;
  proto.depths = {4, 8};
  proto.samples = 20000;
  const auto e = volume_evidence(triangle_product(6), proto);
  CHECK(e.values.size() == 2);
  CHECK(e.increasing);
  const auto f = volume_evidence(ideal_triangle(), proto);
  CHECK(f.values.back() == doctest::Approx(3.14159).epsilon(0.05));
}
