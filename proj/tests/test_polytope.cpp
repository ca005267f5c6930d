#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "vinberg/linalg.hpp"
#include "vinberg/polytope.hpp"

using namespace vinberg;
using namespace vinberg::testing;

namespace {

std::vector<IndexSet> facet_sets(const std::vector<FaceDescriptor>& faces) {
  std::vector<IndexSet> out;
  for (const auto& f : faces) out.push_back(f.facets);
  return out;
}

}  // namespace

TEST_CASE("build_polytope accepts Tits data and rejects bad data") {
  const auto a2 = build_polytope(MatrixQ::Identity(2, 2), mq({{2, -1}, {-1, 2}}));
  CHECK(a2.dim() == 1);
  CHECK(a2.cartan().exact_entries() == mq({{2, -1}, {-1, 2}}));

  const auto ideal = build_polytope(MatrixQ::Identity(3, 3), mq({{2, -2, -2}, {-2, 2, -2}, {-2, -2, 2}}));
  CHECK(ideal.dim() == 2);

  try {
    build_polytope(mq({{1, 0}, {1, 0}, {0, 1}}), mq({{2, 2, 0}, {0, 0, 2}}));
    FAIL("expected RedundantFacet");
  } catch (const PolytopeError& e) {
    CHECK(e.kind() == PolytopeError::Kind::RedundantFacet);
  }
  try {
    build_polytope(mq({{1, 0}, {0, 1}}), mq({{1, -1}, {-1, 2}}));
    FAIL("expected Normalization");
  } catch (const PolytopeError& e) {
    CHECK(e.kind() == PolytopeError::Kind::Normalization);
    CHECK(e.facet() == 0);
  }
  try {
    build_polytope(mq({{1, 0, 0}, {0, 1, 0}}), mq({{2, -1}, {-1, 2}, {0, 0}}));
    FAIL("expected NotReduced");
  } catch (const PolytopeError& e) {
    CHECK(e.kind() == PolytopeError::Kind::NotReduced);
  }
  try {
    build_polytope(mq({{1}, {-1}}), mq({{2, -2}}));
    FAIL("expected EmptyInterior");
  } catch (const PolytopeError& e) {
    CHECK(e.kind() == PolytopeError::Kind::EmptyInterior);
  }
  CHECK_THROWS_AS(build_polytope(MatrixQ::Identity(2, 2), mq({{2, 1}, {1, 2}})), InvalidCartan);
}

TEST_CASE("tits_polytope") {
  const auto point = tits_polytope(CartanMatrix::validate(mq({{2}})));
  CHECK(point.dim() == 0);
  const auto ideal = ideal_triangle();
  CHECK(ideal.cartan().exact_entries() == MatrixQ(ideal.alpha_exact() * ideal.v_exact()));
}

TEST_CASE("defines_face examples") {
  const auto ideal = ideal_triangle();
  const auto interior = defines_face(ideal, {});
  REQUIRE(interior);
  CHECK(interior->dim == 2);
  CHECK(((ideal.alpha_exact() * *interior->exact_witness).array() < 0).all());

  const auto vertex = defines_face(ideal, {0, 1});
  REQUIRE(vertex);
  CHECK(vertex->dim == 0);
  const VectorQ w = *vertex->exact_witness;
  CHECK(w(0) == 0);
  CHECK(w(1) == 0);
  CHECK(w(2) < 0);

  const auto square = euclidean_square();
  CHECK_FALSE(defines_face(square, {0, 2}));
  CHECK(defines_face(square, {0, 1}));

  const auto empty = defines_face(ideal, {0, 1, 2});
  REQUIRE(empty);
  CHECK(empty->dim == -1);
}

TEST_CASE("enumerate_faces counts") {
  for (int n = 1; n <= 5; ++n) {
    MatrixQ a = MatrixQ::Constant(n, n, -3);
    a.diagonal().setConstant(2);
    const auto faces = enumerate_faces(tits_polytope(CartanMatrix::validate(a)));
    if (n == 1) {
      CHECK(facet_sets(faces) == std::vector<IndexSet>{{}, {0}});
    } else {
      CHECK(faces.size() == (1u << n) - 1);
    }
  }
  const auto sq = enumerate_faces(euclidean_square());
  CHECK(sq.size() == 9);
  int verts = 0;
  for (const auto& f : sq) verts += f.dim == 0;
  CHECK(verts == 4);
  CHECK_THROWS_AS(enumerate_faces(ideal_triangle(), 2), PreconditionError);
}

TEST_CASE("links and face classes") {
  const auto t237 = triangle_237();
  const auto v12 = defines_face(t237, {0, 1});
  REQUIRE(v12);
  const auto l = link(t237, *v12);
  CHECK(l.dim() == 1);
  CHECK((l.cartan().entries() - t237.cartan().entries().topLeftCorner(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(classify_face(t237, *v12).elliptic());

  const auto ideal = ideal_triangle();
  const auto v23 = defines_face(ideal, {1, 2});
  const auto lv = link(ideal, *v23);
  CHECK(lv.cartan().exact_entries() == mq({{2, -2}, {-2, 2}}));
  const FaceClass c = classify_face(ideal, *v23);
  CHECK(c.sign == TypeSign::Zero);
  CHECK(c.parabolic);
  CHECK(c.cartan_rank == 1);
  CHECK(std::string(to_string(c)) == "parabolic");

  const auto facet = defines_face(ideal, {0});
  CHECK(link(ideal, *facet).size() == 1);
  CHECK(link(ideal, *facet).dim() == 0);

  const auto p6 = triangle_product(6);
  const FaceClass c6 = classify_face(p6, *defines_face(p6, {1, 2}));
  CHECK(c6.sign == TypeSign::Negative);
  CHECK(c6.loxodromic);

  const auto seg = tits_polytope(CartanMatrix::validate(mq({{2, -3}, {-2, 2}})));
  CHECK(classify_face(seg, *defines_face(seg, {0, 1})).sign == TypeSign::Negative);
}

TEST_CASE("bigger_face") {
  const auto t = triangle_334();
  const auto r = bigger_face(t, {}, {0, 1});
  CHECK(r.zero.facets.empty());
  CHECK(r.zero_positive.facets == IndexSet{0, 1});
  CHECK(r.zero_negative.facets.empty());

  const auto ideal = ideal_triangle();
  const auto r2 = bigger_face(ideal, {}, {1, 2});
  CHECK(r2.zero.facets == IndexSet{1, 2});

  CHECK_THROWS_AS(bigger_face(ideal, {0}, {0}), PreconditionError);
  CHECK_THROWS_AS(bigger_face(ideal, {0}, {1}), PreconditionError);
  CHECK_THROWS_AS(bigger_face(euclidean_square(), {}, {0, 2}), PreconditionError);
}

TEST_CASE("bigger_face holds on every admissible pair of the corpus and random polytopes") {
  std::vector<CoxeterPolytope> ps;
  for (auto& e : corpus())
    if (e.polytope.exact() && e.polytope.size() <= 5) ps.push_back(e.polytope);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 6; ++i) ps.push_back(random_explicit_polytope(rng, 2 + i % 2, 6));
  int checked = 0;
  for (const auto& p : ps) {
    const int n = p.size();
    for (const auto& f : enumerate_faces(p)) {
      // split S_f into T1, T2 along every sub-mask with T1 orthogonal to T2
      const unsigned fm = mask_from_subset(f.facets);
      for (unsigned m1 = fm;; m1 = (m1 - 1) & fm) {
        const IndexSet t1 = subset_from_mask(m1, n), t2 = subset_from_mask(fm & ~m1, n);
        bool orth = true;
        for (int s : t1)
          for (int u : t2) orth = orth && p.cartan().is_zero_entry(s, u);
        if (orth) {
          CHECK_NOTHROW(bigger_face(p, t1, t2));
          ++checked;
        }
        if (m1 == 0) break;
      }
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("face lattice agrees with brute-force enumeration and the dual criterion") {
  std::vector<CoxeterPolytope> ps;
  for (auto& e : corpus())
    if (e.polytope.exact() && e.polytope.size() <= 6) ps.push_back(e.polytope);
  ps.push_back(euclidean_square());
  std::mt19937_64 rng(11);
  for (int i = 0; i < 10; ++i) ps.push_back(random_explicit_polytope(rng, 2 + i % 2, 7));
  for (const auto& p : ps) {
    const auto expected = brute_force_faces(p.alpha_exact());
    std::map<IndexSet, int> got;
    for (const auto& f : enumerate_faces(p)) got[f.facets] = f.dim;
    CHECK(got == expected);
    const int n = p.size();
    for (unsigned mask = 0; mask + 1 < (1u << n); ++mask) {
      const IndexSet s = subset_from_mask(mask, n);
      CHECK(defines_face(p, s).has_value() == dual_face_condition(p.alpha_exact(), s));
    }
  }
}

TEST_CASE("link Cartan is the restriction and maximal boundary faces are the perfect ones") {
  for (const auto& e : corpus()) {
    const auto& p = e.polytope;
    if (!p.exact() || classify_type(p.cartan()).sign != TypeSign::Negative) continue;
    const auto faces = enumerate_faces(p);
    std::vector<const FaceDescriptor*> boundary;
    for (const auto& f : faces) {
      CHECK(f.link_cartan.exact_entries() == restrict(p.cartan(), f.facets).exact_entries());
      if (!f.facets.empty()) {
        const auto l = link(p, f);
        CHECK(l.cartan().exact_entries() == f.link_cartan.exact_entries());
      }
      if (f.type.sign != TypeSign::Positive) boundary.push_back(&f);
    }
    for (const auto* f : boundary) {
      bool maximal = true;
      for (const auto* g : boundary) {
        if (g == f) continue;
        if (std::includes(f->facets.begin(), f->facets.end(), g->facets.begin(), g->facets.end()))
          maximal = false;
      }
      CAPTURE(e.name);
      CHECK(maximal == is_perfect(link(p, *f)).holds);
    }
  }
}

TEST_CASE("perfect and quasiperfect predicates on the corpus") {
  for (const auto& e : corpus()) {
    CAPTURE(e.name);
    CHECK(is_perfect(e.polytope).holds == e.perfect);
    CHECK(is_quasiperfect(e.polytope).holds == e.quasiperfect);
  }
  const auto p6 = is_quasiperfect(triangle_product(6));
  REQUIRE(p6.offending);
  CHECK(p6.offending->facets == IndexSet{1, 2});
  const auto ideal = is_perfect(ideal_triangle());
  CHECK_FALSE(ideal.holds);
  CHECK(is_2perfect(ideal_triangle()).holds);
  CHECK(is_2perfect(triangle_237()).holds);
  CHECK(is_2perfect(tetrahedron_336()).holds);
}

TEST_CASE("quasiperfect negative-type corpus polytopes are loxodromic irreducible") {
  for (const auto& e : corpus()) {
    const auto& p = e.polytope;
    if (!is_quasiperfect(p).holds || classify_type(p.cartan()).sign != TypeSign::Negative) continue;
    CAPTURE(e.name);
    CHECK(irreducible_components(p.cartan()).size() == 1);
    const int r = p.exact() ? linalg::rank<Rational>(p.cartan().exact_entries())
                            : linalg::rank<double>(p.cartan().entries(), p.eps());
    CHECK(r == p.ambient());
  }
}

TEST_CASE("joins and decomposition") {
  const auto seg1 = segment(9), seg2 = segment(5);
  const auto j = join(seg1, seg2);
  CHECK(j.dim() == 3);
  CHECK(j.cartan().exact_entries() == mq({{2, -1, 0, 0}, {-9, 2, 0, 0}, {0, 0, 2, -1}, {0, 0, -5, 2}}));
  const auto js = decompose(j);
  REQUIRE(js);
  REQUIRE(js->factors.size() == 2);
  CHECK(js->blocks == std::vector<IndexSet>{{0, 1}, {2, 3}});
  CHECK(js->factors[0].alpha_exact() == seg1.alpha_exact());
  CHECK(js->factors[0].v_exact() == seg1.v_exact());
  CHECK(js->factors[1].v_exact() == seg2.v_exact());

  // a square with a reducible Cartan matrix is two-dimensional, so it is not a join of segments
  CHECK_FALSE(decompose(euclidean_square()));
  CHECK_FALSE(decompose(triangle_237()));

  const auto tb = tits_polytope(CartanMatrix::validate(
      mq({{2, -2, -2, 0}, {-2, 2, -2, 0}, {-2, -2, 2, 0}, {0, 0, 0, 2}})));
  const auto tjs = decompose(tb);
  REQUIRE(tjs);
  REQUIRE(tjs->factors.size() == 2);
  CHECK(tjs->factors[0].cartan().exact_entries() == ideal_triangle().cartan().exact_entries());
  CHECK(tjs->factors[0].alpha_exact() == MatrixQ::Identity(3, 3));
  CHECK(tjs->factors[1].dim() == 0);

  const auto jj = join(ideal_triangle(), triangle_product(6));
  const auto jjs = decompose(jj);
  REQUIRE(jjs);
  CHECK(jjs->factors[1].v_exact() == triangle_product(6).v_exact());

  // each generator of one factor fixes the other factor's subspace pointwise
  for (int s = 0; s < 2; ++s) {
    const MatrixQ sigma = MatrixQ::Identity(4, 4) - j.v_exact().col(s) * j.alpha_exact().row(s);
    CHECK(sigma.bottomRightCorner(2, 2) == MatrixQ::Identity(2, 2));
    CHECK(sigma.topRightCorner(2, 2).isZero());
    CHECK(sigma.bottomLeftCorner(2, 2).isZero());
  }
}
