#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "random_cartan.hpp"
#include "support.hpp"
#include "vinberg/cartan.hpp"
#include "vinberg/lp.hpp"

using namespace vinberg;
using namespace vinberg::testing;

namespace {

// Smallest real part over the spectrum: the distinguished eigenvalue of a Z-matrix block.
double eigen_lambda(const MatrixXd& block) {
  Eigen::EigenSolver<MatrixXd> es(block, false);
  return es.eigenvalues().real().minCoeff();
}

// Exists X >= 0, X != 0 with A X >= 0? Exact LP: maximize sum X, -A X <= 0, sum X <= 1.
bool has_nonneg_supersolution(const MatrixQ& a) {
  const auto n = a.rows();
  MatrixQ lhs(n + 1, n);
  lhs << -a, MatrixQ::Ones(1, n);
  VectorQ rhs = VectorQ::Zero(n + 1);
  rhs(n) = 1;
  const auto r = lp::maximize<Rational>(lhs, rhs, VectorQ::Ones(n));
  return r.status == lp::Status::Optimal && r.value > 0;
}

MatrixQ permute(const MatrixQ& a, const std::vector<int>& p) {
  MatrixQ out(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out(i, j) = a(p[i], p[j]);
  return out;
}

}  // namespace

TEST_CASE("validate accepts the basic examples and labels orders") {
  auto one = CartanMatrix::validate(mq({{2}}));
  CHECK(one.size() == 1);
  auto a2 = CartanMatrix::validate(mq({{2, -1}, {-1, 2}}));
  CHECK(a2.order(0, 1) == 3);
  auto g2 = CartanMatrix::validate(mq({{2, -1}, {-3, 2}}));
  CHECK(g2.order(0, 1) == 6);
  CHECK(g2.order(1, 0) == 6);
  auto b2 = CartanMatrix::validate(mq({{2, q(-1, 2)}, {-4, 2}}));
  CHECK(b2.order(0, 1) == 4);
  auto inf = CartanMatrix::validate(mq({{2, -3}, {-2, 2}}));
  CHECK(inf.order(0, 1) == kInfiniteOrder);
  CHECK(CartanMatrix::validate(mq({{2, 0}, {0, 2}})).order(0, 1) == 2);
}

TEST_CASE("validate reports each violated condition with its position") {
  try {
    CartanMatrix::validate(mq({{2, -1}, {0, 2}}));
    FAIL("expected InvalidCartan");
  } catch (const InvalidCartan& e) {
    REQUIRE(e.violations().size() == 1);
    CHECK(e.violations()[0].kind == CartanViolation::Kind::ZeroPattern);
    CHECK(e.violations()[0].row == 1);
    CHECK(e.violations()[0].col == 0);
    CHECK(std::string(e.what()).find("(2,1)") != std::string::npos);
  }
  CHECK_THROWS_AS(CartanMatrix::validate(mq({{3}})), InvalidCartan);
  CHECK_THROWS_AS(CartanMatrix::validate(mq({{2, 1}, {1, 2}})), InvalidCartan);
  // product 1/2 is not of the form 4cos^2(pi/k) with k in {2,3,4,6}
  CHECK_THROWS_AS(CartanMatrix::validate(mq({{2, q(-1, 2)}, {-1, 2}})), InvalidCartan);
  CHECK_THROWS_AS(CartanMatrix::validate(MatrixQ(2, 3)), InvalidCartan);
}

TEST_CASE("approximate validation matches irrational orders") {
  const double c5 = 2 * std::cos(M_PI / 5), c7 = 2 * std::cos(M_PI / 7);
  MatrixXd m(2, 2);
  m << 2, -c5, -c5, 2;
  CHECK(CartanMatrix::validate(m).order(0, 1) == 5);
  m << 2, -c7, -c7, 2;
  auto a = CartanMatrix::validate(m);
  CHECK(a.order(0, 1) == 7);
  CHECK(a.max_product_residual() < 1e-12);
  m << 2, -1.7, -1.7, 2;
  CHECK_THROWS_AS(CartanMatrix::validate(m), InvalidCartan);
  m << 2, -2, -2.5, 2;
  CHECK(CartanMatrix::validate(m).order(0, 1) == kInfiniteOrder);
}

TEST_CASE("irreducible components") {
  CHECK(irreducible_components(CartanMatrix::validate(mq({{2, -1}, {-1, 2}}))) ==
        std::vector<IndexSet>{{0, 1}});
  CHECK(irreducible_components(CartanMatrix::validate(mq({{2, 0}, {0, 2}}))) ==
        std::vector<IndexSet>{{0}, {1}});
  auto a = CartanMatrix::validate(mq({{2, -2, 0}, {-2, 2, 0}, {0, 0, 2}}));
  CHECK(irreducible_components(a) == std::vector<IndexSet>{{0, 1}, {2}});
  auto b = CartanMatrix::validate(mq({{2, 0, -1}, {0, 2, 0}, {-1, 0, 2}}));
  CHECK(irreducible_components(b) == std::vector<IndexSet>{{0, 2}, {1}});
}

TEST_CASE("classify_type on the reference matrices") {
  auto check = [](const MatrixQ& m, TypeSign sign, double lambda) {
    for (Mode mode : {Mode::Exact, Mode::Approx}) {
      const TypeTag t = classify_type(CartanMatrix::validate(m, mode));
      CHECK(t.sign == sign);
      REQUIRE(t.blocks.size() == 1);
      CHECK(t.blocks[0].lambda == doctest::Approx(lambda).epsilon(1e-8));
      CHECK(t.blocks[0].lambda == doctest::Approx(eigen_lambda(to_double(m))).epsilon(1e-8));
    }
  };
  check(mq({{2, -1}, {-1, 2}}), TypeSign::Positive, 1.0);
  check(mq({{2, -2}, {-2, 2}}), TypeSign::Zero, 0.0);
  check(mq({{2, -3}, {-3, 2}}), TypeSign::Negative, -1.0);
  check(mq({{2, -2, -2}, {-2, 2, -2}, {-2, -2, 2}}), TypeSign::Negative, -2.0);
}

TEST_CASE("classify_type aggregates blocks") {
  auto t = classify_type(CartanMatrix::validate(mq({{2, -2, 0}, {-2, 2, 0}, {0, 0, 2}})));
  CHECK(t.sign == TypeSign::Mixed);
  REQUIRE(t.blocks.size() == 2);
  CHECK(t.blocks[0].sign == TypeSign::Zero);
  CHECK(t.blocks[1].sign == TypeSign::Positive);
  CHECK(classify_type(CartanMatrix::validate(mq({{2, 0}, {0, 2}}))).sign == TypeSign::Positive);
}

TEST_CASE("approximate zero type carries a warning") {
  MatrixXd m(2, 2);
  m << 2, -2, -2, 2;
  const auto t = classify_type(CartanMatrix::validate(m));
  CHECK(t.sign == TypeSign::Zero);
  CHECK(t.warning);
}

TEST_CASE("witness vectors") {
  auto w = witness_vector(CartanMatrix::validate(mq({{2, -2}, {-2, 2}})));
  REQUIRE(w.exact_x);
  CHECK(*w.exact_x == vq({1, 1}));
  CHECK(w.ax.isZero());
  w = witness_vector(CartanMatrix::validate(mq({{2, -1}, {-1, 2}})));
  CHECK(*w.exact_x == vq({1, 1}));
  CHECK(w.ax == VectorXd::Ones(2));
  w = witness_vector(CartanMatrix::validate(mq({{2, -3}, {-3, 2}})));
  CHECK(*w.exact_x == vq({1, 1}));
  CHECK(w.ax == -VectorXd::Ones(2));
  CHECK_THROWS_AS(witness_vector(CartanMatrix::validate(mq({{2, -2, 0}, {-2, 2, 0}, {0, 0, 2}}))),
                  PreconditionError);
}

TEST_CASE("restrict and split_by_type") {
  const auto a = CartanMatrix::validate(mq({{2, -2, -2}, {-2, 2, -2}, {-2, -2, 2}}));
  CHECK(restrict(a, {0, 1, 2}).exact_entries() == a.exact_entries());
  CHECK(restrict(a, {0, 1}).exact_entries() == mq({{2, -2}, {-2, 2}}));
  const auto e = restrict(a, {});
  CHECK(e.size() == 0);
  CHECK(classify_type(e).sign == TypeSign::Positive);

  const auto split = split_by_type(CartanMatrix::validate(mq({{2, -1}, {-1, 2}})), {0, 1});
  CHECK(split.positive == IndexSet{0, 1});
  CHECK(split.zero.empty());
  CHECK(split.negative.empty());
  CHECK(split_by_type(a, {}).positive.empty());
  const auto b = CartanMatrix::validate(mq({{2, -2, 0}, {-2, 2, 0}, {0, 0, 2}}));
  const auto sb = split_by_type(b, {0, 1, 2});
  CHECK(sb.zero == IndexSet{0, 1});
  CHECK(sb.positive == IndexSet{2});
  CHECK(sb.negative.empty());
}

TEST_CASE("random matrices: witness, supersolution LP, exact/approx agreement, permutation") {
  std::mt19937_64 rng(20241016);
  int checked_agreement = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 4;
    const MatrixQ m = random_cartan(rng, n);
    const auto a = CartanMatrix::validate(m);
    const TypeTag tag = classify_type(a);

    if (tag.sign != TypeSign::Mixed) {
      const auto w = witness_vector(a);
      REQUIRE(w.exact_x);
      const VectorQ ax = m * *w.exact_x;
      for (Eigen::Index i = 0; i < n; ++i) {
        CHECK((*w.exact_x)(i) > 0);
        CHECK(ax(i).sign() == (tag.sign == TypeSign::Positive ? 1 : tag.sign == TypeSign::Zero ? 0 : -1));
      }
    }
    if (has_nonneg_supersolution(m)) CHECK(tag.sign != TypeSign::Negative);

    const TypeTag approx = classify_type(CartanMatrix::validate(m, Mode::Approx));
    for (std::size_t b = 0; b < tag.blocks.size(); ++b) {
      if (std::abs(approx.blocks[b].lambda) > 10 * kDefaultEps) {
        CHECK(approx.blocks[b].sign == tag.blocks[b].sign);
        ++checked_agreement;
      }
    }

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(classify_type(CartanMatrix::validate(permute(m, perm))).sign == tag.sign);
  }
  CHECK(checked_agreement > 100);
}

TEST_CASE("proper restrictions of irreducible non-negative types are positive") {
  const std::vector<MatrixQ> cases = {
      mq({{2, -2}, {-2, 2}}),
      mq({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}),
      mq({{2, -1, 0, -1}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {-1, 0, -1, 2}}),
      mq({{2, -1, 0}, {-2, 2, -1}, {0, -2, 2}}),
      mq({{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}),
  };
  for (const auto& m : cases) {
    const auto a = CartanMatrix::validate(m);
    const int n = a.size();
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask)
      CHECK(classify_type(restrict(a, subset_from_mask(mask, n))).sign == TypeSign::Positive);
  }
}
