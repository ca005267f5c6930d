#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "corpus.hpp"
#include "vinberg/geometry.hpp"
#include "vinberg/hilbert.hpp"

using namespace vinberg;
using namespace vinberg::testing;

namespace {

constexpr double kPi = std::numbers::pi;

VectorXd v2(double x, double y) {
  VectorXd v(2);
  v << x, y;
  return v;
}

ConvexBody unit_ball(int d) { return ConvexBody::ellipsoid(VectorXd::Zero(d), MatrixXd::Identity(d, d)); }

ConvexBody random_polygon(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> ang(0, 2 * kPi), rad(0.6, 1.4);
  std::vector<VectorXd> pts;
  for (int i = 0; i < n; ++i) {
    const double t = ang(rng), r = rad(rng);
    pts.push_back(v2(r * std::cos(t), r * std::sin(t)));
  }
  pts.push_back(v2(1.5, 0));
  pts.push_back(v2(-1.5, 0));
  pts.push_back(v2(0, 1.5));
  pts.push_back(v2(0, -1.5));
  return ConvexBody::hull(pts);
}

VectorXd random_interior(std::mt19937_64& rng, const ConvexBody& body, double box = 1.5) {
  std::uniform_real_distribution<double> u(-box, box);
  for (;;) {
    VectorXd x(body.dim());
    for (int i = 0; i < body.dim(); ++i) x(i) = u(rng);
    if (body.contains(x)) return x;
  }
}

// Image of a half-space body under the projective map g of R^3 acting on (u, 1).
ConvexBody projective_image(const ConvexBody& body, const Eigen::Matrix3d& g) {
  const Eigen::Matrix3d gi = g.inverse();
  MatrixXd n(body.normals().rows(), 2);
  VectorXd o(body.normals().rows());
  for (Eigen::Index i = 0; i < n.rows(); ++i) {
    const Eigen::RowVector3d c = Eigen::RowVector3d(body.normals()(i, 0), body.normals()(i, 1), -body.offsets()(i)) * gi;
    n.row(i) << c(0), c(1);
    o(i) = -c(2);
  }
  return ConvexBody::halfspaces(n, o);
}

VectorXd apply(const Eigen::Matrix3d& g, const VectorXd& u) {
  const Eigen::Vector3d z = g * Eigen::Vector3d(u(0), u(1), 1.0);
  return v2(z(0) / z(2), z(1) / z(2));
}

// Hyperbolic triangle with angles pi/2, pi/3, pi/7 in the Klein disk: right angle at B on the
// x-axis, angle pi/7 at the origin. cos(C) = cosh(OB) sin(O) fixes OB.
std::vector<VectorXd> klein_237_triangle() {
  const double ob = std::acosh(std::cos(kPi / 3) / std::sin(kPi / 7));
  const double b = std::tanh(ob);
  return {v2(0, 0), v2(b, 0), v2(b, b * std::tan(kPi / 7))};
}

}  // namespace

TEST_CASE("hilbert_distance") {
  const auto disk = unit_ball(2);
  CHECK(hilbert_distance(disk, v2(0.1, 0.2), v2(0.1, 0.2)) == 0.0);
  CHECK(hilbert_distance(disk, v2(0, 0), v2(0.5, 0)) == doctest::Approx(std::atanh(0.5)).epsilon(1e-12));
  CHECK(hilbert_distance(disk, v2(0, 0), v2(0.5, 0)) == doctest::Approx(0.5493061).epsilon(1e-7));
  CHECK_THROWS_AS(hilbert_distance(disk, v2(0, 0), v2(1.0, 0)), DomainError);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto body = random_polygon(rng, 12);
    const VectorXd x = random_interior(rng, body), y = random_interior(rng, body), z = random_interior(rng, body);
    const double dxy = hilbert_distance(body, x, y);
    CHECK(dxy == doctest::Approx(hilbert_distance(body, y, x)).epsilon(1e-10));
    CHECK(dxy <= hilbert_distance(body, x, z) + hilbert_distance(body, z, y) + 1e-10);

    std::normal_distribution<double> noise(0.0, 0.1);
    Eigen::Matrix3d g = Eigen::Matrix3d::Identity();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) += noise(rng);
    g.row(2) *= 0.3;
    g(2, 2) = 1.0;
    bool positive = true;
    for (const auto& p : body.polygon()) positive = positive && (g * Eigen::Vector3d(p.x(), p.y(), 1.0))(2) > 0.05;
    if (!positive) continue;
    const auto image = projective_image(body, g);
    CHECK(hilbert_distance(image, apply(g, x), apply(g, y)) == doctest::Approx(dxy).epsilon(1e-9));
  }
}

TEST_CASE("finsler_norm") {
  const auto disk = unit_ball(2);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int i = 0; i < 10; ++i) {
    const double t = ang(rng);
    CHECK(finsler_norm(disk, v2(0, 0), v2(std::cos(t), std::sin(t))) == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto body = random_polygon(rng, 10);
    const VectorXd x = random_interior(rng, body);
    const VectorXd w = v2(std::cos(ang(rng)), std::sin(ang(rng)));
    const double f = finsler_norm(body, x, w);
    CHECK(finsler_norm(body, x, -2.5 * w) == doctest::Approx(2.5 * f).epsilon(1e-12));
    double previous = 0.0;
    for (double h : {1e-3, 1e-4}) {
      const double err = std::abs(f - hilbert_distance(body, x, x + h * w) / h);
      CHECK(err <= 50.0 * h * (1.0 + f * f));
      if (previous > 1e-12) CHECK(err < previous);
      previous = err;
    }
  }
}

TEST_CASE("busemann_density closed forms and quadrature") {
  const auto disk = unit_ball(2);
  CHECK(busemann_density(disk, v2(0, 0)) == doctest::Approx(1.0));
  CHECK(busemann_density_quadrature(disk, v2(0, 0)) == doctest::Approx(1.0).epsilon(1e-9));
  for (double r : {0.2, 0.5, 0.8}) {
    const double klein = std::pow(1 - r * r, -1.5);
    CHECK(busemann_density(disk, v2(r, 0)) == doctest::Approx(klein).epsilon(1e-12));
    CHECK(busemann_density_quadrature(disk, v2(0, r), 12) == doctest::Approx(klein).epsilon(1e-6));
  }
  const auto ball = unit_ball(3);
  VectorXd x3(3);
  x3 << 0.3, -0.2, 0.4;
  CHECK(busemann_density_quadrature(ball, x3, 7) == doctest::Approx(busemann_density(ball, x3)).epsilon(1e-5));
  CHECK(busemann_density(ball, x3) == doctest::Approx(std::pow(1 - x3.squaredNorm(), -2.0)));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto body = random_polygon(rng, 9);
    const VectorXd x = random_interior(rng, body);
    CHECK(busemann_density(body, x) == doctest::Approx(busemann_density_quadrature(body, x, 14)).epsilon(1e-5));

    // Affine covariance: density scales by 1/|det T|.
    std::normal_distribution<double> noise(0.0, 0.5);
    MatrixXd t = MatrixXd::Identity(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) t(i, j) += noise(rng);
    if (std::abs(t.determinant()) < 0.1) continue;
    const VectorXd s = v2(noise(rng), noise(rng));
    const auto image = body.affine_image(t, s);
    CHECK(busemann_density(image, t * x + s) ==
          doctest::Approx(busemann_density(body, x) / std::abs(t.determinant())).epsilon(1e-9));
  }
}

TEST_CASE("unit ball at the center of a symmetric body: quadrature against rejection sampling") {
  const auto square = ConvexBody::hull({v2(1, 1), v2(-1, 1), v2(-1, -1), v2(1, -1)});
  const VectorXd c = v2(0, 0);
  const double area = kPi / busemann_density_quadrature(square, c, 12);
  // F(0, w) = |w|_inf, so B is the square [-1,1]^2.
  CHECK(area == doctest::Approx(4.0).epsilon(1e-6));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  const int n = 200000;
  int hits = 0;
  for (int i = 0; i < n; ++i)
    if (finsler_norm(square, c, v2(u(rng), u(rng))) < 1.0) ++hits;
  const double p = static_cast<double>(hits) / n;
  const double est = 9.0 * p, se = 9.0 * std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(est - area) < 3 * se);
}

TEST_CASE("regions") {
  const auto r = region_from_points({v2(0, 0), v2(1, 0), v2(0, 1), v2(0.2, 0.2)});
  CHECK(r.simplices.size() == 6);
  CHECK(r.volume() == doctest::Approx(0.5));
  CHECK(region_from_points({v2(0.1, 0.1)}).simplices.empty());
  CHECK(region_from_points({v2(0, 0), v2(1, 1), v2(2, 2)}).simplices.empty());

  std::vector<VectorXd> cube;
  for (int i = 0; i < 8; ++i) {
    VectorXd p(3);
    p << (i & 1), (i >> 1 & 1), (i >> 2 & 1);
    cube.push_back(p);
  }
  CHECK(region_from_points(cube).volume() == doctest::Approx(1.0));
}

TEST_CASE("estimate_volume in the Klein disk") {
  const auto disk = unit_ball(2);
  CHECK(estimate_volume(disk, region_from_points({v2(0.2, 0.1)}), 1000, 1).value == 0.0);

  std::vector<VectorXd> ideal;
  for (int k = 0; k < 3; ++k) ideal.push_back(v2(std::cos(kPi / 2 + 2 * kPi * k / 3), std::sin(kPi / 2 + 2 * kPi * k / 3)));
  // The vertices sit on the circle; shrink by 1 ulp-scale so every sample is interior.
  for (auto& p : ideal) p *= 1 - 1e-15;
  const auto e = estimate_volume(disk, region_from_points(ideal), 1'000'000, 42);
  CHECK(std::abs(e.value - kPi) < 3 * e.std_error + 1e-3);

  const auto t = estimate_volume(disk, region_from_points(klein_237_triangle()), 200'000, 7);
  CHECK(std::abs(t.value - kPi / 42) < 3 * t.std_error + 1e-6);
  CHECK(t.value == doctest::Approx(0.0747998).epsilon(1e-3));

  // Same inputs, same bits.
  const auto again = estimate_volume(disk, region_from_points(klein_237_triangle()), 200'000, 7);
  CHECK(again.value == t.value);
  CHECK(again.std_error == t.std_error);
}

TEST_CASE("monotonicity_probe") {
  const auto small = unit_ball(2);
  const auto big = ConvexBody::ellipsoid(VectorXd::Zero(2), MatrixXd::Identity(2, 2) / 1.44);
  const auto b = region_from_points({v2(-0.5, -0.5), v2(0.6, -0.4), v2(0.1, 0.7)});
  const auto same = monotonicity_probe(small, small, b, 20000, 4);
  CHECK(same.larger.value == same.smaller.value);
  CHECK(same.diff == 0.0);

  const auto m = monotonicity_probe(small, big, b, 20000, 4);
  CHECK(m.larger.value < m.smaller.value);
  CHECK(m.diff < -3 * m.diff_se);

  const auto shifted = ConvexBody::ellipsoid(v2(0.6, 0), MatrixXd::Identity(2, 2));
  CHECK_THROWS_AS(monotonicity_probe(small, shifted, b, 20000, 4), std::logic_error);
}

TEST_CASE("tile hulls grow with the depth and the volume of P shrinks") {
  const auto p = triangle_product(9);
  VolumeProtocol pr;
  pr.depths = {3, 4, 5};
  pr.samples = 20000;
  pr.radius_per_depth = std::numeric_limits<double>::infinity();
  // A fixed compact piece of P: the region is P shrunk toward its centroid.
  const OrbitTiling t(p, 5);
  const auto rays = polytope_rays(p);
  std::vector<VectorXd> pts;
  for (const auto& e : t.elements())
    for (const auto& r : rays) pts.push_back(e.matrix * r);
  const Chart chart = make_chart(p, pts);
  std::vector<VectorXd> inner;
  VectorXd c = VectorXd::Zero(2);
  for (const auto& r : rays) c += chart.to_chart(r) / 3.0;
  for (const auto& r : rays) inner.push_back(c + 0.8 * (chart.to_chart(r) - c));
  const auto region = region_from_points(inner);
  std::vector<ConvexBody> bodies;
  for (int n : pr.depths) {
    std::vector<VectorXd> hull_pts;
    for (const auto& e : t.elements())
      if (e.depth <= n)
        for (const auto& r : rays) hull_pts.push_back(chart.to_chart(e.matrix * r));
    bodies.push_back(ConvexBody::hull(hull_pts));
  }
  for (std::size_t k = 0; k + 1 < bodies.size(); ++k) {
    const auto m = monotonicity_probe(bodies[k], bodies[k + 1], region, 20000, 8);
    CHECK(m.diff <= 3 * m.diff_se);
  }
}

TEST_CASE("volume_sequence on the Klein examples") {
  VolumeProtocol pr;
  pr.depths = {6};
  pr.samples = 100000;
  auto s = volume_sequence(ideal_triangle(), pr);
  CHECK(s.quadric_used);
  CHECK(s.volumes.estimates[0].value == doctest::Approx(kPi).epsilon(0.02));
  s = volume_sequence(triangle_237(), pr);
  CHECK(s.volumes.estimates[0].value == doctest::Approx(kPi / 42).epsilon(0.01));
  CHECK_THROWS_AS(volume_sequence(tits_polytope(CartanMatrix::validate(MatrixXd((MatrixXd(2, 2) << 2, -2, -2, 2).finished()))), pr),
                  PreconditionError);
}

TEST_CASE("join divergence probe") {
  JoinSetup j;
  j.a = {-1, 0};
  j.b = {1, 0};
  j.c = {0, std::sqrt(3.0)};
  j.p = {{-0.95, 0}, {0.95, 0}, {0.3, 0.5}, {-0.3, 0.5}};
  j.q1_start = {-0.9, 0};
  j.q1_end = {0.9, 0};
  j.rho0 = 0.03;

  // h fixes the factors, preserves the triangle and halves the height.
  CHECK((join_contraction(j, j.a) - j.a).norm() < 1e-12);
  CHECK((join_contraction(j, j.c) - j.c).norm() < 1e-12);
  const auto omega = ConvexBody::hull({j.a, j.b, j.c});
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const VectorXd x = random_interior(rng, omega);
    const Eigen::Vector2d hx = join_contraction(j, x);
    CHECK(omega.contains(hx));
    CHECK(join_height(j, hx) == doctest::Approx(0.5 * join_height(j, x)));
  }
  // Distances are h-invariant, so slabs have equal volume.
  const VectorXd x = v2(0.1, 0.3), y = v2(-0.2, 0.5);
  CHECK(hilbert_distance(omega, join_contraction(j, x), join_contraction(j, y)) ==
        doctest::Approx(hilbert_distance(omega, x, y)).epsilon(1e-10));

  const auto r = join_divergence_probe(j, 12, 20000, 3);
  CHECK(r.partial_sums.back() > 10.0);
  for (std::size_t k = 1; k < r.slab_volumes.size(); ++k) {
    CHECK(r.partial_sums[k] > r.partial_sums[k - 1]);
    CHECK(std::abs(r.slab_volumes[k] - r.slab_volumes[0]) < 4 * (r.slab_se[k] + r.slab_se[0]));
  }

  JoinSetup control = j;
  control.p = {{-0.3, 0.3}, {0.3, 0.3}, {0.3, 0.6}, {-0.3, 0.6}};
  const auto c = join_divergence_probe(control, 12, 20000, 3);
  CHECK(c.partial_sums.back() == c.partial_sums[3]);
  CHECK(c.partial_sums.back() < 1.0);
}

TEST_CASE("geometry helpers") {
  using geometry::Point2;
  const std::vector<Point2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(geometry::polygon_area(geometry::convex_hull_2d({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0}})) == 1.0);
  CHECK(geometry::convex_hull_2d({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0}}).size() == 4);
  CHECK(geometry::polygon_area(geometry::clip_polygon(sq, Point2(1, 0), 0.25)) == doctest::Approx(0.25));
  CHECK(geometry::distance_to_polygon(Point2(2, 0.5), sq) == doctest::Approx(1.0));
  CHECK(geometry::distance_to_polygon(Point2(0.5, 0.5), sq) == 0.0);
  const std::vector<Point2> big{{-1, -1}, {2, -1}, {2, 2}, {-1, 2}};
  CHECK(geometry::hausdorff_distance(sq, big) == doctest::Approx(std::sqrt(2.0)));

  std::vector<geometry::Point3> pts;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int i = 0; i < 300; ++i) pts.push_back(geometry::Point3(g(rng), g(rng), g(rng)).normalized());
  for (int i = 0; i < 100; ++i) pts.push_back(0.5 * geometry::Point3(g(rng), g(rng), g(rng)).normalized());
  const auto h = geometry::convex_hull_3d(pts);
  CHECK(h.points.size() == 300);
  CHECK(h.faces.size() == 2 * 300 - 4);
  for (const auto& p : pts) CHECK((h.normals * p - h.offsets).maxCoeff() <= 1e-9);
}
