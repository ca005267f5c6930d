#include "vinberg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace vinberg::geometry {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

std::vector<Point2> convex_hull_2d(std::vector<Point2> pts, double tol) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double eps = tol * std::max(1.0, scale * scale);
  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= eps) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= eps) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

double polygon_area(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * std::abs(a);
}

Point2 polygon_centroid(const std::vector<Point2>& poly) {
  Point2 c = Point2::Zero();
  for (const auto& p : poly) c += p;
  return poly.empty() ? c : Point2(c / static_cast<double>(poly.size()));
}

std::vector<Point2> clip_polygon(const std::vector<Point2>& poly, const Point2& a, double b) {
  std::vector<Point2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % n];
    const double fp = a.dot(p) - b, fq = a.dot(q) - b;
    if (fp <= 0) out.push_back(p);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) out.push_back(p + (q - p) * (fp / (fp - fq)));
  }
  return out;
}

double distance_to_polygon(const Point2& p, const std::vector<Point2>& poly) {
  if (poly.empty()) throw PreconditionError("distance_to_polygon: empty polygon");
  if (poly.size() == 1) return (p - poly[0]).norm();
  bool inside = poly.size() >= 3;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % poly.size()];
    if (cross(a, b, p) < 0) inside = false;
    const Point2 ab = b - a;
    const double t = std::clamp((p - a).dot(ab) / std::max(ab.squaredNorm(), 1e-300), 0.0, 1.0);
    best = std::min(best, (p - (a + t * ab)).norm());
  }
  return inside ? 0.0 : best;
}

double hausdorff_distance(const std::vector<Point2>& p, const std::vector<Point2>& q) {
  double h = 0.0;
  for (const auto& x : p) h = std::max(h, distance_to_polygon(x, q));
  for (const auto& x : q) h = std::max(h, distance_to_polygon(x, p));
  return h;
}

Hull3 convex_hull_3d(const std::vector<Point3>& input, double tol) {
  Hull3 hull;
  double scale = 1.0;
  for (const auto& p : input) scale = std::max(scale, p.cwiseAbs().maxCoeff());
  const double eps = tol * scale;

  // Drop near-duplicates.
  std::vector<Point3> pts;
  {
    std::vector<Point3> sorted = input;
    std::sort(sorted.begin(), sorted.end(), [](const Point3& a, const Point3& b) {
      return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
    });
    for (const auto& p : sorted)
      if (pts.empty() || (p - pts.back()).cwiseAbs().maxCoeff() > eps) pts.push_back(p);
  }
  if (pts.size() < 4) throw PreconditionError("convex_hull_3d: fewer than 4 distinct points");

  // Initial tetrahedron from extreme points.
  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (double d = (pts[i] - pts[0]).norm(); d > best) { best = d; i1 = static_cast<int>(i); }
  best = 0.0;
  for (std::size_t i = 0; i < pts.size() && i1 >= 0; ++i)
    if (double d = (pts[i] - pts[0]).cross(pts[static_cast<std::size_t>(i1)] - pts[0]).norm(); d > best) {
      best = d;
      i2 = static_cast<int>(i);
    }
  best = 0.0;
  if (i2 >= 0) {
    const Point3 n = (pts[static_cast<std::size_t>(i1)] - pts[0]).cross(pts[static_cast<std::size_t>(i2)] - pts[0]);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (double d = std::abs(n.dot(pts[i] - pts[0])); d > best) { best = d; i3 = static_cast<int>(i); }
  }
  if (i1 < 0 || i2 < 0 || i3 < 0 || best <= eps * scale * scale)
    throw PreconditionError("convex_hull_3d: points are coplanar");

  struct Face {
    std::array<int, 3> v;
    Point3 n;
    double off;
    bool alive;
  };
  std::vector<Face> faces;
  const Point3 interior = (pts[0] + pts[static_cast<std::size_t>(i1)] + pts[static_cast<std::size_t>(i2)] +
                           pts[static_cast<std::size_t>(i3)]) / 4.0;
  auto make_face = [&](int a, int b, int c) {
    Point3 n = (pts[static_cast<std::size_t>(b)] - pts[static_cast<std::size_t>(a)])
                   .cross(pts[static_cast<std::size_t>(c)] - pts[static_cast<std::size_t>(a)]);
    if (n.dot(interior - pts[static_cast<std::size_t>(a)]) > 0) {
      std::swap(b, c);
      n = -n;
    }
    n.normalize();
    faces.push_back({{a, b, c}, n, n.dot(pts[static_cast<std::size_t>(a)]), true});
  };
  make_face(i0, i1, i2);
  make_face(i0, i1, i3);
  make_face(i0, i2, i3);
  make_face(i1, i2, i3);

  for (std::size_t pi = 0; pi < pts.size(); ++pi) {
    const int p = static_cast<int>(pi);
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::set<std::pair<int, int>> edges;
    bool any = false;
    for (auto& f : faces) {
      if (!f.alive || f.n.dot(pts[pi]) - f.off <= eps) continue;
      any = true;
      f.alive = false;
      for (int k = 0; k < 3; ++k) edges.emplace(f.v[static_cast<std::size_t>(k)], f.v[static_cast<std::size_t>((k + 1) % 3)]);
    }
    if (!any) continue;
    for (const auto& [a, b] : edges)
      if (!edges.count({b, a})) make_face(a, b, p);
  }

  std::vector<int> remap(pts.size(), -1);
  for (const auto& f : faces) {
    if (!f.alive) continue;
    std::array<int, 3> g{};
    for (int k = 0; k < 3; ++k) {
      int& r = remap[static_cast<std::size_t>(f.v[static_cast<std::size_t>(k)])];
      if (r < 0) {
        r = static_cast<int>(hull.points.size());
        hull.points.push_back(pts[static_cast<std::size_t>(f.v[static_cast<std::size_t>(k)])]);
      }
      g[static_cast<std::size_t>(k)] = r;
    }
    hull.faces.push_back(g);
  }
  hull.normals.resize(static_cast<Eigen::Index>(hull.faces.size()), 3);
  hull.offsets.resize(static_cast<Eigen::Index>(hull.faces.size()));
  Eigen::Index row = 0;
  for (const auto& f : faces) {
    if (!f.alive) continue;
    hull.normals.row(row) = f.n.transpose();
    hull.offsets(row) = f.off;
    ++row;
  }
  return hull;
}

}  // namespace vinberg::geometry
