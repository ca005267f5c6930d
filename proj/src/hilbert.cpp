#include "vinberg/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "vinberg/geometry.hpp"

namespace vinberg {

using geometry::Point2;

ConvexBody ConvexBody::ellipsoid(VectorXd center, MatrixXd shape) {
  if (shape.rows() != center.size() || shape.cols() != center.size())
    throw PreconditionError("ellipsoid: shape and center sizes differ");
  Eigen::LLT<MatrixXd> llt(shape);
  if (llt.info() != Eigen::Success) throw PreconditionError("ellipsoid: shape is not positive definite");
  ConvexBody b;
  b.kind_ = Kind::Ellipsoid;
  b.center_ = std::move(center);
  b.shape_ = std::move(shape);
  return b;
}

ConvexBody ConvexBody::halfspaces(MatrixXd normals, VectorXd offsets) {
  if (normals.rows() != offsets.size()) throw PreconditionError("halfspaces: normals and offsets sizes differ");
  ConvexBody b;
  b.kind_ = Kind::Halfspaces;
  if (normals.cols() == 2) {
    // Angular order; the closed-form polygon density relies on it.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(normals.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
      return std::atan2(normals(i, 1), normals(i, 0)) < std::atan2(normals(j, 1), normals(j, 0));
    });
    b.normals_.resize(normals.rows(), 2);
    b.offsets_.resize(offsets.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
      b.normals_.row(static_cast<Eigen::Index>(k)) = normals.row(order[k]);
      b.offsets_(static_cast<Eigen::Index>(k)) = offsets(order[k]);
    }
  } else {
    b.normals_ = std::move(normals);
    b.offsets_ = std::move(offsets);
  }
  return b;
}

ConvexBody ConvexBody::hull(const std::vector<VectorXd>& points) {
  if (points.empty()) throw PreconditionError("hull: no points");
  const Eigen::Index d = points.front().size();
  if (d == 1) {
    double lo = points.front()(0), hi = lo;
    for (const auto& p : points) {
      lo = std::min(lo, p(0));
      hi = std::max(hi, p(0));
    }
    if (hi - lo <= 0) throw PreconditionError("hull: degenerate interval");
    MatrixXd n(2, 1);
    n << 1, -1;
    VectorXd o(2);
    o << hi, -lo;
    return halfspaces(n, o);
  }
  if (d == 2) {
    std::vector<Point2> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.emplace_back(p(0), p(1));
    auto poly = geometry::convex_hull_2d(std::move(pts));
    if (poly.size() < 3) throw PreconditionError("hull: degenerate polygon");
    const auto m = static_cast<Eigen::Index>(poly.size());
    MatrixXd n(m, 2);
    VectorXd o(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Point2& p = poly[static_cast<std::size_t>(i)];
      const Point2& q = poly[static_cast<std::size_t>((i + 1) % m)];
      Point2 nn(q.y() - p.y(), p.x() - q.x());
      nn.normalize();
      n.row(i) = nn.transpose();
      o(i) = nn.dot(p);
    }
    ConvexBody b = halfspaces(n, o);
    b.polygon_ = std::move(poly);
    return b;
  }
  if (d == 3) {
    std::vector<geometry::Point3> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.emplace_back(p(0), p(1), p(2));
    const auto h = geometry::convex_hull_3d(pts);
    return halfspaces(h.normals, h.offsets);
  }
  throw PreconditionError("hull: dimension must be 1, 2 or 3");
}

bool ConvexBody::contains(const VectorXd& x) const {
  if (x.size() != dim()) throw PreconditionError("contains: dimension mismatch");
  if (kind_ == Kind::Ellipsoid) {
    const VectorXd y = x - center_;
    return y.dot(shape_ * y) < 1.0;
  }
  return ((normals_ * x - offsets_).array() < 0.0).all();
}

double ConvexBody::exit_time(const VectorXd& x, const VectorXd& w) const {
  if (kind_ == Kind::Ellipsoid) {
    const VectorXd y = x - center_;
    const VectorXd mw = shape_ * w;
    const double a = w.dot(mw);
    const double b = y.dot(mw);
    const double c = y.dot(shape_ * y) - 1.0;
    if (a <= 0) return std::numeric_limits<double>::infinity();
    const double disc = std::max(0.0, b * b - a * c);
    // The larger root, written to avoid cancellation.
    return b <= 0 ? (-b + std::sqrt(disc)) / a : -c / (b + std::sqrt(disc));
  }
  double t = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < normals_.rows(); ++i) {
    const double rate = normals_.row(i).dot(w);
    if (rate > 0) t = std::min(t, (offsets_(i) - normals_.row(i).dot(x)) / rate);
  }
  return t;
}

ConvexBody ConvexBody::affine_image(const MatrixXd& t, const VectorXd& shift) const {
  const MatrixXd tinv = t.inverse();
  if (kind_ == Kind::Ellipsoid) return ellipsoid(t * center_ + shift, tinv.transpose() * shape_ * tinv);
  // a u < b with u = T^{-1}(u' - shift).
  const MatrixXd n = normals_ * tinv;
  const VectorXd o = offsets_ + n * shift;
  ConvexBody b = halfspaces(n, o);
  if (!polygon_.empty()) {
    const bool flip = t.determinant() < 0;
    for (const auto& p : polygon_) b.polygon_.push_back((t * p + shift).head<2>());
    if (flip) std::reverse(b.polygon_.begin(), b.polygon_.end());
  }
  return b;
}

namespace {

void require_interior(const ConvexBody& omega, const VectorXd& x, const char* what) {
  if (!omega.contains(x)) throw DomainError(std::string(what) + ": point is not interior to the domain");
}

}  // namespace

double hilbert_distance(const ConvexBody& omega, const VectorXd& x, const VectorXd& y) {
  require_interior(omega, x, "hilbert_distance");
  require_interior(omega, y, "hilbert_distance");
  const VectorXd w = y - x;
  if (w.norm() == 0.0) return 0.0;
  const double tp = omega.exit_time(x, w);
  const double tm = omega.exit_time(x, -w);
  if (!std::isfinite(tp) || !std::isfinite(tm)) throw DomainError("hilbert_distance: unbounded chord");
  // x' = x - tm w, x, y = x + w, y' = x + tp w.
  return 0.5 * std::log((1.0 + tm) * tp / (tm * (tp - 1.0)));
}

double finsler_norm(const ConvexBody& omega, const VectorXd& x, const VectorXd& w) {
  require_interior(omega, x, "finsler_norm");
  if (w.norm() == 0.0) return 0.0;
  const double tp = omega.exit_time(x, w);
  const double tm = omega.exit_time(x, -w);
  return 0.5 * (1.0 / tp + 1.0 / tm);
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

namespace {

// Hull of points sorted by angle around an interior origin: one Graham pass from the farthest point.
std::vector<Point2> star_hull(const std::vector<Point2>& pts) {
  const std::size_t m = pts.size();
  std::size_t start = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (pts[i].squaredNorm() > pts[start].squaredNorm()) start = i;
  std::vector<Point2> h;
  h.reserve(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    const Point2& p = pts[(start + k) % m];
    while (h.size() >= 2) {
      const Point2 a = h[h.size() - 1] - h[h.size() - 2];
      const Point2 b = p - h[h.size() - 2];
      if (a.x() * b.y() - a.y() * b.x() > 0) break;
      h.pop_back();
    }
    h.push_back(p);
  }
  h.pop_back();  // the start point, pushed twice
  return h;
}

// Minkowski sum of two counter-clockwise convex polygons.
std::vector<Point2> minkowski_sum(std::vector<Point2> p, std::vector<Point2> q) {
  auto rotate_bottom = [](std::vector<Point2>& v) {
    std::size_t lo = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i].y() < v[lo].y() || (v[i].y() == v[lo].y() && v[i].x() < v[lo].x())) lo = i;
    std::rotate(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(lo), v.end());
  };
  rotate_bottom(p);
  rotate_bottom(q);
  const std::size_t n = p.size(), m = q.size();
  std::vector<Point2> out;
  out.reserve(n + m);
  std::size_t i = 0, j = 0;
  while (i < n || j < m) {
    out.push_back(p[i % n] + q[j % m]);
    const Point2 ep = p[(i + 1) % n] - p[i % n];
    const Point2 eq = q[(j + 1) % m] - q[j % m];
    const double c = ep.x() * eq.y() - ep.y() * eq.x();
    if (j >= m || (i < n && c > 0)) ++i;
    else if (i >= n || c < 0) ++j;
    else { ++i; ++j; }
  }
  return out;
}

// Area of {w : p.w <= 1 for all vertices p} for a ccw polygon containing 0.
double polar_area(const std::vector<Point2>& poly) {
  const std::size_t r = poly.size();
  std::vector<Point2> w(r);
  for (std::size_t j = 0; j < r; ++j) {
    const Point2& p = poly[j];
    const Point2& q = poly[(j + 1) % r];
    const double det = p.x() * q.y() - p.y() * q.x();
    w[j] = Point2((q.y() - p.y()) / det, (p.x() - q.x()) / det);
  }
  return geometry::polygon_area(w);
}

double polygon_density(const ConvexBody& omega, const VectorXd& x) {
  const MatrixXd& n = omega.normals();
  const VectorXd s = omega.offsets() - n * x;
  std::vector<Point2> k(static_cast<std::size_t>(n.rows()));
  for (Eigen::Index i = 0; i < n.rows(); ++i) k[static_cast<std::size_t>(i)] = n.row(i).transpose() / s(i);
  const auto kh = star_hull(k);
  std::vector<Point2> neg(kh.size());
  for (std::size_t i = 0; i < kh.size(); ++i) neg[i] = -kh[i];
  const auto diff = minkowski_sum(kh, neg);
  // B_x = {w : h_D(w) < 2} = 2 D°, D = K + (-K).
  return std::numbers::pi / (4.0 * polar_area(diff));
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

}  // namespace

double busemann_density_quadrature(const ConvexBody& omega, const VectorXd& x, int level) {
  require_interior(omega, x, "busemann_density");
  const int d = omega.dim();
  if (d == 1) {
    VectorXd e(1);
    e(0) = 1.0;
    return finsler_norm(omega, x, e);
  }
  if (d == 2) {
    const int m = 1 << level;
    double area = 0.0;
    for (int k = 0; k < m; ++k) {
      const double th = 2.0 * std::numbers::pi * k / m;
      VectorXd u(2);
      u << std::cos(th), std::sin(th);
      const double rho = 1.0 / finsler_norm(omega, x, u);
      area += 0.5 * rho * rho;
    }
    area *= 2.0 * std::numbers::pi / m;
    return std::numbers::pi / area;
  }
  if (d == 3) {
    const int nphi = 1 << level;
    const auto [z, wz] = gauss_legendre(std::max(2, nphi / 2));
    double vol = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double sz = std::sqrt(1.0 - z[i] * z[i]);
      for (int k = 0; k < nphi; ++k) {
        const double ph = 2.0 * std::numbers::pi * k / nphi;
        VectorXd u(3);
        u << sz * std::cos(ph), sz * std::sin(ph), z[i];
        const double rho = 1.0 / finsler_norm(omega, x, u);
        vol += wz[i] * rho * rho * rho / 3.0;
      }
    }
    vol *= 2.0 * std::numbers::pi / nphi;
    return unit_ball_volume(3) / vol;
  }
  throw PreconditionError("busemann_density: dimension must be 1, 2 or 3");
}

double busemann_density(const ConvexBody& omega, const VectorXd& x) {
  require_interior(omega, x, "busemann_density");
  const int d = omega.dim();
  if (omega.kind() == ConvexBody::Kind::Ellipsoid) {
    const VectorXd y = x - omega.center();
    const double q = y.dot(omega.shape() * y);
    return std::sqrt(omega.shape().determinant()) * std::pow(1.0 - q, -0.5 * (d + 1));
  }
  if (d == 2) return polygon_density(omega, x);
  if (d == 1) return busemann_density_quadrature(omega, x, 0);
  return busemann_density_quadrature(omega, x, 6);
}

double SampleRegion::volume() const {
  double v = 0.0;
  for (const auto& s : simplices) {
    MatrixXd e(dim, dim);
    for (int j = 0; j < dim; ++j) e.col(j) = s.col(j + 1) - s.col(0);
    v += std::abs(e.determinant()) / std::tgamma(dim + 1.0);
  }
  return v;
}

SampleRegion region_from_points(const std::vector<VectorXd>& points) {
  SampleRegion r;
  if (points.empty()) throw PreconditionError("region_from_points: no points");
  const Eigen::Index d = points.front().size();
  r.dim = static_cast<int>(d);
  auto degenerate = [&]() { return r; };
  if (d == 1) {
    double lo = points.front()(0), hi = lo;
    for (const auto& p : points) {
      lo = std::min(lo, p(0));
      hi = std::max(hi, p(0));
    }
    if (hi - lo <= 1e-14 * std::max(1.0, std::abs(hi))) return degenerate();
    MatrixXd a(1, 2), b(1, 2);
    a << lo, 0.5 * (lo + hi);
    b << hi, 0.5 * (lo + hi);
    r.simplices = {a, b};
    return r;
  }
  if (d == 2) {
    std::vector<Point2> pts;
    for (const auto& p : points) pts.emplace_back(p(0), p(1));
    const auto poly = geometry::convex_hull_2d(pts);
    if (poly.size() < 3 || geometry::polygon_area(poly) <= 1e-14) return degenerate();
    const Point2 c = geometry::polygon_centroid(poly);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point2& p = poly[i];
      const Point2& q = poly[(i + 1) % poly.size()];
      const Point2 m = 0.5 * (p + q);
      MatrixXd s(2, 3);
      s << p, m, c;
      r.simplices.push_back(s);
      s << q, m, c;
      r.simplices.push_back(s);
    }
    return r;
  }
  if (d == 3) {
    std::vector<geometry::Point3> pts;
    for (const auto& p : points) pts.emplace_back(p(0), p(1), p(2));
    geometry::Hull3 h;
    try {
      h = geometry::convex_hull_3d(pts);
    } catch (const PreconditionError&) {
      return degenerate();
    }
    geometry::Point3 c = geometry::Point3::Zero();
    for (const auto& p : h.points) c += p;
    c /= static_cast<double>(h.points.size());
    for (const auto& f : h.faces) {
      const geometry::Point3& a = h.points[static_cast<std::size_t>(f[0])];
      const geometry::Point3& b = h.points[static_cast<std::size_t>(f[1])];
      const geometry::Point3& e = h.points[static_cast<std::size_t>(f[2])];
      const geometry::Point3 fc = (a + b + e) / 3.0;
      const std::array<geometry::Point3, 3> v{a, b, e};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          const geometry::Point3 mid = 0.5 * (v[static_cast<std::size_t>(i)] + v[static_cast<std::size_t>(j)]);
          MatrixXd s(3, 4);
          s << v[static_cast<std::size_t>(i)], mid, fc, c;
          r.simplices.push_back(s);
        }
    }
    return r;
  }
  throw PreconditionError("region_from_points: dimension must be 1, 2 or 3");
}

namespace {

struct Accumulator {
  double sum = 0.0, sumsq = 0.0;
  void add(double v) {
    sum += v;
    sumsq += v * v;
  }
  double mean(long n) const { return sum / static_cast<double>(n); }
  double var_of_mean(long n) const {
    if (n < 2) return 0.0;
    const double m = mean(n);
    return std::max(0.0, (sumsq - n * m * m) / (n - 1.0)) / static_cast<double>(n);
  }
};

PairedVolumes estimate_impl(const std::vector<VolumeQuery>& queries, const SampleRegion& region, long samples,
                            std::uint64_t seed, bool nested) {
  if (queries.empty()) throw PreconditionError("estimate_volumes: no bodies");
  for (const auto& q : queries) {
    if (!q.body) throw PreconditionError("estimate_volumes: null body");
    if (q.body->dim() != region.dim && !region.simplices.empty())
      throw PreconditionError("estimate_volumes: region and body dimensions differ");
    if (q.base && !q.body->contains(*q.base)) throw DomainError("estimate_volumes: base point outside the body");
  }
  const std::size_t nq = queries.size();
  PairedVolumes out;
  out.estimates.resize(nq);
  out.diff.assign(nq - 1, 0.0);
  out.diff_se.assign(nq - 1, 0.0);
  for (auto& e : out.estimates) e.seed = seed;
  if (region.simplices.empty() || samples <= 0) return out;

  const int d = region.dim;
  const long strata = static_cast<long>(region.simplices.size()) * kRadialStrata;
  const long per = std::max<long>(2, (samples + strata - 1) / strata);
  std::vector<double> var(nq, 0.0), dvar(nq - 1, 0.0);
  long resampled = 0;
  std::vector<double> vals(nq);

  for (std::size_t si = 0; si < region.simplices.size(); ++si) {
    const MatrixXd& s = region.simplices[si];
    MatrixXd e(d, d);
    for (int j = 0; j < d; ++j) e.col(j) = s.col(j + 1) - s.col(0);
    const double vol = std::abs(e.determinant()) / std::tgamma(d + 1.0);
    if (vol == 0.0) continue;
    const VectorXd apex = s.col(0);
    for (int bin = 0; bin < kRadialStrata; ++bin) {
      std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(si), static_cast<std::uint32_t>(bin)};
      std::mt19937_64 rng(ss);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::exponential_distribution<double> expo(1.0);
      std::vector<Accumulator> acc(nq), dacc(nq - 1);
      const double u0 = static_cast<double>(bin) / kRadialStrata, du = 1.0 / kRadialStrata;
      for (long k = 0; k < per; ++k) {
        VectorXd x;
        double weight = 0.0;
        for (int attempt = 0;; ++attempt) {
          if (attempt == 1000) throw DomainError("estimate_volumes: region is not inside the domain");
          const double u = u0 + du * (1.0 - unif(rng));  // in (u0, u0 + du]
          const double r = u * u;
          // Uniform point on the face opposite the apex.
          VectorXd bary(d);
          double total = 0.0;
          for (int j = 0; j < d; ++j) total += (bary(j) = expo(rng));
          VectorXd y = VectorXd::Zero(d);
          for (int j = 0; j < d; ++j) y += (bary(j) / total) * s.col(j + 1);
          x = apex + r * (y - apex);
          weight = d * vol * 2.0 * std::pow(u, 2 * d - 1);
          bool inside = queries.front().body->contains(x);
          if (inside && nested) {
            for (std::size_t qi = 1; qi < nq; ++qi)
              if (!queries[qi].body->contains(x))
                throw std::logic_error("estimate_volumes: domains are not nested at a sample point");
          } else {
            for (std::size_t qi = 1; qi < nq && inside; ++qi) inside = queries[qi].body->contains(x);
          }
          if (inside) break;
          ++resampled;
        }
        for (std::size_t qi = 0; qi < nq; ++qi) {
          const auto& q = queries[qi];
          double v = busemann_density(*q.body, x) * weight;
          if (q.base && std::isfinite(q.radius) && hilbert_distance(*q.body, *q.base, x) > q.radius) v = 0.0;
          vals[qi] = v;
          acc[qi].add(v);
        }
        for (std::size_t qi = 0; qi + 1 < nq; ++qi) dacc[qi].add(vals[qi + 1] - vals[qi]);
      }
      for (std::size_t qi = 0; qi < nq; ++qi) {
        out.estimates[qi].value += du * acc[qi].mean(per);
        var[qi] += du * du * acc[qi].var_of_mean(per);
      }
      for (std::size_t qi = 0; qi + 1 < nq; ++qi) {
        out.diff[qi] += du * dacc[qi].mean(per);
        dvar[qi] += du * du * dacc[qi].var_of_mean(per);
      }
    }
  }
  for (std::size_t qi = 0; qi < nq; ++qi) {
    out.estimates[qi].std_error = std::sqrt(var[qi]);
    out.estimates[qi].samples = per * strata;
    out.estimates[qi].resampled = resampled;
  }
  for (std::size_t qi = 0; qi + 1 < nq; ++qi) out.diff_se[qi] = std::sqrt(dvar[qi]);
  return out;
}

}  // namespace

PairedVolumes estimate_volumes(const std::vector<VolumeQuery>& queries, const SampleRegion& region, long samples,
                               std::uint64_t seed) {
  return estimate_impl(queries, region, samples, seed, false);
}

VolumeEstimate estimate_volume(const ConvexBody& omega, const SampleRegion& region, long samples, std::uint64_t seed) {
  return estimate_volumes({VolumeQuery{&omega, std::nullopt}}, region, samples, seed).estimates.front();
}

ConvexBody inner_body(const DomainApprox& domain, const Chart& chart, bool use_quadric) {
  if (use_quadric && domain.quadric) {
    const MatrixXd& q = *domain.quadric;
    const MatrixXd k = chart.basis.transpose() * q * chart.basis;
    const VectorXd l = chart.basis.transpose() * q * chart.origin;
    const double c0 = chart.origin.dot(q * chart.origin);
    Eigen::LLT<MatrixXd> llt(k);
    if (llt.info() == Eigen::Success) {
      const VectorXd center = -llt.solve(l);
      const double rho = -(c0 + l.dot(center));
      // x^T Q x < 0 becomes (u - center)^T K (u - center) < -c0 - l.center.
      if (rho > 0) return ConvexBody::ellipsoid(center, k / rho);
    }
    throw PreconditionError("inner_body: the invariant quadric is not an ellipsoid in this chart");
  }
  std::vector<VectorXd> pts;
  for (const auto& tile : domain.tile_vertices)
    for (Eigen::Index j = 0; j < tile.cols(); ++j) pts.push_back(chart.to_chart(tile.col(j)));
  return ConvexBody::hull(pts);
}

SampleRegion polytope_region(const CoxeterPolytope& p, const Chart& chart) {
  std::vector<VectorXd> pts;
  for (const auto& r : polytope_rays(p)) pts.push_back(chart.to_chart(r));
  return region_from_points(pts);
}

VolumeSequence volume_sequence(const CoxeterPolytope& p, const VolumeProtocol& protocol) {
  if (protocol.depths.empty()) throw PreconditionError("volume_sequence: no depths");
  if (p.dim() < 1 || p.dim() > 3) throw PreconditionError("volume_sequence: dimension must be 1, 2 or 3");
  if (classify_type(p.cartan()).sign != TypeSign::Negative)
    throw PreconditionError("volume_sequence: the Vinberg domain is properly convex only for negative type");
  const int max_depth = *std::max_element(protocol.depths.begin(), protocol.depths.end());
  const OrbitTiling tiling(p, max_depth);
  const auto rays = polytope_rays(p);

  std::vector<VectorXd> all;
  for (const auto& e : tiling.elements())
    for (const auto& r : rays) all.push_back(e.matrix * r);

  VolumeSequence seq;
  seq.depths = protocol.depths;
  seq.chart = make_chart(p, all);
  const SampleRegion region = polytope_region(p, seq.chart);
  VectorXd base = VectorXd::Zero(seq.chart.dim());
  for (const auto& r : rays) base += seq.chart.to_chart(r);
  base /= static_cast<double>(rays.size());

  const auto quadric = protocol.use_quadric ? invariant_quadric(p) : std::nullopt;
  seq.quadric_used = quadric.has_value();
  std::vector<ConvexBody> bodies;
  for (int n : protocol.depths) {
    if (quadric) {
      DomainApprox d;
      d.quadric = quadric;
      bodies.push_back(inner_body(d, seq.chart, true));
    } else {
      std::vector<VectorXd> pts;
      for (const auto& e : tiling.elements())
        if (e.depth <= n)
          for (const auto& r : rays) pts.push_back(seq.chart.to_chart(e.matrix * r));
      bodies.push_back(ConvexBody::hull(pts));
    }
  }
  std::vector<VolumeQuery> queries;
  for (std::size_t i = 0; i < bodies.size(); ++i)
    queries.push_back({&bodies[i], base, protocol.radius_per_depth * protocol.depths[i]});
  seq.volumes = estimate_volumes(queries, region, protocol.samples, protocol.seed);
  for (std::size_t i = 0; i < bodies.size(); ++i) seq.volumes.estimates[i].depth = protocol.depths[i];
  return seq;
}

MonotonicityProbe monotonicity_probe(const ConvexBody& inner, const ConvexBody& outer, const SampleRegion& b,
                                     long samples, std::uint64_t seed) {
  const auto r = estimate_impl({VolumeQuery{&inner, std::nullopt}, VolumeQuery{&outer, std::nullopt}}, b, samples,
                               seed, true);
  MonotonicityProbe m;
  m.smaller = r.estimates[0];
  m.larger = r.estimates[1];
  m.diff = r.diff[0];
  m.diff_se = r.diff_se[0];
  return m;
}

namespace {

Eigen::Vector3d join_barycentric(const JoinSetup& j, const Eigen::Vector2d& x) {
  Eigen::Matrix3d m;
  m << j.a.x(), j.b.x(), j.c.x(), j.a.y(), j.b.y(), j.c.y(), 1, 1, 1;
  return m.inverse() * Eigen::Vector3d(x.x(), x.y(), 1.0);
}

// Keep the side of the line through p and q that contains `inside`.
std::vector<Point2> clip_side(const std::vector<Point2>& poly, const Point2& p, const Point2& q, const Point2& inside) {
  Point2 n(q.y() - p.y(), p.x() - q.x());
  if (n.dot(inside - p) > 0) n = -n;
  return geometry::clip_polygon(poly, n, n.dot(p));
}

// nu <= level / (1 + level), i.e. rho <= level; flip for >=.
std::vector<Point2> clip_height(const JoinSetup& j, const std::vector<Point2>& poly, double level, bool upper) {
  // nu(x) is affine: nu = g.x + g0.
  const Eigen::Vector3d b0 = join_barycentric(j, Point2(0, 0));
  const Eigen::Vector3d bx = join_barycentric(j, Point2(1, 0));
  const Eigen::Vector3d by = join_barycentric(j, Point2(0, 1));
  const Point2 g(bx(2) - b0(2), by(2) - b0(2));
  const double bound = level / (1.0 + level) - b0(2);
  return upper ? geometry::clip_polygon(poly, g, bound) : geometry::clip_polygon(poly, -g, -bound);
}

}  // namespace

double join_height(const JoinSetup& j, const Eigen::Vector2d& x) {
  const Eigen::Vector3d l = join_barycentric(j, x);
  return l(2) / (l(0) + l(1));
}

Eigen::Vector2d join_contraction(const JoinSetup& j, const Eigen::Vector2d& x) {
  const Eigen::Vector3d l = join_barycentric(j, x);
  const Eigen::Vector3d h(2 * l(0), 2 * l(1), l(2));
  return (h(0) * j.a + h(1) * j.b + h(2) * j.c) / h.sum();
}

JoinDivergence join_divergence_probe(const JoinSetup& j, int slabs, long samples_per_slab, std::uint64_t seed) {
  const ConvexBody omega = ConvexBody::hull({j.a, j.b, j.c});
  // Cone over Q1 with apex c.
  std::vector<Point2> cone = clip_side(j.p, j.c, j.q1_start, j.q1_end);
  cone = clip_side(cone, j.c, j.q1_end, j.q1_start);
  JoinDivergence out;
  double total = 0.0;
  for (int k = 0; k < slabs; ++k) {
    const double hi = j.rho0 * std::ldexp(1.0, -k);
    auto slab = clip_height(j, cone, hi, true);
    slab = clip_height(j, slab, 0.5 * hi, false);
    double v = 0.0, se = 0.0;
    if (slab.size() >= 3 && geometry::polygon_area(slab) > 0) {
      std::vector<VectorXd> pts;
      for (const auto& p : slab) pts.push_back(p);
      const auto est = estimate_volume(omega, region_from_points(pts), samples_per_slab, seed + static_cast<std::uint64_t>(k));
      v = est.value;
      se = est.std_error;
    }
    total += v;
    out.slab_volumes.push_back(v);
    out.slab_se.push_back(se);
    out.partial_sums.push_back(total);
  }
  return out;
}

}  // namespace vinberg
