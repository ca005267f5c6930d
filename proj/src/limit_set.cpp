#include "vinberg/limit_set.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "vinberg/geometry.hpp"
#include "vinberg/linalg.hpp"

namespace vinberg {

namespace {
constexpr double kNearRealPair = 1e-4;
constexpr double kMaxDirectionError = 1e-9;
}

ProximalResult detect_proximal(const MatrixXd& g, double eps_gap) {
  ProximalResult res;
  const Eigen::Index n = g.rows();
  if (n != g.cols()) throw PreconditionError("detect_proximal: matrix is not square");
  if (n < 2) {
    res.diagnostic = "1x1 matrix: projective space is a point";
    return res;
  }
  Eigen::EigenSolver<MatrixXd> es(g, true);
  if (es.info() != Eigen::Success) {
    res.diagnostic = "eigenvalue iteration failed";
    res.warning = true;
    return res;
  }
  const Eigen::VectorXcd ev = es.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return std::abs(ev(a)) > std::abs(ev(b)); });
  const std::complex<double> l1 = ev(order[0]);
  const double m1 = std::abs(l1), m2 = std::abs(ev(order[1]));
  res.gap_ratio = m2 == 0.0 ? std::numeric_limits<double>::infinity() : m1 / m2;
  if (std::abs(l1.imag()) > 1e-12 * std::max(1.0, m1)) {
    res.gap_ratio = 1.0;
    // A nearly real pair usually comes from a perturbed defective cluster near the top.
    res.warning = std::abs(l1.imag()) < kNearRealPair * m1;
    res.diagnostic = "top eigenvalue is not real";
    return res;
  }
  if (res.gap_ratio <= 1.0 + eps_gap) {
    res.warning = res.gap_ratio > 1.0 + 1e-12;
    res.diagnostic = res.warning ? "spectral gap below eps_gap" : "top modulus is attained more than once";
    return res;
  }
  VectorXd x = es.eigenvectors().col(order[0]).real();
  x.normalize();
  const double lambda = l1.real();
  if ((g * x - lambda * x).norm() > 1e-8 * std::max(1.0, std::abs(lambda))) {
    res.warning = true;
    res.diagnostic = "eigenvector residual too large";
    return res;
  }
  // First-order error bound for the eigendirection: machine eps * |g| * condition / separation.
  Eigen::EigenSolver<MatrixXd> left(g.transpose(), true);
  Eigen::Index top_left = 0;
  left.eigenvalues().cwiseAbs().maxCoeff(&top_left);
  const VectorXd y = left.eigenvectors().col(top_left).real().normalized();
  double sep = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < order.size(); ++k) sep = std::min(sep, std::abs(ev(order[k]) - l1));
  const double cond = 1.0 / std::max(std::abs(y.dot(x)), 1e-300);
  res.direction_error = std::numeric_limits<double>::epsilon() * g.norm() * cond / sep;
  if (res.direction_error > kMaxDirectionError) {
    res.warning = true;
    res.diagnostic = "attracting direction is ill-conditioned";
    return res;
  }
  ProximalWitness w;
  w.matrix = g;
  w.lambda = lambda;
  w.gap_ratio = res.gap_ratio;
  w.attracting = x;
  res.witness = std::move(w);
  return res;
}

LimitSetSample sample_limit_set(const CoxeterPolytope& p, int word_length, int count, std::uint64_t seed,
                                double eps_gap) {
  if (word_length < 1 || count < 1) throw PreconditionError("sample_limit_set: word length and count must be positive");
  if (classify_type(p.cartan()).sign != TypeSign::Negative)
    throw PreconditionError("sample_limit_set: P must be of negative type");
  LimitSetSample out;
  out.word_length = word_length;
  out.count = count;
  out.seed = seed;
  const Chart chart = make_chart(p, polytope_rays(p));
  const auto refl = reflections(p);
  const int n = p.size();
  const double resolution = 10.0 * p.eps();

  std::mt19937_64 rng(seed);
  std::geometric_distribution<int> deficit(0.3);
  std::uniform_int_distribution<int> first(0, n - 1), next(0, n - 2);
  std::vector<VectorXd> chart_pts;
  const long max_words = 50L * count;
  while (static_cast<int>(out.points.size()) < count && out.words_tried < max_words) {
    ++out.words_tried;
    const int len = std::max(1, word_length - deficit(rng));
    std::vector<int> word;
    MatrixXd g = MatrixXd::Identity(p.ambient(), p.ambient());
    for (int k = 0; k < len; ++k) {
      int s = first(rng);
      if (!word.empty()) {
        s = next(rng);
        if (s >= word.back()) ++s;  // reduced: no letter twice in a row
      }
      word.push_back(s);
      g = g * refl[static_cast<std::size_t>(s)].matrix;
    }
    auto r = detect_proximal(g, eps_gap);
    if (!r.witness) continue;
    VectorXd x = r.witness->attracting;
    if (chart.phi.dot(x) < 0) x = -x;
    if (chart.phi.dot(x) <= 0) continue;
    const VectorXd u = chart.to_chart(x);
    bool dup = false;
    for (const auto& v : chart_pts)
      if ((v - u).cwiseAbs().maxCoeff() <= resolution) {
        dup = true;
        break;
      }
    if (dup) continue;
    r.witness->word = std::move(word);
    r.witness->attracting = x;
    chart_pts.push_back(u);
    out.points.push_back(x);
    out.witnesses.push_back(std::move(*r.witness));
  }
  if (out.points.empty()) out.diagnostic = "no proximal element among " + std::to_string(out.words_tried) + " words";
  else if (static_cast<int>(out.points.size()) < count)
    out.diagnostic = "only " + std::to_string(out.points.size()) + " distinct points after " +
                     std::to_string(out.words_tried) + " words";
  return out;
}

double polar_span_residual(const CoxeterPolytope& p, const VectorXd& x) {
  const MatrixXd& v = p.v();
  Eigen::ColPivHouseholderQR<MatrixXd> qr(v);
  qr.setThreshold(1e-10);
  const VectorXd coeff = qr.solve(x);
  return (v * coeff - x).norm() / std::max(x.norm(), 1e-300);
}

namespace {

template <typename Scalar>
struct SeedGeometry {
  Matrix<Scalar> constraints;
  std::vector<Vector<Scalar>> rays;
  std::vector<bool> inside;
};

template <typename Scalar>
bool same_direction(const Vector<Scalar>& a, const Vector<Scalar>& b, double eps) {
  using T = ScalarTraits<Scalar>;
  // a and b both nonzero; same ray iff rank [a b] = 1 with positive proportionality.
  Matrix<Scalar> m(a.size(), 2);
  m << a, b;
  if (linalg::rank<Scalar>(m, eps) != 1) return false;
  return T::sign(Scalar(a.dot(b)), eps) > 0;
}

template <typename Scalar>
void for_each_subset(int n, int k, const std::function<void(const IndexSet&)>& f) {
  IndexSet idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return;
  for (;;) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

template <typename Scalar>
SeedGeometry<Scalar> seed_geometry(const Matrix<Scalar>& alpha, const Matrix<Scalar>& v,
                                   const std::vector<Vector<Scalar>>& p_vertices, double eps) {
  using T = ScalarTraits<Scalar>;
  const int dim = static_cast<int>(alpha.cols());
  const int n = static_cast<int>(v.cols());
  const int d = dim - 1;

  // Facets of cone(v): hyperplanes through d independent polars with all polars on one side.
  std::vector<Vector<Scalar>> facets;
  const Matrix<Scalar> vt = v.transpose();
  for_each_subset<Scalar>(n, d, [&](const IndexSet& idx) {
    const Matrix<Scalar> rows = linalg::select_rows<Scalar>(vt, idx);
    if (linalg::rank<Scalar>(rows, eps) != d) return;
    const Matrix<Scalar> ker = linalg::nullspace<Scalar>(rows, eps);
    if (ker.cols() != 1) return;
    Vector<Scalar> c = ker.col(0);
    int pos = 0, neg = 0;
    for (int j = 0; j < n; ++j) {
      const int s = T::sign(Scalar(c.dot(v.col(j))), eps);
      pos += s > 0;
      neg += s < 0;
    }
    if (pos > 0 && neg > 0) return;
    if (pos > 0) c = -c;  // now c.v_j <= 0, so cone(v) = {c x <= 0}
    for (const auto& f : facets)
      if (same_direction<Scalar>(f, c, eps)) return;
    facets.push_back(c);
  });

  SeedGeometry<Scalar> g;
  const int m = static_cast<int>(alpha.rows() + static_cast<Eigen::Index>(facets.size()));
  g.constraints.resize(m, dim);
  g.constraints.topRows(alpha.rows()) = alpha;
  for (std::size_t i = 0; i < facets.size(); ++i)
    g.constraints.row(alpha.rows() + static_cast<Eigen::Index>(i)) = facets[i].transpose();

  // Extreme rays of {constraints x <= 0}.
  for_each_subset<Scalar>(m, d, [&](const IndexSet& idx) {
    const Matrix<Scalar> rows = linalg::select_rows<Scalar>(g.constraints, idx);
    const Matrix<Scalar> ker = linalg::nullspace<Scalar>(rows, eps);
    if (ker.cols() != 1) return;
    for (int sgn : {1, -1}) {
      const Vector<Scalar> r = Scalar(sgn) * ker.col(0);
      bool ok = true;
      for (int i = 0; i < m && ok; ++i) ok = T::sign(Scalar(g.constraints.row(i).dot(r)), eps) <= 0;
      if (!ok) continue;
      bool dup = false;
      for (const auto& q : g.rays) dup = dup || same_direction<Scalar>(q, r, eps);
      if (!dup) g.rays.push_back(r);
    }
  });

  for (const auto& x : p_vertices) {
    bool in = true;
    for (const auto& c : facets) in = in && T::sign(Scalar(c.dot(x)), eps) <= 0;
    g.inside.push_back(in);
  }
  return g;
}

}  // namespace

OmegaMinSeed omega_min_seed(const CoxeterPolytope& p) {
  if (p.dim() < 1) throw PreconditionError("omega_min_seed: P must have positive dimension");
  if (classify_type(p.cartan()).sign != TypeSign::Negative)
    throw PreconditionError("omega_min_seed: P must be of negative type");
  if (irreducible_components(p.cartan()).size() != 1) throw PreconditionError("omega_min_seed: P must be irreducible");
  const auto rep = representation_report(p);
  if (!rep.dual_reduced)
    throw PreconditionError("omega_min_seed: Span(v_s) has dimension " + std::to_string(rep.v_v_dim) + " < " +
                            std::to_string(p.ambient()));
  const auto verts = vertices(p);
  OmegaMinSeed out;
  if (p.exact()) {
    std::vector<VectorQ> xs;
    for (const auto& f : verts) xs.push_back(*f.exact_witness);
    const auto g = seed_geometry<Rational>(p.alpha_exact(), p.v_exact(), xs, p.eps());
    out.exact_constraints = g.constraints;
    out.constraints = to_double(g.constraints);
    for (const auto& r : g.rays) out.rays.push_back(to_double(r).normalized());
    out.vertex_inside = g.inside;
  } else {
    std::vector<VectorXd> xs;
    for (const auto& f : verts) xs.push_back(f.witness);
    const auto g = seed_geometry<double>(p.alpha(), p.v(), xs, p.eps());
    out.constraints = g.constraints;
    for (const auto& r : g.rays) out.rays.push_back(r.normalized());
    out.vertex_inside = g.inside;
  }
  out.equals_p = std::all_of(out.vertex_inside.begin(), out.vertex_inside.end(), [](bool b) { return b; });
  return out;
}

LimitHull hull_of_limit_set(const LimitSetSample& sample, const Chart& chart) {
  if (sample.points.empty()) throw PreconditionError("hull_of_limit_set: empty sample");
  LimitHull h{ConvexBody::ellipsoid(VectorXd::Zero(1), MatrixXd::Identity(1, 1)), {}};
  for (const auto& x : sample.points) h.chart_points.push_back(chart.to_chart(x));
  const int d = chart.dim();
  MatrixXd diffs(d, static_cast<Eigen::Index>(h.chart_points.size()));
  for (std::size_t i = 0; i < h.chart_points.size(); ++i)
    diffs.col(static_cast<Eigen::Index>(i)) = h.chart_points[i] - h.chart_points[0];
  const int r = linalg::rank<double>(diffs, 1e-9);
  if (r < d)
    throw PreconditionError("hull_of_limit_set: degenerate hull, affine rank " + std::to_string(r) + " < " +
                            std::to_string(d));
  h.body = ConvexBody::hull(h.chart_points);
  return h;
}

double limit_hull_gap(const LimitSetSample& sample, const OrbitTiling& tiling, int depth, const Chart& chart) {
  if (chart.dim() != 2) throw PreconditionError("limit_hull_gap: the chart must be 2-dimensional");
  std::vector<geometry::Point2> lim, tiles;
  for (const auto& x : sample.points) lim.push_back(chart.to_chart(x).head<2>());
  const auto rays = polytope_rays(tiling.polytope());
  for (const auto& e : tiling.elements())
    if (e.depth <= depth)
      for (const auto& r : rays) tiles.push_back(chart.to_chart(e.matrix * r).head<2>());
  return geometry::hausdorff_distance(geometry::convex_hull_2d(lim), geometry::convex_hull_2d(tiles));
}

}  // namespace vinberg
