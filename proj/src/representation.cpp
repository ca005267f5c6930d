#include "vinberg/representation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vinberg/linalg.hpp"
#include "vinberg/lp.hpp"

namespace vinberg {

std::vector<Reflection> reflections(const CoxeterPolytope& p) {
  std::vector<Reflection> out;
  const int dim = p.ambient();
  for (int s = 0; s < p.size(); ++s) {
    Reflection r;
    r.generator = s;
    if (p.exact()) {
      r.exact = MatrixQ(MatrixQ::Identity(dim, dim) - p.v_exact().col(s) * p.alpha_exact().row(s));
      r.matrix = to_double(*r.exact);
    } else {
      r.matrix = MatrixXd::Identity(dim, dim) - p.v().col(s) * p.alpha().row(s);
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

bool near_identity(const MatrixXd& m, double tol) {
  return (m - MatrixXd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

}  // namespace

RelationReport check_relations(const CoxeterPolytope& p, int cap) {
  RelationReport rep;
  const auto refl = reflections(p);
  const int n = p.size();
  const int dim = p.ambient();
  // Float powers lose accuracy with the exponent; the tolerance grows accordingly.
  const double tol = std::max(1e3 * p.eps(), 1e-10);
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) {
      const int m = p.cartan().order(s, t);
      if (m != kInfiniteOrder && m > cap) continue;
      ++rep.pairs_checked;
      const int limit = m == kInfiniteOrder ? cap : m;
      auto fail = [&](int j, std::string what) {
        rep.ok = false;
        rep.failures.push_back({s, t, j, std::move(what)});
      };
      if (p.exact()) {
        const MatrixQ st = *refl[s].exact * *refl[t].exact;
        MatrixQ power = MatrixQ::Identity(dim, dim);
        for (int j = 1; j <= limit; ++j) {
          power = power * st;
          const bool id = power == MatrixQ::Identity(dim, dim);
          if (j < limit && id) { fail(j, "identity before the expected order"); break; }
          if (j == limit && m != kInfiniteOrder && !id) fail(j, "not the identity at the expected order");
          if (j == limit && m == kInfiniteOrder && id) fail(j, "identity for an infinite-order pair");
        }
      } else {
        const MatrixXd st = refl[s].matrix * refl[t].matrix;
        MatrixXd power = MatrixXd::Identity(dim, dim);
        for (int j = 1; j <= limit; ++j) {
          power = power * st;
          const bool id = near_identity(power, tol);
          if (j < limit && id) { fail(j, "identity before the expected order"); break; }
          if (j == limit && m != kInfiniteOrder && !id) fail(j, "not the identity at the expected order");
          if (j == limit && m == kInfiniteOrder && id) fail(j, "identity for an infinite-order pair");
        }
      }
    }
  }
  return rep;
}

bool OrbitTiling::LexLess::operator()(const MatrixQ& a, const MatrixQ& b) const {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  if (a.cols() != b.cols()) return a.cols() < b.cols();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Rational& x = a.data()[i];
    const Rational& y = b.data()[i];
    if (x != y) return x < y;
  }
  return false;
}

double OrbitTiling::fingerprint(const MatrixXd& g) const { return fp_left_.dot(g * fp_right_); }

namespace {

constexpr double kDedupFactor = 10.0;      // equality: within 10 eps, relative
constexpr double kAmbiguityFactor = 1e4;   // closer than this many tolerances but unequal: ambiguous

double rel_distance(const MatrixXd& a, const MatrixXd& b) {
  const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

int OrbitTiling::lookup_exact(const MatrixQ& g) const {
  const auto it = exact_index_.find(g);
  return it == exact_index_.end() ? -1 : it->second;
}

int OrbitTiling::lookup_approx(const MatrixXd& g) const {
  const double tol = kDedupFactor * polytope_.eps();
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  const double f = fingerprint(g);
  const double band = kAmbiguityFactor * tol * scale * fp_left_.lpNorm<1>() * fp_right_.lpNorm<1>();
  int found = -1;
  for (auto it = approx_index_.lower_bound(f - band); it != approx_index_.end() && it->first <= f + band; ++it) {
    const double d = rel_distance(g, elements_[static_cast<std::size_t>(it->second)].matrix);
    if (d <= tol) {
      if (found >= 0) throw OrbitAmbiguity("orbit deduplication: two stored elements match one matrix");
      found = it->second;
    } else if (d <= kAmbiguityFactor * tol) {
      throw OrbitAmbiguity("orbit deduplication: matrices agree to " + std::to_string(d) +
                           " (relative) without being equal at tolerance " + std::to_string(tol));
    }
  }
  return found;
}

int OrbitTiling::find(const MatrixXd& g) const {
  if (polytope_.exact()) return lookup_exact(to_rational(g));
  return lookup_approx(g);
}

int OrbitTiling::find(const MatrixQ& g) const {
  if (polytope_.exact()) return lookup_exact(g);
  return lookup_approx(to_double(g));
}

OrbitTiling::OrbitTiling(CoxeterPolytope p, int depth) : polytope_(std::move(p)), depth_(depth) {
  if (depth < 0) throw PreconditionError("expand_orbit: depth must be nonnegative");
  const int dim = polytope_.ambient();
  const int n = polytope_.size();
  fp_left_.resize(dim);
  fp_right_.resize(dim);
  for (int i = 0; i < dim; ++i) {
    fp_left_(i) = 1.0 / (i + std::sqrt(2.0));
    fp_right_(i) = 1.0 / (i + std::sqrt(3.0));
  }
  const auto refl = reflections(polytope_);

  auto add = [&](OrbitElement e) {
    const int idx = static_cast<int>(elements_.size());
    if (polytope_.exact()) exact_index_.emplace(*e.exact, idx);
    else approx_index_.emplace(fingerprint(e.matrix), idx);
    elements_.push_back(std::move(e));
    neighbors_.emplace_back(static_cast<std::size_t>(n), -1);
    return idx;
  };

  OrbitElement id;
  id.matrix = MatrixXd::Identity(dim, dim);
  id.inverse = id.matrix;
  if (polytope_.exact()) {
    id.exact = MatrixQ::Identity(dim, dim);
    id.exact_inverse = id.exact;
  }
  add(std::move(id));
  level_sizes_.push_back(1);

  std::size_t level_begin = 0;
  for (int level = 0; level <= depth; ++level) {
    const std::size_t level_end = elements_.size();
    int fresh = 0;
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (int s = 0; s < n; ++s) {
        OrbitElement child;
        if (polytope_.exact()) {
          child.exact = MatrixQ(*elements_[i].exact * *refl[s].exact);
          child.exact_inverse = MatrixQ(*refl[s].exact * *elements_[i].exact_inverse);
          child.matrix = to_double(*child.exact);
          child.inverse = to_double(*child.exact_inverse);
        } else {
          child.matrix = elements_[i].matrix * refl[s].matrix;
          child.inverse = refl[s].matrix * elements_[i].inverse;
        }
        const int existing = polytope_.exact() ? lookup_exact(*child.exact) : lookup_approx(child.matrix);
        if (existing >= 0) {
          neighbors_[i][static_cast<std::size_t>(s)] = existing;
          continue;
        }
        if (level == depth) continue;  // beyond the requested word length
        child.parent = static_cast<int>(i);
        child.generator = s;
        child.depth = level + 1;
        const int idx = add(std::move(child));
        neighbors_[i][static_cast<std::size_t>(s)] = idx;
        ++fresh;
      }
    }
    if (level < depth) level_sizes_.push_back(fresh);
    level_begin = level_end;
  }
  // Neighbour relation is symmetric: gamma sigma_s = gamma' iff gamma' sigma_s = gamma.
  for (std::size_t i = 0; i < elements_.size(); ++i)
    for (int s = 0; s < n; ++s) {
      const int j = neighbors_[i][static_cast<std::size_t>(s)];
      if (j >= 0) neighbors_[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)] = static_cast<int>(i);
    }
}

MatrixXd OrbitTiling::tile_covectors(int element) const {
  return polytope_.alpha() * elements_[static_cast<std::size_t>(element)].inverse;
}

VectorXd Chart::to_chart(const VectorXd& x) const {
  const double h = phi.dot(x);
  return basis.transpose() * (x / h - origin);
}

VectorXd Chart::lift(const VectorXd& u) const { return origin + basis * u; }

std::vector<VectorXd> polytope_rays(const CoxeterPolytope& p) {
  std::vector<VectorXd> out;
  if (p.dim() == 0) {
    VectorXd r(1);
    r(0) = p.alpha()(0, 0) > 0 ? -1.0 : 1.0;
    out.push_back(r);
    return out;
  }
  for (const auto& v : vertices(p)) out.push_back(v.witness.normalized());
  return out;
}

std::pair<RowVector<double>, double> max_margin_chart(const std::vector<VectorXd>& points, double eps) {
  if (points.empty()) throw PreconditionError("max_margin_chart: no points");
  const Eigen::Index k = points.front().size();
  std::vector<VectorXd> unit;
  unit.reserve(points.size());
  for (const auto& x : points) unit.push_back(x.normalized());

  // Seed the active set with the extreme points along each coordinate.
  std::vector<int> active;
  for (Eigen::Index j = 0; j < k; ++j) {
    int lo = 0, hi = 0;
    for (std::size_t i = 0; i < unit.size(); ++i) {
      if (unit[i](j) < unit[static_cast<std::size_t>(lo)](j)) lo = static_cast<int>(i);
      if (unit[i](j) > unit[static_cast<std::size_t>(hi)](j)) hi = static_cast<int>(i);
    }
    active.push_back(lo);
    active.push_back(hi);
  }
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());

  RowVector<double> phi = RowVector<double>::Zero(k);
  double margin = 0.0;
  for (int round = 0; round < 200; ++round) {
    const auto a = static_cast<Eigen::Index>(active.size());
    MatrixXd lhs = MatrixXd::Zero(a + 2 * k + 1, k + 1);
    VectorXd rhs = VectorXd::Zero(a + 2 * k + 1);
    for (Eigen::Index i = 0; i < a; ++i) {
      lhs.block(i, 0, 1, k) = -unit[static_cast<std::size_t>(active[static_cast<std::size_t>(i)])].transpose();
      lhs(i, k) = 1.0;
    }
    for (Eigen::Index j = 0; j < k; ++j) {
      lhs(a + 2 * j, j) = 1.0;
      lhs(a + 2 * j + 1, j) = -1.0;
      rhs(a + 2 * j) = 1.0;
      rhs(a + 2 * j + 1) = 1.0;
    }
    lhs(a + 2 * k, k) = 1.0;
    rhs(a + 2 * k) = 1.0;
    VectorXd obj = VectorXd::Zero(k + 1);
    obj(k) = 1.0;
    const auto res = lp::maximize_free<double>(lhs, rhs, obj, 1e-13);
    phi = res.x.head(k).transpose();
    margin = res.value;
    // add the most violated points
    std::vector<std::pair<double, int>> viol;
    for (std::size_t i = 0; i < unit.size(); ++i) {
      const double slack = phi.dot(unit[i]) - margin;
      if (slack < -1e-12) viol.emplace_back(slack, static_cast<int>(i));
    }
    if (viol.empty()) break;
    std::sort(viol.begin(), viol.end());
    for (std::size_t i = 0; i < std::min<std::size_t>(viol.size(), 16); ++i) active.push_back(viol[i].second);
  }
  double actual = std::numeric_limits<double>::infinity();
  for (const auto& u : unit) actual = std::min(actual, phi.dot(u));
  (void)eps;
  return {phi, actual};
}

namespace {

Chart chart_from_phi(const RowVector<double>& phi, double margin, bool from_witness) {
  Chart c;
  c.phi = phi;
  c.origin = phi.transpose() / phi.squaredNorm();
  // Orthonormal basis of ker phi from a full QR of phi^T.
  const Eigen::Index k = phi.size();
  Eigen::HouseholderQR<MatrixXd> qr(MatrixXd(phi.transpose()));
  const MatrixXd q = qr.householderQ() * MatrixXd::Identity(k, k);
  c.basis = q.rightCols(k - 1);
  c.margin = margin;
  c.from_witness = from_witness;
  return c;
}

}  // namespace

Chart make_chart(const CoxeterPolytope& p, const std::vector<VectorXd>& points) {
  const TypeTag tag = classify_type(p.cartan());
  if (tag.sign == TypeSign::Negative) {
    const CartanMatrix at = p.exact() ? CartanMatrix::validate(MatrixQ(p.cartan().exact_entries().transpose()))
                                      : CartanMatrix::validate(MatrixXd(p.cartan().entries().transpose()), p.eps());
    const WitnessVector w = witness_vector(at);
    RowVector<double> phi = -(w.x.transpose() * p.alpha());
    phi /= phi.cwiseAbs().maxCoeff();
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& x : points) margin = std::min(margin, phi.dot(x.normalized()));
    if (points.empty()) margin = 0.0;
    if (margin > 1e-9) return chart_from_phi(phi, margin, true);
  }
  const auto [phi, margin] = max_margin_chart(points, p.eps());
  if (margin <= 1e-12) throw PreconditionError("make_chart: no affine chart contains the points");
  return chart_from_phi(phi, margin, false);
}

std::optional<MatrixXd> invariant_quadric(const CoxeterPolytope& p) {
  if (p.size() != p.ambient() || !p.cartan().symmetric()) return std::nullopt;
  const MatrixXd& a = p.cartan().entries();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  const VectorXd ev = es.eigenvalues();
  const double tol = 1e-9 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  int neg = 0, zero = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= tol) ++zero;
    else if (ev(i) < 0) ++neg;
  }
  if (neg != 1 || zero != 0) return std::nullopt;
  const MatrixXd q = p.alpha().transpose() * a.inverse() * p.alpha();
  for (const auto& r : polytope_rays(p))
    if (r.dot(q * r) > 1e-9) return std::nullopt;
  const auto interior = defines_face(p, {});
  if (!interior || interior->witness.dot(q * interior->witness) >= 0) return std::nullopt;
  return q;
}

DomainApprox domain_approx(const OrbitTiling& tiling) {
  if (tiling.size() == 0) throw PreconditionError("domain_approx: empty tiling");
  DomainApprox d;
  d.depth = tiling.depth();
  const auto rays = polytope_rays(tiling.polytope());
  MatrixXd r(tiling.polytope().ambient(), static_cast<Eigen::Index>(rays.size()));
  for (std::size_t j = 0; j < rays.size(); ++j) r.col(static_cast<Eigen::Index>(j)) = rays[j];
  for (int i = 0; i < tiling.size(); ++i) {
    MatrixXd img = tiling[i].matrix * r;
    for (Eigen::Index j = 0; j < img.cols(); ++j) img.col(j).normalize();
    d.tile_vertices.push_back(std::move(img));
    for (int s = 0; s < tiling.polytope().size(); ++s)
      if (tiling.neighbor(i, s) < 0)
        d.frontier.push_back({i, s, tiling.polytope().alpha().row(s) * tiling[i].inverse});
  }
  d.quadric = invariant_quadric(tiling.polytope());
  return d;
}

RepresentationReport representation_report(const CoxeterPolytope& p) {
  RepresentationReport r;
  int ra, rv;
  if (p.exact()) {
    ra = linalg::rank<Rational>(p.alpha_exact());
    rv = linalg::rank<Rational>(p.v_exact());
    r.cartan_rank = linalg::rank<Rational>(p.cartan().exact_entries());
  } else {
    ra = linalg::rank<double>(p.alpha(), p.eps());
    rv = linalg::rank<double>(p.v(), p.eps());
    r.cartan_rank = linalg::rank<double>(p.cartan().entries(), p.eps());
  }
  r.v_alpha_dim = p.ambient() - ra;
  r.v_v_dim = rv;
  r.reduced = r.v_alpha_dim == 0;
  r.dual_reduced = r.v_v_dim == p.ambient();
  r.irreducible = r.reduced && r.dual_reduced;
  return r;
}

const char* to_string(Properness p) {
  switch (p) {
    case Properness::ProperlyConvex: return "properly_convex";
    case Properness::NotProper: return "not_proper";
    case Properness::Inconclusive: return "inconclusive";
  }
  return "?";
}

PropernessReport check_properness(const OrbitTiling& tiling) {
  PropernessReport rep;
  const int n_full = tiling.depth();
  if (n_full < 8) {
    rep.diagnostic = "depth " + std::to_string(n_full) + " is below 8";
    return rep;
  }
  const auto rays = polytope_rays(tiling.polytope());
  auto margin_at = [&](int depth) {
    std::vector<VectorXd> pts;
    for (const auto& e : tiling.elements())
      if (e.depth <= depth)
        for (const auto& r : rays) pts.push_back(e.matrix * r);
    return max_margin_chart(pts).second;
  };
  rep.margin_quarter = margin_at(n_full / 4);
  rep.margin_half = margin_at(n_full / 2);
  rep.margin_full = margin_at(n_full);

  // Margins are nonincreasing in the depth. A decay like c/N halves at each doubling and
  // extrapolates to 0; geometric convergence to a positive chart margin does not.
  const double d1 = rep.margin_half - rep.margin_quarter;
  const double d2 = rep.margin_full - rep.margin_half;
  constexpr double kFlat = 1e-12;
  if (d2 >= -kFlat) rep.margin_limit = rep.margin_full;
  else if (d1 >= -kFlat || d2 / d1 >= 1.0) rep.margin_limit = -std::numeric_limits<double>::infinity();
  else rep.margin_limit = rep.margin_full - d2 * d2 / (d2 - d1);

  if (rep.margin_full <= 1e-9 || rep.margin_limit <= 0.25 * rep.margin_full)
    rep.verdict = Properness::NotProper;
  else
    rep.verdict = Properness::ProperlyConvex;

  const bool negative = classify_type(tiling.polytope().cartan()).sign == TypeSign::Negative;
  rep.consistent_with_type = negative == (rep.verdict == Properness::ProperlyConvex);
  if (!rep.consistent_with_type)
    rep.diagnostic = std::string("chart probe says ") + to_string(rep.verdict) +
                     " but the Cartan type says " + (negative ? "negative" : "not negative");
  return rep;
}

}  // namespace vinberg
