#include "vinberg/polytope.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "vinberg/linalg.hpp"
#include "vinberg/lp.hpp"

namespace vinberg {

CoxeterPolytope make_polytope_unchecked(MatrixQ alpha, MatrixQ v, const CartanMatrix& a);
CoxeterPolytope make_polytope_unchecked(MatrixXd alpha, MatrixXd v, const CartanMatrix& a);

CoxeterPolytope make_polytope_unchecked(MatrixQ alpha, MatrixQ v, const CartanMatrix& a) {
  CoxeterPolytope p(a);
  p.alpha_ = to_double(alpha);
  p.v_ = to_double(v);
  p.alpha_q_ = std::move(alpha);
  p.v_q_ = std::move(v);
  return p;
}

CoxeterPolytope make_polytope_unchecked(MatrixXd alpha, MatrixXd v, const CartanMatrix& a) {
  CoxeterPolytope p(a);
  p.alpha_ = std::move(alpha);
  p.v_ = std::move(v);
  return p;
}

const MatrixQ& CoxeterPolytope::alpha_exact() const {
  if (!exact()) throw PreconditionError("polytope is in approximate mode");
  return alpha_q_;
}

const MatrixQ& CoxeterPolytope::v_exact() const {
  if (!exact()) throw PreconditionError("polytope is in approximate mode");
  return v_q_;
}

namespace {

std::string facet_label(int s) { return std::to_string(s + 1); }

IndexSet complement(const IndexSet& sub, int n) {
  IndexSet out;
  for (int s = 0; s < n; ++s)
    if (!std::binary_search(sub.begin(), sub.end(), s)) out.push_back(s);
  return out;
}

IndexSet sorted_unique(IndexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

struct FaceLp {
  bool feasible = false;
  double margin = 0.0;
  VectorXd witness;
  std::optional<VectorQ> exact_witness;
  int kernel_dim = 0;
};

/// Maximize t subject to x = N y, alpha_s(x) + t <= 0 off S', t <= 1, |y|_inf <= 1.
template <typename Scalar>
FaceLp face_lp(const Matrix<Scalar>& alpha, const IndexSet& subset, double eps) {
  using T = ScalarTraits<Scalar>;
  const int n = static_cast<int>(alpha.rows());
  const Matrix<Scalar> kernel = linalg::nullspace<Scalar>(linalg::select_rows(alpha, subset), eps);
  FaceLp out;
  out.kernel_dim = static_cast<int>(kernel.cols());
  const IndexSet rest = complement(subset, n);
  if (kernel.cols() == 0 || rest.empty()) return out;

  const Eigen::Index k = kernel.cols();
  const auto r = static_cast<Eigen::Index>(rest.size());
  Matrix<Scalar> lhs = Matrix<Scalar>::Zero(r + 1 + 2 * k, k + 1);
  Vector<Scalar> rhs = Vector<Scalar>::Zero(r + 1 + 2 * k);
  lhs.topLeftCorner(r, k) = linalg::select_rows(alpha, rest) * kernel;
  lhs.block(0, k, r, 1).setConstant(Scalar(1));
  lhs(r, k) = Scalar(1);
  rhs(r) = Scalar(1);
  for (Eigen::Index i = 0; i < k; ++i) {
    lhs(r + 1 + 2 * i, i) = Scalar(1);
    lhs(r + 2 + 2 * i, i) = Scalar(-1);
    rhs(r + 1 + 2 * i) = Scalar(1);
    rhs(r + 2 + 2 * i) = Scalar(1);
  }
  Vector<Scalar> obj = Vector<Scalar>::Zero(k + 1);
  obj(k) = Scalar(1);
  const auto res = lp::maximize_free<Scalar>(lhs, rhs, obj, eps);
  if (res.status != lp::Status::Optimal || T::sign(res.value, eps) <= 0) return out;

  const Vector<Scalar> x = kernel * res.x.head(k);
  out.feasible = true;
  out.margin = T::to_double(res.value);
  if constexpr (T::exact) {
    out.exact_witness = x;
    out.witness = to_double(x);
  } else {
    out.witness = x;
    // Substitution check of the float solution.
    const VectorXd ax = alpha * x;
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    for (int s = 0; s < n; ++s) {
      const bool in = std::binary_search(subset.begin(), subset.end(), s);
      if (in ? std::abs(ax(s)) > 10 * eps * scale : ax(s) >= 0)
        throw std::runtime_error("face LP witness failed substitution check");
    }
  }
  return out;
}

template <typename Scalar>
void check_structure(const Matrix<Scalar>& alpha, const Matrix<Scalar>& v, double eps) {
  using T = ScalarTraits<Scalar>;
  if (alpha.rows() < 1 || alpha.cols() < 1 || v.rows() != alpha.cols() || v.cols() != alpha.rows())
    throw PolytopeError(PolytopeError::Kind::Shape, -1,
                        "alpha must be n x (d+1) and v must be (d+1) x n with n, d+1 >= 1");
  for (Eigen::Index s = 0; s < alpha.rows(); ++s) {
    const Scalar pairing = alpha.row(s).dot(v.col(s));
    if (!T::is_zero(pairing - Scalar(2), eps)) {
      std::ostringstream os;
      os << "polar normalization alpha_s(v_s) = 2 fails for pair " << s + 1 << " (value "
         << T::to_double(pairing) << ")";
      throw PolytopeError(PolytopeError::Kind::Normalization, static_cast<int>(s), os.str());
    }
  }
  if (linalg::rank<Scalar>(alpha, eps) != alpha.cols())
    throw PolytopeError(PolytopeError::Kind::NotReduced, -1,
                        "the covectors have a common kernel (data is not reduced)");
  if (!face_lp<Scalar>(alpha, {}, eps).feasible)
    throw PolytopeError(PolytopeError::Kind::EmptyInterior, -1, "the cone {alpha_s <= 0} has empty interior");
  if (alpha.rows() > 1) {
    for (int s = 0; s < alpha.rows(); ++s)
      if (!face_lp<Scalar>(alpha, {s}, eps).feasible)
        throw PolytopeError(PolytopeError::Kind::RedundantFacet, s,
                            "facet " + facet_label(s) + " is redundant");
  }
}

}  // namespace

CoxeterPolytope build_polytope(const MatrixQ& alpha, const MatrixQ& v, Mode mode, double eps) {
  if (mode == Mode::Approx) return build_polytope(to_double(alpha), to_double(v), eps);
  check_structure<Rational>(alpha, v, eps);
  const CartanMatrix a = CartanMatrix::validate(MatrixQ(alpha * v), Mode::Exact, eps);
  return make_polytope_unchecked(alpha, v, a);
}

CoxeterPolytope build_polytope(const MatrixXd& alpha, const MatrixXd& v, double eps) {
  check_structure<double>(alpha, v, eps);
  const CartanMatrix a = CartanMatrix::validate(MatrixXd(alpha * v), eps);
  return make_polytope_unchecked(alpha, v, a);
}

CoxeterPolytope tits_polytope(const CartanMatrix& a) {
  const int n = a.size();
  if (a.exact()) return make_polytope_unchecked(MatrixQ::Identity(n, n), a.exact_entries(), a);
  return make_polytope_unchecked(MatrixXd::Identity(n, n), a.entries(), a);
}

namespace {

FaceDescriptor empty_face(const CoxeterPolytope& p) {
  IndexSet all(static_cast<std::size_t>(p.size()));
  for (int s = 0; s < p.size(); ++s) all[static_cast<std::size_t>(s)] = s;
  const CartanMatrix link = restrict(p.cartan(), all);
  FaceDescriptor f{all, VectorXd::Zero(p.ambient()), std::nullopt, -1, 0.0, link, classify_type(link)};
  if (p.exact()) f.exact_witness = VectorQ::Zero(p.ambient());
  return f;
}

}  // namespace

std::optional<FaceDescriptor> defines_face(const CoxeterPolytope& p, const IndexSet& subset) {
  const IndexSet sub = sorted_unique(subset);
  for (int s : sub)
    if (s < 0 || s >= p.size()) throw PreconditionError("defines_face: facet index out of range");
  if (static_cast<int>(sub.size()) == p.size()) return empty_face(p);
  const FaceLp r = p.exact() ? face_lp<Rational>(p.alpha_exact(), sub, p.eps())
                             : face_lp<double>(p.alpha(), sub, p.eps());
  if (!r.feasible) return std::nullopt;
  const CartanMatrix link = restrict(p.cartan(), sub);
  return FaceDescriptor{sub, r.witness, r.exact_witness, r.kernel_dim - 1, r.margin, link, classify_type(link)};
}

std::vector<FaceDescriptor> enumerate_faces(const CoxeterPolytope& p, int max_facets) {
  const int n = p.size();
  if (n > max_facets || n > 30)
    throw PreconditionError("enumerate_faces: " + std::to_string(n) + " facets exceed the cap of " +
                            std::to_string(max_facets));
  std::vector<IndexSet> subsets;
  for (unsigned mask = 0; mask < (1u << n); ++mask) subsets.push_back(subset_from_mask(mask, n));
  std::sort(subsets.begin(), subsets.end(), [](const IndexSet& a, const IndexSet& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<FaceDescriptor> out;
  for (const auto& s : subsets) {
    if (static_cast<int>(s.size()) == n && p.dim() > 0) continue;
    if (auto f = defines_face(p, s)) out.push_back(std::move(*f));
  }
  return out;
}

std::vector<FaceDescriptor> vertices(const CoxeterPolytope& p, int max_facets) {
  std::vector<FaceDescriptor> out;
  for (auto& f : enumerate_faces(p, max_facets))
    if (f.dim == 0 && !f.facets.empty()) out.push_back(std::move(f));
  return out;
}

namespace {

template <typename Scalar>
std::pair<Matrix<Scalar>, Matrix<Scalar>> link_data(const Matrix<Scalar>& alpha, const Matrix<Scalar>& v,
                                                    const IndexSet& facets, double eps) {
  const Matrix<Scalar> rows = linalg::select_rows(alpha, facets);
  const std::vector<int> basis_idx = linalg::independent_rows<Scalar>(rows, eps);
  const Matrix<Scalar> beta = linalg::select_rows(rows, basis_idx);  // r x (d+1)
  // alpha_s = c_s beta  <=>  beta^T c_s^T = alpha_s^T
  const auto coeffs = linalg::solve<Scalar>(Matrix<Scalar>(beta.transpose()), Matrix<Scalar>(rows.transpose()), eps);
  if (!coeffs) throw std::logic_error("link: covector outside the span of the chosen basis");
  Matrix<Scalar> new_alpha = coeffs->transpose();                      // |S_f| x r
  Matrix<Scalar> new_v = beta * linalg::select_cols(v, facets);         // r x |S_f|
  return {std::move(new_alpha), std::move(new_v)};
}

}  // namespace

CoxeterPolytope link(const CoxeterPolytope& p, const FaceDescriptor& f) {
  if (f.facets.empty()) throw PreconditionError("link: the face must lie in some facet");
  const CartanMatrix a = restrict(p.cartan(), f.facets);
  if (p.exact()) {
    auto [al, vv] = link_data<Rational>(p.alpha_exact(), p.v_exact(), f.facets, p.eps());
    return make_polytope_unchecked(std::move(al), std::move(vv), a);
  }
  auto [al, vv] = link_data<double>(p.alpha(), p.v(), f.facets, p.eps());
  return make_polytope_unchecked(std::move(al), std::move(vv), a);
}

const char* to_string(const FaceClass& c) {
  switch (c.sign) {
    case TypeSign::Positive: return "elliptic";
    case TypeSign::Zero: return c.parabolic ? "parabolic" : "zero";
    case TypeSign::Negative: return c.loxodromic ? "loxodromic" : "negative";
    case TypeSign::Mixed: return "mixed";
  }
  return "?";
}

FaceClass classify_face(const CoxeterPolytope& p, const FaceDescriptor& f) {
  FaceClass c;
  c.sign = f.type.sign;
  c.warning = f.type.warning;
  if (f.facets.empty()) return c;
  if (p.exact()) {
    c.span_rank = linalg::rank<Rational>(linalg::select_rows(p.alpha_exact(), f.facets));
    c.cartan_rank = linalg::rank<Rational>(f.link_cartan.exact_entries());
  } else {
    c.span_rank = linalg::rank<double>(linalg::select_rows(p.alpha(), f.facets), p.eps());
    c.cartan_rank = linalg::rank<double>(f.link_cartan.entries(), p.eps());
  }
  c.parabolic = c.sign == TypeSign::Zero && c.cartan_rank == c.span_rank - 1;
  c.loxodromic = c.sign == TypeSign::Negative && c.cartan_rank == c.span_rank;
  return c;
}

BiggerFaces bigger_face(const CoxeterPolytope& p, const IndexSet& t1_in, const IndexSet& t2_in) {
  const IndexSet t1 = sorted_unique(t1_in), t2 = sorted_unique(t2_in);
  for (int s : t1)
    if (std::binary_search(t2.begin(), t2.end(), s)) throw PreconditionError("bigger_face: T1 and T2 intersect");
  for (int s : t1)
    for (int t : t2)
      if (!p.cartan().is_zero_entry(s, t)) throw PreconditionError("bigger_face: T1 is not orthogonal to T2");
  IndexSet both = t1;
  both.insert(both.end(), t2.begin(), t2.end());
  if (!defines_face(p, both)) throw PreconditionError("bigger_face: T1 u T2 does not define a face");

  const TypeSplit split = split_by_type(p.cartan(), t2);
  auto certify = [&](IndexSet s) {
    auto f = defines_face(p, s);
    if (!f) throw std::logic_error("bigger_face: derived subset does not define a face");
    return std::move(*f);
  };
  IndexSet z = t1;
  z.insert(z.end(), split.zero.begin(), split.zero.end());
  IndexSet zp = z, zn = z;
  zp.insert(zp.end(), split.positive.begin(), split.positive.end());
  zn.insert(zn.end(), split.negative.begin(), split.negative.end());
  return BiggerFaces{certify(z), certify(zp), certify(zn)};
}

namespace {

/// Set partitions of {0..k-1} as restricted growth strings, coarsest last.
std::vector<std::vector<int>> set_partitions(int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(static_cast<std::size_t>(k), 0);
  std::function<void(int, int)> rec = [&](int i, int max_label) {
    if (i == k) {
      out.push_back(a);
      return;
    }
    for (int l = 0; l <= max_label + 1; ++l) {
      a[static_cast<std::size_t>(i)] = l;
      rec(i + 1, std::max(max_label, l));
    }
  };
  if (k > 0) {
    a[0] = 0;
    rec(1, 0);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return *std::max_element(x.begin(), x.end()) > *std::max_element(y.begin(), y.end());
  });
  return out;
}

template <typename Scalar>
std::optional<JoinStructure> try_split(const CoxeterPolytope& p, const std::vector<IndexSet>& blocks) {
  const Matrix<Scalar>& alpha = p.alpha_as<Scalar>();
  const Matrix<Scalar>& v = p.v_as<Scalar>();
  const int n = p.size();
  const double eps = p.eps();
  std::vector<Matrix<Scalar>> bases;
  Eigen::Index total = 0;
  for (const auto& b : blocks) {
    bases.push_back(linalg::nullspace<Scalar>(linalg::select_rows(alpha, complement(b, n)), eps));
    total += bases.back().cols();
  }
  if (total != p.ambient()) return std::nullopt;
  Matrix<Scalar> all(p.ambient(), total);
  Eigen::Index col = 0;
  for (const auto& b : bases) {
    all.block(0, col, p.ambient(), b.cols()) = b;
    col += b.cols();
  }
  if (linalg::rank<Scalar>(all, eps) != p.ambient()) return std::nullopt;

  JoinStructure js;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Matrix<Scalar>& basis = bases[i];
    if (basis.cols() == 0) return std::nullopt;
    const Matrix<Scalar> fa = linalg::select_rows(alpha, blocks[i]) * basis;
    const auto fv = linalg::solve<Scalar>(basis, linalg::select_cols(v, blocks[i]), eps);
    if (!fv) return std::nullopt;
    try {
      if constexpr (ScalarTraits<Scalar>::exact) {
        js.factors.push_back(build_polytope(fa, *fv, Mode::Exact, eps));
        js.subspaces.push_back(to_double(basis));
        js.exact_subspaces.emplace_back(basis);
      } else {
        js.factors.push_back(build_polytope(fa, *fv, eps));
        js.subspaces.push_back(basis);
        js.exact_subspaces.emplace_back(std::nullopt);
      }
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
  }
  js.blocks = blocks;
  return js;
}

}  // namespace

std::optional<JoinStructure> decompose(const CoxeterPolytope& p) {
  const std::vector<IndexSet> comps = irreducible_components(p.cartan());
  const int k = static_cast<int>(comps.size());
  if (k < 2) return std::nullopt;
  // Larger component counts only try the finest grouping.
  std::vector<std::vector<int>> groupings;
  if (k <= 8) {
    groupings = set_partitions(k);
  } else {
    std::vector<int> finest(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) finest[static_cast<std::size_t>(i)] = i;
    groupings.push_back(finest);
  }
  for (const auto& g : groupings) {
    const int m = *std::max_element(g.begin(), g.end()) + 1;
    if (m < 2) continue;
    std::vector<IndexSet> blocks(static_cast<std::size_t>(m));
    for (int i = 0; i < k; ++i) {
      auto& b = blocks[static_cast<std::size_t>(g[static_cast<std::size_t>(i)])];
      b.insert(b.end(), comps[static_cast<std::size_t>(i)].begin(), comps[static_cast<std::size_t>(i)].end());
    }
    for (auto& b : blocks) std::sort(b.begin(), b.end());
    std::sort(blocks.begin(), blocks.end());
    auto js = p.exact() ? try_split<Rational>(p, blocks) : try_split<double>(p, blocks);
    if (js) return js;
  }
  return std::nullopt;
}

namespace {

template <typename Scalar>
std::pair<Matrix<Scalar>, Matrix<Scalar>> join_data(const Matrix<Scalar>& ap, const Matrix<Scalar>& vp,
                                                    const Matrix<Scalar>& aq, const Matrix<Scalar>& vq) {
  Matrix<Scalar> alpha = Matrix<Scalar>::Zero(ap.rows() + aq.rows(), ap.cols() + aq.cols());
  Matrix<Scalar> v = Matrix<Scalar>::Zero(vp.rows() + vq.rows(), vp.cols() + vq.cols());
  alpha.topLeftCorner(ap.rows(), ap.cols()) = ap;
  alpha.bottomRightCorner(aq.rows(), aq.cols()) = aq;
  v.topLeftCorner(vp.rows(), vp.cols()) = vp;
  v.bottomRightCorner(vq.rows(), vq.cols()) = vq;
  return {std::move(alpha), std::move(v)};
}

}  // namespace

CoxeterPolytope join(const CoxeterPolytope& p, const CoxeterPolytope& q) {
  const double eps = std::max(p.eps(), q.eps());
  if (p.exact() && q.exact()) {
    auto [alpha, v] = join_data<Rational>(p.alpha_exact(), p.v_exact(), q.alpha_exact(), q.v_exact());
    const CartanMatrix a = CartanMatrix::validate(MatrixQ(alpha * v), Mode::Exact, eps);
    return make_polytope_unchecked(std::move(alpha), std::move(v), a);
  }
  auto [alpha, v] = join_data<double>(p.alpha(), p.v(), q.alpha(), q.v());
  const CartanMatrix a = CartanMatrix::validate(MatrixXd(alpha * v), eps);
  return make_polytope_unchecked(std::move(alpha), std::move(v), a);
}

namespace {

template <typename Pred>
VertexCertificate scan_vertices(const CoxeterPolytope& p, int max_facets, Pred ok) {
  VertexCertificate c;
  c.vertices = vertices(p, max_facets);
  for (const auto& v : c.vertices) {
    if (!ok(v)) {
      c.holds = false;
      c.offending = v;
      break;
    }
  }
  return c;
}

}  // namespace

VertexCertificate is_perfect(const CoxeterPolytope& p, int max_facets) {
  return scan_vertices(p, max_facets, [&](const FaceDescriptor& v) { return classify_face(p, v).elliptic(); });
}

VertexCertificate is_quasiperfect(const CoxeterPolytope& p, int max_facets) {
  return scan_vertices(p, max_facets, [&](const FaceDescriptor& v) {
    const FaceClass c = classify_face(p, v);
    return c.elliptic() || c.parabolic;
  });
}

VertexCertificate is_2perfect(const CoxeterPolytope& p, int max_facets) {
  return scan_vertices(p, max_facets,
                       [&](const FaceDescriptor& v) { return is_perfect(link(p, v), max_facets).holds; });
}

}  // namespace vinberg
