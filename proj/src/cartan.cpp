#include "vinberg/cartan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vinberg/linalg.hpp"

namespace vinberg {

const char* to_string(TypeSign t) {
  switch (t) {
    case TypeSign::Positive: return "positive";
    case TypeSign::Zero: return "zero";
    case TypeSign::Negative: return "negative";
    case TypeSign::Mixed: return "mixed";
  }
  return "?";
}

namespace {

std::string describe(const CartanViolation& v) {
  std::ostringstream os;
  switch (v.kind) {
    case CartanViolation::Kind::Shape: os << "matrix must be square with n >= 1"; break;
    case CartanViolation::Kind::Diagonal: os << "A_ss = 2 violated"; break;
    case CartanViolation::Kind::OffDiagonalSign: os << "A_st <= 0 violated"; break;
    case CartanViolation::Kind::ZeroPattern: os << "A_st = 0 iff A_ts = 0 violated"; break;
    case CartanViolation::Kind::Product:
      os << "A_st*A_ts must be >= 4 or equal to 4cos^2(pi/k)"; break;
  }
  if (v.row >= 0) os << " at (" << v.row + 1 << "," << v.col + 1 << ")";
  return os.str();
}

CartanViolation make_violation(CartanViolation::Kind kind, int r, int c) {
  CartanViolation v{kind, r, c, {}};
  v.message = describe(v);
  return v;
}

std::string join_messages(const std::vector<CartanViolation>& v) {
  std::string out = "invalid Cartan matrix:";
  for (const auto& x : v) out += " " + x.message + ";";
  return out;
}

/// k with p = 4cos^2(pi/k) for exact p in {0,1,2,3}; kInfiniteOrder for p >= 4; 0 if none.
int exact_order(const Rational& p) {
  if (p >= 4) return kInfiniteOrder;
  if (p == 0) return 2;
  if (p == 1) return 3;
  if (p == 2) return 4;
  if (p == 3) return 6;
  return 0;
}

struct ApproxOrder {
  int k = 0;  // 0: no match
  double residual = 0.0;
};

ApproxOrder approx_order(double p, double eps) {
  if (p >= 4.0 - eps) return {kInfiniteOrder, std::max(0.0, 4.0 - p)};
  if (std::abs(p) < eps) return {2, std::abs(p)};
  if (p < 0) return {};
  const double kr = std::numbers::pi / std::acos(std::sqrt(p) / 2.0);
  const long k = std::lround(kr);
  if (k < 2) return {};
  const double c = std::cos(std::numbers::pi / static_cast<double>(k));
  const double residual = std::abs(p - 4.0 * c * c);
  if (residual >= eps) return {};
  return {static_cast<int>(k), residual};
}

}  // namespace

InvalidCartan::InvalidCartan(std::vector<CartanViolation> v)
    : std::invalid_argument(join_messages(v)), violations_(std::move(v)) {}

std::vector<CartanViolation> cartan_violations(const MatrixQ& m) {
  using K = CartanViolation::Kind;
  std::vector<CartanViolation> out;
  if (m.rows() != m.cols() || m.rows() < 1) {
    out.push_back(make_violation(K::Shape, -1, -1));
    return out;
  }
  const int n = static_cast<int>(m.rows());
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s == t) {
        if (m(s, s) != 2) out.push_back(make_violation(K::Diagonal, s, s));
        continue;
      }
      if (m(s, t) > 0) out.push_back(make_violation(K::OffDiagonalSign, s, t));
      if (m(s, t) == 0 && m(t, s) != 0) out.push_back(make_violation(K::ZeroPattern, s, t));
      if (s < t && m(s, t) != 0 && m(t, s) != 0 && m(s, t) < 0 && m(t, s) < 0 &&
          exact_order(m(s, t) * m(t, s)) == 0)
        out.push_back(make_violation(K::Product, s, t));
    }
  }
  return out;
}

std::vector<CartanViolation> cartan_violations(const MatrixXd& m, double eps) {
  using K = CartanViolation::Kind;
  std::vector<CartanViolation> out;
  if (m.rows() != m.cols() || m.rows() < 1) {
    out.push_back(make_violation(K::Shape, -1, -1));
    return out;
  }
  const int n = static_cast<int>(m.rows());
  auto zero = [&](double x) { return std::abs(x) < eps; };
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s == t) {
        if (std::abs(m(s, s) - 2.0) >= eps) out.push_back(make_violation(K::Diagonal, s, s));
        continue;
      }
      if (m(s, t) >= eps) out.push_back(make_violation(K::OffDiagonalSign, s, t));
      if (zero(m(s, t)) && !zero(m(t, s))) out.push_back(make_violation(K::ZeroPattern, s, t));
      if (s < t && !zero(m(s, t)) && !zero(m(t, s)) && m(s, t) < 0 && m(t, s) < 0 &&
          approx_order(m(s, t) * m(t, s), eps).k == 0)
        out.push_back(make_violation(K::Product, s, t));
    }
  }
  return out;
}

CartanMatrix CartanMatrix::validate(const MatrixQ& m, Mode mode, double eps) {
  if (mode == Mode::Approx) return validate(to_double(m), eps);
  auto v = cartan_violations(m);
  if (!v.empty()) throw InvalidCartan(std::move(v));
  CartanMatrix a;
  a.mode_ = Mode::Exact;
  a.eps_ = eps;
  a.exact_ = m;
  a.approx_ = to_double(m);
  a.compute_orders();
  return a;
}

CartanMatrix CartanMatrix::validate(const MatrixXd& m, double eps) {
  auto v = cartan_violations(m, eps);
  if (!v.empty()) throw InvalidCartan(std::move(v));
  CartanMatrix a;
  a.mode_ = Mode::Approx;
  a.eps_ = eps;
  a.approx_ = m;
  a.compute_orders();
  return a;
}

void CartanMatrix::compute_orders() {
  const int n = size();
  orders_.assign(static_cast<std::size_t>(n * n), 1);
  max_residual_ = 0.0;
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s == t) continue;
      int k;
      if (mode_ == Mode::Exact) {
        k = exact_order(exact_(s, t) * exact_(t, s));
      } else {
        const auto r = approx_order(approx_(s, t) * approx_(t, s), eps_);
        k = r.k;
        max_residual_ = std::max(max_residual_, r.residual);
      }
      orders_[static_cast<std::size_t>(s * n + t)] = k;
    }
  }
}

const MatrixQ& CartanMatrix::exact_entries() const {
  if (mode_ != Mode::Exact) throw PreconditionError("Cartan matrix is in approximate mode");
  return exact_;
}

bool CartanMatrix::is_zero_entry(int s, int t) const {
  if (mode_ == Mode::Exact) return exact_(s, t) == 0;
  return std::abs(approx_(s, t)) < eps_;
}

bool CartanMatrix::symmetric() const {
  const int n = size();
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t) {
      if (mode_ == Mode::Exact) {
        if (exact_(s, t) != exact_(t, s)) return false;
      } else if (std::abs(approx_(s, t) - approx_(t, s)) >= eps_) {
        return false;
      }
    }
  return true;
}

std::vector<IndexSet> irreducible_components(const CartanMatrix& a) {
  const int n = a.size();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  std::vector<IndexSet> out;
  for (int start = 0; start < n; ++start) {
    if (comp[static_cast<std::size_t>(start)] >= 0) continue;
    const int id = static_cast<int>(out.size());
    IndexSet members;
    std::vector<int> stack{start};
    comp[static_cast<std::size_t>(start)] = id;
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      members.push_back(s);
      for (int t = 0; t < n; ++t) {
        if (t == s || comp[static_cast<std::size_t>(t)] >= 0 || a.is_zero_entry(s, t)) continue;
        comp[static_cast<std::size_t>(t)] = id;
        stack.push_back(t);
      }
    }
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  return out;
}

PerronResult perron(const MatrixXd& nonneg, double eps, int max_iterations) {
  const Eigen::Index n = nonneg.rows();
  PerronResult out;
  if (n == 0) return out;
  // Shifting by the identity makes an irreducible nonnegative matrix primitive.
  const MatrixXd m = nonneg + MatrixXd::Identity(n, n);
  VectorXd x = VectorXd::Ones(n);
  double lo = 0.0, hi = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    const VectorXd y = m * x;
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double r = y(i) / x(i);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    x = y / y.maxCoeff();
    out.iterations = it;
    if (hi - lo < 0.1 * eps * std::max(1.0, hi)) break;
  }
  out.rho = 0.5 * (lo + hi) - 1.0;
  out.uncertainty = 0.5 * (hi - lo);
  out.vector = x;
  return out;
}

namespace {

/// True when every leading principal minor is positive (elimination without pivoting).
bool leading_minors_positive(MatrixQ m) {
  const Eigen::Index n = m.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (m(k, k) <= 0) return false;
    for (Eigen::Index r = k + 1; r < n; ++r) {
      if (m(r, k) == 0) continue;
      const Rational f = m(r, k) / m(k, k);
      m.row(r) -= f * m.row(k);
    }
  }
  return true;
}

MatrixQ delete_index(const MatrixQ& m, Eigen::Index skip) {
  IndexSet keep;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (i != skip) keep.push_back(static_cast<int>(i));
  return linalg::principal_submatrix(m, keep);
}

}  // namespace

TypeSign exact_block_type(const MatrixQ& block) {
  if (block.rows() == 0 || leading_minors_positive(block)) return TypeSign::Positive;
  if (linalg::determinant(block) != 0) return TypeSign::Negative;
  for (Eigen::Index i = 0; i < block.rows(); ++i)
    if (!leading_minors_positive(delete_index(block, i))) return TypeSign::Negative;
  return TypeSign::Zero;
}

TypeTag classify_type(const CartanMatrix& a) {
  TypeTag tag;
  const auto comps = irreducible_components(a);
  bool any_pos = false, any_zero = false, any_neg = false;
  for (const auto& c : comps) {
    BlockType b;
    b.indices = c;
    const MatrixXd block = linalg::principal_submatrix<double>(a.entries(), c);
    const auto k = static_cast<Eigen::Index>(c.size());
    const PerronResult pr = perron(2.0 * MatrixXd::Identity(k, k) - block, a.eps());
    b.lambda = 2.0 - pr.rho;
    b.uncertainty = pr.uncertainty;
    if (a.exact()) {
      b.sign = exact_block_type(linalg::principal_submatrix(a.exact_entries(), c));
    } else if (std::abs(b.lambda) < a.eps()) {
      b.sign = TypeSign::Zero;
      b.warning = true;
    } else {
      b.sign = b.lambda > 0 ? TypeSign::Positive : TypeSign::Negative;
    }
    tag.margin = std::min(tag.margin, std::abs(b.lambda));
    tag.warning = tag.warning || b.warning;
    any_pos = any_pos || b.sign == TypeSign::Positive;
    any_zero = any_zero || b.sign == TypeSign::Zero;
    any_neg = any_neg || b.sign == TypeSign::Negative;
    tag.blocks.push_back(std::move(b));
  }
  const int kinds = int(any_pos) + int(any_zero) + int(any_neg);
  if (kinds > 1) tag.sign = TypeSign::Mixed;
  else if (any_zero) tag.sign = TypeSign::Zero;
  else if (any_neg) tag.sign = TypeSign::Negative;
  else tag.sign = TypeSign::Positive;
  return tag;
}

namespace {

bool signs_match(const VectorQ& ax, TypeSign sign) {
  for (Eigen::Index i = 0; i < ax.size(); ++i) {
    const int s = ax(i).sign();
    if (sign == TypeSign::Positive && s <= 0) return false;
    if (sign == TypeSign::Negative && s >= 0) return false;
    if (sign == TypeSign::Zero && s != 0) return false;
  }
  return true;
}

/// Exact positive vector for one irreducible block with AX of the given sign.
VectorQ exact_block_witness(const MatrixQ& block, TypeSign sign, const VectorXd& perron_vector) {
  if (sign == TypeSign::Zero) {
    const MatrixQ ker = linalg::nullspace(block);
    if (ker.cols() != 1) throw std::logic_error("zero-type block without a one-dimensional kernel");
    VectorQ x = ker.col(0);
    if (x(0) < 0) x = -x;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x(i) <= 0) throw std::logic_error("zero-type kernel vector is not positive");
    return x;
  }
  for (long long den = 1; den <= 1000000000000LL; den *= 10) {
    VectorQ x(perron_vector.size());
    bool positive = true;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x(i) = rationalize(perron_vector(i), den);
      positive = positive && x(i) > 0;
    }
    if (positive && signs_match(VectorQ(block * x), sign)) return x;
  }
  if (sign == TypeSign::Positive) {
    // Inverse of a nonsingular irreducible M-matrix is entrywise positive.
    const auto x = linalg::solve<Rational>(block, MatrixQ::Ones(block.rows(), 1));
    if (x) return x->col(0);
  }
  throw std::runtime_error("could not certify a rational witness vector");
}

}  // namespace

WitnessVector witness_vector(const CartanMatrix& a) {
  const TypeTag tag = classify_type(a);
  if (tag.sign == TypeSign::Mixed) throw PreconditionError("witness_vector: matrix has mixed type");
  const int n = a.size();
  WitnessVector w;
  w.sign = tag.sign;
  w.x = VectorXd::Zero(n);
  VectorQ exact_x(n);
  for (const auto& b : tag.blocks) {
    const auto k = static_cast<Eigen::Index>(b.indices.size());
    const MatrixXd block = linalg::principal_submatrix<double>(a.entries(), b.indices);
    const PerronResult pr = perron(2.0 * MatrixXd::Identity(k, k) - block, a.eps());
    if (a.exact()) {
      const VectorQ xb =
          exact_block_witness(linalg::principal_submatrix(a.exact_entries(), b.indices), b.sign, pr.vector);
      for (Eigen::Index i = 0; i < k; ++i) exact_x(b.indices[i]) = xb(i);
    } else {
      for (Eigen::Index i = 0; i < k; ++i) w.x(b.indices[i]) = pr.vector(i);
    }
  }
  if (a.exact()) {
    w.x = to_double(exact_x);
    w.exact_x = exact_x;
    w.ax = to_double(VectorQ(a.exact_entries() * exact_x));
  } else {
    w.ax = a.entries() * w.x;
  }
  w.margin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n; ++s) w.margin = std::min(w.margin, std::abs(w.ax(s)) / w.x(s));
  if (n == 0) w.margin = 0.0;
  if (!a.exact()) {
    if (tag.sign == TypeSign::Zero) {
      w.warning = w.ax.size() > 0 && w.ax.cwiseAbs().maxCoeff() >= a.eps();
      w.warning = w.warning || tag.warning;
    } else {
      w.warning = w.margin < a.eps();
    }
  }
  return w;
}

CartanMatrix restrict(const CartanMatrix& a, const IndexSet& t) {
  for (int s : t)
    if (s < 0 || s >= a.size()) throw PreconditionError("restrict: index out of range");
  CartanMatrix r;
  r.mode_ = a.mode_;
  r.eps_ = a.eps_;
  r.approx_ = linalg::principal_submatrix<double>(a.approx_, t);
  if (a.exact()) r.exact_ = linalg::principal_submatrix(a.exact_, t);
  const int k = static_cast<int>(t.size());
  r.orders_.assign(static_cast<std::size_t>(k * k), 1);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) r.orders_[static_cast<std::size_t>(i * k + j)] = a.order(t[i], t[j]);
  r.max_residual_ = a.max_residual_;
  return r;
}

TypeSplit split_by_type(const CartanMatrix& a, const IndexSet& t) {
  TypeSplit out;
  if (t.empty()) return out;
  const TypeTag tag = classify_type(restrict(a, t));
  for (const auto& b : tag.blocks) {
    IndexSet* dest = b.sign == TypeSign::Positive ? &out.positive
                     : b.sign == TypeSign::Zero   ? &out.zero
                                                  : &out.negative;
    for (int i : b.indices) dest->push_back(t[i]);
  }
  std::sort(out.positive.begin(), out.positive.end());
  std::sort(out.zero.begin(), out.zero.end());
  std::sort(out.negative.begin(), out.negative.end());
  return out;
}

}  // namespace vinberg
