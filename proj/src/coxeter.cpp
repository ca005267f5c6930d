#include "vinberg/coxeter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vinberg {

CoxeterMatrix::CoxeterMatrix(std::vector<std::vector<int>> m) : m_(std::move(m)) {
  const std::size_t n = m_.size();
  if (n == 0) throw std::invalid_argument("Coxeter matrix must be nonempty");
  for (std::size_t s = 0; s < n; ++s) {
    if (m_[s].size() != n) throw std::invalid_argument("Coxeter matrix must be square");
    for (std::size_t t = 0; t < n; ++t) {
      const int v = m_[s][t];
      if (s == t && v != 1)
        throw std::invalid_argument("Coxeter matrix needs m_ss = 1 at (" + std::to_string(s + 1) + "," +
                                    std::to_string(s + 1) + ")");
      if (s != t && v < 2)
        throw std::invalid_argument("Coxeter matrix needs m_st >= 2 at (" + std::to_string(s + 1) + "," +
                                    std::to_string(t + 1) + ")");
    }
  }
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < s; ++t)
      if (m_[s][t] != m_[t][s]) throw std::invalid_argument("Coxeter matrix must be symmetric");
}

const char* to_string(GroupKind k) {
  switch (k) {
    case GroupKind::Spherical: return "spherical";
    case GroupKind::Affine: return "affine";
    case GroupKind::Large: return "large";
    case GroupKind::Mixed: return "mixed";
  }
  return "?";
}

CoxeterMatrix coxeter_from_cartan(const CartanMatrix& a) {
  const int n = a.size();
  std::vector<std::vector<int>> m(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 1));
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) m[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] = a.order(s, t);
  return CoxeterMatrix(std::move(m));
}

CartanMatrix gram_matrix(const CoxeterMatrix& m, double eps) {
  const int n = m.size();
  bool rational = true;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      const int k = m(s, t);
      rational = rational && (k == 1 || k == 2 || k == 3 || k == kInfiniteOrder);
    }
  if (rational) {
    MatrixQ g(n, n);
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        const int k = m(s, t);
        g(s, t) = k == 1 ? 2 : k == 2 ? 0 : k == 3 ? -1 : -2;
      }
    return CartanMatrix::validate(g, Mode::Exact, eps);
  }
  MatrixXd g(n, n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      const int k = m(s, t);
      if (k == 1) g(s, t) = 2.0;
      else if (k == 2) g(s, t) = 0.0;
      else if (k == kInfiniteOrder) g(s, t) = -2.0;
      else g(s, t) = -2.0 * std::cos(std::numbers::pi / k);
    }
  return CartanMatrix::validate(g, eps);
}

GroupClass classify_group(const CoxeterMatrix& m, double eps) {
  const TypeTag tag = classify_type(gram_matrix(m, eps));
  GroupClass out;
  for (const auto& b : tag.blocks) {
    out.components.push_back(b.indices);
    out.component_kinds.push_back(b.sign == TypeSign::Positive ? GroupKind::Spherical
                                  : b.sign == TypeSign::Zero   ? GroupKind::Affine
                                                               : GroupKind::Large);
    out.warning = out.warning || b.warning;
  }
  out.kind = out.component_kinds.front();
  for (GroupKind k : out.component_kinds)
    if (k != out.kind) out.kind = GroupKind::Mixed;
  return out;
}

namespace {

template <typename Commutes>
IndexSet complement_impl(int n, const IndexSet& t, Commutes commutes) {
  IndexSet out;
  for (int s = 0; s < n; ++s) {
    bool ok = std::find(t.begin(), t.end(), s) == t.end();
    for (int u : t) ok = ok && commutes(s, u);
    if (ok) out.push_back(s);
  }
  return out;
}

}  // namespace

IndexSet orthogonal_complement(const CoxeterMatrix& m, const IndexSet& t) {
  return complement_impl(m.size(), t, [&](int s, int u) { return m(s, u) == 2; });
}

IndexSet orthogonal_complement(const CartanMatrix& a, const IndexSet& t) {
  return complement_impl(a.size(), t, [&](int s, int u) { return a.is_zero_entry(s, u); });
}

}  // namespace vinberg
