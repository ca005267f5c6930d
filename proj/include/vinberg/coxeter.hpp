#pragma once

#include <vector>

#include "vinberg/cartan.hpp"

namespace vinberg {

/// Symmetric matrix of orders with m_ss = 1, m_st >= 2 off the diagonal; kInfiniteOrder is infinity.
class CoxeterMatrix {
 public:
  /// Throws std::invalid_argument on a malformed matrix.
  explicit CoxeterMatrix(std::vector<std::vector<int>> m);

  int size() const { return static_cast<int>(m_.size()); }
  int operator()(int s, int t) const { return m_[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)]; }
  const std::vector<std::vector<int>>& entries() const { return m_; }
  bool operator==(const CoxeterMatrix& o) const { return m_ == o.m_; }

 private:
  std::vector<std::vector<int>> m_;
};

CoxeterMatrix coxeter_from_cartan(const CartanMatrix& a);

/// -2cos(pi/m_st); exact when every order lies in {1, 2, 3, inf}, approximate otherwise.
CartanMatrix gram_matrix(const CoxeterMatrix& m, double eps = kDefaultEps);

enum class GroupKind { Spherical, Affine, Large, Mixed };

const char* to_string(GroupKind k);

struct GroupClass {
  GroupKind kind = GroupKind::Spherical;  ///< Mixed when components disagree
  std::vector<IndexSet> components;
  std::vector<GroupKind> component_kinds;
  bool warning = false;  ///< some component sits within eps of the zero-type boundary
};

GroupClass classify_group(const CoxeterMatrix& m, double eps = kDefaultEps);

/// Generators commuting with every member of T (m_st = 2); T itself is excluded.
IndexSet orthogonal_complement(const CoxeterMatrix& m, const IndexSet& t);
IndexSet orthogonal_complement(const CartanMatrix& a, const IndexSet& t);

}  // namespace vinberg
