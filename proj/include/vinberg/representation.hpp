#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vinberg/polytope.hpp"

namespace vinberg {

struct Reflection {
  int generator = 0;
  MatrixXd matrix;               ///< Id - v_s alpha_s
  std::optional<MatrixQ> exact;  ///< exact mode only
};

std::vector<Reflection> reflections(const CoxeterPolytope& p);

struct RelationFailure {
  int s = 0, t = 0;
  int power = 0;  ///< j with (sigma_s sigma_t)^j misbehaving
  std::string what;
};

struct RelationReport {
  bool ok = true;
  int pairs_checked = 0;
  std::vector<RelationFailure> failures;
};

/// (sigma_s sigma_t)^m = Id with exact order m for m <= cap; no identity power up to cap when m = inf.
RelationReport check_relations(const CoxeterPolytope& p, int cap = 50);

/// Raised when approximate deduplication meets two matrices that are close but not equal.
class OrbitAmbiguity : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OrbitElement {
  MatrixXd matrix, inverse;
  std::optional<MatrixQ> exact, exact_inverse;
  int parent = -1;     ///< BFS index of the parent, -1 for the identity
  int generator = -1;  ///< matrix = parent * sigma_generator
  int depth = 0;
};

/// Distinct group elements of word length <= depth, in breadth-first order.
class OrbitTiling {
 public:
  OrbitTiling(CoxeterPolytope p, int depth);

  const CoxeterPolytope& polytope() const { return polytope_; }
  int depth() const { return depth_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<OrbitElement>& elements() const { return elements_; }
  const OrbitElement& operator[](int i) const { return elements_[static_cast<std::size_t>(i)]; }
  /// Number of new elements at each word length 0..depth.
  const std::vector<int>& level_sizes() const { return level_sizes_; }

  /// Index of element * sigma_s, or -1 when it lies beyond the depth.
  int neighbor(int element, int s) const { return neighbors_[static_cast<std::size_t>(element)][static_cast<std::size_t>(s)]; }

  /// Covectors alpha_s o gamma^{-1} cutting out the tile gamma Delta (one per row).
  MatrixXd tile_covectors(int element) const;

  /// Index of a matrix in the orbit, or -1.
  int find(const MatrixXd& g) const;
  int find(const MatrixQ& g) const;

 private:
  struct LexLess {
    bool operator()(const MatrixQ& a, const MatrixQ& b) const;
  };

  int lookup_exact(const MatrixQ& g) const;
  int lookup_approx(const MatrixXd& g) const;
  double fingerprint(const MatrixXd& g) const;

  CoxeterPolytope polytope_;
  int depth_;
  std::vector<OrbitElement> elements_;
  std::vector<int> level_sizes_;
  std::vector<std::vector<int>> neighbors_;
  std::map<MatrixQ, int, LexLess> exact_index_;
  std::multimap<double, int> approx_index_;
  VectorXd fp_left_, fp_right_;
};

inline OrbitTiling expand_orbit(const CoxeterPolytope& p, int depth) { return OrbitTiling(p, depth); }

/// Affine chart {phi = 1} with orthonormal coordinates on ker phi.
struct Chart {
  RowVector<double> phi;
  VectorXd origin;  ///< phi^T / |phi|^2
  MatrixXd basis;   ///< (d+1) x d, orthonormal, phi * basis = 0
  double margin = 0.0;
  bool from_witness = false;  ///< phi = -sum Y_s alpha_s from a witness of A^T

  int dim() const { return static_cast<int>(basis.cols()); }
  /// Requires phi(x) > 0.
  VectorXd to_chart(const VectorXd& x) const;
  /// The point of {phi = 1} with chart coordinates u.
  VectorXd lift(const VectorXd& u) const;
};

/// Unit vectors spanning the extreme rays of Delta (the vertices of P).
std::vector<VectorXd> polytope_rays(const CoxeterPolytope& p);

/// Chart in which every given point has phi > 0, preferring phi = -sum Y_s alpha_s
/// for a witness Y of A^T when A is of negative type. Throws PreconditionError when no chart exists.
Chart make_chart(const CoxeterPolytope& p, const std::vector<VectorXd>& points);

/// Largest margin min phi(x/|x|) over |phi|_inf <= 1, by cutting planes. Negative when no chart exists.
std::pair<RowVector<double>, double> max_margin_chart(const std::vector<VectorXd>& points, double eps = kDefaultEps);

struct FrontierFacet {
  int element = 0;
  int generator = 0;
  RowVector<double> covector;  ///< alpha_s o gamma^{-1}
};

/// Inner approximation of the Vinberg domain by the union of the tiles.
struct DomainApprox {
  int depth = 0;
  std::vector<MatrixXd> tile_vertices;  ///< per tile, unit vectors gamma r as columns
  std::vector<FrontierFacet> frontier;  ///< tile facets not shared with another tile
  /// x^T Q x < 0 on the Vinberg domain, when A is symmetric of signature (d,1) and P sits
  /// in the closed negative cone of the invariant form.
  std::optional<MatrixXd> quadric;
};

DomainApprox domain_approx(const OrbitTiling& tiling);

/// Invariant quadric x^T Q x of the reflection group when A_P is symmetric of signature (d,1)
/// and every vertex of P has Q <= 0; scaled so that interior points are negative.
std::optional<MatrixXd> invariant_quadric(const CoxeterPolytope& p);

struct RepresentationReport {
  int v_alpha_dim = 0;  ///< dim of the common kernel of the alpha_s
  int v_v_dim = 0;      ///< dim Span(v_s)
  int cartan_rank = 0;
  bool reduced = false;
  bool dual_reduced = false;
  bool irreducible = false;  ///< reduced and dual-reduced
};

RepresentationReport representation_report(const CoxeterPolytope& p);

enum class Properness { ProperlyConvex, NotProper, Inconclusive };

const char* to_string(Properness p);

struct PropernessReport {
  Properness verdict = Properness::Inconclusive;
  double margin_quarter = 0.0;  ///< chart margin of the tile vertices at depth N/4
  double margin_half = 0.0;     ///< at depth N/2
  double margin_full = 0.0;     ///< at depth N
  double margin_limit = 0.0;    ///< Aitken extrapolation of the three margins
  bool consistent_with_type = true;
  std::string diagnostic;
};

/// Chart-margin probe at depths N/4, N/2 and N. Margins that extrapolate to (nearly) zero,
/// or no chart at all, are evidence against properness. Depth below 8 is inconclusive.
PropernessReport check_properness(const OrbitTiling& tiling);

}  // namespace vinberg
