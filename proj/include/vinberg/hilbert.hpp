#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vinberg/representation.hpp"

namespace vinberg {

/// A point that is not interior to the convex body.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/**
 * Bounded open convex body in an affine chart R^d, given either as an ellipsoid
 * (u - c)^T M (u - c) < 1 or as an intersection of half-spaces a_i u < b_i.
 */
class ConvexBody {
 public:
  enum class Kind { Ellipsoid, Halfspaces };

  static ConvexBody ellipsoid(VectorXd center, MatrixXd shape);
  /// Rows of `normals` are the a_i. Throws PreconditionError when unbounded.
  static ConvexBody halfspaces(MatrixXd normals, VectorXd offsets);
  /// Interior of the convex hull of points in R^d, d in {1, 2, 3}.
  static ConvexBody hull(const std::vector<VectorXd>& points);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(kind_ == Kind::Ellipsoid ? center_.size() : normals_.cols()); }

  const VectorXd& center() const { return center_; }
  const MatrixXd& shape() const { return shape_; }
  const MatrixXd& normals() const { return normals_; }
  const VectorXd& offsets() const { return offsets_; }
  /// Boundary vertices in counter-clockwise order (hull bodies with d = 2 only).
  const std::vector<Eigen::Vector2d>& polygon() const { return polygon_; }

  bool contains(const VectorXd& x) const;
  /// Largest t with x + s w inside for all 0 <= s < t; infinity if the ray stays inside.
  double exit_time(const VectorXd& x, const VectorXd& w) const;

  /// Image under u -> T u + t (T invertible).
  ConvexBody affine_image(const MatrixXd& t, const VectorXd& shift) const;

 private:
  ConvexBody() = default;

  Kind kind_ = Kind::Halfspaces;
  VectorXd center_;
  MatrixXd shape_;
  MatrixXd normals_;
  VectorXd offsets_;
  std::vector<Eigen::Vector2d> polygon_;
};

/// Half the log of the cross-ratio [x':x:y:y'] on the chord through x and y.
double hilbert_distance(const ConvexBody& omega, const VectorXd& x, const VectorXd& y);

/// (1/t+ + 1/t-)/2 where x + t+ w and x - t- w are the boundary points.
double finsler_norm(const ConvexBody& omega, const VectorXd& x, const VectorXd& w);

/// Lebesgue volume of the Euclidean unit d-ball.
double unit_ball_volume(int d);

/// sigma_d / Leb{w : F(x, w) < 1}. Closed form for ellipsoids and polygons, quadrature otherwise.
double busemann_density(const ConvexBody& omega, const VectorXd& x);

/// The same quantity by polar quadrature: the trapezoid rule on 2^level angles for d = 2,
/// a Gauss-Legendre x trapezoid product grid with 2^level azimuths for d = 3.
double busemann_density_quadrature(const ConvexBody& omega, const VectorXd& x, int level = 9);

/// Simplices covering a region; column 0 of each is the apex where samples concentrate.
struct SampleRegion {
  int dim = 0;
  std::vector<MatrixXd> simplices;  ///< d x (d+1)
  double volume() const;
};

/// Barycentric subdivision of the hull of the points (d in {1, 2, 3}), one simplex per
/// vertex flag, apex at the polytope vertex. Degenerate inputs give an empty region.
SampleRegion region_from_points(const std::vector<VectorXd>& points);

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long samples = 0;
  int depth = 0;
  std::uint64_t seed = 0;
  long resampled = 0;  ///< draws that fell outside a body and were replaced
};

/// One body of a paired estimate; the integrand is cut to the Hilbert ball of `radius` about `base`.
struct VolumeQuery {
  const ConvexBody* body = nullptr;
  std::optional<VectorXd> base;
  double radius = std::numeric_limits<double>::infinity();
};

struct PairedVolumes {
  std::vector<VolumeEstimate> estimates;
  std::vector<double> diff;     ///< estimates[k+1] - estimates[k]
  std::vector<double> diff_se;  ///< standard error of the paired difference
};

inline constexpr int kRadialStrata = 16;

/**
 * Stratified Monte Carlo integral of each body's Busemann density over the region,
 * on shared sample points. Strata are (simplex, radial bin); each has its own
 * mt19937_64 seeded from (seed, stratum), so the result depends only on the inputs.
 */
PairedVolumes estimate_volumes(const std::vector<VolumeQuery>& queries, const SampleRegion& region, long samples,
                               std::uint64_t seed);

VolumeEstimate estimate_volume(const ConvexBody& omega, const SampleRegion& region, long samples,
                               std::uint64_t seed);

/// Chart image of the inner approximation: the exact ellipse when the domain carries an
/// invariant quadric and `use_quadric` is set, the hull of the tile vertices otherwise.
ConvexBody inner_body(const DomainApprox& domain, const Chart& chart, bool use_quadric = true);

/// Chart image of P.
SampleRegion polytope_region(const CoxeterPolytope& p, const Chart& chart);

struct VolumeProtocol {
  std::vector<int> depths{10};
  long samples = 1'000'000;
  std::uint64_t seed = 1;
  double radius_per_depth = 1.0;  ///< integrate over P within Hilbert distance radius_per_depth * N of the base point
  bool use_quadric = true;
};

struct VolumeSequence {
  PairedVolumes volumes;
  Chart chart;
  bool quadric_used = false;
  std::vector<int> depths;
};

/// Volume of P in the depth-N inner approximation of its Vinberg domain, for each N, on
/// shared samples. Requires P of negative type and d in {1, 2, 3}.
VolumeSequence volume_sequence(const CoxeterPolytope& p, const VolumeProtocol& protocol);

struct MonotonicityProbe {
  VolumeEstimate larger;   ///< mu in the larger domain
  VolumeEstimate smaller;  ///< mu in the smaller domain
  double diff = 0.0;       ///< larger - smaller
  double diff_se = 0.0;
};

/// Paired estimates of mu_{Omega2}(B) and mu_{Omega1}(B) for Omega1 inside Omega2.
/// Throws std::logic_error when a sample of B lies in Omega1 but not in Omega2.
MonotonicityProbe monotonicity_probe(const ConvexBody& inner, const ConvexBody& outer, const SampleRegion& b,
                                     long samples, std::uint64_t seed);

/// Join of a segment [a, b] and a point c in a plane chart: the triangle abc.
struct JoinSetup {
  Eigen::Vector2d a, b, c;
  std::vector<Eigen::Vector2d> p;  ///< convex polygon inside the triangle
  Eigen::Vector2d q1_start, q1_end;  ///< sub-segment of [a, b]
  double rho0 = 1.0;                 ///< slab k is rho in [rho0 2^-(k+1), rho0 2^-k]
};

struct JoinDivergence {
  std::vector<double> slab_volumes;
  std::vector<double> slab_se;
  std::vector<double> partial_sums;
};

/// The map h(v1 + v2) = 2 v1 + v2 on the chart: fixes [a, b] and c, pushes points toward [a, b].
Eigen::Vector2d join_contraction(const JoinSetup& j, const Eigen::Vector2d& x);

/// rho(x) = nu / (lambda + mu) for x = lambda a + mu b + nu c in homogeneous coordinates; h halves it.
double join_height(const JoinSetup& j, const Eigen::Vector2d& x);

/**
 * Volumes of P intersected with the slabs of the cone over Q1 with apex c, between
 * consecutive h-images of the level set rho = rho0, and their partial sums.
 */
JoinDivergence join_divergence_probe(const JoinSetup& j, int slabs, long samples_per_slab, std::uint64_t seed);

}  // namespace vinberg
