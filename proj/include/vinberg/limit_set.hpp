#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vinberg/hilbert.hpp"

namespace vinberg {

inline constexpr double kDefaultGap = 1e-6;

struct ProximalWitness {
  std::vector<int> word;  ///< generator indices, leftmost first; empty when unknown
  MatrixXd matrix;
  double lambda = 0.0;     ///< top eigenvalue (real, signed)
  double gap_ratio = 0.0;  ///< |lambda_1| / |lambda_2|
  VectorXd attracting;     ///< unit eigenvector
};

struct ProximalResult {
  std::optional<ProximalWitness> witness;
  double gap_ratio = 1.0;
  bool warning = false;  ///< near-tie within eps_gap, or an ill-conditioned direction: indeterminate
  double direction_error = 0.0;  ///< first-order bound on the error of the attracting direction
  std::string diagnostic;
};

/// Proximal iff the top modulus belongs to one real simple eigenvalue with |l1|/|l2| > 1 + eps_gap.
/// Directions whose first-order error bound exceeds 1e-9 are reported as indeterminate.
ProximalResult detect_proximal(const MatrixXd& g, double eps_gap = kDefaultGap);

struct LimitSetSample {
  std::vector<VectorXd> points;  ///< unit vectors, oriented so that the chart functional is positive
  std::vector<ProximalWitness> witnesses;
  int word_length = 0;
  int count = 0;
  std::uint64_t seed = 0;
  long words_tried = 0;
  std::string diagnostic;
};

/**
 * Attracting fixed points of random reduced words of length <= L. Lengths are L minus a
 * geometric variable, so most words are long. Points closer than 10 eps in chart
 * coordinates are merged. Requires P of negative type.
 */
LimitSetSample sample_limit_set(const CoxeterPolytope& p, int word_length, int count, std::uint64_t seed,
                                double eps_gap = kDefaultGap);

/// Distance from x to Span(v_s), relative to |x|.
double polar_span_residual(const CoxeterPolytope& p, const VectorXd& x);

/// Delta cut by the cone over the polars: the seed whose orbit fills Omega_min.
struct OmegaMinSeed {
  MatrixXd constraints;                  ///< rows c with c x <= 0: the alpha_s, then the facets of cone(v)
  std::optional<MatrixQ> exact_constraints;
  std::vector<VectorXd> rays;            ///< extreme rays, unit length
  std::vector<bool> vertex_inside;       ///< per vertex of P (in vertices() order): inside cone(v)
  bool equals_p = false;
};

/// Requires irreducible negative type with Span(v_s) = V.
OmegaMinSeed omega_min_seed(const CoxeterPolytope& p);

struct LimitHull {
  ConvexBody body;
  std::vector<VectorXd> chart_points;
};

/// Hull of the sample in the chart. Throws PreconditionError naming the rank when degenerate.
LimitHull hull_of_limit_set(const LimitSetSample& sample, const Chart& chart);

/// Hausdorff distance between the hull of the limit-set sample and the hull of the tile
/// vertices at depth <= N, in the chart (d = 2).
double limit_hull_gap(const LimitSetSample& sample, const OrbitTiling& tiling, int depth, const Chart& chart);

}  // namespace vinberg
