#pragma once

#include <array>
#include <vector>

#include "vinberg/types.hpp"

namespace vinberg::geometry {

using Point2 = Eigen::Vector2d;
using Point3 = Eigen::Vector3d;

/// Counter-clockwise hull without collinear points (Andrew's monotone chain).
std::vector<Point2> convex_hull_2d(std::vector<Point2> points, double tol = 1e-12);

double polygon_area(const std::vector<Point2>& poly);
Point2 polygon_centroid(const std::vector<Point2>& poly);

/// Part of a convex polygon with a.x <= b.
std::vector<Point2> clip_polygon(const std::vector<Point2>& poly, const Point2& a, double b);

/// Euclidean distance from p to a convex polygon (0 inside).
double distance_to_polygon(const Point2& p, const std::vector<Point2>& poly);

/// Hausdorff distance between two convex polygons; attained at vertices.
double hausdorff_distance(const std::vector<Point2>& p, const std::vector<Point2>& q);

struct Hull3 {
  std::vector<Point3> points;
  std::vector<std::array<int, 3>> faces;  ///< outward orientation
  MatrixXd normals;                       ///< one outward unit normal per face, as rows
  VectorXd offsets;                       ///< normals * x <= offsets on the hull
};

/// Incremental 3D hull. Throws PreconditionError for flat point sets.
Hull3 convex_hull_3d(const std::vector<Point3>& points, double tol = 1e-12);

}  // namespace vinberg::geometry
