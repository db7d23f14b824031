#pragma once

// Convex hulls of finite point sets in R^3. Hyperbolic hulls reduce to this:
// in Klein coordinates k = (p_1,p_2,p_3)/p_0 geodesics are straight segments,
// so the hyperbolic convex hull of a vertex set is the Euclidean hull of the
// Klein images.
//
// The hull is computed on a deterministically jittered copy of the input
// (relative magnitude 1e-11) so the incremental insertion only ever sees
// points in general position; planes and merged facets are then refit from
// the original coordinates. Inputs are expected in weakly general position:
// exactly coplanar facets (a cube) are fine, but a point lying on an edge of
// the hull of the others may land on either side of the extreme set.

#include <Eigen/Dense>
#include <vector>

namespace hypcurv {

struct HullFacet {
  Eigen::Vector3d normal;  // outward unit normal
  double offset = 0;       // plane is normal . x = offset, interior side <
  std::vector<int> loop;   // boundary vertex indices, ccw seen from outside
};

struct HullEdge {
  int u = -1, v = -1;   // endpoint indices, u < v
  int f0 = -1, f1 = -1; // the two incident facets
};

struct Hull3 {
  std::vector<Eigen::Vector3d> points; // input copy
  std::vector<HullFacet> facets;       // coplanar triangles merged
  std::vector<HullEdge> edges;
  std::vector<int> vertices;           // extreme point indices, sorted
  double scale = 1.0;                  // coordinate magnitude behind tolerances

  bool contains(const Eigen::Vector3d& q, double tol) const;
};

// Throws std::invalid_argument when the points are affinely degenerate
// (fewer than four points or all within 1e-9 * scale of one plane).
Hull3 convex_hull3(const std::vector<Eigen::Vector3d>& pts);

} // namespace hypcurv
