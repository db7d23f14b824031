#pragma once

// Compact convex bodies in H^n: membership, nearest-point projection with
// outward normals, parallel-body membership, boundary patches, Hausdorff
// bracketing. Bodies are immutable once constructed and projection is pure,
// so concurrent queries on one body are safe.

#include "hypcurv/geom.hpp"
#include "hypcurv/horoframe.hpp"
#include "hypcurv/hull3.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <vector>

namespace hypcurv {

struct Projection {
  MPoint foot;
  TangentVec normal; // unit tangent at foot pointing toward the query
  double dist = 0.0;
  bool interior = false; // query inside the body: foot = query, normal unset
};

class ConvexBody {
public:
  virtual ~ConvexBody() = default;
  virtual int dim() const = 0;
  virtual bool contains(const MPoint& x) const = 0; // closed set, tol().membership
  virtual Projection project(const MPoint& x) const = 0;
  virtual MPoint interior_point() const = 0;
  virtual double support_radius(const MPoint& c) const = 0; // sup dist(c, .)
  virtual nlohmann::json to_json() const = 0;

  double distance(const MPoint& x) const; // 0 inside
  // Membership in the closed parallel body K_rho; overridden where a cheaper
  // test than a full projection exists.
  virtual bool parallel_contains(const MPoint& x, double rho) const;
};

class Ball final : public ConvexBody {
public:
  Ball(MPoint center, double radius);
  int dim() const override { return center_.dim(); }
  bool contains(const MPoint& x) const override;
  Projection project(const MPoint& x) const override;
  MPoint interior_point() const override { return center_; }
  double support_radius(const MPoint& c) const override;
  nlohmann::json to_json() const override;
  bool parallel_contains(const MPoint& x, double rho) const override;

  const MPoint& center() const { return center_; }
  double radius() const { return radius_; }

private:
  MPoint center_;
  double radius_;
};

// Hyperbolic convex hull of finitely many points in H^3. Construction
// computes the Euclidean hull of the Klein images, drops non-extreme input
// points, and caches unit spacelike facet functionals; membership is the
// facet feasibility test and projection runs an away-step conditional
// gradient over convex vertex weights.
struct HullProvenance {
  bool generated = false;
  uint64_t seed = 0;
  int requested = 0;
  double radius = 0.0;
  int attempts = 1;
};

class PolytopeHull final : public ConvexBody {
public:
  using Provenance = HullProvenance;

  explicit PolytopeHull(std::vector<MPoint> vertices, Provenance prov = Provenance());

  int dim() const override { return 3; }
  bool contains(const MPoint& x) const override;
  Projection project(const MPoint& x) const override;
  MPoint interior_point() const override { return centroid_; }
  double support_radius(const MPoint& c) const override;
  nlohmann::json to_json() const override;
  bool parallel_contains(const MPoint& x, double rho) const override;

  const std::vector<MPoint>& vertices() const { return verts_; }
  // Unit spacelike functionals w: <p,w> <= 0 on the body, and for p outside
  // the slab of facet f, asinh <p,w> is the distance to the facet plane.
  const std::vector<Vec>& facet_functionals() const { return facet_w_; }
  const Hull3& klein_hull() const { return hull_; }
  double inradius_lower() const { return r_in_; }
  double circumradius() const { return r_out_; }
  const Provenance& provenance() const { return prov_; }

  // Largest violation max_f <p,w_f>; <= 0 inside, asinh of it lower-bounds
  // the distance outside (exact whenever the foot lies inside a facet).
  double max_facet_violation(const MPoint& x) const;

private:
  std::vector<MPoint> verts_;
  Eigen::MatrixXd V_;          // vertex coordinates, one column each
  Hull3 hull_;                 // Klein-model hull of the kept vertices
  std::vector<Vec> facet_w_;
  Eigen::MatrixXd W_;          // facet functionals, one column each
  MPoint centroid_;
  double r_in_ = 0.0;          // min distance centroid -> facet plane
  double r_out_ = 0.0;         // max distance centroid -> vertex
  Provenance prov_;
};

// Boundary patches with decidable membership of a projection foot.
struct BoundaryPatch {
  enum class Kind { WholeBoundary, ChartDisc, ConePatch };
  Kind kind = Kind::WholeBoundary;

  // ChartDisc: feet with chart coordinates |xi - xi0| <= r in `frame`.
  std::shared_ptr<const HoroFrame> frame;
  VecC xi0;
  double chart_radius = 0.0;

  // ConePatch: feet whose direction from `apex` is within `angle` of `axis`.
  MPoint apex;
  TangentVec axis;
  double angle = 0.0;

  static BoundaryPatch whole();
  static BoundaryPatch chart_disc(std::shared_ptr<const HoroFrame> f, VecC xi0, double r);
  static BoundaryPatch cone(const MPoint& apex, const TangentVec& axis, double angle);

  bool covers(const MPoint& foot) const;
};

// arccosh(cosh(delta) cosh(d+delta)/cosh(d-delta)); requires 0 <= delta < d.
double projection_stability_bound(double d, double delta);

struct HausdorffBracket {
  double lower = 0.0;
  double upper = 0.0;
};

// Bracket of the Hausdorff distance from a deterministic spherical direction
// set of size n_dirs: lower is the max distance from sampled boundary points
// of each body to the other body; upper adds a directional resolution term
// from the mesh angle and the sampled radius range. Requires a common
// interior point (midpoint of the two interior points).
HausdorffBracket hausdorff_distance(const ConvexBody& K, const ConvexBody& L, int n_dirs);

// Hull of m i.i.d. uniform directions at distance R from the origin of H^3.
// Deterministic in seed. Degenerate samples are retried with an incremented
// sub-seed; the attempt count lands in the provenance record.
PolytopeHull random_polytope(double R, int m, uint64_t seed);

std::unique_ptr<ConvexBody> body_from_json(const nlohmann::json& j);

} // namespace hypcurv
