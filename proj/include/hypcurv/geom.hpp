#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace hypcurv {

// Ambient vectors live in Minkowski space R^{1,n}; index 0 is the timelike
// coordinate.  Dimensions are dynamic but bounded (n <= 4) so the Eigen types
// below keep their storage on the stack, which matters in sampling loops.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 5, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 5, 5>;
// Chart coordinates (one dimension less than the ambient space).
using VecC = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;

// Numerical tolerances used across the library.  Kept in one mutable record so
// experiments can tighten or relax them in a single place.
struct Tolerances {
  double hyperboloid = 1e-12;    // |<x,x> + 1| accepted after constructing ops
  double tangency = 1e-12;       // |<base,vec>| accepted for tangent vectors
  double unit_tangent = 1e-10;   // |norm - 1| accepted by exp_map
  double membership = 1e-9;      // containment slack for convex bodies
  double projection_gap = 1e-9;  // optimality gap accepted from projections
  double cg_gap = 1e-10;         // conditional-gradient stopping gap
  int cg_max_iter = 10000;
  double quad_rel = 1e-12;       // adaptive quadrature relative tolerance
};

Tolerances& tol();

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when an iterative solver stops before reaching its gap target.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double gap)
      : std::runtime_error(what + " (gap " + std::to_string(gap) + ")"), gap_(gap) {}
  double gap() const { return gap_; }

 private:
  double gap_;
};

// Minkowski inner product <a,b> = -a0 b0 + sum_i ai bi.
inline double mdot(const Vec& a, const Vec& b) {
  double s = -a[0] * b[0];
  for (int i = 1; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// A point on the upper hyperboloid sheet {<x,x> = -1, x0 >= 1}.
class MPoint {
 public:
  MPoint() = default;

  // Accepts a vector close to the sheet, renormalizes it exactly onto it.
  // Throws if the input is not timelike future-pointing or is badly off scale.
  static MPoint on_sheet(Vec x);

  // Takes coordinates verbatim after validating the sheet defect; used by
  // deserialization, which must reproduce stored points bit for bit.
  static MPoint verbatim(Vec x);

  // Base point (1, 0, ..., 0) of H^n.
  static MPoint origin(int n);

  const Vec& coords() const { return x_; }
  double operator[](int i) const { return x_[i]; }
  int dim() const { return static_cast<int>(x_.size()) - 1; }
  double sheet_defect() const { return mdot(x_, x_) + 1.0; }

 private:
  Vec x_;
};

// Tangent vector at a base point: <base, v> = 0.
struct TangentVec {
  MPoint base;
  Vec v;

  // Cleans up tiny tangency drift, throws beyond the tolerance.
  static TangentVec at(const MPoint& base, Vec v);
  double norm() const { return std::sqrt(std::max(0.0, mdot(v, v))); }
  TangentVec normalized() const;
};

// Geodesic distance; arccosh argument clamped to [1, inf).
double dist(const MPoint& p, const MPoint& q);

// Geodesic flow from a unit tangent vector; |v| must be 1 within tolerance.
MPoint exp_map(const TangentVec& v, double t);

struct LogMap {
  TangentVec dir;    // unit
  double dist = 0;
  bool degenerate = false;  // p == q: direction is an arbitrary unit vector
};

LogMap log_map(const MPoint& p, const MPoint& q);

// Point at parameter t in [0,1] on the geodesic from p to q.
MPoint geodesic_point(const MPoint& p, const MPoint& q, double t);

// Canonical half-space model maps (reference horosphere z = 1 through the
// origin of H^n, ideal center at z = +inf).  Used for chart construction and
// as an independent distance oracle in the tests.
MPoint halfspace_to_sheet(const VecC& x, double z);
void sheet_to_halfspace(const MPoint& p, VecC& x, double& z);

// Distance computed purely in half-space coordinates:
// cosh d = 1 + (|x1-x2|^2 + (z1-z2)^2) / (2 z1 z2).
double halfspace_dist(const VecC& x1, double z1, const VecC& x2, double z2);

}  // namespace hypcurv
