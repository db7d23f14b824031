#pragma once

#include "hypcurv/geom.hpp"

namespace hypcurv {

// Horospherical chart attached to a base point q and a unit outward normal nu.
// Coordinates (xi, zeta) carry the metric e^{2 zeta} dxi^2 + dzeta^2; the
// reference horosphere {zeta = 0} passes through q with ideal center q - nu,
// and zeta increases along +nu (away from the side the horoball bounds).
//
// Realized by a Lorentz transform L mapping the canonical frame at the origin
// of H^n onto (q, nu, E_1..E_{n-1}) followed by the canonical half-space chart
// (xi, zeta) -> (xi, e^{-zeta})_halfspace.
class HoroFrame {
 public:
  HoroFrame() = default;

  static HoroFrame canonical(int n);

  // Completes (base, outward unit normal) with tangent directions obtained by
  // Minkowski Gram-Schmidt over the ambient axes in fixed order.
  static HoroFrame from_normal(const MPoint& base, const Vec& outward);

  // Frame with prescribed tangent columns (must be orthonormal, orthogonal to
  // base and outward).
  static HoroFrame from_frame(const MPoint& base, const Vec& outward, const Mat& tangent);

  int dim() const { return n_; }
  const MPoint& base() const { return base_; }
  const Vec& normal() const { return normal_; }
  const Mat& tangent() const { return tangent_; }  // (n+1) x (n-1) columns

  // Light-like future-pointing direction of the chart's ideal center.
  Vec ideal_direction() const { return base_.coords() - normal_; }

  MPoint chart(const VecC& xi, double zeta) const;
  void unchart(const MPoint& p, VecC& xi, double& zeta) const;

  // Columns: d(chart)/d(xi_1..xi_{n-1}, zeta) at (xi, zeta); (n+1) x n.
  Mat chart_jacobian(const VecC& xi, double zeta) const;

  // Busemann coordinate of an arbitrary point: zeta(p) = log(-<p, ideal>).
  double zeta_of(const MPoint& p) const;

 private:
  int n_ = 0;
  MPoint base_;
  Vec normal_;
  Mat tangent_;
  Mat L_;      // columns: base, E_1..E_{n-1}, -normal
  Mat L_inv_;  // Lorentz inverse J L^T J
  void finish();
};

}  // namespace hypcurv
