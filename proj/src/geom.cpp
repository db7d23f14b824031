#include "hypcurv/geom.hpp"

#include <cmath>

namespace hypcurv {

Tolerances& tol() {
  static Tolerances t;
  return t;
}

MPoint MPoint::on_sheet(Vec x) {
  if (x.size() < 3) throw DimensionError("MPoint needs ambient dimension >= 3");
  double q = -mdot(x, x);
  if (!(q > 0.0) || !(x[0] > 0.0))
    throw std::invalid_argument("vector is not timelike future-pointing");
  double defect = std::abs(q - 1.0);
  if (defect > 1e-3)
    throw std::invalid_argument("vector too far from the unit hyperboloid");
  MPoint p;
  p.x_ = x / std::sqrt(q);
  return p;
}

MPoint MPoint::verbatim(Vec x) {
  if (x.size() < 3) throw DimensionError("MPoint needs ambient dimension >= 3");
  double defect = std::abs(-mdot(x, x) - 1.0);
  if (!(x[0] > 0.0) || defect > tol().hyperboloid * 64.0)
    throw std::invalid_argument("stored point is not on the unit hyperboloid");
  MPoint p;
  p.x_ = std::move(x);
  return p;
}

MPoint MPoint::origin(int n) {
  Vec x = Vec::Zero(n + 1);
  x[0] = 1.0;
  MPoint p;
  p.x_ = x;
  return p;
}

TangentVec TangentVec::at(const MPoint& base, Vec v) {
  if (v.size() != base.coords().size())
    throw DimensionError("tangent vector dimension mismatch");
  double drift = mdot(v, base.coords());
  double scale = std::sqrt(std::max(1.0, mdot(v, v)));
  if (std::abs(drift) > 1e-6 * scale)
    throw std::invalid_argument("vector is not tangent to the sheet at base");
  // <base,base> = -1, so adding drift*base removes the timelike component.
  v += drift * base.coords();
  return TangentVec{base, std::move(v)};
}

TangentVec TangentVec::normalized() const {
  double n = norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize a zero tangent");
  return TangentVec{base, v / n};
}

double dist(const MPoint& p, const MPoint& q) {
  if (p.dim() != q.dim()) throw DimensionError("dist: dimension mismatch");
  // <p-q, p-q> = 2(cosh d - 1) = 4 sinh^2(d/2).  The difference form stays
  // accurate for nearby points where acosh(-<p,q>) loses half the digits.
  Vec delta = p.coords() - q.coords();
  double m2 = std::max(0.0, mdot(delta, delta));
  return 2.0 * std::asinh(0.5 * std::sqrt(m2));
}

MPoint exp_map(const TangentVec& v, double t) {
  double n = v.norm();
  if (std::abs(n - 1.0) > tol().unit_tangent)
    throw std::invalid_argument("exp_map expects a unit tangent vector");
  Vec r = std::cosh(t) * v.base.coords() + std::sinh(t) * v.v;
  return MPoint::on_sheet(std::move(r));
}

LogMap log_map(const MPoint& p, const MPoint& q) {
  if (p.dim() != q.dim()) throw DimensionError("log_map: dimension mismatch");
  double c = std::max(1.0, -mdot(p.coords(), q.coords()));
  double d = std::acosh(c);
  Vec w = q.coords() + mdot(q.coords(), p.coords()) * p.coords();
  double wn = std::sqrt(std::max(0.0, mdot(w, w)));
  LogMap out;
  out.dist = d;
  if (wn < 1e-14) {
    // Coincident points: flag and return a fixed unit direction.
    Vec v = Vec::Zero(p.coords().size());
    v[1] = 1.0;
    double drift = mdot(v, p.coords());
    v += drift * p.coords();
    v /= std::sqrt(mdot(v, v));
    out.dir = TangentVec{p, std::move(v)};
    out.degenerate = true;
    return out;
  }
  out.dir = TangentVec{p, w / wn};
  return out;
}

MPoint geodesic_point(const MPoint& p, const MPoint& q, double t) {
  LogMap lm = log_map(p, q);
  if (lm.degenerate) return p;
  return exp_map(lm.dir, t * lm.dist);
}

MPoint halfspace_to_sheet(const VecC& x, double z) {
  if (!(z > 0.0)) throw std::invalid_argument("half-space point needs z > 0");
  int n = static_cast<int>(x.size()) + 1;
  double a = x.squaredNorm() + z * z;
  Vec p(n + 1);
  p[0] = (a + 1.0) / (2.0 * z);
  for (int i = 0; i < n - 1; ++i) p[i + 1] = x[i] / z;
  p[n] = (a - 1.0) / (2.0 * z);
  return MPoint::on_sheet(std::move(p));
}

void sheet_to_halfspace(const MPoint& p, VecC& x, double& z) {
  int n = p.dim();
  double denom = p[0] - p[n];
  // On the sheet p0 > |pn| always holds, so denom > 0.
  z = 1.0 / denom;
  x.resize(n - 1);
  for (int i = 0; i < n - 1; ++i) x[i] = p[i + 1] / denom;
}

double halfspace_dist(const VecC& x1, double z1, const VecC& x2, double z2) {
  double c = 1.0 + ((x1 - x2).squaredNorm() + (z1 - z2) * (z1 - z2)) / (2.0 * z1 * z2);
  return std::acosh(std::max(1.0, c));
}

}  // namespace hypcurv
