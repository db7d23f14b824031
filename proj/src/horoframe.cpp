#include "hypcurv/horoframe.hpp"

#include <cmath>

namespace hypcurv {

namespace {
// Lorentz inverse of an orthonormal frame matrix: J L^T J, J = diag(-1, 1...).
Mat lorentz_inverse(const Mat& L) {
  int m = static_cast<int>(L.rows());
  Mat inv(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double s = ((i == 0) != (j == 0)) ? -1.0 : 1.0;
      inv(i, j) = s * L(j, i);
    }
  return inv;
}
}  // namespace

void HoroFrame::finish() {
  int m = n_ + 1;
  L_.resize(m, m);
  L_.col(0) = base_.coords();
  for (int j = 0; j < n_ - 1; ++j) L_.col(1 + j) = tangent_.col(j);
  L_.col(n_) = -normal_;
  L_inv_ = lorentz_inverse(L_);
  if ((L_inv_ * L_ - Mat::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("frame is not Minkowski-orthonormal");
}

HoroFrame HoroFrame::canonical(int n) {
  HoroFrame f;
  f.n_ = n;
  f.base_ = MPoint::origin(n);
  f.normal_ = Vec::Zero(n + 1);
  f.normal_[n] = -1.0;
  f.tangent_.resize(n + 1, n - 1);
  f.tangent_.setZero();
  for (int j = 0; j < n - 1; ++j) f.tangent_(1 + j, j) = 1.0;
  f.finish();
  return f;
}

HoroFrame HoroFrame::from_normal(const MPoint& base, const Vec& outward) {
  int n = base.dim();
  if (outward.size() != n + 1) throw DimensionError("normal dimension mismatch");
  Vec nu = outward;
  nu += mdot(nu, base.coords()) * base.coords();  // remove tangency drift
  double nn = mdot(nu, nu);
  if (!(nn > 0.5)) throw std::invalid_argument("normal is not spacelike unit");
  nu /= std::sqrt(nn);

  HoroFrame f;
  f.n_ = n;
  f.base_ = base;
  f.normal_ = nu;
  f.tangent_.resize(n + 1, n - 1);
  int have = 0;
  // Fixed completion order: ambient axes e_1 .. e_n, then e_0.
  for (int cand = 1; cand <= n + 1 && have < n - 1; ++cand) {
    int axis = cand % (n + 1);
    Vec w = Vec::Zero(n + 1);
    w[axis] = 1.0;
    w += mdot(w, base.coords()) * base.coords();
    w -= mdot(w, nu) * nu;
    for (int j = 0; j < have; ++j) w -= mdot(w, f.tangent_.col(j)) * f.tangent_.col(j);
    double wn = mdot(w, w);
    if (wn > 1e-12) {
      f.tangent_.col(have++) = w / std::sqrt(wn);
    }
  }
  if (have != n - 1) throw std::invalid_argument("frame completion failed");
  f.finish();
  return f;
}

HoroFrame HoroFrame::from_frame(const MPoint& base, const Vec& outward, const Mat& tangent) {
  int n = base.dim();
  if (outward.size() != n + 1 || tangent.rows() != n + 1 || tangent.cols() != n - 1)
    throw DimensionError("frame dimension mismatch");
  HoroFrame f;
  f.n_ = n;
  f.base_ = base;
  f.normal_ = outward;
  f.tangent_ = tangent;
  f.finish();  // orthonormality is validated here
  return f;
}

MPoint HoroFrame::chart(const VecC& xi, double zeta) const {
  if (xi.size() != n_ - 1) throw DimensionError("chart coordinate dimension mismatch");
  double z = std::exp(-zeta);
  double a = xi.squaredNorm() + z * z;
  Vec w(n_ + 1);
  w[0] = (a + 1.0) / (2.0 * z);
  for (int i = 0; i < n_ - 1; ++i) w[i + 1] = xi[i] / z;
  w[n_] = (a - 1.0) / (2.0 * z);
  return MPoint::on_sheet(L_ * w);
}

void HoroFrame::unchart(const MPoint& p, VecC& xi, double& zeta) const {
  Vec w = L_inv_ * p.coords();
  double denom = w[0] - w[n_];
  if (!(denom > 0.0)) throw std::invalid_argument("point outside chart range");
  zeta = std::log(denom);
  xi.resize(n_ - 1);
  for (int i = 0; i < n_ - 1; ++i) xi[i] = w[i + 1] / denom;
}

Mat HoroFrame::chart_jacobian(const VecC& xi, double zeta) const {
  double z = std::exp(-zeta);
  double x2 = xi.squaredNorm();
  Mat M(n_ + 1, n_);
  M.setZero();
  for (int i = 0; i < n_ - 1; ++i) {
    M(0, i) = xi[i] / z;
    M(i + 1, i) = 1.0 / z;
    M(n_, i) = xi[i] / z;
  }
  // d/d zeta = -z d/dz of the half-space embedding.
  M(0, n_ - 1) = (x2 + 1.0 - z * z) / (2.0 * z);
  for (int i = 0; i < n_ - 1; ++i) M(i + 1, n_ - 1) = xi[i] / z;
  M(n_, n_ - 1) = (x2 - 1.0 - z * z) / (2.0 * z);
  return L_ * M;
}

double HoroFrame::zeta_of(const MPoint& p) const {
  double b = -mdot(p.coords(), ideal_direction());
  if (!(b > 0.0)) throw std::invalid_argument("point outside chart range");
  return std::log(b);
}

}  // namespace hypcurv
