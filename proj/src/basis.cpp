#include "hypcurv/basis.hpp"

#include <cmath>
#include <numbers>

#include "hypcurv/quadrature.hpp"

namespace hypcurv {

namespace {
double sinh_cosh_integral(int k, int m, double rho) {
  // integral_0^rho sinh^k cosh^m, via adaptive quadrature.
  return adaptive_quad(
      [k, m](double x) {
        return std::pow(std::sinh(x), k) * std::pow(std::cosh(x), m);
      },
      0.0, rho, tol().quad_rel);
}
}  // namespace

double tube_basis_eval(int n, int k, double rho) {
  if (n < 2) throw DimensionError("tube basis needs n >= 2");
  if (k < 0 || k > n - 1)
    throw std::invalid_argument("tube basis index k out of range");
  if (rho < 0.0) throw std::invalid_argument("tube basis needs rho >= 0");
  double s = std::sinh(rho), c = std::cosh(rho);
  if (n == 2) {
    return k == 0 ? s : c - 1.0;
  }
  if (n == 3) {
    switch (k) {
      case 0: return 0.5 * (rho + s * c);
      case 1: return 0.5 * s * s;
      default: return 0.5 * (s * c - rho);
    }
  }
  return sinh_cosh_integral(k, n - 1 - k, rho);
}

double tube_basis_alt(int n, int r, double rho) {
  if (r < 0 || r > n) throw std::invalid_argument("alt basis index out of range");
  return sinh_cosh_integral(n - r, r, rho);
}

double unit_sphere_area(int n) {
  // 2 pi^{n/2} / Gamma(n/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n, double R) {
  if (R < 0.0) throw std::invalid_argument("ball volume needs R >= 0");
  if (n == 3) return std::numbers::pi * (std::sinh(2.0 * R) - 2.0 * R);
  return unit_sphere_area(n) * tube_basis_eval(n, n - 1, R);
}

double sphere_area(int n, double R) {
  return unit_sphere_area(n) * std::pow(std::sinh(R), n - 1);
}

double ball_radius_quantile(int n, double R, double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return R;
  double target = u * tube_basis_eval(n, n - 1, R);
  // Newton with bisection safeguard; F' = sinh^{n-1}(r) > 0 on (0, R].
  double lo = 0.0, hi = R;
  double r = R * std::cbrt(u);  // exact in the Euclidean limit, good start
  for (int it = 0; it < 80; ++it) {
    double f = tube_basis_eval(n, n - 1, r) - target;
    if (f > 0.0) hi = r; else lo = r;
    double fp = std::pow(std::sinh(r), n - 1);
    double step = fp > 0.0 ? f / fp : 0.0;
    double rn = r - step;
    if (!(rn > lo && rn < hi)) rn = 0.5 * (lo + hi);
    if (std::abs(rn - r) < 1e-15 * R) return rn;
    r = rn;
  }
  return r;
}

}  // namespace hypcurv
