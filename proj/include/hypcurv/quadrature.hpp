#pragma once

#include <cmath>
#include <functional>

namespace hypcurv {

// 5-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr double kGL5Nodes[5] = {
    -0.9061798459386640, -0.5384693101056831, 0.0,
    0.5384693101056831, 0.9061798459386640};
inline constexpr double kGL5Weights[5] = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891};

template <class F>
double gauss5(F&& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += kGL5Weights[i] * f(mid + half * kGL5Nodes[i]);
  return s * half;
}

namespace detail {
template <class F>
double adapt_step(F& f, double a, double b, double fa, double fm, double fb,
                  double whole, double tol_abs, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (b - a) / 12.0 * (fa + 4.0 * flm + fm);
  double right = (b - a) / 12.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol_abs)
    return left + right + delta / 15.0;
  return adapt_step(f, a, m, fa, flm, fm, left, 0.5 * tol_abs, depth - 1) +
         adapt_step(f, m, b, fm, frm, fb, right, 0.5 * tol_abs, depth - 1);
}
}  // namespace detail

// Adaptive Simpson with mixed relative/absolute control.
template <class F>
double adaptive_quad(F&& f, double a, double b, double rel_tol,
                     double abs_floor = 1e-300) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double tol_abs = std::max(std::abs(whole) * rel_tol, abs_floor);
  return detail::adapt_step(f, a, b, fa, fm, fb, whole, tol_abs, 48);
}

// Compensated accumulator for long float reductions.
struct KahanSum {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace hypcurv
