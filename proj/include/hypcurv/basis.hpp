#pragma once

#include "hypcurv/geom.hpp"

namespace hypcurv {

// Radial basis of the tube-volume expansion in H^n:
//   b_k(rho) = integral_0^rho sinh^k(x) cosh^(n-1-k)(x) dx,  k = 0 .. n-1.
// The tube volume of a convex body decomposes as sum_k C_k b_k(rho), where
// C_0 is boundary area, C_1 integrates the mean-curvature sum and C_{n-1}
// (n = 3) integrates the product of principal curvatures; faces, edges and
// vertices of polytopes load exactly onto b_0, b_1, b_2.
// Closed forms where available, adaptive quadrature to 1e-12 relative else.
double tube_basis_eval(int n, int k, double rho);

// Alternative convention with degree-n integrand sinh^(n-r) cosh^r, r = 0..n.
// Kept for inspection only; it is not the basis the fits use.
double tube_basis_alt(int n, int r, double rho);

// Surface area of the Euclidean unit sphere S^{n-1}.
double unit_sphere_area(int n);

// Volume of a geodesic ball of radius R in H^n.  n = 3: pi (sinh 2R - 2R).
double ball_volume(int n, double R);

// Area of the geodesic sphere of radius R in H^n (n = 3: 4 pi sinh^2 R).
double sphere_area(int n, double R);

// Inverse radial CDF for uniform sampling in a ball of radius R:
// solves b_{n-1}(r) = u * b_{n-1}(R) for r, u in [0,1].
double ball_radius_quantile(int n, double R, double u);

}  // namespace hypcurv
