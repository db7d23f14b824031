#include "hypcurv/bodies.hpp"

#include "hypcurv/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hypcurv {

double ConvexBody::distance(const MPoint& x) const {
  auto pr = project(x);
  return pr.interior ? 0.0 : pr.dist;
}

bool ConvexBody::parallel_contains(const MPoint& x, double rho) const {
  if (contains(x)) return true;
  return project(x).dist <= rho;
}

// ---------------------------------------------------------------------------
// Ball

Ball::Ball(MPoint center, double radius) : center_(std::move(center)), radius_(radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
}

bool Ball::contains(const MPoint& x) const {
  return dist(center_, x) <= radius_ + tol().membership;
}

bool Ball::parallel_contains(const MPoint& x, double rho) const {
  return dist(center_, x) <= radius_ + rho + tol().membership;
}

Projection Ball::project(const MPoint& x) const {
  auto lm = log_map(center_, x);
  if (lm.dist <= radius_) {
    Projection pr;
    pr.foot = x;
    pr.interior = true;
    return pr;
  }
  Projection pr;
  pr.foot = exp_map(lm.dir, radius_);
  // Velocity of the radial geodesic at the foot; exact and unit.
  Vec v = std::sinh(radius_) * center_.coords() + std::cosh(radius_) * lm.dir.v;
  pr.normal = TangentVec::at(pr.foot, std::move(v));
  pr.dist = lm.dist - radius_;
  return pr;
}

double Ball::support_radius(const MPoint& c) const { return dist(c, center_) + radius_; }

nlohmann::json Ball::to_json() const {
  nlohmann::json j;
  j["type"] = "ball";
  j["model"] = "hyperboloid";
  j["center"] = std::vector<double>(center_.coords().data(),
                                    center_.coords().data() + center_.coords().size());
  j["radius"] = radius_;
  return j;
}

// ---------------------------------------------------------------------------
// PolytopeHull

namespace {

Eigen::Vector3d klein(const MPoint& p) {
  return Eigen::Vector3d(p[1] / p[0], p[2] / p[0], p[3] / p[0]);
}

} // namespace

PolytopeHull::PolytopeHull(std::vector<MPoint> vertices, Provenance prov)
    : prov_(prov) {
  if (vertices.size() < 4) throw std::invalid_argument("polytope needs at least 4 vertices");
  for (const auto& v : vertices)
    if (v.dim() != 3) throw DimensionError("polytope bodies live in H^3");

  // Hull in the Klein model; drop inputs that are not extreme, then recompute
  // so facet loops index the kept vertex list.
  std::vector<Eigen::Vector3d> kl;
  kl.reserve(vertices.size());
  for (const auto& v : vertices) kl.push_back(klein(v));
  Hull3 h = convex_hull3(kl);
  if (h.vertices.size() < vertices.size()) {
    std::vector<MPoint> kept;
    std::vector<Eigen::Vector3d> kkl;
    for (int i : h.vertices) {
      kept.push_back(vertices[size_t(i)]);
      kkl.push_back(kl[size_t(i)]);
    }
    vertices.swap(kept);
    h = convex_hull3(kkl);
  }
  verts_ = std::move(vertices);
  hull_ = std::move(h);

  const int m = int(verts_.size());
  V_.resize(4, m);
  for (int i = 0; i < m; ++i) V_.col(i) = verts_[size_t(i)].coords();

  Vec s = Vec::Zero(4);
  for (int i = 0; i < m; ++i) s += V_.col(i);
  s /= std::sqrt(std::max(1e-300, -mdot(s, s)));
  centroid_ = MPoint::on_sheet(s);

  facet_w_.reserve(hull_.facets.size());
  W_.resize(4, Eigen::Index(hull_.facets.size()));
  for (size_t f = 0; f < hull_.facets.size(); ++f) {
    const auto& fc = hull_.facets[f];
    double norm2 = 1.0 - fc.offset * fc.offset; // |n| = 1
    if (norm2 <= 1e-12)
      throw std::runtime_error("facet plane does not meet the hyperboloid");
    Vec w(4);
    w << fc.offset, fc.normal[0], fc.normal[1], fc.normal[2];
    w /= std::sqrt(norm2);
    W_.col(Eigen::Index(f)) = w;
    facet_w_.push_back(std::move(w));
  }

  r_in_ = std::numeric_limits<double>::infinity();
  for (const auto& w : facet_w_)
    r_in_ = std::min(r_in_, std::asinh(std::max(0.0, -mdot(centroid_.coords(), w))));
  r_out_ = 0.0;
  for (const auto& v : verts_) r_out_ = std::max(r_out_, dist(centroid_, v));
}

double PolytopeHull::max_facet_violation(const MPoint& x) const {
  Eigen::Vector4d jx(-x[0], x[1], x[2], x[3]); // Minkowski pairing via sign flip
  return (W_.transpose() * jx).maxCoeff();
}

bool PolytopeHull::contains(const MPoint& x) const {
  return max_facet_violation(x) <= tol().membership;
}

bool PolytopeHull::parallel_contains(const MPoint& x, double rho) const {
  double dc = dist(centroid_, x);
  if (dc <= r_in_ + rho) return true;
  if (dc > r_out_ + rho) return false;
  double viol = max_facet_violation(x);
  if (viol <= tol().membership) return true;
  if (std::asinh(viol) > rho + tol().membership) return false; // plane distance lower-bounds
  return project(x).dist <= rho + tol().membership;
}

Projection PolytopeHull::project(const MPoint& x) const {
  Projection pr;
  if (contains(x)) {
    pr.foot = x;
    pr.interior = true;
    return pr;
  }

  const int m = int(verts_.size());
  const Vec& xc = x.coords();
  // Minkowski pairings <v_i, x>; J flips the sign of the time row.
  Eigen::VectorXd c(m);
  for (int i = 0; i < m; ++i) c[i] = mdot(V_.col(i), xc);

  Eigen::VectorXd lam = Eigen::VectorXd::Zero(m);
  int start;
  c.maxCoeff(&start); // <v,x> = -cosh dist(v,x); largest = nearest vertex
  lam[start] = 1.0;

  // Phase 1: away-step conditional gradient over the weight simplex. This
  // converges fast to the neighborhood of the optimal face but zigzags in
  // the tail, so it only needs to identify the face, not polish it.
  Vec u = V_.col(start); // running V lam
  double gap = std::numeric_limits<double>::infinity();
  for (int it = 0; it < tol().cg_max_iter; ++it) {
    double P = -mdot(u, u);
    double N = std::sqrt(std::max(P, 1e-300));
    double A = -mdot(xc, u);
    double coshd = A / N;

    // grad_i = (-<x,v_i> + coshd <y, v_i>) / N with y = u/N.
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) b[i] = mdot(V_.col(i), u);
    Eigen::VectorXd grad = (-c + (coshd / N) * b) / N;

    int s = 0, a = -1;
    grad.minCoeff(&s);
    double ga = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i)
      if (lam[i] > 1e-15 && grad[i] > ga) { ga = grad[i]; a = i; }
    gap = std::max(0.0, -grad[s]);
    if (gap <= 1e-7 * std::max(1.0, coshd)) break;

    bool away = a >= 0 && ga > gap && lam[a] < 1.0 - 1e-15;
    double g = 0.0;
    Eigen::VectorXd dvec;
    for (int round = 0; round < 2; ++round) {
      double gmax;
      if (away) {
        dvec = lam;
        dvec[a] -= 1.0;
        gmax = lam[a] / (1.0 - lam[a]);
      } else {
        dvec = -lam;
        dvec[s] += 1.0;
        gmax = 1.0;
      }
      Vec w = V_ * dvec;
      double B = -mdot(xc, w);
      double Q = -2.0 * mdot(u, w);
      double S = -mdot(w, w);
      // F(g) = (A + gB)/sqrt(P + gQ + g^2 S); F' = 0 is linear in g.
      double num = A * Q * 0.5 - B * P;
      double den = B * Q * 0.5 - A * S;
      if (den > 0.0) {
        g = std::clamp(num / den, 0.0, gmax);
      } else {
        // No interior minimum along the ray; pick the better endpoint.
        double f0 = A / std::sqrt(P);
        double f1 = (A + gmax * B) / std::sqrt(std::max(P + gmax * Q + gmax * gmax * S, 1e-300));
        g = (f1 < f0) ? gmax : 0.0;
      }
      if (g > 0.0 || !away) break;
      away = false; // degenerate away step: fall back to the plain direction
    }
    if (g <= 0.0) break;
    lam += g * dvec;
    for (int i = 0; i < m; ++i) lam[i] = std::max(0.0, lam[i]);
    lam /= lam.sum();
    u = V_ * lam;
  }

  // Phase 2: exact solve on the candidate face. The nearest point of the
  // geodesic subspace spanned by the active vertices is the normalized
  // Minkowski-orthogonal projection z of x onto their linear span: for every
  // v in the span, <x - cosh(d) y, v> = 0 with y = z/|z|. Feasibility needs
  // nonnegative face weights; optimality over the whole hull is the KKT sign
  // test on the remaining vertices. Both are repaired by bounded add/drop.
  std::vector<int> S;
  for (int i = 0; i < m; ++i)
    if (lam[i] > 1e-8) S.push_back(i);
  if (S.empty()) S.push_back(start);
  std::sort(S.begin(), S.end(), [&](int i, int j) { return lam[i] > lam[j]; });
  std::vector<double> w(S.size()); // feasible weights over S, sum 1
  {
    double sum = 0.0;
    for (size_t j = 0; j < S.size(); ++j) sum += lam[S[j]];
    for (size_t j = 0; j < S.size(); ++j) w[j] = lam[S[j]] / sum;
  }
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());

  // Unconstrained minimizer over the face spanned by S: normalized Minkowski
  // projection of x onto the span. Returns weights summing to 1, or false on
  // a degenerate Gram or a spacelike projection.
  auto face_solve = [&](const std::vector<int>& F, Eigen::VectorXd& mu) -> bool {
    const int k = int(F.size());
    Eigen::MatrixXd Vs(4, k);
    for (int j = 0; j < k; ++j) Vs.col(j) = V_.col(F[size_t(j)]);
    Eigen::MatrixXd Gs(k, k);
    Eigen::VectorXd rhs(k);
    for (int i = 0; i < k; ++i) {
      rhs[i] = mdot(Vs.col(i), xc);
      for (int j = i; j < k; ++j) Gs(i, j) = Gs(j, i) = mdot(Vs.col(i), Vs.col(j));
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Gs);
    if (!lu.isInvertible()) return false;
    mu = lu.solve(rhs);
    mu += lu.solve(rhs - Gs * mu); // one refinement step for shaky Grams
    Vec z = Vs * mu;
    if (!(-mdot(z, z) > 0.0)) return false;
    double sum = mu.sum();
    if (!(sum > 1e-12)) return false;
    mu /= sum;
    return true;
  };

  Vec best_y;
  double best_viol = std::numeric_limits<double>::infinity();
  for (int outer = 0; outer < 128 && !S.empty(); ++outer) {
    // Inner loop: pull the face solution back into the simplex, shedding the
    // weight that blocks first, until the face optimum is interior.
    for (int inner = 0; inner < m && S.size() > 1; ++inner) {
      Eigen::VectorXd mu;
      if (!face_solve(S, mu)) {
        size_t least = 0;
        for (size_t j = 1; j < S.size(); ++j)
          if (w[j] < w[least]) least = j;
        S.erase(S.begin() + ptrdiff_t(least));
        w.erase(w.begin() + ptrdiff_t(least));
        double sum = 0.0;
        for (double v : w) sum += v;
        for (double& v : w) v /= std::max(sum, 1e-300);
        continue;
      }
      double mumin = mu.minCoeff();
      if (mumin >= -1e-12) {
        for (size_t j = 0; j < S.size(); ++j) w[j] = std::max(0.0, mu[int(j)]);
        break;
      }
      // Step from w toward mu until the first weight hits zero. Images of
      // lambda-segments run along geodesics, so the objective strictly
      // decreases all the way to the face optimum and clipping is safe.
      double alpha = 1.0;
      size_t block = size_t(-1);
      for (size_t j = 0; j < S.size(); ++j)
        if (mu[int(j)] < 0.0 && w[j] - mu[int(j)] > 0.0) {
          double a = w[j] / (w[j] - mu[int(j)]);
          if (a < alpha) { alpha = a; block = j; }
        }
      if (block == size_t(-1)) {
        for (size_t j = 0; j < S.size(); ++j) w[j] = std::max(0.0, mu[int(j)]);
        break;
      }
      for (size_t j = 0; j < S.size(); ++j)
        w[j] = std::max(0.0, (1.0 - alpha) * w[j] + alpha * mu[int(j)]);
      w[block] = 0.0;
      for (size_t j = S.size(); j-- > 0;)
        if (w[j] == 0.0) { S.erase(S.begin() + ptrdiff_t(j)); w.erase(w.begin() + ptrdiff_t(j)); }
      double sum = 0.0;
      for (double v : w) sum += v;
      for (double& v : w) v /= std::max(sum, 1e-300);
    }

    // Current candidate from the feasible weights.
    Vec z = Vec::Zero(4);
    for (size_t j = 0; j < S.size(); ++j) z += w[j] * V_.col(S[j]);
    double q = -mdot(z, z);
    if (!(q > 0.0)) break;
    Vec y = z / std::sqrt(q);
    double coshd = -mdot(xc, y);

    // KKT over every vertex; the worst violator enters the face.
    int add = -1;
    double vworst = 0.0;
    for (int i = 0; i < m; ++i) {
      double tau = -c[i] + coshd * mdot(V_.col(i), y);
      if (tau < vworst) { vworst = tau; add = i; }
    }
    if (-vworst < best_viol) {
      best_viol = -vworst;
      best_y = y;
    }
    if (add < 0 || -vworst <= 1e-10 * scale) break;
    if (std::find(S.begin(), S.end(), add) != S.end()) break; // numeric corner
    S.push_back(add);
    w.push_back(0.0);
  }
  // Accept certificates up to the projection tolerance; degenerate faces can
  // leave residual violations at the Gram solve noise floor.
  if (best_viol > tol().projection_gap * scale)
    throw ConvergenceError("hull projection stalled", std::min(gap, best_viol));

  pr.foot = MPoint::on_sheet(std::move(best_y));
  auto lm = log_map(pr.foot, x);
  pr.dist = lm.dist;
  pr.normal = lm.dir;
  return pr;
}

double PolytopeHull::support_radius(const MPoint& c) const {
  double r = 0.0;
  for (const auto& v : verts_) r = std::max(r, dist(c, v));
  return r;
}

nlohmann::json PolytopeHull::to_json() const {
  nlohmann::json j;
  j["type"] = "polytope";
  j["model"] = "hyperboloid";
  auto verts = nlohmann::json::array();
  for (const auto& v : verts_)
    verts.push_back(std::vector<double>(v.coords().data(), v.coords().data() + 4));
  j["vertices"] = std::move(verts);
  if (prov_.generated) {
    j["provenance"] = {{"generator", "random_polytope"},
                       {"seed", prov_.seed},
                       {"m", prov_.requested},
                       {"radius", prov_.radius},
                       {"attempts", prov_.attempts}};
  } else {
    j["provenance"] = {{"generator", "explicit"}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// Patches

BoundaryPatch BoundaryPatch::whole() { return BoundaryPatch{}; }

BoundaryPatch BoundaryPatch::chart_disc(std::shared_ptr<const HoroFrame> f, VecC xi0, double r) {
  BoundaryPatch p;
  p.kind = Kind::ChartDisc;
  p.frame = std::move(f);
  p.xi0 = std::move(xi0);
  p.chart_radius = r;
  return p;
}

BoundaryPatch BoundaryPatch::cone(const MPoint& apex, const TangentVec& axis, double angle) {
  BoundaryPatch p;
  p.kind = Kind::ConePatch;
  p.apex = apex;
  p.axis = axis.normalized();
  p.angle = angle;
  return p;
}

bool BoundaryPatch::covers(const MPoint& foot) const {
  switch (kind) {
    case Kind::WholeBoundary:
      return true;
    case Kind::ChartDisc: {
      VecC xi;
      double zeta;
      frame->unchart(foot, xi, zeta);
      return (xi - xi0).norm() <= chart_radius;
    }
    case Kind::ConePatch: {
      auto lm = log_map(apex, foot);
      if (lm.degenerate) return true;
      return mdot(axis.v, lm.dir.v) >= std::cos(angle) - 1e-12;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Free functions

double projection_stability_bound(double d, double delta) {
  if (delta < 0.0 || delta >= d)
    throw std::invalid_argument("projection_stability_bound needs 0 <= delta < d");
  double arg = std::cosh(delta) * std::cosh(d + delta) / std::cosh(d - delta);
  return std::acosh(std::max(1.0, arg));
}

namespace {

// Orthonormal tangent basis at c, from Gram-Schmidt over the space axes.
std::array<Vec, 3> tangent_basis(const MPoint& c) {
  std::array<Vec, 3> out;
  int have = 0;
  for (int axis = 1; axis <= 4 && have < 3; ++axis) {
    Vec v = Vec::Zero(4);
    v[axis % 4] = 1.0;
    v += mdot(v, c.coords()) * c.coords(); // remove the base component
    for (int j = 0; j < have; ++j) v -= mdot(v, out[size_t(j)]) * out[size_t(j)];
    double n2 = mdot(v, v);
    if (n2 < 1e-12) continue;
    out[size_t(have++)] = v / std::sqrt(n2);
  }
  if (have < 3) throw std::runtime_error("tangent basis construction failed");
  return out;
}

double boundary_radius(const ConvexBody& K, const TangentVec& dir,
                       double hi_start) {
  double lo = 0.0, hi = hi_start;
  // The ray leaves the body exactly once (c is interior, K convex).
  for (int i = 0; i < 64; ++i) {
    double mid = 0.5 * (lo + hi);
    if (K.contains(exp_map(dir, mid)))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace

HausdorffBracket hausdorff_distance(const ConvexBody& K, const ConvexBody& L, int n_dirs) {
  if (n_dirs < 8) throw std::invalid_argument("hausdorff_distance needs n_dirs >= 8");
  if (K.dim() != 3 || L.dim() != 3) throw DimensionError("hausdorff bracketing is 3-d only");
  MPoint c = geodesic_point(K.interior_point(), L.interior_point(), 0.5);
  if (!K.contains(c) || !L.contains(c))
    throw std::invalid_argument("bodies share no sampled interior point");

  auto basis = tangent_basis(c);
  double hiK = K.support_radius(c) + 1e-6;
  double hiL = L.support_radius(c) + 1e-6;

  double lower = 0.0;
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n_dirs; ++i) {
    // Fibonacci sphere point.
    double z = 1.0 - (2.0 * i + 1.0) / n_dirs;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden * i;
    Vec v = r * std::cos(phi) * basis[0] + r * std::sin(phi) * basis[1] + z * basis[2];
    auto dir = TangentVec::at(c, std::move(v));

    double rK = boundary_radius(K, dir, hiK);
    double rL = boundary_radius(L, dir, hiL);
    rmin = std::min(rmin, std::min(rK, rL));
    rmax = std::max(rmax, std::max(rK, rL));
    lower = std::max(lower, L.distance(exp_map(dir, rK)));
    lower = std::max(lower, K.distance(exp_map(dir, rL)));
  }

  // Directional resolution: the Fibonacci set has covering radius below
  // 3/sqrt(N); between samples the boundary moves at most along an arc of
  // radius <= rmax, divided by the support-cone slope sinh(rmin)/sinh(rmax).
  double mesh = 3.0 / std::sqrt(double(n_dirs));
  double slope = std::sinh(rmax) / std::max(std::sinh(rmin), 1e-12);
  HausdorffBracket out;
  out.lower = lower;
  out.upper = lower + mesh * std::sinh(rmax) * slope;
  return out;
}

PolytopeHull random_polytope(double R, int m, uint64_t seed) {
  if (m < 4) throw std::invalid_argument("random_polytope needs m >= 4");
  if (!(R > 0.0)) throw std::invalid_argument("random_polytope needs R > 0");
  MPoint c = MPoint::origin(3);
  for (int attempt = 0; attempt < 16; ++attempt) {
    auto rng = RngStream::derive(seed, uint64_t(attempt), 0x706f6c79);
    std::vector<MPoint> verts;
    verts.reserve(size_t(m));
    for (int i = 0; i < m; ++i) {
      double d3[3];
      rng.unit_sphere(3, d3);
      Vec v = Vec::Zero(4);
      v[1] = d3[0];
      v[2] = d3[1];
      v[3] = d3[2];
      verts.push_back(exp_map(TangentVec::at(c, std::move(v)), R));
    }
    try {
      PolytopeHull::Provenance prov;
      prov.generated = true;
      prov.seed = seed;
      prov.requested = m;
      prov.radius = R;
      prov.attempts = attempt + 1;
      return PolytopeHull(std::move(verts), prov);
    } catch (const std::invalid_argument&) {
      continue; // degenerate sample; retry on the next sub-seed
    }
  }
  throw std::runtime_error("random_polytope failed 16 attempts");
}

std::unique_ptr<ConvexBody> body_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (j.value("model", "hyperboloid") != std::string("hyperboloid"))
    throw std::invalid_argument("unsupported body model");
  if (type == "ball") {
    auto cs = j.at("center").get<std::vector<double>>();
    Vec v(Eigen::Index(cs.size()));
    for (size_t i = 0; i < cs.size(); ++i) v[Eigen::Index(i)] = cs[i];
    return std::make_unique<Ball>(MPoint::verbatim(std::move(v)), j.at("radius").get<double>());
  }
  if (type == "polytope") {
    std::vector<MPoint> verts;
    for (const auto& row : j.at("vertices")) {
      auto cs = row.get<std::vector<double>>();
      Vec v(Eigen::Index(cs.size()));
      for (size_t i = 0; i < cs.size(); ++i) v[Eigen::Index(i)] = cs[i];
      verts.push_back(MPoint::verbatim(std::move(v)));
    }
    PolytopeHull::Provenance prov;
    if (j.contains("provenance") && j["provenance"].value("generator", "") == "random_polytope") {
      prov.generated = true;
      prov.seed = j["provenance"].value("seed", uint64_t(0));
      prov.requested = j["provenance"].value("m", 0);
      prov.radius = j["provenance"].value("radius", 0.0);
      prov.attempts = j["provenance"].value("attempts", 1);
    }
    return std::make_unique<PolytopeHull>(std::move(verts), prov);
  }
  throw std::invalid_argument("unknown body type: " + type);
}

} // namespace hypcurv
