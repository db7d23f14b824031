#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hypcurv/bodies.hpp"
#include "hypcurv/rng.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace hypcurv;

namespace {

MPoint random_point(RngStream& rng, int n, double spread) {
  Vec v = Vec::Zero(n + 1);
  v[0] = 1.0;
  auto p = MPoint::on_sheet(v);
  double dir[4];
  rng.unit_sphere(n, dir);
  Vec t = Vec::Zero(n + 1);
  for (int i = 0; i < n; ++i) t[i + 1] = dir[i];
  return exp_map(TangentVec::at(p, t), spread * rng.uniform());
}

TangentVec random_dir(RngStream& rng, const MPoint& p) {
  int n = p.dim();
  Vec t(n + 1);
  for (int i = 0; i <= n; ++i) t[i] = rng.normal();
  t += mdot(t, p.coords()) * p.coords();
  return TangentVec::at(p, t).normalized();
}

// Independent projection oracle: sample the whole hull boundary densely and
// take the nearest sample. Samples are cone combinations over fan triangles
// of each facet, which lie exactly on the boundary geodesic triangles.
double brute_force_distance(const PolytopeHull& K, const MPoint& x, int budget) {
  const auto& hull = K.klein_hull();
  const auto& verts = K.vertices();
  int n_tris = 0;
  for (const auto& f : hull.facets) n_tris += int(f.loop.size()) - 2;
  int per_tri = std::max(1, budget / std::max(1, n_tris));
  int grid = std::max(2, int(std::sqrt(2.0 * per_tri)));

  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : hull.facets) {
    for (size_t t = 1; t + 1 < f.loop.size(); ++t) {
      const Vec& a = verts[size_t(f.loop[0])].coords();
      const Vec& b = verts[size_t(f.loop[t])].coords();
      const Vec& c = verts[size_t(f.loop[t + 1])].coords();
      for (int i = 0; i <= grid; ++i) {
        for (int j = 0; j + i <= grid; ++j) {
          double wa = double(i) / grid, wb = double(j) / grid;
          double wc = 1.0 - wa - wb;
          Vec s = wa * a + wb * b + wc * c;
          s /= std::sqrt(-mdot(s, s));
          best = std::min(best, dist(MPoint::on_sheet(s), x));
        }
      }
    }
  }
  return best;
}

} // namespace

TEST_CASE("klein hull of a cube") {
  std::vector<Eigen::Vector3d> pts;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1}) pts.emplace_back(0.3 * sx, 0.3 * sy, 0.3 * sz);
  pts.emplace_back(0.0, 0.0, 0.0);      // interior
  pts.emplace_back(0.1, 0.05, -0.2);    // interior
  auto h = convex_hull3(pts);
  CHECK(h.facets.size() == 6);
  CHECK(h.edges.size() == 12);
  CHECK(h.vertices.size() == 8);
  for (const auto& f : h.facets) CHECK(f.loop.size() == 4);
  CHECK(h.contains({0.0, 0.0, 0.0}, 1e-12));
  CHECK(h.contains({0.3, 0.3, 0.3}, 1e-8));
  CHECK(!h.contains({0.3001, 0.0, 0.0}, 1e-8));
}

TEST_CASE("klein hull of random clouds") {
  auto rng = RngStream::derive(101, 1);
  for (int rep = 0; rep < 20; ++rep) {
    int n = 10 + int(rng.uniform() * 40);
    std::vector<Eigen::Vector3d> pts;
    for (int i = 0; i < n; ++i)
      pts.emplace_back(rng.normal(), rng.normal(), rng.normal());
    auto h = convex_hull3(pts);

    int V = int(h.vertices.size()), E = int(h.edges.size()), F = int(h.facets.size());
    CHECK(V - E + F == 2);
    for (const auto& p : pts) CHECK(h.contains(p, 1e-7 * h.scale));

    // Support function witness: the argmax along any direction is extreme.
    for (int k = 0; k < 10; ++k) {
      Eigen::Vector3d d(rng.normal(), rng.normal(), rng.normal());
      int arg = 0;
      for (int i = 1; i < n; ++i)
        if (d.dot(pts[size_t(i)]) > d.dot(pts[size_t(arg)])) arg = i;
      CHECK(std::find(h.vertices.begin(), h.vertices.end(), arg) != h.vertices.end());
    }
  }
  CHECK_THROWS_AS(convex_hull3({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.5, 0.5, 0}}),
                  std::invalid_argument);
}

TEST_CASE("ball projection closed form") {
  auto rng = RngStream::derive(101, 2);
  auto center = random_point(rng, 3, 0.5);
  Ball K(center, 0.7);
  CHECK(K.contains(center));
  CHECK_THROWS_AS(Ball(center, -1.0), std::invalid_argument);

  for (int i = 0; i < 200; ++i) {
    auto dir = random_dir(rng, center);
    double t = 0.7 + 2.0 * rng.uniform();
    auto x = exp_map(dir, t);
    auto pr = K.project(x);
    if (t <= 0.7) {
      CHECK(pr.interior);
      continue;
    }
    CHECK(!pr.interior);
    CHECK(pr.dist == doctest::Approx(t - 0.7).epsilon(1e-10));
    CHECK(dist(pr.foot, center) == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(dist(exp_map(pr.normal, pr.dist), x) < 1e-7);
    auto again = K.project(pr.foot);
    CHECK(dist(again.interior ? again.foot : again.foot, pr.foot) < 1e-7);
  }

  CHECK(K.support_radius(center) == doctest::Approx(0.7));
  CHECK(K.parallel_contains(exp_map(random_dir(rng, center), 0.899), 0.2));
  CHECK(!K.parallel_contains(exp_map(random_dir(rng, center), 0.905), 0.2));
}

TEST_CASE("hull projection against dense boundary sampling") {
  auto K = random_polytope(1.0, 40, 7001);
  auto rng = RngStream::derive(101, 3);
  for (int i = 0; i < 10; ++i) {
    auto dir = random_dir(rng, MPoint::origin(3));
    auto x = exp_map(dir, 1.0 + 1.5 * rng.uniform());
    auto pr = K.project(x);
    REQUIRE(!pr.interior);
    double oracle = brute_force_distance(K, x, 100000);
    CHECK(pr.dist <= oracle + 1e-9);     // sampled minimum can only overshoot
    CHECK(oracle - pr.dist <= 1e-4);     // and not by more than the mesh
    CHECK(dist(exp_map(pr.normal, pr.dist), x) < 1e-7);
    CHECK(K.contains(pr.foot));

    auto again = K.project(pr.foot);
    if (!again.interior) CHECK(again.dist < 1e-7);

    // The foot is distance-optimal against every vertex as well.
    for (const auto& v : K.vertices()) CHECK(pr.dist <= dist(x, v) + 1e-9);
  }
}

TEST_CASE("hull membership, centroid and radii") {
  auto K = random_polytope(0.9, 60, 7002);
  CHECK(K.contains(K.interior_point()));
  CHECK(K.inradius_lower() > 0.0);
  // circumradius is measured from the interior centroid, which sits off the
  // origin, so allow that offset on top of the sampling radius.
  CHECK(K.circumradius() <= 0.9 + dist(K.interior_point(), MPoint::origin(3)) + 1e-9);
  CHECK(K.vertices().size() <= 60);

  // Vertices and pairwise geodesic midpoints belong to the hull.
  auto rng = RngStream::derive(101, 4);
  const auto& vs = K.vertices();
  for (int k = 0; k < 200; ++k) {
    size_t i = size_t(rng.uniform() * vs.size());
    size_t j = size_t(rng.uniform() * vs.size());
    i = std::min(i, vs.size() - 1);
    j = std::min(j, vs.size() - 1);
    CHECK(K.contains(vs[i]));
    CHECK(K.contains(geodesic_point(vs[i], vs[j], 0.5)));
  }

  // Points beyond the circumradius are rejected fast, points past facet
  // planes are outside.
  for (int k = 0; k < 200; ++k) {
    auto x = exp_map(random_dir(rng, MPoint::origin(3)), 0.95 + rng.uniform());
    CHECK(K.contains(x) == (K.max_facet_violation(x) <= tol().membership));
  }
}

TEST_CASE("parallel body membership matches projection") {
  auto K = random_polytope(0.8, 30, 7003);
  Ball B(MPoint::origin(3), 0.6);
  auto rng = RngStream::derive(101, 5);
  for (int i = 0; i < 500; ++i) {
    auto x = random_point(rng, 3, 2.0);
    double rho = 0.05 + 0.45 * rng.uniform();
    for (const ConvexBody* body : {static_cast<const ConvexBody*>(&K),
                                   static_cast<const ConvexBody*>(&B)}) {
      bool fast = body->parallel_contains(x, rho);
      double d = body->distance(x);
      if (std::abs(d - rho) > 1e-7) CHECK(fast == (d <= rho));
    }
  }
}

TEST_CASE("projection stability bound formula") {
  CHECK(projection_stability_bound(1.0, 0.0) == 0.0);
  CHECK_THROWS_AS(projection_stability_bound(0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(projection_stability_bound(0.5, -0.1), std::invalid_argument);

  double asym = 2.0 * std::sqrt(std::tanh(1.0)) * std::sqrt(0.01);
  CHECK(asym == doctest::Approx(0.1746).epsilon(2e-3));
  CHECK(projection_stability_bound(1.0, 0.01) == doctest::Approx(asym).epsilon(0.15));

  double prev = 0.0;
  for (int i = 1; i <= 40; ++i) {
    double delta = 0.02 * i;
    double b = projection_stability_bound(1.0, delta);
    CHECK(b > prev);
    prev = b;
  }

  // The asymptotic prefactor 2 sqrt(tanh d) sqrt(delta) emerges as delta -> 0.
  for (double d : {0.5, 1.0, 2.0}) {
    double delta = 1e-8;
    double ratio = projection_stability_bound(d, delta) /
                   (2.0 * std::sqrt(std::tanh(d)) * std::sqrt(delta));
    CHECK(ratio == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("projection is a contraction") {
  auto rng = RngStream::derive(101, 6);
  auto K = random_polytope(0.9, 40, 7004);
  Ball B(random_point(rng, 3, 0.3), 0.75);
  for (const ConvexBody* body : {static_cast<const ConvexBody*>(&K),
                                 static_cast<const ConvexBody*>(&B)}) {
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
      auto x = random_point(rng, 3, 2.2);
      auto y = random_point(rng, 3, 2.2);
      auto px = body->project(x);
      auto py = body->project(y);
      CHECK(dist(px.foot, py.foot) <= dist(x, y) + 1e-7);
      ++checked;
    }
    CHECK(checked == 10000);
  }
}

TEST_CASE("projections of nearby bodies stay close") {
  auto rng = RngStream::derive(101, 7);
  int checked = 0, skipped = 0;
  for (int rep = 0; rep < 8; ++rep) {
    auto K = random_polytope(0.9, 50, 8000 + uint64_t(rep));
    double eps = 0.01 + 0.04 * rng.uniform();
    std::vector<MPoint> moved;
    double delta_vertex = 0.0;
    for (const auto& v : K.vertices()) {
      auto w = exp_map(random_dir(rng, v), eps * rng.uniform());
      delta_vertex = std::max(delta_vertex, dist(v, w));
      moved.push_back(w);
    }
    PolytopeHull L(moved);
    double delta = std::min(delta_vertex, hausdorff_distance(K, L, 400).upper);

    for (int i = 0; i < 1250; ++i) {
      auto x = random_point(rng, 3, 2.0);
      double d = K.distance(x);
      if (delta >= d || d == 0.0) { ++skipped; continue; }
      auto fK = K.project(x);
      auto fL = L.project(x);
      auto fLfoot = fL.interior ? x : fL.foot;
      CHECK(dist(fK.foot, fLfoot) <= projection_stability_bound(d, delta) + 1e-6);
      ++checked;
    }
  }
  CHECK(checked > 5000); // most triples must actually exercise the bound
}

TEST_CASE("hausdorff brackets") {
  Ball B1(MPoint::origin(3), 0.8);
  Ball B2(MPoint::origin(3), 0.65);
  auto same = hausdorff_distance(B1, B1, 300);
  CHECK(same.lower <= 2e-9); // boundary bisection resolves to membership tol
  auto br = hausdorff_distance(B1, B2, 300);
  CHECK(br.lower == doctest::Approx(0.15).epsilon(1e-6));
  CHECK(br.upper >= br.lower);

  double prev_upper = std::numeric_limits<double>::infinity();
  for (int m : {50, 200, 800}) {
    auto K = random_polytope(0.8, m, 9000);
    auto b = hausdorff_distance(K, B1, 600);
    CHECK(b.upper < prev_upper);
    CHECK(b.lower <= b.upper);
    prev_upper = b.upper;
  }
}

TEST_CASE("random polytope determinism and radius") {
  auto K1 = random_polytope(1.1, 25, 31337);
  auto K2 = random_polytope(1.1, 25, 31337);
  REQUIRE(K1.vertices().size() == K2.vertices().size());
  for (size_t i = 0; i < K1.vertices().size(); ++i)
    CHECK((K1.vertices()[i].coords() - K2.vertices()[i].coords()).norm() == 0.0);

  auto K3 = random_polytope(1.1, 25, 31338);
  bool differs = K3.vertices().size() != K1.vertices().size();
  if (!differs)
    differs = (K1.vertices()[0].coords() - K3.vertices()[0].coords()).norm() > 0;
  CHECK(differs);

  MPoint c = MPoint::origin(3);
  for (const auto& v : K1.vertices())
    CHECK(dist(c, v) == doctest::Approx(1.1).epsilon(1e-10));
  CHECK(K1.provenance().generated);
  CHECK(K1.provenance().seed == 31337);
}

TEST_CASE("body json round trip is bit exact") {
  auto rng = RngStream::derive(101, 8);
  Ball B(random_point(rng, 3, 1.2), 0.3 + rng.uniform());
  auto jb = B.to_json();
  auto B2 = body_from_json(nlohmann::json::parse(jb.dump()));
  auto* ball = dynamic_cast<Ball*>(B2.get());
  REQUIRE(ball != nullptr);
  CHECK(ball->radius() == B.radius());
  CHECK((ball->center().coords() - B.center().coords()).norm() == 0.0);

  auto K = random_polytope(0.9, 30, 424242);
  auto jk = K.to_json();
  auto K2 = body_from_json(nlohmann::json::parse(jk.dump()));
  auto* poly = dynamic_cast<PolytopeHull*>(K2.get());
  REQUIRE(poly != nullptr);
  REQUIRE(poly->vertices().size() == K.vertices().size());
  for (size_t i = 0; i < K.vertices().size(); ++i)
    CHECK((poly->vertices()[i].coords() - K.vertices()[i].coords()).norm() == 0.0);
  CHECK(poly->provenance().seed == 424242);

  CHECK_THROWS_AS(body_from_json(nlohmann::json{{"type", "torus"}}), std::invalid_argument);
}

TEST_CASE("cone patch attribution on a ball") {
  MPoint c = MPoint::origin(3);
  Ball K(c, 0.5);
  Vec up = Vec::Zero(4);
  up[3] = 1.0;
  auto axis = TangentVec::at(c, up);
  auto patch = BoundaryPatch::cone(c, axis, 0.4);

  auto rng = RngStream::derive(101, 9);
  for (int i = 0; i < 300; ++i) {
    auto dir = random_dir(rng, c);
    double angle = std::acos(std::clamp(mdot(dir.v, up), -1.0, 1.0));
    auto x = exp_map(dir, 1.0);
    auto foot = K.project(x).foot;
    if (std::abs(angle - 0.4) > 1e-6)
      CHECK(patch.covers(foot) == (angle < 0.4));
  }
  CHECK(BoundaryPatch::whole().covers(c));
}
