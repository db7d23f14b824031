#include "hypcurv/hull3.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>

namespace hypcurv {
namespace {

uint64_t mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double jitter_unit(uint64_t key) {
  return 2.0 * (double(mix64(key) >> 11) * 0x1.0p-53) - 1.0;
}

struct Tri {
  int a, b, c;
  Eigen::Vector3d n; // outward, not normalized
  double off;
  bool alive = true;
};

Tri make_tri(const std::vector<Eigen::Vector3d>& p, int a, int b, int c) {
  Tri t{a, b, c, {}, 0.0, true};
  t.n = (p[b] - p[a]).cross(p[c] - p[a]);
  t.off = t.n.dot(p[a]);
  return t;
}

double side(const Tri& t, const Eigen::Vector3d& q) { return t.n.dot(q) - t.off; }

} // namespace

bool Hull3::contains(const Eigen::Vector3d& q, double tol) const {
  for (const auto& f : facets)
    if (f.normal.dot(q) - f.offset > tol) return false;
  return true;
}

Hull3 convex_hull3(const std::vector<Eigen::Vector3d>& pts) {
  const int n = int(pts.size());
  double scale = 1.0;
  for (const auto& p : pts) scale = std::max(scale, p.lpNorm<Eigen::Infinity>());
  const double eps_deg = 1e-9 * scale;

  if (n < 4) throw std::invalid_argument("hull needs at least 4 points");

  std::vector<Eigen::Vector3d> jp(pts.begin(), pts.end());
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k)
      jp[i][k] += 1e-11 * scale * jitter_unit(uint64_t(i) * 3 + uint64_t(k));

  // Seed tetrahedron: spread points, then the farthest from line and plane.
  int i0 = 0;
  for (int i = 1; i < n; ++i)
    if (std::lexicographical_compare(jp[i].data(), jp[i].data() + 3,
                                     jp[i0].data(), jp[i0].data() + 3))
      i0 = i;
  int i1 = -1;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    double d = (jp[i] - jp[i0]).norm();
    if (i != i0 && d > best) { best = d; i1 = i; }
  }
  if (best <= eps_deg) throw std::invalid_argument("hull points are coincident");
  Eigen::Vector3d axis = (jp[i1] - jp[i0]).normalized();
  int i2 = -1;
  best = -1.0;
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d r = jp[i] - jp[i0];
    double d = (r - axis.dot(r) * axis).norm();
    if (i != i0 && i != i1 && d > best) { best = d; i2 = i; }
  }
  if (best <= eps_deg) throw std::invalid_argument("hull points are collinear");
  Eigen::Vector3d nrm = (jp[i1] - jp[i0]).cross(jp[i2] - jp[i0]).normalized();
  int i3 = -1;
  best = -1.0;
  for (int i = 0; i < n; ++i) {
    double d = std::abs(nrm.dot(jp[i] - jp[i0]));
    if (i != i0 && i != i1 && i != i2 && d > best) { best = d; i3 = i; }
  }
  if (best <= eps_deg) throw std::invalid_argument("hull points are coplanar");

  std::vector<Tri> tris;
  if (nrm.dot(jp[i3] - jp[i0]) > 0.0) std::swap(i1, i2);
  tris.push_back(make_tri(jp, i0, i1, i2));
  tris.push_back(make_tri(jp, i0, i3, i1));
  tris.push_back(make_tri(jp, i1, i3, i2));
  tris.push_back(make_tri(jp, i2, i3, i0));

  // Beneath-beyond insertion. Visibility is rechecked against every live
  // triangle; the horizon is recovered from the visible set's directed edges.
  for (int q = 0; q < n; ++q) {
    if (q == i0 || q == i1 || q == i2 || q == i3) continue;
    const double eps_vis = 1e-12 * scale;
    std::vector<int> visible;
    for (int t = 0; t < int(tris.size()); ++t)
      if (tris[t].alive && side(tris[t], jp[q]) > eps_vis) visible.push_back(t);
    if (visible.empty()) continue;

    std::map<std::pair<int, int>, int> dir_edges;
    for (int t : visible) {
      const Tri& tr = tris[t];
      int e[3][2] = {{tr.a, tr.b}, {tr.b, tr.c}, {tr.c, tr.a}};
      for (auto& ed : e) ++dir_edges[{ed[0], ed[1]}];
    }
    for (int t : visible) tris[t].alive = false;
    for (const auto& [ed, cnt] : dir_edges) {
      (void)cnt;
      if (dir_edges.count({ed.second, ed.first})) continue; // interior to cone
      tris.push_back(make_tri(jp, ed.first, ed.second, q));
    }
  }

  // Refit planes from the original coordinates and merge coplanar triangles.
  struct Live { int a, b, c; Eigen::Vector3d n; double off; };
  std::vector<Live> live;
  for (const auto& t : tris) {
    if (!t.alive) continue;
    Eigen::Vector3d nn = (pts[t.b] - pts[t.a]).cross(pts[t.c] - pts[t.a]);
    double len = nn.norm();
    if (len <= 1e-14 * scale * scale) continue; // jitter-made sliver, zero area
    nn /= len;
    double off = (nn.dot(pts[t.a]) + nn.dot(pts[t.b]) + nn.dot(pts[t.c])) / 3.0;
    live.push_back({t.a, t.b, t.c, nn, off});
  }

  std::map<std::pair<int, int>, std::pair<int, int>> half; // directed edge -> (tri, slot)
  for (int t = 0; t < int(live.size()); ++t) {
    int e[3][2] = {{live[t].a, live[t].b}, {live[t].b, live[t].c}, {live[t].c, live[t].a}};
    for (int s = 0; s < 3; ++s) half[{e[s][0], e[s][1]}] = {t, s};
  }

  std::vector<int> group(live.size(), -1);
  int n_groups = 0;
  for (int t = 0; t < int(live.size()); ++t) {
    if (group[t] >= 0) continue;
    int g = n_groups++;
    std::vector<int> stack{t};
    group[t] = g;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      int e[3][2] = {{live[cur].a, live[cur].b}, {live[cur].b, live[cur].c},
                     {live[cur].c, live[cur].a}};
      for (auto& ed : e) {
        auto it = half.find({ed[1], ed[0]});
        if (it == half.end()) continue;
        int nb = it->second.first;
        if (group[nb] >= 0) continue;
        if (live[cur].n.dot(live[nb].n) > 1.0 - 1e-10 &&
            std::abs(live[cur].off - live[nb].off) < 1e-8 * scale) {
          group[nb] = g;
          stack.push_back(nb);
        }
      }
    }
  }

  Hull3 out;
  out.points = pts;
  out.scale = scale;
  out.facets.resize(n_groups);
  for (int g = 0; g < n_groups; ++g) {
    // Area-weighted plane refit over the group.
    Eigen::Vector3d nn = Eigen::Vector3d::Zero();
    for (int t = 0; t < int(live.size()); ++t)
      if (group[t] == g)
        nn += (pts[live[t].b] - pts[live[t].a]).cross(pts[live[t].c] - pts[live[t].a]);
    nn.normalize();

    // Boundary loop: directed edges whose reverse is outside the group.
    std::map<int, int> next;
    for (int t = 0; t < int(live.size()); ++t) {
      if (group[t] != g) continue;
      int e[3][2] = {{live[t].a, live[t].b}, {live[t].b, live[t].c}, {live[t].c, live[t].a}};
      for (auto& ed : e) {
        auto it = half.find({ed[1], ed[0]});
        if (it == half.end() || group[it->second.first] != g) next[ed[0]] = ed[1];
      }
    }
    if (next.empty()) throw std::runtime_error("hull facet merge produced no boundary");
    std::vector<int> loop;
    int start = next.begin()->first, cur = start;
    do {
      loop.push_back(cur);
      auto it = next.find(cur);
      if (it == next.end()) throw std::runtime_error("hull facet boundary is not closed");
      cur = it->second;
    } while (cur != start && loop.size() <= next.size());
    if (cur != start) throw std::runtime_error("hull facet boundary is not a single loop");

    double off = 0.0;
    for (int v : loop) off += nn.dot(pts[v]);
    off /= double(loop.size());
    out.facets[g] = HullFacet{nn, off, std::move(loop)};
  }

  std::map<std::pair<int, int>, std::pair<int, int>> edge_faces;
  for (int f = 0; f < int(out.facets.size()); ++f) {
    const auto& loop = out.facets[f].loop;
    for (size_t i = 0; i < loop.size(); ++i) {
      int u = loop[i], v = loop[(i + 1) % loop.size()];
      auto key = std::minmax(u, v);
      auto it = edge_faces.find(key);
      if (it == edge_faces.end())
        edge_faces[key] = {f, -1};
      else
        it->second.second = f;
    }
  }
  for (const auto& [key, fs] : edge_faces) {
    if (fs.second < 0) throw std::runtime_error("hull edge with one incident facet");
    out.edges.push_back(HullEdge{key.first, key.second, fs.first, fs.second});
  }

  std::vector<char> is_vert(n, 0);
  for (const auto& f : out.facets)
    for (int v : f.loop) is_vert[v] = 1;
  for (int i = 0; i < n; ++i)
    if (is_vert[i]) out.vertices.push_back(i);

  for (const auto& p : pts)
    if (!out.contains(p, 1e-8 * scale))
      throw std::runtime_error("hull postcondition failed: input point outside");
  return out;
}

} // namespace hypcurv
