#include "cuspgrowth/space.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace growth {

namespace {

std::string order_key_of(const ModelSpace& m, std::int32_t id) {
  const auto& v = m.cg.verts[static_cast<std::size_t>(id)];
  std::string k = word_key(v.w);
  k.push_back(static_cast<char>(v.cls & 0xff));
  k.push_back(static_cast<char>(v.depth & 0xff));
  return k;
}

}  // namespace

std::span<const std::int32_t> cusped_neighbors(const ModelSpace& m, std::int32_t id) {
  const auto& cg = m.cg;
  const auto lo = cg.adj_offset[static_cast<std::size_t>(id)];
  const auto hi = cg.adj_offset[static_cast<std::size_t>(id) + 1];
  return {cg.adj.data() + lo, static_cast<std::size_t>(hi - lo)};
}

std::vector<std::int32_t> cusped_neighbors_raw(const ModelSpace& m, std::int32_t id) {
  const auto& cg = m.cg;
  const auto& v = cg.verts.at(static_cast<std::size_t>(id));
  std::vector<std::int32_t> out;
  const auto push = [&](const Word& w, std::int32_t cls, std::int32_t depth) {
    const std::int32_t nb = cg.find_vertex(w, cls, depth);
    if (nb >= 0) out.push_back(nb);
  };
  if (v.depth == 0) {
    for (std::int32_t gi = 0; gi < static_cast<std::int32_t>(cg.orders.size()); ++gi) {
      push(word_mul(v.w, Word{{gi, 1}}, cg.orders), -1, 0);
      push(word_mul(v.w, Word{{gi, -1}}, cg.orders), -1, 0);
    }
    if (cg.max_depth >= 1)
      for (std::int32_t c = 0; c < static_cast<std::int32_t>(cg.parabolic_gen.size()); ++c)
        push(v.w, c, 1);
  } else {
    if (v.depth == 1)
      push(v.w, -1, 0);
    else
      push(v.w, v.cls, v.depth - 1);
    if (v.depth < cg.max_depth) push(v.w, v.cls, v.depth + 1);
    const int pgen = cg.parabolic_gen[static_cast<std::size_t>(v.cls)];
    const std::int64_t reach = std::int64_t{1} << v.depth;
    for (std::int64_t j = 1; j <= reach; ++j) {
      push(word_mul(v.w, Word{{pgen, j}}, cg.orders), v.cls, v.depth);
      push(word_mul(v.w, Word{{pgen, -j}}, cg.orders), v.cls, v.depth);
    }
  }
  return out;
}

GraphBfs bfs_from(const ModelSpace& m, std::int32_t from) {
  GraphBfs r;
  r.dist.assign(m.cg.verts.size(), -1);
  r.parent.assign(m.cg.verts.size(), -1);
  std::deque<std::int32_t> queue;
  r.dist[static_cast<std::size_t>(from)] = 0;
  queue.push_back(from);
  while (!queue.empty()) {
    const std::int32_t cur = queue.front();
    queue.pop_front();
    for (std::int32_t nb : cusped_neighbors(m, cur)) {
      if (r.dist[static_cast<std::size_t>(nb)] >= 0) continue;
      r.dist[static_cast<std::size_t>(nb)] = r.dist[static_cast<std::size_t>(cur)] + 1;
      r.parent[static_cast<std::size_t>(nb)] = cur;
      queue.push_back(nb);
    }
  }
  return r;
}

double graph_distance(const ModelSpace& m, std::int32_t a, std::int32_t b) {
  if (a == b) return 0.0;
  const GraphBfs bfs = bfs_from(m, a);
  const std::int32_t d = bfs.dist[static_cast<std::size_t>(b)];
  const double da = m.cg.dist_o[static_cast<std::size_t>(a)];
  const double db = m.cg.dist_o[static_cast<std::size_t>(b)];
  if (d < 0 || (da + db + d) / 2.0 > m.truncation())
    throw TruncationError("graph distance query escapes the built truncation");
  return d;
}

std::vector<std::int32_t> graph_geodesic_vertices(const ModelSpace& m, std::int32_t a,
                                                  std::int32_t b) {
  if (a == b) return {a};
  const std::vector<std::int32_t>* parent = nullptr;
  GraphBfs bfs;
  std::int32_t d = -1;
  if (a == m.cg.base) {
    parent = &m.cg.parent_o;
    d = m.cg.dist_o[static_cast<std::size_t>(b)];
  } else {
    bfs = bfs_from(m, a);
    parent = &bfs.parent;
    d = bfs.dist[static_cast<std::size_t>(b)];
  }
  const double da = m.cg.dist_o[static_cast<std::size_t>(a)];
  const double db = m.cg.dist_o[static_cast<std::size_t>(b)];
  if (d < 0 || (da + db + d) / 2.0 > m.truncation())
    throw TruncationError("graph geodesic query escapes the built truncation");
  std::vector<std::int32_t> path;
  for (std::int32_t cur = b; cur >= 0; cur = (*parent)[static_cast<std::size_t>(cur)])
    path.push_back(cur);
  std::reverse(path.begin(), path.end());
  return path;
}

double distance(const ModelSpace& m, const Point& x, const Point& y) {
  require_same_backend(m, x, "distance");
  require_same_backend(m, y, "distance");
  if (m.backend == Backend::half_plane) return hp_dist(x.z, y.z);
  return graph_distance(m, x.vertex, y.vertex);
}

double gromov_product(const ModelSpace& m, const Point& x, const Point& y, const Point& z) {
  const double p = (distance(m, x, z) + distance(m, y, z) - distance(m, x, y)) / 2.0;
  return std::max(0.0, p);
}

PathSample geodesic(const ModelSpace& m, const Point& x, const Point& y, double step) {
  require_same_backend(m, x, "geodesic");
  require_same_backend(m, y, "geodesic");
  if (step <= 0.0) throw UsageError("geodesic: step must be positive");
  PathSample path;
  path.step = step;
  if (m.backend == Backend::half_plane) {
    const double len = hp_dist(x.z, y.z);
    if (len < 1e-14) {
      path.points = {x};
      path.cum = {0.0};
      return path;
    }
    const HpSegment seg = HpSegment::between(x.z, y.z);
    const int k = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int i = 0; i <= k; ++i) {
      const double t = len * i / k;
      path.points.push_back({m.backend, i == k ? y.z : seg.point_at_length(t), -1});
      path.cum.push_back(t);
    }
    path.points.front().z = x.z;
    return path;
  }
  path.step = 1.0;
  const auto verts = graph_geodesic_vertices(m, x.vertex, y.vertex);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    path.points.push_back({m.backend, {}, verts[i]});
    path.cum.push_back(static_cast<double>(i));
  }
  return path;
}

double estimate_hyperbolicity(const ModelSpace& m, const std::vector<Point>& sample) {
  if (sample.size() < 3) throw UsageError("estimate_hyperbolicity: need at least 3 points");
  double worst = 0.0;
  for (std::size_t i = 0; i + 2 < sample.size(); i += 3) {
    const Point tri[3] = {sample[i], sample[i + 1], sample[i + 2]};
    if (m.backend == Backend::half_plane) {
      const double h = 0.05;
      for (int corner = 0; corner < 3; ++corner) {
        const Cplx o = tri[corner].z;
        const Cplx a = tri[(corner + 1) % 3].z;
        const Cplx b = tri[(corner + 2) % 3].z;
        const double da = hp_dist(o, a), db = hp_dist(o, b), dab = hp_dist(a, b);
        if (da < 1e-12 || db < 1e-12) continue;
        const double reach = std::min({std::max(0.0, (da + db - dab) / 2.0), da, db});
        const HpSegment sa = HpSegment::between(o, a);
        const HpSegment sb = HpSegment::between(o, b);
        for (double t = 0.0; t <= reach + 1e-12; t += h)
          worst = std::max(worst, hp_dist(sa.point_at_length(t), sb.point_at_length(t)));
      }
      continue;
    }
    // graph: one BFS per triangle vertex, reused for distances and paths
    GraphBfs bfs[3];
    bool ok = true;
    for (int k = 0; k < 3 && ok; ++k) {
      bfs[k] = bfs_from(m, tri[k].vertex);
      for (int l = 0; l < 3; ++l) {
        const std::int32_t d = bfs[k].dist[static_cast<std::size_t>(tri[l].vertex)];
        const double guard = (m.cg.dist_o[static_cast<std::size_t>(tri[k].vertex)] +
                              m.cg.dist_o[static_cast<std::size_t>(tri[l].vertex)] + d) /
                             2.0;
        if (d < 0 || guard > m.truncation()) ok = false;
      }
    }
    if (!ok) continue;  // sampled triangle does not fit in the truncation
    const auto chain = [&](int corner, std::int32_t target) {
      std::vector<std::int32_t> path;
      for (std::int32_t cur = target; cur >= 0;
           cur = bfs[corner].parent[static_cast<std::size_t>(cur)])
        path.push_back(cur);
      std::reverse(path.begin(), path.end());
      return path;
    };
    for (int corner = 0; corner < 3; ++corner) {
      const std::int32_t va = tri[(corner + 1) % 3].vertex;
      const std::int32_t vb = tri[(corner + 2) % 3].vertex;
      const auto da = static_cast<double>(bfs[corner].dist[static_cast<std::size_t>(va)]);
      const auto db = static_cast<double>(bfs[corner].dist[static_cast<std::size_t>(vb)]);
      const auto dab =
          static_cast<double>(bfs[(corner + 1) % 3].dist[static_cast<std::size_t>(vb)]);
      const auto pa = chain(corner, va);
      const auto pb = chain(corner, vb);
      const auto reach = static_cast<std::size_t>(
          std::max(0.0, std::min({(da + db - dab) / 2.0, da, db})));
      for (std::size_t t = 0; t <= reach; ++t) {
        const std::int32_t u = pa[std::min(t, pa.size() - 1)];
        const std::int32_t w = pb[std::min(t, pb.size() - 1)];
        if (u == w) continue;
        try {
          worst = std::max(worst, graph_distance(m, u, w));
        } catch (const TruncationError&) {
        }
      }
    }
  }
  return worst;
}

namespace {

bool graph_is_member(const ModelSpace& m, const HoroballRef& u, std::int32_t id) {
  const auto& v = m.cg.verts[static_cast<std::size_t>(id)];
  if (v.depth == 0 || v.cls != u.orbit_class) return false;
  Word rep = v.w;
  const int pgen = m.cg.parabolic_gen[static_cast<std::size_t>(v.cls)];
  while (!rep.empty() && rep.back().gen == pgen) rep.pop_back();
  return rep == u.coset_rep;
}

// BFS from x to the nearest member vertex of u; deterministic tie-break on
// the canonical vertex order. Returns (vertex, distance).
std::pair<std::int32_t, double> graph_nearest_member(const ModelSpace& m, const HoroballRef& u,
                                                     std::int32_t from) {
  if (graph_is_member(m, u, from)) return {from, 0.0};
  std::vector<std::int32_t> dist(m.cg.verts.size(), -1);
  std::deque<std::int32_t> queue;
  dist[static_cast<std::size_t>(from)] = 0;
  queue.push_back(from);
  std::int32_t best = -1;
  std::int32_t best_d = -1;
  while (!queue.empty()) {
    const std::int32_t cur = queue.front();
    queue.pop_front();
    const std::int32_t dcur = dist[static_cast<std::size_t>(cur)];
    if (best_d >= 0 && dcur > best_d) break;
    if (graph_is_member(m, u, cur)) {
      if (best < 0 || order_key_of(m, cur) < order_key_of(m, best)) {
        best = cur;
        best_d = dcur;
      }
      continue;
    }
    for (std::int32_t nb : cusped_neighbors(m, cur)) {
      if (dist[static_cast<std::size_t>(nb)] < 0) {
        dist[static_cast<std::size_t>(nb)] = dcur + 1;
        queue.push_back(nb);
      }
    }
  }
  if (best < 0)
    throw TruncationError("horoball has no reachable member inside the truncation");
  return {best, static_cast<double>(best_d)};
}

}  // namespace

Point project(const ModelSpace& m, const Point& x, const HoroballRef& target) {
  require_same_backend(m, x, "project");
  if (m.backend == Backend::half_plane) {
    if (horoball_signed_depth(x.z, target.p, target.q, m.hp.t) >= 0.0) return x;
    return {m.backend, horoball_foot(x.z, target.p, target.q, m.hp.t), -1};
  }
  return {m.backend, {}, graph_nearest_member(m, target, x.vertex).first};
}

Point project(const ModelSpace& m, const Point& x, std::span<const Point> target) {
  require_same_backend(m, x, "project");
  if (target.empty()) throw TruncationError("project: target set empty within truncation");
  const Point* best = nullptr;
  double best_d = kInf;
  for (const Point& p : target) {
    const double d = distance(m, x, p);
    bool better = d < best_d - 1e-12;
    if (!better && d < best_d + 1e-12 && best != nullptr) {
      if (m.backend == Backend::half_plane)
        better = std::make_pair(p.z.real(), p.z.imag()) <
                 std::make_pair(best->z.real(), best->z.imag());
      else
        better = p.vertex < best->vertex;
    }
    if (best == nullptr || better) {
      best = &p;
      best_d = std::min(best_d, d);
    }
  }
  return *best;
}

std::pair<double, bool> dist_to_neighborhood(const ModelSpace& m, const Point& x,
                                             const HoroballRef& y, double eps) {
  require_same_backend(m, x, "dist_to_neighborhood");
  if (eps < 0.0) throw UsageError("dist_to_neighborhood: eps must be >= 0");
  double d = 0.0;
  if (m.backend == Backend::half_plane) {
    d = horoball_dist(x.z, y.p, y.q, m.hp.t);
  } else {
    d = graph_is_member(m, y, x.vertex) ? 0.0 : graph_nearest_member(m, y, x.vertex).second;
  }
  return {d, d <= eps};
}

}  // namespace growth
