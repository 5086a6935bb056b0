#include "cuspgrowth/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <unordered_map>

namespace growth {

BoundaryPoint boundary_point(double xi) {
  BoundaryPoint b;
  b.backend = Backend::half_plane;
  b.xi = xi;
  return b;
}

BoundaryPoint boundary_point_infinity() {
  BoundaryPoint b;
  b.backend = Backend::half_plane;
  b.at_infinity = true;
  return b;
}

BoundaryPoint boundary_point_graph(const ModelSpace& m, std::int32_t vertex, double horizon) {
  if (m.backend != Backend::cusped_cayley)
    throw UsageError("boundary_point_graph: half-plane model takes tangency boundary points");
  if (vertex < 0 || vertex >= static_cast<std::int32_t>(m.cg.verts.size()))
    throw UsageError("boundary_point_graph: vertex not in the built graph");
  if (horizon < 0.0) horizon = m.truncation() - 2.0;
  BoundaryPoint b;
  b.backend = Backend::cusped_cayley;
  b.proxy_vertex = vertex;
  b.proxy_dist = m.cg.dist_o[static_cast<std::size_t>(vertex)];
  if (b.proxy_dist < horizon)
    throw HorizonError("boundary proxy closer than the horizon (" + std::to_string(horizon) + ")");
  return b;
}

// ---- half-plane transition scanning ------------------------------------

namespace {

// Does the window of the segment within 2R of `go` contain an (eps, R)-
// transition point? One shared sample array serves every deep-check.
// Samples cover the qualifying range (arc positions within 2R + r of the
// foot) plus an R margin so no deep-check window is truncated.
bool hp_partial_window_check(const ModelSpace& m, const HpSegment& seg, double seg_len, Cplx go,
                             double pos_foot, double r, double eps, double R, double h) {
  if (m.horoball_count() == 0) return true;
  const double slack = 0.5 * h;
  const double span = 2.0 * R + r + R + h;
  const double t_lo = std::max(0.0, pos_foot - span);
  const double t_hi = std::min(seg_len, pos_foot + span);
  if (t_hi < t_lo) return false;
  static thread_local std::vector<Cplx> pts;
  pts.clear();
  const auto count = static_cast<std::size_t>((t_hi - t_lo) / h) + 1;
  for (std::size_t j = 0; j < count; ++j) pts.push_back(seg.point_at_length(t_lo + h * static_cast<double>(j)));
  pts.push_back(seg.point_at_length(t_hi));
  const auto win = static_cast<std::ptrdiff_t>(R / h);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (hp_dist(pts[i], go) > 2.0 * R) continue;
    const auto candidates = horoballs_near(pts[i], eps + slack, m.hp.t);
    if (candidates.empty()) return true;
    bool transitional = true;
    for (const auto& cand : candidates) {
      bool deep = true;
      const std::size_t jlo = i >= static_cast<std::size_t>(win) ? i - win : 0;
      const std::size_t jhi = std::min(pts.size() - 1, i + static_cast<std::size_t>(win));
      for (std::size_t j = jlo; j <= jhi; ++j) {
        if (horoball_dist(pts[j], cand.p, cand.q, m.hp.t) > eps + slack) {
          deep = false;
          break;
        }
      }
      if (deep) {
        transitional = false;
        break;
      }
    }
    if (transitional) return true;
  }
  return false;
}

// ---- graph transition scanning ------------------------------------------

using HoroKey = std::pair<std::int32_t, std::string>;  // (class, coset key)

// Horoball identities within graph distance eps of a vertex.
std::vector<HoroKey> graph_keys_within(const ModelSpace& m, std::int32_t from, double eps) {
  std::vector<HoroKey> out;
  const auto radius = static_cast<std::int32_t>(std::floor(eps));
  std::unordered_map<std::int32_t, std::int32_t> dist;
  std::deque<std::int32_t> queue;
  dist[from] = 0;
  queue.push_back(from);
  const auto note = [&](std::int32_t id) {
    const auto& v = m.cg.verts[static_cast<std::size_t>(id)];
    if (v.depth == 0) return;
    Word rep = v.w;
    const int pgen = m.cg.parabolic_gen[static_cast<std::size_t>(v.cls)];
    while (!rep.empty() && rep.back().gen == pgen) rep.pop_back();
    const HoroKey key{v.cls, word_key(rep)};
    if (std::find(out.begin(), out.end(), key) == out.end()) out.push_back(key);
  };
  note(from);
  while (!queue.empty()) {
    const std::int32_t cur = queue.front();
    queue.pop_front();
    if (dist[cur] >= radius) continue;
    for (std::int32_t nb : cusped_neighbors(m, cur)) {
      if (dist.count(nb)) continue;
      dist[nb] = dist[cur] + 1;
      queue.push_back(nb);
      note(nb);
    }
  }
  return out;
}

struct GraphKeyCache {
  const ModelSpace& m;
  double eps;
  std::unordered_map<std::int32_t, std::vector<HoroKey>> cache;
  const std::vector<HoroKey>& at(std::int32_t v) {
    const auto it = cache.find(v);
    if (it != cache.end()) return it->second;
    return cache.emplace(v, graph_keys_within(m, v, eps)).first->second;
  }
};

// Transition test at path[pos] with window R along a vertex path.
bool graph_path_transitional(GraphKeyCache& keys, const std::vector<std::int32_t>& path,
                             std::size_t pos, double R) {
  const auto& cands = keys.at(path[pos]);
  if (cands.empty()) return true;
  const auto radius = static_cast<std::size_t>(std::floor(R));
  const std::size_t lo = pos >= radius ? pos - radius : 0;
  const std::size_t hi = std::min(path.size() - 1, pos + radius);
  for (const HoroKey& cand : cands) {
    bool deep = true;
    for (std::size_t j = lo; deep && j <= hi; ++j) {
      const auto& kj = keys.at(path[j]);
      if (std::find(kj.begin(), kj.end(), cand) == kj.end()) deep = false;
    }
    if (deep) return false;
  }
  return true;
}

std::vector<std::int32_t> parent_chain(const ModelSpace& m, std::int32_t v) {
  std::vector<std::int32_t> path;
  for (std::int32_t cur = v; cur >= 0; cur = m.cg.parent_o[static_cast<std::size_t>(cur)])
    path.push_back(cur);
  std::reverse(path.begin(), path.end());  // basepoint first
  return path;
}

}  // namespace

TransitionScan transition_points(const ModelSpace& m, const PathSample& path,
                                 const TransitionParams& params) {
  if (params.eps <= 0.0 || params.big_r <= 0.0)
    throw UsageError("transition_points: eps and R must be positive");
  if (m.backend == Backend::half_plane && path.step > params.big_r / 10.0 + 1e-12)
    throw UsageError("transition_points: path must be sampled at step <= R/10");
  TransitionScan scan;
  scan.is_transition.assign(path.points.size(), 1);
  if (m.horoball_count() == 0) {
    scan.cocompact_all = true;  // no horoball system: every point is transitional
    return scan;
  }
  if (m.backend == Backend::half_plane) {
    scan.slack = 0.5 * path.step;
    for (std::size_t i = 0; i < path.points.size(); ++i) {
      const Cplx v = path.points[i].z;
      const auto candidates = horoballs_near(v, params.eps + scan.slack, m.hp.t);
      for (const auto& cand : candidates) {
        bool deep = true;
        for (std::size_t j = 0; deep && j < path.points.size(); ++j) {
          if (std::abs(path.cum[j] - path.cum[i]) > params.big_r) continue;
          if (horoball_dist(path.points[j].z, cand.p, cand.q, m.hp.t) >
              params.eps + scan.slack)
            deep = false;
        }
        if (deep) {
          scan.is_transition[i] = 0;
          break;
        }
      }
    }
    return scan;
  }
  GraphKeyCache keys{m, params.eps, {}};
  std::vector<std::int32_t> verts;
  verts.reserve(path.points.size());
  for (const Point& p : path.points) verts.push_back(p.vertex);
  for (std::size_t i = 0; i < verts.size(); ++i)
    scan.is_transition[i] = graph_path_transitional(keys, verts, i, params.big_r) ? 1 : 0;
  return scan;
}

ShadowResult shadow_contains(const ModelSpace& m, const BoundaryPoint& xi, const GroupElement& g,
                             double r) {
  ShadowResult res;
  if (xi.backend != m.backend) throw UsageError("shadow_contains: boundary point backend mismatch");
  if (m.backend == Backend::half_plane) {
    const Cplx o = m.hp.basepoint;
    const HpSegment ray = HpSegment::ray(o, xi.xi, xi.at_infinity);
    res.min_dist = ray.dist_to(mobius(g.m, o));
    res.slack = 0.0;  // analytic rays, no sampling
    res.contains = res.min_dist <= r + res.slack;
    return res;
  }
  if (xi.proxy_vertex < 0) throw HorizonError("shadow_contains: boundary proxy missing");
  const auto path = graph_geodesic_vertices(m, m.cg.base, xi.proxy_vertex);
  const std::int32_t gv = apply(m, g, m.basepoint()).vertex;
  const GraphBfs bfs = bfs_from(m, gv);
  double best = kInf;
  for (std::int32_t u : path) {
    const std::int32_t d = bfs.dist[static_cast<std::size_t>(u)];
    if (d >= 0) best = std::min(best, static_cast<double>(d));
  }
  res.min_dist = best;
  // vertex minima are exact on unit-edge graphs; the slack only absorbs the
  // tie-broken choice among geodesics (any other stays delta_hat-close)
  res.slack = m.constants.delta_hat;
  res.contains = best <= r + res.slack;
  return res;
}

ShadowResult partial_shadow_contains(const ModelSpace& m, const BoundaryPoint& xi,
                                     const GroupElement& g, const TransitionParams& params) {
  ShadowResult res = shadow_contains(m, xi, g, params.shadow_r);
  if (!res.contains) return res;
  if (m.horoball_count() == 0) return res;  // cocompact: partial shadow = shadow
  const double R2 = 2.0 * params.big_r;
  if (m.backend == Backend::half_plane) {
    const Cplx o = m.hp.basepoint;
    const Cplx go = mobius(g.m, o);
    const HpSegment ray = HpSegment::ray(o, xi.xi, xi.at_infinity);
    const double pos_foot = std::abs(ray.clamped_foot_u(go) - ray.u_start);
    const double h = params.big_r / 10.0;
    res.contains = hp_partial_window_check(m, ray, kInf, go, pos_foot, params.shadow_r,
                                           params.eps, params.big_r, h);
    res.slack = std::max(res.slack, 0.5 * h);
    return res;
  }
  const auto path = graph_geodesic_vertices(m, m.cg.base, xi.proxy_vertex);
  const std::int32_t gv = apply(m, g, m.basepoint()).vertex;
  const GraphBfs bfs = bfs_from(m, gv);
  GraphKeyCache keys{m, params.eps, {}};
  bool found = false;
  for (std::size_t i = 0; !found && i < path.size(); ++i) {
    const std::int32_t d = bfs.dist[static_cast<std::size_t>(path[i])];
    if (d < 0 || d > R2) continue;
    found = graph_path_transitional(keys, path, i, params.big_r);
  }
  res.contains = found;
  return res;
}

// ---- cones ---------------------------------------------------------------

ConeScan classify_cones(const ModelSpace& m, const OrbitIndex& orbit, const GroupElement& g,
                        const TransitionParams& params, bool with_partial) {
  ConeScan scan;
  scan.center = g;
  const std::size_t n = orbit.size();
  scan.in_cone.assign(n, 0);
  scan.in_partial.assign(n, 0);
  const double r = params.shadow_r;
  const double R2 = 2.0 * params.big_r;

  if (m.backend == Backend::half_plane) {
    const Cplx o = orbit.origin.z;
    const Cplx go = mobius(g.m, o);
    const double dg = hp_dist(o, go);
    scan.center_dist = dg;
    const double h = params.big_r / 10.0;
    scan.slack = 0.5 * h;
    const bool cusped = m.horoball_count() > 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& pk = orbit.mats[i];
      const Cplx ho = mobius(Mat2{pk.a, pk.b, pk.c, pk.d}, o);
      const double dh = orbit.dist(i);
      bool in_cone;
      double pos_foot = 0.0;
      double seg_len = 0.0;
      HpSegment seg;
      if (dh < 1e-12) {
        in_cone = dg <= r;
      } else {
        seg = HpSegment::between(o, ho);
        seg_len = seg.length();
        in_cone = seg.dist_to(go) <= r;
        if (in_cone) pos_foot = std::abs(seg.clamped_foot_u(go) - seg.u_start);
      }
      if (!in_cone) continue;
      scan.in_cone[i] = 1;
      if (!with_partial) continue;
      if (dh <= dg + R2 || !cusped) {
        scan.in_partial[i] = 1;
        continue;
      }
      if (hp_partial_window_check(m, seg, seg_len, go, pos_foot, r, params.eps, params.big_r, h))
        scan.in_partial[i] = 1;
    }
    return scan;
  }

  const std::int32_t gv = apply(m, g, m.basepoint()).vertex;
  scan.center_dist = m.cg.dist_o[static_cast<std::size_t>(gv)];
  const GraphBfs bfs = bfs_from(m, gv);
  scan.slack = m.constants.delta_hat;
  GraphKeyCache keys{m, params.eps, {}};
  const bool cusped = m.horoball_count() > 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto path = parent_chain(m, orbit.verts[i]);
    double best = kInf;
    for (std::int32_t u : path) {
      const std::int32_t d = bfs.dist[static_cast<std::size_t>(u)];
      if (d >= 0) best = std::min(best, static_cast<double>(d));
    }
    if (best > r + scan.slack) continue;
    scan.in_cone[i] = 1;
    if (!with_partial) continue;
    if (orbit.dist(i) <= scan.center_dist + R2 || !cusped) {
      scan.in_partial[i] = 1;
      continue;
    }
    for (std::size_t j = 0; j < path.size(); ++j) {
      const std::int32_t d = bfs.dist[static_cast<std::size_t>(path[j])];
      if (d < 0 || d > R2) continue;
      if (graph_path_transitional(keys, path, j, params.big_r)) {
        scan.in_partial[i] = 1;
        break;
      }
    }
  }
  return scan;
}

namespace {

std::vector<GroupElement> collect_members(const ModelSpace& m, const OrbitIndex& orbit,
                                          const std::vector<char>& flags, double center_dist,
                                          double n, double delta) {
  std::vector<GroupElement> out;
  const std::size_t lo = orbit.lower(center_dist + n - delta);
  const std::size_t hi = orbit.lower(center_dist + n + delta);
  for (std::size_t i = lo; i < hi; ++i) {
    if (!flags[i]) continue;
    if (m.backend == Backend::half_plane) {
      out.push_back(orbit.element(i));
    } else {
      const Word& wv = m.cg.verts[static_cast<std::size_t>(orbit.verts[i])].w;
      const Word& wo = m.cg.verts[static_cast<std::size_t>(orbit.origin.vertex)].w;
      GroupElement e;
      e.backend = m.backend;
      e.w = word_mul(wv, word_inv(wo, m.cg.orders), m.cg.orders);
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace

std::vector<GroupElement> cone_members(const ModelSpace& m, const OrbitIndex& orbit,
                                       const GroupElement& g, double r, double n, double delta) {
  TransitionParams params;
  params.shadow_r = r;
  const ConeScan scan = classify_cones(m, orbit, g, params, false);
  return collect_members(m, orbit, scan.in_cone, scan.center_dist, n, delta);
}

std::vector<GroupElement> partial_cone_members(const ModelSpace& m, const OrbitIndex& orbit,
                                               const GroupElement& g,
                                               const TransitionParams& params, double n,
                                               double delta) {
  const ConeScan scan = classify_cones(m, orbit, g, params, true);
  return collect_members(m, orbit, scan.in_partial, scan.center_dist, n, delta);
}

GrowthTable cone_growth_table(const ModelSpace& m, const OrbitIndex& orbit, const ConeScan& scan,
                              double delta, int n_lo, int n_hi, double delta_hat, bool partial) {
  GrowthTable t;
  t.kind = partial ? GrowthTable::Kind::partial_cone : GrowthTable::Kind::cone;
  t.delta_width = delta;
  t.delta_hat = delta_hat;
  t.center = element_to_string(m, scan.center);
  t.center_dist = scan.center_dist;
  const std::vector<char>& flags = partial ? scan.in_partial : scan.in_cone;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n_hi - n_lo + 1), 0);
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    if (!flags[i]) continue;
    const double rel = orbit.dist(i) - scan.center_dist;
    for (int nn = std::max(n_lo, static_cast<int>(std::ceil(rel - delta)));
         nn <= n_hi && nn - delta <= rel; ++nn) {
      if (rel - nn >= -delta && rel - nn < delta) counts[static_cast<std::size_t>(nn - n_lo)]++;
    }
  }
  for (int nn = n_lo; nn <= n_hi; ++nn) {
    const std::int64_t c = counts[static_cast<std::size_t>(nn - n_lo)];
    t.rows.push_back({static_cast<double>(nn), c, c * std::exp(-delta_hat * nn)});
  }
  return t;
}

// ---- Patterson-Sullivan approximant ----------------------------------------

MeasureApproximant make_ps_approximant(const OrbitIndex& orbit, double s, double cutoff_T,
                                       double delta_hat) {
  if (s <= delta_hat)
    throw UsageError("make_ps_approximant: s must exceed delta_hat (normalization unstable)");
  if (cutoff_T < 0.0) throw UsageError("make_ps_approximant: cutoff T must be >= 0");
  MeasureApproximant mu;
  mu.orbit = &orbit;
  mu.s = s;
  mu.cutoff_T = cutoff_T;
  double z = 0.0;
  for (std::size_t i = 0; i < orbit.size(); ++i) z += std::exp(-s * orbit.dist(i));
  if (z <= 0.0) throw UsageError("make_ps_approximant: empty orbit enumeration");
  mu.normalization = z;
  mu.first = orbit.lower(cutoff_T);
  return mu;
}

double ps_measure(const MeasureApproximant& mu, const std::function<bool(std::size_t)>& region) {
  double acc = 0.0;
  for (std::size_t i = mu.first; i < mu.orbit->size(); ++i)
    if (region(i)) acc += mu.weight(i);
  return acc;
}

// ---- audits ----------------------------------------------------------------

ShadowAudit shadow_lemma_audit(const ModelSpace& m, const OrbitIndex& orbit,
                               std::span<const std::size_t> sample_indices,
                               const TransitionParams& params, double s, double cutoff_T,
                               double delta_hat) {
  ShadowAudit audit;
  audit.r = params.shadow_r;
  audit.s = s;
  audit.cutoff_T = cutoff_T;
  const MeasureApproximant mu = make_ps_approximant(orbit, s, cutoff_T, delta_hat);
  double pmin = kInf, pmax = 0.0, qmin = kInf, qmax = 0.0;
  for (const std::size_t gi : sample_indices) {
    GroupElement g;
    if (m.backend == Backend::half_plane) {
      g = orbit.element(gi);
    } else {
      const Word& wv = m.cg.verts[static_cast<std::size_t>(orbit.verts[gi])].w;
      g.backend = m.backend;
      g.w = wv;
    }
    const ConeScan scan = classify_cones(m, orbit, g, params, true);
    double mu_plain = 0.0, mu_partial = 0.0;
    for (std::size_t i = mu.first; i < orbit.size(); ++i) {
      if (!scan.in_cone[i]) continue;
      const double w = mu.weight(i);
      mu_plain += w;
      if (scan.in_partial[i]) mu_partial += w;
    }
    ShadowAuditRow row;
    row.g_index = gi;
    row.dist = scan.center_dist;
    const double boost = std::exp(s * scan.center_dist);
    row.rho_plain = mu_plain * boost;
    row.rho_partial = mu_partial * boost;
    row.empty = mu_plain <= 0.0;
    if (row.rho_partial > row.rho_plain + 1e-12) audit.partial_le_plain = false;
    if (!row.empty) {
      pmin = std::min(pmin, row.rho_plain);
      pmax = std::max(pmax, row.rho_plain);
      if (mu_partial > 0.0) {
        qmin = std::min(qmin, row.rho_partial);
        qmax = std::max(qmax, row.rho_partial);
      }
    }
    audit.rows.push_back(row);
  }
  audit.plain_min = pmin;
  audit.plain_max = pmax;
  audit.plain_spread = pmin > 0.0 && pmin < kInf ? pmax / pmin : kInf;
  audit.partial_min = qmin;
  audit.partial_max = qmax;
  audit.partial_spread = qmin > 0.0 && qmin < kInf ? qmax / qmin : kInf;
  return audit;
}

double busemann(const ModelSpace& m, const BoundaryPoint& xi, const Point& x, const Point& y) {
  require_same_backend(m, x, "busemann");
  require_same_backend(m, y, "busemann");
  if (xi.backend != m.backend) throw UsageError("busemann: boundary point backend mismatch");
  if (m.backend == Backend::half_plane) return busemann_halfplane(xi.xi, xi.at_infinity, x.z, y.z);
  if (xi.proxy_vertex < 0) throw HorizonError("busemann: boundary proxy missing");
  const Point p{m.backend, {}, xi.proxy_vertex};
  return distance(m, y, p) - distance(m, x, p);
}

double visual_metric_estimate(const ModelSpace& m, const BoundaryPoint& xi,
                              const BoundaryPoint& zeta, double a) {
  if (xi.backend != m.backend || zeta.backend != m.backend)
    throw UsageError("visual_metric_estimate: boundary point backend mismatch");
  if (a <= 0.0) throw UsageError("visual_metric_estimate: parameter a must be positive");
  double dist_to_line = 0.0;
  if (m.backend == Backend::half_plane) {
    if (xi.at_infinity == zeta.at_infinity && std::abs(xi.xi - zeta.xi) < 1e-12) return 0.0;
    const Cplx o = m.hp.basepoint;
    HpSegment line;
    if (xi.at_infinity || zeta.at_infinity) {
      line.vertical = true;
      line.x0 = xi.at_infinity ? zeta.xi : xi.xi;
      line.z_start = {line.x0, 1.0};
      line.u_start = -kInf;
      line.u_end = kInf;
    } else {
      line.vertical = false;
      line.c = (xi.xi + zeta.xi) / 2.0;
      line.rho = std::abs(xi.xi - zeta.xi) / 2.0;
      line.z_start = {line.c, line.rho};
      line.u_start = -kInf;
      line.u_end = kInf;
    }
    dist_to_line = line.line_dist(o);
  } else {
    if (xi.proxy_vertex == zeta.proxy_vertex) return 0.0;
    const auto path = graph_geodesic_vertices(m, xi.proxy_vertex, zeta.proxy_vertex);
    double best = kInf;
    for (std::int32_t u : path)
      best = std::min(best, static_cast<double>(m.cg.dist_o[static_cast<std::size_t>(u)]));
    dist_to_line = best;
  }
  return std::exp(-a * dist_to_line);
}

QconfAudit quasiconformality_audit(const ModelSpace& m, const OrbitIndex& orbit,
                                   std::span<const std::pair<GroupElement, GroupElement>> samples,
                                   double s, double cutoff_T, double r, double delta_hat) {
  if (m.backend != Backend::half_plane)
    throw UsageError("quasiconformality_audit: half-plane backend only");
  QconfAudit audit;
  audit.s = s;
  audit.cutoff_T = cutoff_T;
  audit.r = r;
  const MeasureApproximant mu = make_ps_approximant(orbit, s, cutoff_T, delta_hat);
  const Cplx o = orbit.origin.z;
  TransitionParams params;
  params.shadow_r = r;

  const auto cone_weight = [&](const Cplx& center, const GroupElement* shift) {
    // mu of { h : (shift^-1 h) o in cone(center, r) }
    double acc = 0.0;
    for (std::size_t i = mu.first; i < orbit.size(); ++i) {
      Cplx ho;
      if (shift == nullptr) {
        const auto& pk = orbit.mats[i];
        ho = mobius(Mat2{pk.a, pk.b, pk.c, pk.d}, o);
      } else {
        const auto& pk = orbit.mats[i];
        ho = mobius(mat_mul(shift->m, Mat2{pk.a, pk.b, pk.c, pk.d}), o);
      }
      bool inside;
      if (hp_dist(o, ho) < 1e-12) {
        inside = hp_dist(o, center) <= r;
      } else {
        const HpSegment seg = HpSegment::between(o, ho);
        inside = seg.dist_to(center) <= r;
      }
      if (inside) acc += mu.weight(i);
    }
    return acc;
  };

  double rmin = kInf, rmax = 0.0;
  for (const auto& [g, g0] : samples) {
    QconfRow row;
    const Cplx region_center = mobius(g0.m, o);
    const GroupElement gi = inv(m, g);
    const double muA = cone_weight(region_center, nullptr);
    const double muGA = cone_weight(region_center, &gi);  // h in gA <=> g^-1 h in A
    if (muA <= 0.0 || muGA <= 0.0) {
      row.zero_weight = true;
      audit.rows.push_back(row);
      continue;
    }
    row.measured = muGA / muA;
    const auto [xi, at_inf] = ray_boundary_point(o, region_center);
    BoundaryPoint bxi = at_inf ? boundary_point_infinity() : boundary_point(xi);
    const Point po{Backend::half_plane, o, -1};
    const Point pgo{Backend::half_plane, mobius(gi.m, o), -1};
    row.predicted = std::exp(s * busemann(m, bxi, pgo, po));
    row.ratio = row.measured / row.predicted;

    // inverse consistency on the translated region
    const Cplx region2 = mobius(mat_mul(g.m, g0.m), o);
    const double muA2 = cone_weight(region2, nullptr);
    const double muGA2 = cone_weight(region2, &g);
    if (muA2 > 0.0 && muGA2 > 0.0) {
      const auto [xi2, at_inf2] = ray_boundary_point(o, region2);
      BoundaryPoint bxi2 = at_inf2 ? boundary_point_infinity() : boundary_point(xi2);
      const Point pgo2{Backend::half_plane, mobius(g.m, o), -1};
      const double predicted2 = std::exp(s * busemann(m, bxi2, pgo2, po));
      row.inverse_product = row.ratio * (muGA2 / muA2) / predicted2;
    }
    rmin = std::min(rmin, row.ratio);
    rmax = std::max(rmax, row.ratio);
    audit.rows.push_back(row);
  }
  audit.ratio_min = rmin;
  audit.ratio_max = rmax;
  return audit;
}

StabilityAudit transition_stability_audit(const ModelSpace& m,
                                          std::span<const std::pair<Point, Point>> endpoint_pairs,
                                          const TransitionParams& params, double min_tail_L) {
  StabilityAudit audit;
  const Point o = m.basepoint();
  const double step = m.backend == Backend::half_plane
                          ? std::min(kDefaultStep, params.big_r / 10.0)
                          : 1.0;
  for (const auto& [a_end, c_end] : endpoint_pairs) {
    PathSample alpha, gamma;
    try {
      alpha = geodesic(m, o, a_end, step);
      gamma = geodesic(m, o, c_end, step);
    } catch (const TruncationError&) {
      audit.pairs_skipped++;
      continue;
    }
    const TransitionScan sa = transition_points(m, alpha, params);
    const TransitionScan sc = transition_points(m, gamma, params);
    std::vector<std::size_t> vs;
    for (std::size_t i = 0; i < alpha.points.size(); ++i) {
      if (!sa.is_transition[i]) continue;
      if (alpha.length() - alpha.cum[i] <= min_tail_L) continue;  // too close to alpha_+
      vs.push_back(i);
    }
    std::vector<std::size_t> ws;
    for (std::size_t j = 0; j < gamma.points.size(); ++j)
      if (sc.is_transition[j]) ws.push_back(j);
    if (vs.empty() || ws.empty()) {
      audit.pairs_skipped++;
      continue;
    }
    double worst = 0.0;
    for (const std::size_t i : vs) {
      double best = kInf;
      for (const std::size_t j : ws)
        best = std::min(best, distance(m, alpha.points[i], gamma.points[j]));
      worst = std::max(worst, best);
    }
    audit.per_pair.push_back(worst);
    audit.d_max = std::max(audit.d_max, worst);
    audit.pairs_used++;
  }
  return audit;
}

ConicalCount conical_cover_check(const ModelSpace& m, const OrbitIndex& orbit,
                                 const BoundaryPoint& xi, double r, double horizon) {
  ConicalCount out;
  if (m.backend == Backend::half_plane) {
    if (xi.at_infinity) {
      out.parabolic_flagged = m.horoball_count() > 0;
    } else if (m.horoball_count() > 0) {
      for (const auto& h : m.hp.htable) {
        if (h.q == 0) continue;
        if (std::abs(xi.xi - static_cast<double>(h.p) / static_cast<double>(h.q)) < 1e-9) {
          out.parabolic_flagged = true;
          break;
        }
      }
    }
    const HpSegment ray = HpSegment::ray(orbit.origin.z, xi.xi, xi.at_infinity);
    const std::size_t hi = orbit.lower(std::nextafter(horizon, kInf));
    for (std::size_t i = 0; i < hi; ++i) {
      const auto& pk = orbit.mats[i];
      const Cplx ho = mobius(Mat2{pk.a, pk.b, pk.c, pk.d}, orbit.origin.z);
      if (ray.dist_to(ho) <= r) out.count++;
    }
    return out;
  }
  const auto path = graph_geodesic_vertices(m, m.cg.base, xi.proxy_vertex);
  const double slack = m.constants.delta_hat;
  const std::size_t hi = orbit.lower(std::nextafter(horizon, kInf));
  for (std::size_t i = 0; i < hi; ++i) {
    const GraphBfs bfs = bfs_from(m, orbit.verts[i]);
    double best = kInf;
    for (std::int32_t u : path) {
      const std::int32_t d = bfs.dist[static_cast<std::size_t>(u)];
      if (d >= 0) best = std::min(best, static_cast<double>(d));
    }
    if (best <= r + slack) out.count++;
  }
  return out;
}

}  // namespace growth
