#include "cuspgrowth/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

namespace growth {

GroupElement OrbitIndex::element(std::size_t i) const {
  GroupElement g;
  g.backend = backend;
  if (backend == Backend::half_plane) {
    const Packed& p = mats[i];
    g.m = Mat2{p.a, p.b, p.c, p.d};
  }
  return g;  // graph elements are resolved by the caller via vertex words
}

std::size_t OrbitIndex::lower(double x) const {
  return static_cast<std::size_t>(
      std::lower_bound(dists.begin(), dists.end(), x) - dists.begin());
}

std::size_t ParabolicOrbit::lower(double x) const {
  return static_cast<std::size_t>(
      std::lower_bound(dists.begin(), dists.end(), x) - dists.begin());
}

namespace {

struct Acc {
  std::vector<OrbitIndex::Packed> mats;
  std::vector<double> dists;
};

void push_mat(Acc& acc, const Mat2& m, double dist) {
  acc.mats.push_back({static_cast<std::int32_t>(m.a), static_cast<std::int32_t>(m.b),
                      static_cast<std::int32_t>(m.c), static_cast<std::int32_t>(m.d)});
  acc.dists.push_back(dist);
}

// All canonical unimodular matrices with a^2+b^2+c^2+d^2 <= s2, i.e.
// d(i, g i) <= n for s2 = 2 cosh n. Columns (a, c) are scanned and (b, d)
// solved from the determinant; every canonical element appears exactly once.
void frobenius_scan(double s2, Acc& acc, double (*dist_of)(const Mat2&, const void*),
                    const void* ctx) {
  const auto amax = static_cast<std::int64_t>(std::floor(std::sqrt(s2)));
  for (std::int64_t a = 0; a <= amax; ++a) {
    if (a == 0) {
      // det = -bc = 1 with canonical sign: b = 1, c = -1, d free
      const double rem = s2 - 2.0;
      if (rem < 0) continue;
      const auto dmax = static_cast<std::int64_t>(std::floor(std::sqrt(rem)));
      for (std::int64_t d = -dmax; d <= dmax; ++d) {
        const Mat2 m{0, 1, -1, d};
        push_mat(acc, m, dist_of(m, ctx));
      }
      continue;
    }
    const auto cmax = static_cast<std::int64_t>(std::floor(std::sqrt(s2 - static_cast<double>(a) * a)));
    for (std::int64_t c = -cmax; c <= cmax; ++c) {
      std::int64_t x = 0, y = 0;
      if (ext_gcd(a, c, x, y) != 1) continue;
      // a d - b c = 1; base solution d0 = x, b0 = -y, family (b0 + t a, d0 + t c)
      const double rem = s2 - static_cast<double>(a) * a - static_cast<double>(c) * c;
      if (rem < 0) continue;
      const std::int64_t b0 = -y, d0 = x;
      const double denom = static_cast<double>(a) * a + static_cast<double>(c) * c;
      const auto t0 = static_cast<std::int64_t>(
          std::llround(-(static_cast<double>(b0) * a + static_cast<double>(d0) * c) / denom));
      for (std::int64_t t = t0;; ++t) {
        const double b = static_cast<double>(b0 + t * a), d = static_cast<double>(d0 + t * c);
        if (b * b + d * d > rem) break;
        const Mat2 m{a, b0 + t * a, c, d0 + t * c};
        push_mat(acc, m, dist_of(m, ctx));
      }
      for (std::int64_t t = t0 - 1;; --t) {
        const double b = static_cast<double>(b0 + t * a), d = static_cast<double>(d0 + t * c);
        if (b * b + d * d > rem) break;
        const Mat2 m{a, b0 + t * a, c, d0 + t * c};
        push_mat(acc, m, dist_of(m, ctx));
      }
    }
  }
}

void sort_acc(Acc& acc) {
  std::vector<std::size_t> order(acc.mats.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    if (acc.dists[l] != acc.dists[r]) return acc.dists[l] < acc.dists[r];
    const auto& ml = acc.mats[l];
    const auto& mr = acc.mats[r];
    return std::array<std::int32_t, 4>{ml.a, ml.b, ml.c, ml.d} <
           std::array<std::int32_t, 4>{mr.a, mr.b, mr.c, mr.d};
  });
  Acc out;
  out.mats.reserve(acc.mats.size());
  out.dists.reserve(acc.dists.size());
  for (std::size_t i : order) {
    out.mats.push_back(acc.mats[i]);
    out.dists.push_back(acc.dists[i]);
  }
  acc = std::move(out);
}

OrbitIndex enumerate_half_plane_frobenius(double radius, Cplx origin) {
  OrbitIndex idx;
  idx.backend = Backend::half_plane;
  idx.origin = {Backend::half_plane, origin, -1};
  idx.radius = radius;
  Acc acc;
  const bool at_i = std::abs(origin - Cplx(0.0, 1.0)) < 1e-12;
  if (at_i) {
    const double s2 = 2.0 * std::cosh(radius);
    frobenius_scan(
        s2, acc,
        [](const Mat2& g, const void*) { return acosh_stable(static_cast<double>(g.norm2()) / 2.0); },
        nullptr);
  } else {
    const double pad = 2.0 * hp_dist(origin, Cplx(0.0, 1.0));
    const double s2 = 2.0 * std::cosh(radius + pad);
    struct Ctx {
      Cplx o;
    } ctx{origin};
    frobenius_scan(
        s2, acc,
        [](const Mat2& g, const void* c) {
          const Cplx o = static_cast<const Ctx*>(c)->o;
          return hp_dist(o, mobius(g, o));
        },
        &ctx);
    // filter to the requested radius
    Acc kept;
    for (std::size_t i = 0; i < acc.mats.size(); ++i)
      if (acc.dists[i] <= radius) {
        kept.mats.push_back(acc.mats[i]);
        kept.dists.push_back(acc.dists[i]);
      }
    acc = std::move(kept);
  }
  sort_acc(acc);
  idx.mats = std::move(acc.mats);
  idx.dists = std::move(acc.dists);
  return idx;
}

OrbitIndex enumerate_half_plane_bfs(const ModelSpace& m, double radius, Cplx origin,
                                    double slack) {
  OrbitIndex idx;
  idx.backend = Backend::half_plane;
  idx.origin = {Backend::half_plane, origin, -1};
  idx.radius = radius;
  std::vector<Mat2> step;
  for (const Mat2& g : m.hp.gens) {
    step.push_back(g);
    const Mat2 gi = mat_inv(g);
    if (gi != g) step.push_back(gi);
  }
  const bool at_i = std::abs(origin - Cplx(0.0, 1.0)) < 1e-12;
  const auto dist_of = [&](const Mat2& g) {
    // same distance formula as the Frobenius strategy, so the two sorted
    // indexes are bit-identical when the sets agree
    if (at_i) return acosh_stable(static_cast<double>(g.norm2()) / 2.0);
    return hp_dist(origin, mobius(g, origin));
  };
  std::unordered_set<Mat2> seen{Mat2{}};
  std::deque<Mat2> queue{Mat2{}};
  while (!queue.empty()) {
    const Mat2 cur = queue.front();
    queue.pop_front();
    for (const Mat2& g : step) {
      const Mat2 nx = mat_mul(cur, g);
      if (seen.count(nx)) continue;
      if (dist_of(nx) > radius + slack) continue;
      seen.insert(nx);
      queue.push_back(nx);
    }
  }
  Acc acc;
  for (const Mat2& g : seen) {
    const double d = dist_of(g);
    if (d <= radius) push_mat(acc, g, d);
  }
  sort_acc(acc);
  idx.mats = std::move(acc.mats);
  idx.dists = std::move(acc.dists);
  return idx;
}

OrbitIndex enumerate_graph(const ModelSpace& m, double radius, std::int32_t origin) {
  OrbitIndex idx;
  idx.backend = Backend::cusped_cayley;
  idx.origin = {Backend::cusped_cayley, {}, origin};
  idx.radius = radius;
  const auto& cg = m.cg;
  std::vector<std::int32_t> dist_v;
  const std::vector<std::int32_t>* dist = &cg.dist_o;
  if (origin != cg.base) {
    if (cg.dist_o[static_cast<std::size_t>(origin)] + radius > m.truncation())
      throw TruncationError("enumerate_orbit: ball around this origin escapes the truncation");
    dist_v = bfs_from(m, origin).dist;
    dist = &dist_v;
  }
  struct Row {
    std::int32_t vertex;
    std::int32_t d;
  };
  std::vector<Row> rows;
  for (std::int32_t id = 0; id < static_cast<std::int32_t>(cg.verts.size()); ++id) {
    const auto& v = cg.verts[static_cast<std::size_t>(id)];
    if (v.depth != 0) continue;
    const std::int32_t d = (*dist)[static_cast<std::size_t>(id)];
    if (d < 0 || d > radius) continue;
    rows.push_back({id, d});
  }
  std::sort(rows.begin(), rows.end(), [&](const Row& l, const Row& r) {
    if (l.d != r.d) return l.d < r.d;
    return word_key(cg.verts[static_cast<std::size_t>(l.vertex)].w) <
           word_key(cg.verts[static_cast<std::size_t>(r.vertex)].w);
  });
  for (const Row& r : rows) {
    idx.verts.push_back(r.vertex);
    idx.dists.push_back(static_cast<double>(r.d));
  }
  return idx;
}

}  // namespace

OrbitIndex enumerate_orbit(const ModelSpace& m, double radius, EnumStrategy strategy,
                           const Point* origin, double bfs_slack) {
  if (radius > m.truncation() + 1e-9)
    throw TruncationError("enumerate_orbit: radius exceeds the truncation");
  if (m.backend == Backend::half_plane) {
    const Cplx o = origin ? origin->z : m.hp.basepoint;
    if (strategy == EnumStrategy::frobenius) return enumerate_half_plane_frobenius(radius, o);
    return enumerate_half_plane_bfs(m, radius, o, bfs_slack);
  }
  const std::int32_t o = origin ? origin->vertex : m.cg.base;
  return enumerate_graph(m, radius, o);
}

// Element of a graph orbit index: g with g . origin = that vertex.
namespace {
GroupElement graph_element_at(const ModelSpace& m, const OrbitIndex& orbit, std::size_t i) {
  const Word& wv = m.cg.verts[static_cast<std::size_t>(orbit.verts[i])].w;
  const Word& wo = m.cg.verts[static_cast<std::size_t>(orbit.origin.vertex)].w;
  GroupElement g;
  g.backend = Backend::cusped_cayley;
  g.w = word_mul(wv, word_inv(wo, m.cg.orders), m.cg.orders);
  return g;
}
}  // namespace

std::vector<GroupElement> ball(const ModelSpace& m, const OrbitIndex& orbit, double n) {
  if (n > orbit.radius + 1e-9) throw TruncationError("ball: n exceeds the enumerated radius");
  std::vector<GroupElement> out;
  const std::size_t hi = orbit.lower(std::nextafter(n, kInf));
  out.reserve(hi);
  for (std::size_t i = 0; i < hi; ++i)
    out.push_back(m.backend == Backend::half_plane ? orbit.element(i)
                                                   : graph_element_at(m, orbit, i));
  return out;
}

std::int64_t ball_count(const ModelSpace& m, const OrbitIndex& orbit, double n) {
  (void)m;
  if (n > orbit.radius + 1e-9) throw TruncationError("ball_count: n exceeds the enumerated radius");
  return static_cast<std::int64_t>(orbit.lower(std::nextafter(n, kInf)));
}

std::vector<GroupElement> annulus(const ModelSpace& m, const OrbitIndex& orbit,
                                  const AnnulusQuery& q) {
  if (q.delta <= 0.0) throw UsageError("annulus: delta must be positive");
  if (q.n < 0.0) throw UsageError("annulus: n must be >= 0");
  const Point o = orbit.origin;
  const double dg = distance(m, o, apply(m, q.center, o));
  if (q.n + dg + q.delta > orbit.radius + 1e-9)
    throw TruncationError("annulus: window exceeds the enumerated radius");
  const std::size_t lo = orbit.lower(dg + q.n - q.delta);
  const std::size_t hi = orbit.lower(dg + q.n + q.delta);
  std::vector<GroupElement> out;
  out.reserve(hi - lo);
  for (std::size_t i = lo; i < hi; ++i)
    out.push_back(m.backend == Backend::half_plane ? orbit.element(i)
                                                   : graph_element_at(m, orbit, i));
  return out;
}

std::int64_t annulus_count(const ModelSpace& m, const OrbitIndex& orbit, double center_dist,
                           double n, double delta) {
  (void)m;
  const std::size_t lo = orbit.lower(center_dist + n - delta);
  const std::size_t hi = orbit.lower(center_dist + n + delta);
  return static_cast<std::int64_t>(hi - lo);
}

std::vector<HoroballRef> horoball_annulus(const ModelSpace& m, double n, double delta,
                                          std::optional<int> orbit_class) {
  if (delta <= 0.0) throw UsageError("horoball_annulus: delta must be positive");
  if (n + delta > m.truncation() + 1e-9)
    throw TruncationError("horoball_annulus: window exceeds the truncation");
  std::vector<HoroballRef> out;
  for (std::size_t i = 0; i < m.horoball_count(); ++i) {
    const double d = m.backend == Backend::half_plane ? m.hp.htable[i].dist : m.cg.htable[i].dist;
    if (d - n < -delta || d - n >= delta) continue;
    HoroballRef u = m.horoball(i);
    if (orbit_class && u.orbit_class != *orbit_class) continue;
    out.push_back(std::move(u));
  }
  return out;
}

std::int64_t horoball_annulus_count(const ModelSpace& m, double n, double delta,
                                    std::optional<int> orbit_class) {
  if (delta <= 0.0) throw UsageError("horoball_annulus_count: delta must be positive");
  if (n + delta > m.truncation() + 1e-9)
    throw TruncationError("horoball_annulus_count: window exceeds the truncation");
  std::int64_t count = 0;
  const std::size_t total = m.horoball_count();
  for (std::size_t i = 0; i < total; ++i) {
    double d = 0.0;
    int cls = 0;
    if (m.backend == Backend::half_plane) {
      d = m.hp.htable[i].dist;
    } else {
      d = m.cg.htable[i].dist;
      cls = m.cg.htable[i].cls;
    }
    if (d - n < -delta || d - n >= delta) continue;
    if (orbit_class && cls != *orbit_class) continue;
    ++count;
  }
  return count;
}

// ---- parabolic orbits -----------------------------------------------------

GroupElement parabolic_element(const ModelSpace& m, const HoroballRef& y, std::int64_t exponent) {
  if (m.backend == Backend::half_plane) {
    const Mat2 p0 = m.hp.parabolic_gens.at(static_cast<std::size_t>(y.orbit_class)).at(0);
    const Mat2 g = y.translate.m;
    return canonical_element(m, mat_mul(mat_mul(g, mat_pow(p0, exponent)), mat_inv(g)));
  }
  const int pgen = m.cg.parabolic_gen.at(static_cast<std::size_t>(y.orbit_class));
  const Word inner{{pgen, exponent}};
  const Word g = y.coset_rep;
  return canonical_element(
      m, word_mul(word_mul(g, inner, m.cg.orders), word_inv(g, m.cg.orders), m.cg.orders));
}

namespace {

// Exact distances from (e, start_depth) to (p^k, start_depth) in the
// one-coset combinatorial horoball subgraph; excursions through the rest
// of the cusped graph cannot shorten these (the coset tree re-enters
// where it left).
std::vector<std::int32_t> horoball_subgraph_distances(int max_depth, std::int64_t kcap,
                                                      int start_depth) {
  const std::int64_t span = 2 * kcap + 1;
  const int layers = max_depth + 1;
  std::vector<std::int32_t> dist(static_cast<std::size_t>(span) * layers, -1);
  const auto at = [&](std::int64_t k, int depth) -> std::int32_t& {
    return dist[static_cast<std::size_t>(depth) * span + (k + kcap)];
  };
  std::deque<std::pair<std::int64_t, int>> queue;
  at(0, start_depth) = 0;
  queue.emplace_back(0, start_depth);
  while (!queue.empty()) {
    const auto [k, depth] = queue.front();
    queue.pop_front();
    const std::int32_t d = at(k, depth);
    const auto visit = [&](std::int64_t k2, int depth2) {
      if (k2 < -kcap || k2 > kcap || depth2 < 0 || depth2 > max_depth) return;
      auto& slot = at(k2, depth2);
      if (slot < 0) {
        slot = d + 1;
        queue.emplace_back(k2, depth2);
      }
    };
    if (depth == 0) {
      visit(k - 1, 0);
      visit(k + 1, 0);
      visit(k, 1);
    } else {
      visit(k, depth - 1);
      if (depth < max_depth) visit(k, depth + 1);
      const std::int64_t reach = std::int64_t{1} << depth;
      for (std::int64_t j = 1; j <= reach; ++j) {
        visit(k + j, depth);
        visit(k - j, depth);
      }
    }
  }
  std::vector<std::int32_t> out(static_cast<std::size_t>(span));
  for (std::int64_t k = -kcap; k <= kcap; ++k)
    out[static_cast<std::size_t>(k + kcap)] = at(k, start_depth);
  return out;
}

}  // namespace

ParabolicOrbit parabolic_orbit(const ModelSpace& m, const HoroballRef& y, const Point& v,
                               std::int64_t exponent_cap) {
  require_same_backend(m, v, "parabolic_orbit");
  if (m.spec.parabolics.empty()) throw SpecError("parabolic_orbit: no declared parabolic classes");
  ParabolicOrbit orbit;
  orbit.orbit_class = y.orbit_class;
  orbit.around = v;
  struct Row {
    double d;
    std::int64_t k;
  };
  std::vector<Row> rows;
  if (m.backend == Backend::half_plane) {
    // d(v, g P0^k g^-1 v) = d(w, w + k tau), w = g^-1 v
    const Mat2 p0 = m.hp.parabolic_gens.at(static_cast<std::size_t>(y.orbit_class)).at(0);
    const double tau = static_cast<double>(p0.b);
    const Cplx w = mobius(mat_inv(y.translate.m), v.z);
    for (std::int64_t k = -exponent_cap; k <= exponent_cap; ++k) {
      const double kk = static_cast<double>(k) * tau;
      rows.push_back({acosh_stable(1.0 + kk * kk / (2.0 * w.imag() * w.imag())), k});
    }
    orbit.radius = acosh_stable(
        1.0 + (static_cast<double>(exponent_cap) * tau) * (static_cast<double>(exponent_cap) * tau) /
                  (2.0 * w.imag() * w.imag()));
  } else {
    // Around the basepoint (e,0) or the representative horoball's foot
    // (e, cls, 1); both live in the one-coset subgraph where distances
    // are exact beyond the truncation.
    int start_depth = -1;
    const auto& vk = m.cg.verts[static_cast<std::size_t>(v.vertex)];
    if (y.coset_rep.empty()) {
      if (v.vertex == m.cg.base)
        start_depth = 0;
      else if (vk.depth == 1 && vk.cls == y.orbit_class && vk.w.empty())
        start_depth = 1;
    }
    if (start_depth < 0)
      throw UsageError(
          "parabolic_orbit (cusped_cayley): supported around the basepoint or the class "
          "representative's foot");
    const auto dist = horoball_subgraph_distances(m.cg.max_depth, exponent_cap, start_depth);
    for (std::int64_t k = -exponent_cap; k <= exponent_cap; ++k)
      rows.push_back({static_cast<double>(dist[static_cast<std::size_t>(k + exponent_cap)]), k});
    orbit.radius = rows.back().d;
  }
  std::sort(rows.begin(), rows.end(), [](const Row& l, const Row& r) {
    if (l.d != r.d) return l.d < r.d;
    const auto key = [](std::int64_t k) { return std::make_pair(k < 0 ? -k : k, k < 0); };
    return key(l.k) < key(r.k);
  });
  for (const Row& r : rows) {
    orbit.dists.push_back(r.d);
    orbit.exponents.push_back(r.k);
  }
  return orbit;
}

std::vector<GroupElement> parabolic_annulus(const ModelSpace& m, const HoroballRef& y,
                                            const ParabolicOrbit& orbit, double n, double delta) {
  if (delta <= 0.0) throw UsageError("parabolic_annulus: delta must be positive");
  std::vector<GroupElement> out;
  const std::size_t lo = orbit.lower(n - delta);
  const std::size_t hi = orbit.lower(n + delta);
  out.reserve(hi - lo);
  for (std::size_t i = lo; i < hi; ++i) out.push_back(parabolic_element(m, y, orbit.exponents[i]));
  return out;
}

std::int64_t parabolic_annulus_count(const ParabolicOrbit& orbit, double n, double delta) {
  return static_cast<std::int64_t>(orbit.lower(n + delta) - orbit.lower(n - delta));
}

Point foot(const ModelSpace& m, const HoroballRef& u, const Point& o) {
  require_same_backend(m, o, "foot");
  if (m.backend == Backend::half_plane)
    return {m.backend, horoball_foot(o.z, u.p, u.q, m.hp.t), -1};
  const Point base = m.basepoint();
  if (o.vertex == base.vertex && u.foot_vertex >= 0) return u.foot;
  return project(m, o, u);
}

HoroballRef class_representative(const ModelSpace& m, int orbit_class) {
  if (orbit_class < 0 || orbit_class >= static_cast<int>(m.spec.parabolics.size()))
    throw UsageError("class_representative: no such parabolic class");
  if (m.backend == Backend::half_plane) {
    for (std::size_t i = 0; i < m.hp.htable.size(); ++i)
      if (m.hp.htable[i].q == 0) return m.horoball(i);
    throw TruncationError("class_representative: horoball at infinity missing from the table");
  }
  for (std::size_t i = 0; i < m.cg.htable.size(); ++i)
    if (m.cg.htable[i].cls == orbit_class && m.cg.htable[i].coset_rep.empty())
      return m.horoball(i);
  throw TruncationError("class_representative: representative horoball not in the built graph");
}

// ---- growth tables -------------------------------------------------------

const char* growth_kind_name(GrowthTable::Kind k) {
  switch (k) {
    case GrowthTable::Kind::orbit: return "orbit";
    case GrowthTable::Kind::horoball: return "horoball";
    case GrowthTable::Kind::parabolic: return "parabolic";
    case GrowthTable::Kind::cone: return "cone";
    case GrowthTable::Kind::partial_cone: return "partial_cone";
  }
  return "?";
}

double GrowthTable::max_normalized() const {
  double v = 0.0;
  for (const Row& r : rows) v = std::max(v, r.normalized);
  return v;
}

double GrowthTable::min_normalized() const {
  double v = kInf;
  for (const Row& r : rows)
    if (r.count > 0) v = std::min(v, r.normalized);
  return v;
}

GrowthTable orbit_growth_table(const ModelSpace& m, const OrbitIndex& orbit,
                               const GroupElement& center, double delta, int n_lo, int n_hi,
                               double delta_hat) {
  GrowthTable t;
  t.kind = GrowthTable::Kind::orbit;
  t.delta_width = delta;
  t.delta_hat = delta_hat;
  t.center = element_to_string(m, center);
  t.center_dist = distance(m, orbit.origin, apply(m, center, orbit.origin));
  for (int n = n_lo; n <= n_hi; ++n) {
    const std::int64_t c = std::isinf(delta)
                               ? ball_count(m, orbit, static_cast<double>(n))
                               : annulus_count(m, orbit, t.center_dist, n, delta);
    t.rows.push_back({static_cast<double>(n), c, c * std::exp(-delta_hat * n)});
  }
  return t;
}

GrowthTable horoball_growth_table(const ModelSpace& m, double delta, int n_lo, int n_hi,
                                  double delta_hat, std::optional<int> orbit_class) {
  GrowthTable t;
  t.kind = GrowthTable::Kind::horoball;
  t.delta_width = delta;
  t.delta_hat = delta_hat;
  for (int n = n_lo; n <= n_hi; ++n) {
    const std::int64_t c = horoball_annulus_count(m, n, delta, orbit_class);
    t.rows.push_back({static_cast<double>(n), c, c * std::exp(-delta_hat * n)});
  }
  return t;
}

GrowthTable parabolic_growth_table(const ModelSpace& m, const ParabolicOrbit& orbit, double delta,
                                   int n_lo, int n_hi, double delta_hat) {
  (void)m;
  GrowthTable t;
  t.kind = GrowthTable::Kind::parabolic;
  t.delta_width = delta;
  t.delta_hat = delta_hat;
  for (int n = n_lo; n <= n_hi; ++n) {
    const std::int64_t c = parabolic_annulus_count(orbit, n, delta);
    t.rows.push_back({static_cast<double>(n), c, c * std::exp(-delta_hat * n)});
  }
  return t;
}

}  // namespace growth
