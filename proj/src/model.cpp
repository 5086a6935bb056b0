#include "cuspgrowth/model.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "cuspgrowth/space.hpp"

namespace growth {

namespace {

std::string vertex_key(const Word& w, std::int32_t cls, std::int32_t depth) {
  std::string k = word_key(w);
  k.push_back(static_cast<char>(cls & 0xff));
  k.push_back(static_cast<char>(depth & 0xff));
  return k;
}

// Canonical ordering key used for deterministic tie-breaks among vertices.
std::string vertex_order_key(const CuspedGraphModel::VKey& v) {
  return vertex_key(v.w, v.cls, v.depth);
}

}  // namespace

std::int32_t CuspedGraphModel::find_vertex(const Word& w, std::int32_t cls,
                                           std::int32_t depth) const {
  const auto it = index.find(vertex_key(w, cls, depth));
  return it == index.end() ? -1 : it->second;
}

Point ModelSpace::basepoint() const {
  if (backend == Backend::half_plane) return {backend, hp.basepoint, -1};
  return {backend, {}, cg.base};
}

std::size_t ModelSpace::horoball_count() const {
  return backend == Backend::half_plane ? hp.htable.size() : cg.htable.size();
}

GroupElement ModelSpace::identity() const {
  GroupElement g;
  g.backend = backend;
  return g;
}

std::vector<std::string> ModelSpace::generator_names() const {
  std::vector<std::string> out;
  for (const auto& g : spec.generators) out.push_back(g.name);
  return out;
}

void require_same_backend(const ModelSpace& m, const Point& x, const char* who) {
  if (x.backend != m.backend) throw UsageError(std::string(who) + ": point from another backend");
  if (m.backend == Backend::cusped_cayley &&
      (x.vertex < 0 || x.vertex >= static_cast<std::int32_t>(m.cg.verts.size())))
    throw UsageError(std::string(who) + ": vertex id not in the built graph");
  if (m.backend == Backend::half_plane && !(x.z.imag() > 0.0))
    throw UsageError(std::string(who) + ": half-plane point must have Im > 0");
}

// ---- group operations --------------------------------------------------

GroupElement canonical_element(const ModelSpace& m, const Mat2& raw) {
  if (m.backend != Backend::half_plane)
    throw UsageError("canonical_element: matrix element in a cusped_cayley model");
  GroupElement g;
  g.backend = m.backend;
  g.m = canonical_mat(raw);
  return g;
}

GroupElement canonical_element(const ModelSpace& m, const Word& raw) {
  if (m.backend != Backend::cusped_cayley)
    throw UsageError("canonical_element: word element in a half_plane model");
  GroupElement g;
  g.backend = m.backend;
  Word out;
  for (const Syllable& s : raw) {
    if (s.gen < 0 || s.gen >= static_cast<std::int32_t>(m.cg.orders.size()))
      throw UsageError("canonical_element: generator index out of range");
    word_push(out, s.gen, s.exp, m.cg.orders);
  }
  g.w = std::move(out);
  return g;
}

GroupElement generator_element(const ModelSpace& m, int gen_index, std::int64_t power) {
  if (gen_index < 0 || gen_index >= static_cast<int>(m.spec.generators.size()))
    throw UsageError("generator_element: index out of range");
  if (m.backend == Backend::half_plane)
    return canonical_element(m, mat_pow(*m.spec.generators[gen_index].matrix, power));
  return canonical_element(m, Word{{gen_index, power}});
}

GroupElement mul(const ModelSpace& m, const GroupElement& x, const GroupElement& y) {
  if (x.backend != m.backend || y.backend != m.backend)
    throw UsageError("mul: element from another backend");
  GroupElement g;
  g.backend = m.backend;
  if (m.backend == Backend::half_plane)
    g.m = mat_mul(x.m, y.m);
  else
    g.w = word_mul(x.w, y.w, m.cg.orders);
  return g;
}

GroupElement inv(const ModelSpace& m, const GroupElement& x) {
  if (x.backend != m.backend) throw UsageError("inv: element from another backend");
  GroupElement g;
  g.backend = m.backend;
  if (m.backend == Backend::half_plane)
    g.m = mat_inv(x.m);
  else
    g.w = word_inv(x.w, m.cg.orders);
  return g;
}

GroupElement parse_element(const ModelSpace& m, const std::string& text) {
  GroupElement out = m.identity();
  if (text.empty() || text == "e" || text == "1") return out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, '*')) {
    std::string name = tok;
    std::int64_t power = 1;
    if (const auto caret = tok.find('^'); caret != std::string::npos) {
      name = tok.substr(0, caret);
      power = std::stoll(tok.substr(caret + 1));
    }
    out = mul(m, out, generator_element(m, m.spec.generator_index(name), power));
  }
  return out;
}

std::string element_to_string(const ModelSpace& m, const GroupElement& g) {
  if (m.backend == Backend::half_plane) return mat_to_string(g.m);
  const auto names = m.generator_names();
  return word_to_string(g.w, names);
}

Point apply(const ModelSpace& m, const GroupElement& g, const Point& x) {
  require_same_backend(m, x, "apply");
  if (g.backend != m.backend) throw UsageError("apply: element from another backend");
  if (m.backend == Backend::half_plane) return {m.backend, mobius(g.m, x.z), -1};
  const auto& v = m.cg.verts[static_cast<std::size_t>(x.vertex)];
  const Word moved = word_mul(g.w, v.w, m.cg.orders);
  const std::int32_t id = m.cg.find_vertex(moved, v.cls, v.depth);
  if (id < 0) throw TruncationError("apply: image vertex escapes the built truncation");
  return {m.backend, {}, id};
}

// ---- half-plane build ----------------------------------------------------

namespace {

// Representative t_U = g P0^k with P0 the declared parabolic translation,
// chosen so t_U o is nearest the foot along the horosphere.
GroupElement halfplane_rep(const ModelSpace& m, const Mat2& translate, std::int64_t q) {
  const Mat2 p0 = m.hp.parabolic_gens.at(0).at(0);
  const double tau = static_cast<double>(p0.b);  // upper-triangular translation length
  const Mat2 ginv = mat_inv(translate);
  const Cplx w = q == 0 ? m.hp.basepoint : mobius(ginv, m.hp.basepoint);
  const Cplx foot_up = q == 0 ? Cplx(m.hp.basepoint.real(), m.hp.t)
                              : Cplx(w.real(), m.hp.t);
  const auto k = tau == 0.0 ? 0
                            : static_cast<std::int64_t>(
                                  std::llround((foot_up.real() - m.hp.basepoint.real()) / tau));
  GroupElement rep;
  rep.backend = Backend::half_plane;
  rep.m = mat_mul(q == 0 ? Mat2{} : translate, mat_pow(p0, k));
  return rep;
}

}  // namespace

HoroballRef ModelSpace::horoball(std::size_t i) const {
  HoroballRef u;
  if (backend == Backend::half_plane) {
    const auto& k = hp.htable.at(i);
    u.orbit_class = 0;
    u.p = k.p;
    u.q = k.q;
    u.dist = k.dist;
    u.translate.backend = backend;
    u.translate.m = k.q == 0 ? Mat2{} : horoball_translate(k.p, k.q);
    u.foot = {backend, horoball_foot(hp.basepoint, k.p, k.q, hp.t), -1};
    if (!hp.parabolic_gens.empty()) u.rep = halfplane_rep(*this, u.translate.m, k.q);
    return u;
  }
  const auto& k = cg.htable.at(i);
  u.orbit_class = k.cls;
  u.coset_rep = k.coset_rep;
  u.dist = k.dist;
  u.foot_vertex = k.foot_vertex;
  u.translate.backend = backend;
  u.translate.w = k.coset_rep;
  u.rep.backend = backend;
  u.rep.w = cg.verts[static_cast<std::size_t>(k.foot_vertex)].w;
  u.foot = {backend, {}, k.foot_vertex};
  return u;
}

double horoball_signed_depth_of(const ModelSpace& m, const HoroballRef& u, const Point& x) {
  require_same_backend(m, x, "horoball_signed_depth_of");
  if (m.backend == Backend::half_plane) return horoball_signed_depth(x.z, u.p, u.q, m.hp.t);
  const auto& v = m.cg.verts[static_cast<std::size_t>(x.vertex)];
  if (v.depth > 0 && v.cls == u.orbit_class) {
    Word rep = v.w;
    while (!rep.empty() && rep.back().gen == m.cg.parabolic_gen[static_cast<std::size_t>(v.cls)])
      rep.pop_back();
    if (rep == u.coset_rep) return static_cast<double>(v.depth);
  }
  // outside: BFS until the first member vertex of u
  std::vector<std::int32_t> dist(m.cg.verts.size(), -1);
  std::deque<std::int32_t> queue;
  dist[static_cast<std::size_t>(x.vertex)] = 0;
  queue.push_back(x.vertex);
  const int pgen = m.cg.parabolic_gen[static_cast<std::size_t>(u.orbit_class)];
  while (!queue.empty()) {
    const std::int32_t cur = queue.front();
    queue.pop_front();
    const auto& vk = m.cg.verts[static_cast<std::size_t>(cur)];
    if (vk.depth > 0 && vk.cls == u.orbit_class) {
      Word rep = vk.w;
      while (!rep.empty() && rep.back().gen == pgen) rep.pop_back();
      if (rep == u.coset_rep) return -static_cast<double>(dist[static_cast<std::size_t>(cur)]);
    }
    for (std::int32_t nb : cusped_neighbors(m, cur)) {
      if (dist[static_cast<std::size_t>(nb)] < 0) {
        dist[static_cast<std::size_t>(nb)] = dist[static_cast<std::size_t>(cur)] + 1;
        queue.push_back(nb);
      }
    }
  }
  throw TruncationError("horoball_signed_depth_of: horoball unreachable inside truncation");
}

namespace {

void finalize_constants(ModelSpace& m);

ModelSpace make_base(const GroupSpec& spec) {
  spec.validate();
  ModelSpace m;
  m.spec = spec;
  m.backend = spec.model;
  return m;
}

}  // namespace

ModelSpace build_half_plane(const GroupSpec& spec) {
  if (spec.model != Backend::half_plane)
    throw SpecError("build_half_plane: spec declares a different model");
  ModelSpace m = make_base(spec);
  m.hp.t = spec.horoball_height;
  m.hp.basepoint = spec.basepoint.value_or(Cplx(0.0, 1.0));
  for (const auto& g : spec.generators) m.hp.gens.push_back(canonical_mat(*g.matrix));
  if (spec.parabolics.size() > 1)
    throw UnsupportedPresentationError(
        "half_plane backend supports a single parabolic class (cusp at infinity)");
  for (const auto& cls : spec.parabolics) {
    std::vector<Mat2> mats;
    for (const auto& name : cls) {
      const Mat2 p = canonical_mat(*spec.generators[static_cast<std::size_t>(
          spec.generator_index(name))].matrix);
      if (p.c != 0)
        throw SpecError("parabolic generator " + name + " does not stabilize infinity");
      mats.push_back(p);
    }
    m.hp.parabolic_gens.push_back(std::move(mats));
  }

  if (!m.hp.parabolic_gens.empty()) {
    // Tangency horoballs meeting the truncation ball, plus the one at infinity.
    auto nearby = horoballs_near(m.hp.basepoint, spec.truncation_radius, m.hp.t);
    m.hp.htable.reserve(nearby.size());
    for (const auto& h : nearby) m.hp.htable.push_back({h.p, h.q, h.dist});
    std::sort(m.hp.htable.begin(), m.hp.htable.end(), [](const auto& a, const auto& b) {
      return std::tie(a.dist, a.q, a.p) < std::tie(b.dist, b.q, b.p);
    });
  }
  finalize_constants(m);
  return m;
}

ModelSpace build_cusped_cayley(const GroupSpec& spec) {
  if (spec.model != Backend::cusped_cayley)
    throw SpecError("build_cusped_cayley: spec declares a different model");
  ModelSpace m = make_base(spec);
  auto& cg = m.cg;
  cg.max_depth = spec.max_depth;
  for (const auto& g : spec.generators) cg.orders.push_back(g.order);
  for (const auto& cls : spec.parabolics) {
    if (cls.size() != 1)
      throw UnsupportedPresentationError(
          "cusped_cayley parabolic classes must be a single infinite-order generator");
    const int gi = spec.generator_index(cls[0]);
    if (spec.generators[static_cast<std::size_t>(gi)].order != 0)
      throw UnsupportedPresentationError("parabolic generator must have infinite order");
    cg.parabolic_gen.push_back(gi);
  }

  const auto radius = static_cast<std::int32_t>(std::floor(spec.truncation_radius));
  const auto reg = [&](const Word& w, std::int32_t cls, std::int32_t depth,
                       std::int32_t dist, std::int32_t parent) -> std::int32_t {
    const std::string key = vertex_key(w, cls, depth);
    const auto it = cg.index.find(key);
    if (it != cg.index.end()) return -1;  // already registered
    const auto id = static_cast<std::int32_t>(cg.verts.size());
    cg.index.emplace(key, id);
    cg.verts.push_back({w, cls, depth});
    cg.dist_o.push_back(dist);
    cg.parent_o.push_back(parent);
    return id;
  };

  reg(Word{}, -1, 0, 0, -1);
  cg.base = 0;
  std::deque<std::int32_t> queue{0};
  while (!queue.empty()) {
    const std::int32_t cur = queue.front();
    queue.pop_front();
    const std::int32_t nd = cg.dist_o[static_cast<std::size_t>(cur)] + 1;
    if (nd > radius) continue;
    const CuspedGraphModel::VKey v = cg.verts[static_cast<std::size_t>(cur)];  // copy: reg() reallocates
    const auto visit = [&](const Word& w, std::int32_t cls, std::int32_t depth) {
      const std::int32_t id = reg(w, cls, depth, nd, cur);
      if (id >= 0) queue.push_back(id);
    };
    if (v.depth == 0) {
      for (std::int32_t gi = 0; gi < static_cast<std::int32_t>(cg.orders.size()); ++gi) {
        visit(word_mul(v.w, Word{{gi, 1}}, cg.orders), -1, 0);
        visit(word_mul(v.w, Word{{gi, -1}}, cg.orders), -1, 0);
      }
      if (cg.max_depth >= 1)
        for (std::int32_t c = 0; c < static_cast<std::int32_t>(cg.parabolic_gen.size()); ++c)
          visit(v.w, c, 1);
    } else {
      if (v.depth == 1)
        visit(v.w, -1, 0);
      else
        visit(v.w, v.cls, v.depth - 1);
      if (v.depth < cg.max_depth) visit(v.w, v.cls, v.depth + 1);
      const int pgen = cg.parabolic_gen[static_cast<std::size_t>(v.cls)];
      const std::int64_t reach = std::int64_t{1} << v.depth;
      for (std::int64_t j = 1; j <= reach; ++j) {
        visit(word_mul(v.w, Word{{pgen, j}}, cg.orders), v.cls, v.depth);
        visit(word_mul(v.w, Word{{pgen, -j}}, cg.orders), v.cls, v.depth);
      }
    }
  }

  // Compressed adjacency rows (canonical order), rebuilt over the full
  // registry so boundary vertices also carry their rows.
  cg.adj_offset.assign(cg.verts.size() + 1, 0);
  for (std::int32_t id = 0; id < static_cast<std::int32_t>(cg.verts.size()); ++id) {
    const auto row = cusped_neighbors_raw(m, id);
    cg.adj.insert(cg.adj.end(), row.begin(), row.end());
    cg.adj_offset[static_cast<std::size_t>(id) + 1] =
        static_cast<std::int64_t>(cg.adj.size());
  }

  // Horoball table: one entry per (class, coset) with a registered member.
  std::map<std::pair<std::int32_t, std::string>, std::int32_t> best;
  for (std::int32_t id = 0; id < static_cast<std::int32_t>(cg.verts.size()); ++id) {
    const auto& v = cg.verts[static_cast<std::size_t>(id)];
    if (v.depth == 0) continue;
    Word rep = v.w;
    const int pgen = cg.parabolic_gen[static_cast<std::size_t>(v.cls)];
    while (!rep.empty() && rep.back().gen == pgen) rep.pop_back();
    const auto key = std::make_pair(v.cls, word_key(rep));
    const auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(key, id);
      continue;
    }
    const auto& w = cg.verts[static_cast<std::size_t>(it->second)];
    const auto lhs = std::make_pair(cg.dist_o[static_cast<std::size_t>(id)], vertex_order_key(v));
    const auto rhs =
        std::make_pair(cg.dist_o[static_cast<std::size_t>(it->second)], vertex_order_key(w));
    if (lhs < rhs) it->second = id;
  }
  for (const auto& [key, foot_id] : best) {
    const auto& v = cg.verts[static_cast<std::size_t>(foot_id)];
    Word rep = v.w;
    const int pgen = cg.parabolic_gen[static_cast<std::size_t>(v.cls)];
    while (!rep.empty() && rep.back().gen == pgen) rep.pop_back();
    cg.htable.push_back({key.first, rep, foot_id,
                         static_cast<double>(cg.dist_o[static_cast<std::size_t>(foot_id)])});
  }
  std::sort(cg.htable.begin(), cg.htable.end(), [](const auto& a, const auto& b) {
    return std::tie(a.dist, a.cls) < std::tie(b.dist, b.cls) ||
           (a.dist == b.dist && a.cls == b.cls && word_key(a.coset_rep) < word_key(b.coset_rep));
  });
  finalize_constants(m);
  return m;
}

ModelSpace build_model(const GroupSpec& spec) {
  return spec.model == Backend::half_plane ? build_half_plane(spec) : build_cusped_cayley(spec);
}

// ---- model constants -------------------------------------------------

namespace {

// Small pruned word-ball enumeration; only used to estimate the covering
// constant M at build time.
std::vector<Cplx> mini_orbit_halfplane(const ModelSpace& m, double radius) {
  std::set<Mat2> seen{Mat2{}};
  std::deque<Mat2> queue{Mat2{}};
  std::vector<Mat2> gens;
  for (const auto& g : m.hp.gens) {
    gens.push_back(g);
    gens.push_back(mat_inv(g));
  }
  while (!queue.empty()) {
    const Mat2 cur = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      const Mat2 nx = mat_mul(cur, g);
      if (hp_dist(m.hp.basepoint, mobius(nx, m.hp.basepoint)) > radius + 1.5) continue;
      if (seen.insert(nx).second) queue.push_back(nx);
    }
  }
  std::vector<Cplx> orbit;
  orbit.reserve(seen.size());
  for (const auto& g : seen) orbit.push_back(mobius(g, m.hp.basepoint));
  return orbit;
}

void finalize_constants(ModelSpace& m) {
  Rng rng(20240601u);
  ModelConstants k;

  // delta_hat over a recorded sample of triangles
  m.delta_sample.clear();
  if (m.backend == Backend::half_plane) {
    for (int i = 0; i < 180; ++i) {
      const double re = rng.uniform(-2.0, 2.0);
      const double im = std::exp(rng.uniform(-1.4, 1.4));
      m.delta_sample.push_back({m.backend, {re, im}, -1});
    }
  } else {
    std::vector<std::int32_t> depth0;
    for (std::int32_t id = 0; id < static_cast<std::int32_t>(m.cg.verts.size()); ++id)
      if (m.cg.verts[static_cast<std::size_t>(id)].depth == 0 &&
          m.cg.dist_o[static_cast<std::size_t>(id)] * 2 <= m.truncation())
        depth0.push_back(id);
    const int triples = 40;
    for (int i = 0; i < 3 * triples && !depth0.empty(); ++i)
      m.delta_sample.push_back(
          {m.backend, {}, depth0[static_cast<std::size_t>(rng.next_below(depth0.size()))]});
  }
  k.delta_hat = estimate_hyperbolicity(m, m.delta_sample);

  // sampled horoball quasiconvexity
  double qc = 0.0;
  if (m.horoball_count() > 0) {
    if (m.backend == Backend::half_plane) {
      for (int i = 0; i < 8; ++i) {
        const Cplx a(rng.uniform(-4.0, 4.0), m.hp.t * std::exp(rng.uniform(0.0, 1.0)));
        const Cplx b(rng.uniform(-4.0, 4.0), m.hp.t * std::exp(rng.uniform(0.0, 1.0)));
        const HpSegment seg = HpSegment::between(a, b);
        const int steps = std::max(2, static_cast<int>(seg.length() / 0.05));
        for (int s = 0; s <= steps; ++s) {
          const Cplx z = seg.point_at_length(seg.length() * s / steps);
          qc = std::max(qc, horoball_dist(z, 1, 0, m.hp.t));
        }
      }
    } else {
      const HoroballRef u = m.horoball(0);
      std::vector<std::int32_t> members;
      for (std::int32_t id = 0; id < static_cast<std::int32_t>(m.cg.verts.size()); ++id) {
        const auto& v = m.cg.verts[static_cast<std::size_t>(id)];
        if (v.depth == 0 || v.cls != u.orbit_class) continue;
        Word rep = v.w;
        const int pgen = m.cg.parabolic_gen[static_cast<std::size_t>(v.cls)];
        while (!rep.empty() && rep.back().gen == pgen) rep.pop_back();
        if (rep == u.coset_rep) members.push_back(id);
      }
      for (int i = 0; i < 6 && members.size() >= 2; ++i) {
        const Point a{m.backend, {}, members[static_cast<std::size_t>(rng.next_below(members.size()))]};
        const Point b{m.backend, {}, members[static_cast<std::size_t>(rng.next_below(members.size()))]};
        try {
          const PathSample path = geodesic(m, a, b, 1.0);
          for (const Point& p : path.points)
            qc = std::max(qc, -std::min(0.0, horoball_signed_depth_of(m, u, p)));
        } catch (const TruncationError&) {
          continue;
        }
      }
    }
  }
  k.quasiconvexity_eps = qc;

  // covering constant M
  if (m.backend == Backend::half_plane) {
    double M = 0.0;
    if (!m.hp.parabolic_gens.empty()) {
      const double tau = std::abs(static_cast<double>(m.hp.parabolic_gens[0][0].b));
      const double dy = m.hp.basepoint.imag() - m.hp.t;
      M = acosh_stable(1.0 + (0.25 * tau * tau + dy * dy) /
                                 (2.0 * m.hp.t * m.hp.basepoint.imag()));
    }
    const auto orbit = mini_orbit_halfplane(m, 4.0);
    for (int i = 0; i < 200; ++i) {
      const Cplx z(rng.uniform(-1.5, 1.5), std::exp(rng.uniform(-1.2, 1.2)));
      if (hp_dist(z, m.hp.basepoint) > 3.5) continue;
      bool inside = false;
      for (const auto& h : horoballs_near(z, 0.0, m.hp.t))
        if (h.dist <= 0.0 && !m.hp.htable.empty()) inside = true;
      if (inside) continue;
      double best = kInf;
      for (const auto& w : orbit) best = std::min(best, hp_dist(z, w));
      if (best < kInf) M = std::max(M, best);
    }
    k.cocompactness_M = M;
  } else {
    k.cocompactness_M = 1.0;  // feet sit at depth 1; orbit = depth-0 vertices
  }

  m.constants = k;
}

}  // namespace

}  // namespace growth
