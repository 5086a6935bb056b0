#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>

#include "cuspgrowth/enumerate.hpp"
#include "cuspgrowth/space.hpp"
#include "doctest.h"

using namespace growth;

namespace {

GroupSpec psl2z_spec(double truncation = 8.0, double height = 1.0) {
  GroupSpec s;
  s.model = Backend::half_plane;
  s.generators = {{"T", Mat2{1, 1, 0, 1}, 0}, {"S", Mat2{0, -1, 1, 0}, 0}};
  s.parabolics = {{"T"}};
  s.horoball_height = height;
  s.truncation_radius = truncation;
  return s;
}

GroupSpec cusped_spec(int depth = 5, double truncation = 8.0) {
  GroupSpec s;
  s.model = Backend::cusped_cayley;
  s.generators = {{"a", std::nullopt, 0}, {"b", std::nullopt, 0}};
  s.parabolics = {{"a"}};
  s.max_depth = depth;
  s.truncation_radius = truncation;
  return s;
}

Point hp(double re, double im) { return {Backend::half_plane, {re, im}, -1}; }

}  // namespace

TEST_CASE("spec parsing: schema, unknown fields, validation") {
  const std::string good = R"({
    "model": "half_plane",
    "generators": [{"name": "T", "matrix": [1,1,0,1]}, {"name": "S", "matrix": [0,-1,1,0]}],
    "parabolics": [["T"]],
    "horoball_height": 1.0,
    "truncation_radius": 6.0
  })";
  const GroupSpec s = GroupSpec::parse_json_text(good);
  CHECK(s.model == Backend::half_plane);
  CHECK(s.generators.size() == 2);

  CHECK_THROWS_AS(GroupSpec::parse_json_text(R"({"model":"half_plane","bogus":1})"), SpecError);
  CHECK_THROWS_AS(GroupSpec::parse_json_text(R"({"model":"flat","generators":[],
    "truncation_radius":4})"),
                  SpecError);
  // det != 1
  CHECK_THROWS_AS(GroupSpec::parse_json_text(R"({"model":"half_plane",
    "generators":[{"name":"X","matrix":[2,0,0,1]}],"truncation_radius":4})"),
                  SpecError);
  // horoball height <= 0
  GroupSpec bad = psl2z_spec();
  bad.horoball_height = 0.0;
  CHECK_THROWS_AS(build_half_plane(bad), SpecError);
  // invalid basepoint
  CHECK_THROWS_AS(GroupSpec::parse_json_text(R"({"model":"half_plane",
    "generators":[{"name":"T","matrix":[1,1,0,1]}],"truncation_radius":4,
    "basepoint":[0.0,-1.0]})"),
                  SpecError);
}

TEST_CASE("build_half_plane: horoball table geometry") {
  const ModelSpace m = build_half_plane(psl2z_spec());
  CHECK(m.horoball_count() > 0);

  // horoball tangent at 0 is {|z - i/2| <= 1/2}: signed depth 0 on that circle
  CHECK(horoball_signed_depth(Cplx(0.0, 1.0), 0, 1, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(horoball_signed_depth(Cplx(0.5, 0.5), 0, 1, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(horoball_signed_depth(Cplx(0.0, 0.5), 0, 1, 1.0) > 0.0);  // center of the disk

  // foot of the horoball at infinity is the basepoint itself (o on the horosphere)
  const HoroballRef u_inf = class_representative(m, 0);
  CHECK(u_inf.dist == doctest::Approx(0.0));
  CHECK(u_inf.foot.z.real() == doctest::Approx(0.0));
  CHECK(u_inf.foot.z.imag() == doctest::Approx(1.0));

  // representative t_U lands within the covering constant of the foot
  for (std::size_t i = 0; i < std::min<std::size_t>(m.horoball_count(), 200); ++i) {
    const HoroballRef u = m.horoball(i);
    const Point rep_pt = apply(m, u.rep, m.basepoint());
    CHECK(distance(m, rep_pt, u.foot) <= m.constants.cocompactness_M + 1e-9);
  }
}

TEST_CASE("build_half_plane: cocompact convention, errors") {
  GroupSpec s = psl2z_spec();
  s.parabolics.clear();
  const ModelSpace m = build_half_plane(s);
  CHECK(m.horoball_count() == 0);

  GroupSpec wrong = cusped_spec();
  CHECK_THROWS_AS(build_half_plane(wrong), SpecError);
}

TEST_CASE("build_cusped_cayley: distances and depth") {
  const ModelSpace m = build_cusped_cayley(cusped_spec(5, 8.0));
  const Point o = m.basepoint();
  // d((e,0),(a^4,0)) = 2 log2 4 + c with c in {0,1,2}
  const Point a4 = apply(m, parse_element(m, "a^4"), o);
  const double d4 = distance(m, o, a4);
  CHECK(d4 >= 4.0);
  CHECK(d4 <= 6.0);

  // D = 0: plain Cayley distances
  const ModelSpace flat = build_cusped_cayley(cusped_spec(0, 6.0));
  CHECK(flat.horoball_count() == 0);
  const Point f5 = apply(flat, parse_element(flat, "a^5"), flat.basepoint());
  CHECK(distance(flat, flat.basepoint(), f5) == doctest::Approx(5.0));

  // no parabolics: reduced word length
  GroupSpec free_spec = cusped_spec(0, 6.0);
  free_spec.parabolics.clear();
  const ModelSpace tree = build_cusped_cayley(free_spec);
  const Point w = apply(tree, parse_element(tree, "a*b^2*a^-1"), tree.basepoint());
  CHECK(distance(tree, tree.basepoint(), w) == doctest::Approx(4.0));

  // unsupported presentations
  GroupSpec multi = cusped_spec();
  multi.parabolics = {{"a", "b"}};
  CHECK_THROWS_AS(build_cusped_cayley(multi), UnsupportedPresentationError);
}

TEST_CASE("free products of cyclic groups reduce correctly") {
  GroupSpec s;
  s.model = Backend::cusped_cayley;
  s.generators = {{"s", std::nullopt, 2}, {"t", std::nullopt, 3}};
  s.truncation_radius = 6.0;
  const ModelSpace m = build_cusped_cayley(s);
  // s^2 = e, t^3 = e
  CHECK(parse_element(m, "s*s").is_identity());
  CHECK(parse_element(m, "t*t*t").is_identity());
  CHECK(parse_element(m, "t^2") == parse_element(m, "t^-1"));
  const GroupElement st = parse_element(m, "s*t");
  CHECK_FALSE(mul(m, st, st).is_identity());
  // word length of t^2 is 1 (inverse generator counts as one step)
  const Point t2 = apply(m, parse_element(m, "t^2"), m.basepoint());
  CHECK(distance(m, m.basepoint(), t2) == doctest::Approx(1.0));
}

TEST_CASE("apply: identity and Mobius examples") {
  const ModelSpace m = build_half_plane(psl2z_spec());
  const Point x = hp(0.3, 0.8);
  CHECK(distance(m, apply(m, m.identity(), x), x) == doctest::Approx(0.0));
  const Point ti = apply(m, parse_element(m, "T"), hp(0, 1));
  CHECK(ti.z.real() == doctest::Approx(1.0));
  CHECK(ti.z.imag() == doctest::Approx(1.0));
  const Point si = apply(m, parse_element(m, "S"), hp(0, 1));
  CHECK(si.z.real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(si.z.imag() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("canonical: projective sign quotient and free reduction") {
  const ModelSpace m = build_half_plane(psl2z_spec());
  CHECK(canonical_element(m, Mat2{-1, 0, 0, -1}) == m.identity());
  CHECK(canonical_element(m, Mat2{-1, -1, 0, -1}) == canonical_element(m, Mat2{1, 1, 0, 1}));
  CHECK_THROWS_AS(canonical_element(m, Mat2{2, 0, 0, 1}), SpecError);

  const ModelSpace t = build_cusped_cayley(cusped_spec(0, 4.0));
  const Word raw = {{0, 1}, {0, -1}, {1, 1}};  // a a^-1 b
  CHECK(canonical_element(t, raw) == parse_element(t, "b"));
}

TEST_CASE("isometry property: 1000 random triples") {
  const ModelSpace m = build_half_plane(psl2z_spec());
  Rng rng(123);
  const std::vector<GroupElement> gens = {parse_element(m, "T"), parse_element(m, "S"),
                                          parse_element(m, "T^-1"), parse_element(m, "S*T")};
  for (int trial = 0; trial < 1000; ++trial) {
    GroupElement g = m.identity();
    for (int j = 0; j < 4; ++j) g = mul(m, g, gens[rng.next_below(gens.size())]);
    const Point x = hp(rng.uniform(-2, 2), std::exp(rng.uniform(-1, 1)));
    const Point y = hp(rng.uniform(-2, 2), std::exp(rng.uniform(-1, 1)));
    CHECK(std::abs(distance(m, apply(m, g, x), apply(m, g, y)) - distance(m, x, y)) <= 1e-9);
  }

  const ModelSpace t = build_cusped_cayley(cusped_spec(3, 7.0));
  Rng rng2(9);
  std::vector<std::int32_t> near;
  for (std::int32_t id = 0; id < static_cast<std::int32_t>(t.cg.verts.size()); ++id)
    if (t.cg.dist_o[static_cast<std::size_t>(id)] <= 2) near.push_back(id);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 50; ++trial) {
    const GroupElement g = parse_element(t, trial % 2 == 0 ? "a" : "b^-1");
    const std::int32_t vx = near[rng2.next_below(near.size())];
    const std::int32_t vy = near[rng2.next_below(near.size())];
    try {
      const Point x{Backend::cusped_cayley, {}, vx};
      const Point y{Backend::cusped_cayley, {}, vy};
      const double before = distance(t, x, y);
      const double after = distance(t, apply(t, g, x), apply(t, g, y));
      CHECK(before == doctest::Approx(after));
      ++checked;
    } catch (const TruncationError&) {
      continue;
    }
  }
  CHECK(checked >= 20);
}

TEST_CASE("Frobenius identity: cosh d(i, g i) = ||g||^2 / 2") {
  const ModelSpace m = build_half_plane(psl2z_spec());
  const OrbitIndex orbit = enumerate_orbit(m, 6.0);
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    const GroupElement g = orbit.element(i);
    const double lhs = std::cosh(distance(m, m.basepoint(), apply(m, g, m.basepoint())));
    const double rhs = static_cast<double>(g.m.norm2()) / 2.0;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("horoball system: bounded intersection sampled, quasiconvexity") {
  const ModelSpace m = build_half_plane(psl2z_spec());
  // sampled pairs of distinct horoballs; diameter of the sampled overlap of
  // eps-neighborhoods, monotone in eps
  const HoroballRef u = class_representative(m, 0);  // at infinity
  HoroballRef v;
  for (std::size_t i = 0; i < m.horoball_count(); ++i) {
    v = m.horoball(i);
    if (v.q == 1 && v.p == 0) break;
  }
  Rng rng(31);
  double prev_diam = -1.0;
  for (double eps : {0.5, 1.0, 1.5}) {
    std::vector<Cplx> overlap;
    for (int i = 0; i < 4000; ++i) {
      const Cplx z(rng.uniform(-1.5, 1.5), std::exp(rng.uniform(-2.0, 1.0)));
      if (horoball_dist(z, u.p, u.q, m.hp.t) <= eps && horoball_dist(z, v.p, v.q, m.hp.t) <= eps)
        overlap.push_back(z);
    }
    double diam = 0.0;
    for (std::size_t a = 0; a < overlap.size(); ++a)
      for (std::size_t b = a + 1; b < overlap.size(); b += 7)
        diam = std::max(diam, hp_dist(overlap[a], overlap[b]));
    CHECK(std::isfinite(diam));
    CHECK(diam >= prev_diam - 1e-12);
    prev_diam = diam;
  }
  CHECK(m.constants.quasiconvexity_eps <= 0.2);  // horoballs are convex here
}

TEST_CASE("parabolic distortion: d((e,0),(a^n,0)) - 2 log2 n bounded") {
  const ModelSpace m = build_cusped_cayley(cusped_spec(5, 8.0));
  const HoroballRef rep = class_representative(m, 0);
  const ParabolicOrbit orbit = parabolic_orbit(m, rep, m.basepoint(), 64);
  double worst = -kInf;
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    const std::int64_t n = orbit.exponents[i];
    if (n < 2 || n > 32) continue;
    worst = std::max(worst, orbit.dists[i] - 2.0 * std::log2(static_cast<double>(n)));
  }
  CHECK(worst <= 3.0);

  // subgraph distances agree with full-graph BFS on the overlap window
  const Point o = m.basepoint();
  for (std::int64_t n : {2, 3, 4, 6, 8}) {
    const Point an = apply(m, parse_element(m, "a^" + std::to_string(n)), o);
    double expect = 0.0;
    for (std::size_t i = 0; i < orbit.size(); ++i)
      if (orbit.exponents[i] == n) expect = orbit.dists[i];
    CHECK(distance(m, o, an) == doctest::Approx(expect));
  }
}

TEST_CASE("model constants: recorded triangle sample reproduces delta_hat") {
  const ModelSpace m = build_half_plane(psl2z_spec());
  REQUIRE(!m.delta_sample.empty());
  CHECK(estimate_hyperbolicity(m, m.delta_sample) ==
        doctest::Approx(m.constants.delta_hat).epsilon(1e-12));
  CHECK(m.constants.delta_hat > 0.0);
  CHECK(m.constants.cocompactness_M > 0.0);
}

TEST_CASE("horoball table is deterministic and within truncation") {
  const ModelSpace m = build_half_plane(psl2z_spec(7.0));
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (std::size_t i = 0; i < m.horoball_count(); ++i) {
    const auto& k = m.hp.htable[i];
    CHECK(seen.insert({k.p, k.q}).second);
    CHECK(k.dist <= m.truncation() + 1e-9);
    if (i > 0) CHECK(m.hp.htable[i - 1].dist <= k.dist + 1e-12);
  }
  const ModelSpace m2 = build_half_plane(psl2z_spec(7.0));
  CHECK(m2.horoball_count() == m.horoball_count());
}
