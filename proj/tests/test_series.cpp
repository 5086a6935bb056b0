#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "cuspgrowth/series.hpp"
#include "doctest.h"

using namespace growth;

namespace {

GroupSpec psl2z_spec(double truncation = 13.0) {
  GroupSpec s;
  s.model = Backend::half_plane;
  s.generators = {{"T", Mat2{1, 1, 0, 1}, 0}, {"S", Mat2{0, -1, 1, 0}, 0}};
  s.parabolics = {{"T"}};
  s.horoball_height = 1.0;
  s.truncation_radius = truncation;
  return s;
}

GroupSpec free2_spec(double truncation = 12.0) {
  GroupSpec s;
  s.model = Backend::cusped_cayley;
  s.generators = {{"a", std::nullopt, 0}, {"b", std::nullopt, 0}};
  s.truncation_radius = truncation;
  return s;
}

double t_dist(std::int64_t k) {
  return std::acosh(1.0 + static_cast<double>(k) * k / 2.0);
}

std::vector<double> t_orbit_dists(std::int64_t kmax) {
  std::vector<double> d{0.0};
  for (std::int64_t k = 1; k <= kmax; ++k) {
    d.push_back(t_dist(k));
    d.push_back(t_dist(k));
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

TEST_CASE("poincare_partial: singleton, parabolic tail, free-group divergence") {
  const std::vector<double> singleton{0.0};
  const SeriesEstimate one = poincare_partial(singleton, 2.0);
  CHECK(one.total == doctest::Approx(1.0));

  // <T> at s = 1: terms ~ n^-2, S_100 vs S_200 differ by < 0.05
  const auto dists = t_orbit_dists(4000);
  const SeriesEstimate pt = poincare_partial(dists, 1.0);
  double s100 = 0.0, s200 = 0.0;
  for (const auto& [n, v] : pt.checkpoints) {
    if (n == 128) s100 = v;
    if (n == 256) s200 = v;
  }
  CHECK(s200 - s100 < 0.05);
  CHECK(pt.verdict == Verdict::converging);

  // F(a,b) word metric at s = log 3: linear partial sums, diverging
  const ModelSpace t = build_cusped_cayley(free2_spec());
  const OrbitIndex orbit = enumerate_orbit(t, 12.0);
  const SeriesEstimate fr = poincare_partial(orbit.dists, std::log(3.0));
  CHECK(fr.verdict == Verdict::diverging);
  CHECK(fr.shell_linear);

  // geometric domination at s = delta + 1
  const SeriesEstimate conv = poincare_partial(orbit.dists, std::log(3.0) + 1.0);
  CHECK(conv.verdict == Verdict::converging);

  // empty series
  const SeriesEstimate empty = poincare_partial(std::vector<double>{}, 1.0);
  CHECK(empty.total == 0.0);
  CHECK(empty.verdict == Verdict::converging);

  // partial sums are nondecreasing
  for (std::size_t i = 1; i < pt.checkpoints.size(); ++i)
    CHECK(pt.checkpoints[i].second >= pt.checkpoints[i - 1].second);
}

TEST_CASE("critical_exponent: free group log 3, PSL(2,Z) value 1, degenerate") {
  const ModelSpace t = build_cusped_cayley(free2_spec());
  const OrbitIndex orbit = enumerate_orbit(t, 12.0);
  const GrowthTable balls = orbit_growth_table(t, orbit, t.identity(), kInf, 0, 12, 0.0);
  const ExponentEstimate est = critical_exponent(balls, 5, 12);
  CHECK(est.delta_hat == doctest::Approx(std::log(3.0)).epsilon(0.01));

  const ModelSpace m = build_half_plane(psl2z_spec());
  const OrbitIndex horbit = enumerate_orbit(m, 13.0);
  const GrowthTable hballs = orbit_growth_table(m, horbit, m.identity(), kInf, 0, 12, 0.0);
  const ExponentEstimate hest = critical_exponent(hballs, 6, 12);
  CHECK(hest.delta_hat > 0.95);
  CHECK(hest.delta_hat < 1.05);

  // degenerate: constant table fits slope 0
  GrowthTable flat;
  flat.kind = GrowthTable::Kind::orbit;
  for (int n = 0; n <= 5; ++n) flat.rows.push_back({static_cast<double>(n), 1, 1.0});
  CHECK(critical_exponent(flat, 0, 5).delta_hat == doctest::Approx(0.0));

  GrowthTable tiny;
  tiny.rows.push_back({0.0, 1, 1.0});
  CHECK_THROWS_AS(critical_exponent(tiny, 0, 5), FitError);
}

TEST_CASE("divergence_diagnostic: heuristic verdicts") {
  const ModelSpace t = build_cusped_cayley(free2_spec());
  const OrbitIndex orbit = enumerate_orbit(t, 12.0);
  CHECK(divergence_diagnostic(orbit.dists, std::log(3.0)).verdict == Verdict::diverging);

  const auto dists = t_orbit_dists(4000);
  CHECK(divergence_diagnostic(dists, 1.0).verdict == Verdict::converging);
  CHECK(divergence_diagnostic(dists, 2.0).verdict == Verdict::converging);
}

TEST_CASE("dop_audit: PSL(2,Z) numbers and vacuous case") {
  const ModelSpace m = build_half_plane(psl2z_spec());
  const DopReport report = dop_audit(m, 1.0, DopParams{1.0, 4096, 4.0, 12.0, 0.05});
  REQUIRE(report.classes.size() == 1);
  const DopClassReport& c = report.classes[0];

  CHECK(c.delta_p == doctest::Approx(0.5).epsilon(0.1));
  CHECK(c.delta_p > 0.45);
  CHECK(c.delta_p < 0.55);
  CHECK(c.pgp);
  CHECK(c.pcp.verdict == Verdict::converging);
  CHECK(c.dop.verdict == Verdict::converging);

  // frozen stabilization profile at s = 1 (regression values)
  const auto stab = c.dop.stabilization();
  for (const auto& [n, diff] : stab) {
    if (n == 128) CHECK(diff == doctest::Approx(0.1417).epsilon(0.05));
    if (n == 512) CHECK(diff == doctest::Approx(0.0468).epsilon(0.05));
  }
  CHECK(c.stabilized_from == 512);

  // double-sum dual form within [1/3, 3]
  CHECK(c.agreement_ratio > 1.0 / 3.0);
  CHECK(c.agreement_ratio < 3.0);

  // PGP => PCP converging on the shipped config
  CHECK((c.pgp ? c.pcp.verdict == Verdict::converging : true));

  GroupSpec cocompact = psl2z_spec();
  cocompact.parabolics.clear();
  const ModelSpace mc = build_half_plane(cocompact);
  const DopReport vac = dop_audit(mc, 1.0);
  CHECK(vac.vacuous);
  CHECK(vac.classes.empty());

  // PCP series bounded by the DOP series termwise once d >= 1
  const auto tail = t_orbit_dists(2000);
  CHECK(poincare_partial(tail, 1.0, 1.0, false).total <=
        poincare_partial(tail, 1.0, 1.0, true).total + 1e-12);
}

TEST_CASE("dop evaluation point: independent of the basepoint choice") {
  // the weighted parabolic sum does not depend on the basepoint; evaluated at
  // the foot of the class representative, a rebuilt model gives the same sums.
  const ModelSpace m1 = build_half_plane(psl2z_spec());
  GroupSpec moved = psl2z_spec();
  moved.basepoint = std::complex<double>(0.3, 1.7);
  const ModelSpace m2 = build_half_plane(moved);
  const DopReport r1 = dop_audit(m1, 1.0, DopParams{1.0, 1024, 4.0, 10.0, 0.05});
  const DopReport r2 = dop_audit(m2, 1.0, DopParams{1.0, 1024, 4.0, 10.0, 0.05});
  CHECK(r1.classes[0].linear_sum == doctest::Approx(r2.classes[0].linear_sum).epsilon(1e-9));
  CHECK(r1.classes[0].pgp == r2.classes[0].pgp);
}

TEST_CASE("s_series: brute-force oracle, monotone in R and s") {
  const ModelSpace m = build_half_plane(psl2z_spec());
  const HoroballRef rep = class_representative(m, 0);
  const Point o = m.basepoint();

  // independent brute-force oracle for S_Y(o, o, 2) at s = 1
  double oracle = 0.0;
  for (std::int64_t k = -200000; k <= 200000; ++k) {
    const double d = t_dist(k);
    if (d >= 2.0) oracle += std::exp(-d);
  }
  const SeriesEstimate sy = s_series(m, rep, o, o, 2.0, 1.0);
  CHECK(sy.total == doctest::Approx(oracle).epsilon(1e-9));

  // nonincreasing in R; beyond every enumerated distance: empty
  double prev = kInf;
  for (double big_r : {0.0, 1.0, 2.0, 4.0, 8.0}) {
    const double v = s_series(m, rep, o, o, big_r, 1.0).total;
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
  CHECK(s_series(m, rep, o, o, 50.0, 1.0).total == 0.0);

  // termwise monotone in s
  CHECK(s_series(m, rep, o, o, 2.0, 1.2).total <= sy.total);
}

TEST_CASE("a_series: window sums and tail behavior") {
  const ModelSpace m = build_half_plane(psl2z_spec());
  const HoroballRef rep = class_representative(m, 0);
  const ParabolicOrbit orbit = parabolic_orbit(m, rep, m.basepoint(), 200000);

  double prev = kInf;
  for (double big_r : {1.0, 2.0, 3.0, 5.0}) {
    const double v = a_series(m, orbit, big_r, 1.0, 1.0).total;
    CHECK(v <= prev + 1e-12);
    CHECK(v > 0.0);
    prev = v;
  }
  CHECK(a_series(m, orbit, 100.0, 1.0, 1.0).total == 0.0);
}

TEST_CASE("conversion_check: ratio grid and conjugate pair") {
  const ModelSpace m = build_half_plane(psl2z_spec());
  const HoroballRef rep = class_representative(m, 0);
  const double grid[] = {2.0, 3.0, 4.0, 5.0};
  const GroupElement s_el = parse_element(m, "S");
  const ConversionReport report =
      conversion_check(m, rep, m.basepoint(), grid, 1.0, 1.0, &s_el);

  REQUIRE(report.rows.size() == 4);
  for (const auto& row : report.rows) {
    CHECK_FALSE(row.skipped);
    CHECK(row.ratio > 1.0 / 5.0);
    CHECK(row.ratio < 5.0);
    // frozen band from the first validated run: 0.52 .. 0.60
    CHECK(row.ratio == doctest::Approx(0.56).epsilon(0.15));
  }
  CHECK(report.conjugate_checked);
  CHECK(report.conjugate_holds);
  CHECK(report.K > 0.0);

  // R beyond the enumerated tail: both sides zero, row skipped
  const double far_grid[] = {60.0};
  const ConversionReport far = conversion_check(m, rep, m.basepoint(), far_grid, 1.0, 1.0);
  CHECK(far.rows[0].skipped);
}

TEST_CASE("basepoint robustness: exponent at o and at 2i within 0.05") {
  const ModelSpace m = build_half_plane(psl2z_spec());
  const OrbitIndex at_i = enumerate_orbit(m, 13.0);
  const GrowthTable balls_i = orbit_growth_table(m, at_i, m.identity(), kInf, 0, 12, 0.0);
  const double d_i = critical_exponent(balls_i, 6, 12).delta_hat;

  const Point o2{Backend::half_plane, {0.0, 2.0}, -1};
  const OrbitIndex at_2i = enumerate_orbit(m, 11.5, EnumStrategy::frobenius, &o2);
  GrowthTable balls_2i;
  balls_2i.kind = GrowthTable::Kind::orbit;
  for (int n = 0; n <= 11; ++n) {
    const auto c = static_cast<std::int64_t>(at_2i.lower(std::nextafter(double(n), kInf)));
    balls_2i.rows.push_back({static_cast<double>(n), c, 0.0});
  }
  const double d_2i = critical_exponent(balls_2i, 6, 11).delta_hat;
  CHECK(std::abs(d_i - d_2i) < 0.05);
}

TEST_CASE("dop_audit on the cusped Cayley model") {
  GroupSpec s;
  s.model = Backend::cusped_cayley;
  s.generators = {{"a", std::nullopt, 0}, {"b", std::nullopt, 0}};
  s.parabolics = {{"a"}};
  s.max_depth = 5;
  s.truncation_radius = 9.0;
  const ModelSpace m = build_cusped_cayley(s);
  const OrbitIndex orbit = enumerate_orbit(m, 9.0);
  const GrowthTable balls = orbit_growth_table(m, orbit, m.identity(), kInf, 0, 8, 0.0);
  const double delta_g = critical_exponent(balls, 3, 8).delta_hat;

  const DopReport report = dop_audit(m, delta_g, DopParams{1.0, 2048, 3.0, 10.0, 0.05});
  REQUIRE(report.classes.size() == 1);
  const DopClassReport& c = report.classes[0];
  CHECK(c.delta_p < delta_g);  // PGP on this spec
  CHECK(c.pgp);
  CHECK(c.dop.verdict == Verdict::converging);
  // stabilizes well before N = 128 here
  CHECK(c.stabilized_from >= 0);
  CHECK(c.stabilized_from <= 128);
  CHECK(c.agreement_ratio > 1.0 / 3.0);
  CHECK(c.agreement_ratio < 3.0);
}
