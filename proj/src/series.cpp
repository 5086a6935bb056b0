#include "cuspgrowth/series.hpp"

#include <algorithm>
#include <cmath>

namespace growth {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::converging: return "converging";
    case Verdict::diverging: return "diverging";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<std::pair<std::int64_t, double>> SeriesEstimate::stabilization() const {
  std::vector<std::pair<std::int64_t, double>> out;
  for (std::size_t i = 0; i + 1 < checkpoints.size(); ++i) {
    const auto& [n, sn] = checkpoints[i];
    // checkpoints are consecutive powers of two, so the next entry is 2N
    out.emplace_back(n, checkpoints[i + 1].second - sn);
  }
  return out;
}

std::int64_t SeriesEstimate::stabilized_from(double tol) const {
  const auto diffs = stabilization();
  std::int64_t from = -1;
  for (const auto& [n, d] : diffs) {
    if (std::abs(d) < tol) {
      if (from < 0) from = n;
    } else {
      from = -1;
    }
  }
  return from;
}

SeriesEstimate poincare_partial(std::span<const double> sorted_dists, double s, double cutoff_R,
                                bool linear_weight) {
  if (s < 0.0) throw UsageError("poincare_partial: s must be >= 0");
  SeriesEstimate est;
  est.s = s;
  est.cutoff_R = cutoff_R;
  est.linear_weight = linear_weight;

  std::vector<double> terms;
  terms.reserve(sorted_dists.size());
  for (double d : sorted_dists) {
    if (d < cutoff_R) continue;
    const double t = std::exp(-s * d) * (linear_weight ? d : 1.0);
    terms.push_back(t);
  }
  est.terms = static_cast<std::int64_t>(terms.size());
  if (terms.empty()) {
    est.verdict = Verdict::converging;  // empty sum
    return est;
  }

  double acc = 0.0;
  std::int64_t next_cp = 1;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    acc += terms[i];
    if (static_cast<std::int64_t>(i + 1) == next_cp) {
      est.checkpoints.emplace_back(next_cp, acc);
      next_cp *= 2;
    }
  }
  est.total = acc;
  if (est.checkpoints.empty() || est.checkpoints.back().first != est.terms)
    est.checkpoints.emplace_back(est.terms, acc);

  // Tail slope of log(term) against log(index), sampled on a geometric
  // index grid over the last three octaves. A plain "last half of the
  // ranks" window collapses on integer metrics, where one sphere can fill
  // the whole half with a constant term value.
  {
    std::vector<double> xs, ys;
    const auto total = static_cast<double>(terms.size());
    const std::size_t lo = static_cast<std::size_t>(std::max(4.0, total / 8.0));
    double pos = static_cast<double>(lo);
    while (pos <= total) {
      const auto i = static_cast<std::size_t>(pos) - 1;
      if (terms[i] > 0.0) {
        xs.push_back(std::log(static_cast<double>(i + 1)));
        ys.push_back(std::log(terms[i]));
      }
      pos = std::max(pos * 1.05, pos + 1.0);
    }
    if (xs.size() >= 4) {
      try {
        const LineFit fit = least_squares(xs, ys);
        est.tail_slope = fit.slope;
        est.tail_residual = fit.rms_residual;
      } catch (const FitError&) {
        est.tail_slope = 0.0;
      }
    }
  }

  // unit-radius shell sums: "partial sums grow at least linearly" when the
  // shell sums in the last quarter of the radius range stop decaying
  {
    std::size_t base = 0;
    while (base < sorted_dists.size() && sorted_dists[base] < cutoff_R) ++base;
    const double d_lo = sorted_dists[base];
    const double d_hi = sorted_dists[sorted_dists.size() - 1];
    const int m_lo = static_cast<int>(std::floor(d_lo));
    const int m_hi = static_cast<int>(std::floor(d_hi));
    if (m_hi - m_lo + 1 >= 8) {
      std::vector<double> shell(static_cast<std::size_t>(m_hi - m_lo + 1), 0.0);
      std::size_t ti = 0;
      for (std::size_t i = base; i < sorted_dists.size(); ++i, ++ti) {
        const int mshell = static_cast<int>(std::floor(sorted_dists[i]));
        shell[static_cast<std::size_t>(mshell - m_lo)] += terms[ti];
      }
      const std::size_t n = shell.size();
      const std::size_t q = n / 4;
      double prev = 0.0, last = 0.0;
      for (std::size_t i = n - 2 * q; i < n - q; ++i) prev += shell[i];
      for (std::size_t i = n - q; i < n; ++i) last += shell[i];
      prev /= static_cast<double>(q);
      last /= static_cast<double>(q);
      est.shell_linear = last > 1e-12 && last >= 0.5 * prev;
    }
  }

  if (est.tail_slope < -1.1 && !est.shell_linear)
    est.verdict = Verdict::converging;
  else if (est.tail_slope > -0.9 || est.shell_linear)
    est.verdict = Verdict::diverging;
  else
    est.verdict = Verdict::inconclusive;
  return est;
}

ExponentEstimate critical_exponent(const GrowthTable& ball_table, double n_lo, double n_hi) {
  ExponentEstimate est;
  est.window_lo = n_lo;
  est.window_hi = n_hi;
  std::vector<double> xs, ys;
  for (const auto& row : ball_table.rows) {
    if (row.n < n_lo - 1e-9 || row.n > n_hi + 1e-9 || row.count <= 0) continue;
    xs.push_back(row.n);
    ys.push_back(std::log(static_cast<double>(row.count)));
    if (row.n > 0) est.per_n.emplace_back(row.n, ys.back() / row.n);
  }
  if (xs.size() < 4) throw FitError("critical_exponent: window holds fewer than 4 usable rows");
  const LineFit fit = least_squares(xs, ys);
  est.delta_hat = std::max(0.0, fit.slope);
  est.residual = fit.rms_residual;
  return est;
}

SeriesEstimate divergence_diagnostic(std::span<const double> sorted_dists, double delta_hat) {
  return poincare_partial(sorted_dists, delta_hat, 0.0, false);
}

DopReport dop_audit(const ModelSpace& m, double delta_g, const DopParams& params) {
  DopReport report;
  report.delta_g = delta_g;
  report.params = params;
  if (m.spec.parabolics.empty()) {
    report.vacuous = true;  // DOP holds vacuously; flagged for the caller
    return report;
  }
  for (int cls = 0; cls < static_cast<int>(m.spec.parabolics.size()); ++cls) {
    DopClassReport r;
    r.orbit_class = cls;
    r.parabolic_name = m.spec.parabolics[static_cast<std::size_t>(cls)][0];
    const HoroballRef rep = class_representative(m, cls);
    const Point v = foot(m, rep, m.basepoint());
    const ParabolicOrbit orbit = parabolic_orbit(m, rep, v, params.exponent_cap);

    // parabolic exponent over ball counts
    {
      std::vector<double> xs, ys;
      for (int n = static_cast<int>(params.fit_lo); n <= static_cast<int>(params.fit_hi); ++n) {
        const auto cnt = static_cast<double>(orbit.lower(std::nextafter(static_cast<double>(n), kInf)));
        if (cnt > 0) {
          xs.push_back(n);
          ys.push_back(std::log(cnt));
        }
      }
      if (xs.size() < 4) throw FitError("dop_audit: parabolic fit window too small");
      const LineFit fit = least_squares(xs, ys);
      r.delta_p = std::max(0.0, fit.slope);
      r.delta_p_residual = fit.rms_residual;
    }
    r.pgp = delta_g > r.delta_p;
    r.pcp = poincare_partial(orbit.dists, delta_g, 0.0, false);
    r.dop = poincare_partial(orbit.dists, delta_g, 0.0, true);
    r.stabilized_from = r.dop.stabilized_from(params.stab_tol);
    r.stable_from_128 = r.stabilized_from >= 0 && r.stabilized_from <= 128 &&
                        r.dop.checkpoints.size() >= 2 && r.dop.terms >= 256;
    r.linear_sum = r.dop.total;

    // dual double-sum form: sum_{j>=1} sum_{m>=j} a_m = sum_m m a_m,
    // a_m = #A_P(v, m, Delta) exp(-delta_g m), m on the integer grid
    {
      const int m_cap = static_cast<int>(std::floor(orbit.radius - params.delta_width));
      double dbl = 0.0;
      for (int mm = 1; mm <= m_cap; ++mm) {
        const auto am = static_cast<double>(
            parabolic_annulus_count(orbit, static_cast<double>(mm), params.delta_width));
        dbl += mm * am * std::exp(-delta_g * mm);
      }
      r.double_sum = dbl;
      r.agreement_ratio = r.linear_sum > 0 ? r.double_sum / r.linear_sum : 0.0;
    }
    report.classes.push_back(std::move(r));
  }
  return report;
}

// ---- S_Y and A_Y -----------------------------------------------------------

SeriesEstimate s_series(const ModelSpace& m, const HoroballRef& y, const Point& z, const Point& w,
                        double R, double s, std::int64_t exponent_cap) {
  require_same_backend(m, z, "s_series");
  require_same_backend(m, w, "s_series");
  std::vector<double> dists;
  if (m.backend == Backend::half_plane) {
    const Mat2 p0 = m.hp.parabolic_gens.at(static_cast<std::size_t>(y.orbit_class)).at(0);
    const double tau = static_cast<double>(p0.b);
    const Cplx zz = mobius(mat_inv(y.translate.m), z.z);
    const Cplx ww = mobius(mat_inv(y.translate.m), w.z);
    for (std::int64_t k = -exponent_cap; k <= exponent_cap; ++k) {
      const double dx = ww.real() + static_cast<double>(k) * tau - zz.real();
      const double dy = ww.imag() - zz.imag();
      dists.push_back(acosh_stable(1.0 + (dx * dx + dy * dy) / (2.0 * zz.imag() * ww.imag())));
    }
  } else {
    if (!(z.vertex == w.vertex))
      throw UsageError("s_series (cusped_cayley): supported for z = w at the basepoint or foot");
    const ParabolicOrbit orbit = parabolic_orbit(m, y, z, std::min<std::int64_t>(exponent_cap, 8192));
    dists = orbit.dists;
  }
  std::sort(dists.begin(), dists.end());
  return poincare_partial(dists, s, R, false);
}

SeriesEstimate a_series(const ModelSpace& m, const ParabolicOrbit& orbit, double R, double delta,
                        double s) {
  (void)m;
  if (delta <= 0.0) throw UsageError("a_series: delta must be positive");
  SeriesEstimate est;
  est.s = s;
  est.cutoff_R = R;
  const int n_lo = static_cast<int>(std::ceil(R));
  const int n_hi = static_cast<int>(std::floor(orbit.radius - delta));
  double acc = 0.0;
  std::int64_t cp = 1, idx = 0;
  for (int n = n_lo; n <= n_hi; ++n) {
    const auto cnt =
        static_cast<double>(parabolic_annulus_count(orbit, static_cast<double>(n), delta));
    acc += cnt * std::exp(-s * n);
    ++idx;
    if (idx == cp) {
      est.checkpoints.emplace_back(cp, acc);
      cp *= 2;
    }
  }
  est.terms = idx;
  est.total = acc;
  est.verdict = Verdict::inconclusive;
  return est;
}

ConversionReport conversion_check(const ModelSpace& m, const HoroballRef& y, const Point& o,
                                  std::span<const double> r_grid, double delta, double s,
                                  const GroupElement* conjugator, double c_mult,
                                  std::int64_t exponent_cap) {
  ConversionReport report;
  report.s = s;
  report.delta = delta;
  const ParabolicOrbit orbit =
      parabolic_orbit(m, y, o, m.backend == Backend::half_plane ? exponent_cap : 4096);
  double rmin = kInf, rmax = 0.0;
  for (double R : r_grid) {
    ConversionReport::Row row{R, 0.0, 0.0, 0.0, false};
    row.s_value = s_series(m, y, o, o, R - delta, s, exponent_cap).total;
    row.a_value = a_series(m, orbit, R, delta, s).total;
    if (row.a_value <= 1e-15) {
      row.skipped = true;  // empty tail at this R
    } else {
      row.ratio = row.s_value / row.a_value;
      rmin = std::min(rmin, row.ratio);
      rmax = std::max(rmax, row.ratio);
    }
    report.rows.push_back(row);
  }
  report.ratio_min = rmin;
  report.ratio_max = rmax;

  if (conjugator != nullptr && m.backend == Backend::half_plane) {
    // conjugate-pair comparison: U = gV, x in N_r(U), y0 in N_r(V); A_V(y0, R+K) and
    // A_V(y0, R-K) should bracket A_U(x, R) up to the delta-dependent
    // multiplier. x is taken one unit below the horosphere.
    report.conjugate_checked = true;
    const double r_off = 1.0;
    HoroballRef u = y;
    u.translate = mul(m, *conjugator, y.translate);
    const Cplx below(0.0, m.hp.t * std::exp(-r_off));
    const Point x{Backend::half_plane, mobius(conjugator->m, below), -1};
    const ParabolicOrbit orbit_u = parabolic_orbit(m, u, x, exponent_cap);
    report.K = std::ceil(2.0 * (m.constants.cocompactness_M + r_off));
    report.c_mult = c_mult;
    bool holds = true;
    for (double R : r_grid) {
      const double au = a_series(m, orbit_u, R, delta, s).total;
      const double av_hi = a_series(m, orbit, R + report.K, delta, s).total;
      const double av_lo = a_series(m, orbit, std::max(0.0, R - report.K), delta, s).total;
      if (!(av_hi <= c_mult * au && au <= c_mult * av_lo)) holds = false;
    }
    report.conjugate_holds = holds;
  }
  return report;
}

}  // namespace growth
