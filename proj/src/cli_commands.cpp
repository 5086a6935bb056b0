#include "cuspgrowth/cli_commands.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "cuspgrowth/boundary.hpp"
#include "cuspgrowth/report.hpp"

namespace growth {

namespace {

struct Windows {
  int lo, hi;        // exponent fit / ratio window
  double p_lo, p_hi; // parabolic fit window
};

Windows default_windows(const ModelSpace& m, const RunConfig& cfg) {
  const int tr = static_cast<int>(std::floor(m.truncation()));
  Windows w{};
  if (m.backend == Backend::half_plane) {
    w.lo = std::max(2, tr / 2 - 1);
    w.hi = tr - 2;
    w.p_lo = 4;
    w.p_hi = 12;
  } else {
    w.lo = std::max(2, tr / 2 - 1);
    w.hi = tr - 1;
    w.p_lo = 3;
    w.p_hi = std::min(10, 2 * m.cg.max_depth);
    if (w.p_hi < w.p_lo + 3) w.p_hi = w.p_lo + 3;
  }
  if (cfg.window_lo >= 0) w.lo = cfg.window_lo;
  if (cfg.window_hi >= 0) w.hi = cfg.window_hi;
  return w;
}

std::string param_echo(const ModelSpace& m, const RunConfig& cfg, const Windows& w) {
  std::ostringstream ss;
  ss << "{'spec':'" << cfg.spec_path << "','command':'" << cfg.command << "','seed':" << cfg.seed
     << ",'truncation':" << format_double(m.truncation()) << ",'delta':"
     << format_double(cfg.delta_width) << ",'r':" << format_double(cfg.shadow_r)
     << ",'eps':" << format_double(cfg.eps) << ",'R':" << format_double(cfg.big_r)
     << ",'T':" << format_double(cfg.cutoff_t) << ",'window':[" << w.lo << ',' << w.hi
     << "],'ceiling':" << format_double(cfg.ceiling) << "}";
  return ss.str();
}

void emit(const RunConfig& cfg, const std::string& content) {
  if (cfg.out_path.empty())
    std::cout << content;
  else
    atomic_write(cfg.out_path, content);
}

OrbitIndex enumerate_default(const ModelSpace& m, double radius) {
  return enumerate_orbit(m, radius, EnumStrategy::frobenius);
}

ExponentEstimate fit_exponent(const ModelSpace& m, const OrbitIndex& orbit, const Windows& w) {
  const GrowthTable balls =
      orbit_growth_table(m, orbit, m.identity(), kInf, 0, w.hi, 0.0);
  return critical_exponent(balls, w.lo, w.hi);
}

double table_ratio(const GrowthTable& t) {
  const double hi = t.max_normalized();
  const double lo = t.min_normalized();
  if (!(hi > 0.0) || !std::isfinite(lo))
    throw UsageError("growth window holds no positive counts");
  return hi / lo;
}

std::vector<GroupElement> parse_centers(const ModelSpace& m, const RunConfig& cfg) {
  std::vector<GroupElement> out;
  if (!cfg.centers.empty()) {
    std::stringstream ss(cfg.centers);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_element(m, tok));
    return out;
  }
  out.push_back(m.identity());
  out.push_back(generator_element(m, 0));
  if (m.spec.generators.size() > 1)
    out.push_back(mul(m, generator_element(m, 1), generator_element(m, 0)));
  return out;
}

// ---- growth ---------------------------------------------------------------

int cmd_growth(const ModelSpace& m, const RunConfig& cfg) {
  const Windows w = default_windows(m, cfg);
  GrowthTable table;
  if (cfg.kind == "horoball") {
    if (m.horoball_count() == 0) {
      std::cerr << "warning: no horoball system in this model (cocompact spec); empty table\n";
      table.kind = GrowthTable::Kind::horoball;
      table.delta_width = cfg.delta_width;
    } else {
      const OrbitIndex orbit = enumerate_default(m, m.truncation());
      const double dh = fit_exponent(m, orbit, w).delta_hat;
      table = horoball_growth_table(m, cfg.delta_width, 0,
                                    static_cast<int>(std::floor(m.truncation() - cfg.delta_width)),
                                    dh);
    }
  } else if (cfg.kind == "orbit") {
    const OrbitIndex orbit = enumerate_default(m, m.truncation());
    const double dh = fit_exponent(m, orbit, w).delta_hat;
    const GroupElement center = parse_element(m, cfg.center);
    const double dg = distance(m, orbit.origin, apply(m, center, orbit.origin));
    const int hi = static_cast<int>(std::floor(m.truncation() - dg - cfg.delta_width));
    table = orbit_growth_table(m, orbit, center, cfg.delta_width, 0, hi, dh);
  } else if (cfg.kind == "parabolic") {
    const OrbitIndex orbit = enumerate_default(m, m.truncation());
    const double dh = fit_exponent(m, orbit, w).delta_hat;
    const HoroballRef rep = class_representative(m, 0);
    const ParabolicOrbit porbit = parabolic_orbit(m, rep, foot(m, rep, m.basepoint()));
    table = parabolic_growth_table(m, porbit, cfg.delta_width, 0,
                                   static_cast<int>(std::floor(porbit.radius - cfg.delta_width)),
                                   dh);
  } else if (cfg.kind == "cone" || cfg.kind == "partial_cone") {
    const OrbitIndex orbit = enumerate_default(m, m.truncation());
    const double dh = fit_exponent(m, orbit, w).delta_hat;
    const GroupElement center = parse_element(m, cfg.center);
    TransitionParams params{cfg.eps, cfg.big_r, cfg.shadow_r, cfg.delta_width};
    const ConeScan scan = classify_cones(m, orbit, center, params, cfg.kind == "partial_cone");
    const int hi = static_cast<int>(
        std::floor(m.truncation() - scan.center_dist - cfg.delta_width));
    table = cone_growth_table(m, orbit, scan, cfg.delta_width, 0, hi, dh,
                              cfg.kind == "partial_cone");
    table.r = cfg.shadow_r;
    table.eps = cfg.eps;
    table.big_r = cfg.big_r;
  } else {
    throw UsageError("unknown growth kind: " + cfg.kind);
  }
  if (cfg.format == "csv")
    emit(cfg, growth_table_csv(table));
  else if (cfg.format == "json-like" || cfg.format == "json")
    emit(cfg, growth_table_json(table));
  else
    emit(cfg, growth_table_text(table));
  return 0;
}

// ---- exponent ---------------------------------------------------------------

int cmd_exponent(const ModelSpace& m, const RunConfig& cfg, std::vector<ReportRow>& rows) {
  const Windows w = default_windows(m, cfg);
  const std::string echo = param_echo(m, cfg, w);
  const OrbitIndex orbit = enumerate_default(m, m.truncation());
  const ExponentEstimate est = fit_exponent(m, orbit, w);
  rows.push_back({"exponent", echo, "delta_hat", est.delta_hat, "fitted"});
  rows.push_back({"exponent", echo, "residual", est.residual, "fitted"});
  rows.push_back({"exponent", echo, "window_lo", static_cast<double>(w.lo), "exact"});
  rows.push_back({"exponent", echo, "window_hi", static_cast<double>(w.hi), "exact"});
  for (const auto& [n, v] : est.per_n)
    rows.push_back({"exponent", echo, "log_count_over_n_" + format_double(n), v, "exact"});
  const SeriesEstimate div = divergence_diagnostic(
      std::span<const double>(orbit.dists.data(), orbit.size()), est.delta_hat);
  rows.push_back({"exponent", echo, "divergence_verdict_heuristic",
                  div.verdict == Verdict::diverging    ? 1.0
                  : div.verdict == Verdict::converging ? -1.0
                                                       : 0.0,
                  "sampled"});
  return 0;
}

// ---- dop -----------------------------------------------------------------

int cmd_dop(const ModelSpace& m, const RunConfig& cfg, std::vector<ReportRow>& rows) {
  const Windows w = default_windows(m, cfg);
  const std::string echo = param_echo(m, cfg, w);
  const OrbitIndex orbit = enumerate_default(m, m.truncation());
  const ExponentEstimate est = fit_exponent(m, orbit, w);
  DopParams params;
  params.delta_width = cfg.delta_width;
  params.fit_lo = w.p_lo;
  params.fit_hi = w.p_hi;
  const DopReport report = dop_audit(m, est.delta_hat, params);
  rows.push_back({"dop", echo, "delta_g", report.delta_g, "fitted"});
  rows.push_back({"dop", echo, "vacuous", report.vacuous ? 1.0 : 0.0, "exact"});
  for (const auto& c : report.classes) {
    const std::string p = "class" + std::to_string(c.orbit_class) + "_";
    rows.push_back({"dop", echo, p + "delta_p", c.delta_p, "fitted"});
    rows.push_back({"dop", echo, p + "delta_p_residual", c.delta_p_residual, "fitted"});
    rows.push_back({"dop", echo, p + "pgp", c.pgp ? 1.0 : 0.0, "fitted"});
    rows.push_back({"dop", echo, p + "pcp_total", c.pcp.total, "exact"});
    rows.push_back({"dop", echo, p + "pcp_converging",
                    c.pcp.verdict == Verdict::converging ? 1.0 : 0.0, "sampled"});
    rows.push_back({"dop", echo, p + "dop_total", c.dop.total, "exact"});
    rows.push_back({"dop", echo, p + "dop_converging",
                    c.dop.verdict == Verdict::converging ? 1.0 : 0.0, "sampled"});
    rows.push_back({"dop", echo, p + "stabilized_from_N",
                    static_cast<double>(c.stabilized_from), "exact"});
    rows.push_back({"dop", echo, p + "double_sum", c.double_sum, "exact"});
    rows.push_back({"dop", echo, p + "dual_form_ratio", c.agreement_ratio, "exact"});
  }
  return 0;
}

// ---- shadow audit -----------------------------------------------------------

int cmd_shadow_audit(const ModelSpace& m, const RunConfig& cfg, std::vector<ReportRow>& rows) {
  const Windows w = default_windows(m, cfg);
  const std::string echo = param_echo(m, cfg, w);
  const OrbitIndex orbit = enumerate_default(m, m.truncation());
  const ExponentEstimate est = fit_exponent(m, orbit, w);
  const double s = cfg.s_override > 0 ? cfg.s_override : 1.05 * est.delta_hat;
  const double band_lo = std::min(4.0, m.truncation() / 2.0 - 0.5);
  const double band_hi = std::min(8.0, m.truncation() - 2.0);
  Rng rng(cfg.seed);
  const std::size_t lo = orbit.lower(band_lo);
  const std::size_t hi = orbit.lower(band_hi);
  if (hi <= lo) throw UsageError("shadow-audit: empty sampling band");
  std::vector<std::size_t> sample;
  for (int i = 0; i < 100; ++i) sample.push_back(lo + rng.next_below(hi - lo));
  TransitionParams params{cfg.eps, cfg.big_r, cfg.shadow_r, cfg.delta_width};
  const ShadowAudit audit =
      shadow_lemma_audit(m, orbit, sample, params, s, cfg.cutoff_t, est.delta_hat);
  rows.push_back({"shadow-audit", echo, "s", s, "exact"});
  rows.push_back({"shadow-audit", echo, "samples", static_cast<double>(audit.rows.size()), "exact"});
  rows.push_back({"shadow-audit", echo, "plain_rho_min", audit.plain_min, "sampled"});
  rows.push_back({"shadow-audit", echo, "plain_rho_max", audit.plain_max, "sampled"});
  rows.push_back({"shadow-audit", echo, "plain_spread", audit.plain_spread, "sampled"});
  rows.push_back({"shadow-audit", echo, "partial_rho_min", audit.partial_min, "sampled"});
  rows.push_back({"shadow-audit", echo, "partial_rho_max", audit.partial_max, "sampled"});
  rows.push_back({"shadow-audit", echo, "partial_spread", audit.partial_spread, "sampled"});
  rows.push_back(
      {"shadow-audit", echo, "partial_le_plain", audit.partial_le_plain ? 1.0 : 0.0, "exact"});
  if (m.backend == Backend::half_plane && sample.size() >= 2) {
    // diagnostic boundary separation of the first two sampled directions
    const Cplx o = orbit.origin.z;
    const auto dir = [&](std::size_t i) {
      const auto& pk = orbit.mats[i];
      const auto [xi, at_inf] = ray_boundary_point(o, mobius(Mat2{pk.a, pk.b, pk.c, pk.d}, o));
      return at_inf ? boundary_point_infinity() : boundary_point(xi);
    };
    const double vis = visual_metric_estimate(m, dir(sample[0]), dir(sample[1]), 0.5);
    rows.push_back({"shadow-audit", echo, "visual_metric_a", 0.5, "exact"});
    rows.push_back({"shadow-audit", echo, "visual_rho_first_pair", vis, "sampled"});
  }
  return audit.plain_spread <= cfg.ceiling * 10.0 ? 0 : 1;
}

// ---- theorem audit ----------------------------------------------------------

struct RowStatus {
  std::string name;
  std::string status;  // consistent | inconsistent | inconclusive | vacuous
  std::string detail;
};

int cmd_theorem_audit(const ModelSpace& m, const RunConfig& cfg, std::vector<ReportRow>& rows,
                      std::string& text_out) {
  const Windows w = default_windows(m, cfg);
  const std::string echo = param_echo(m, cfg, w);
  std::vector<RowStatus> verdicts;
  OrbitIndex orbit;
  double delta_hat = 0.0;
  bool have_orbit = false;

  try {
    orbit = enumerate_default(m, m.truncation());
    const ExponentEstimate est = fit_exponent(m, orbit, w);
    delta_hat = est.delta_hat;
    have_orbit = true;
    rows.push_back({"theorem-audit", echo, "delta_hat", est.delta_hat, "fitted"});
    rows.push_back({"theorem-audit", echo, "residual", est.residual, "fitted"});
    const SeriesEstimate div = divergence_diagnostic(
        std::span<const double>(orbit.dists.data(), orbit.size()), delta_hat);
    rows.push_back({"theorem-audit", echo, "divergent_type_heuristic",
                    div.verdict == Verdict::diverging ? 1.0 : 0.0, "sampled"});
  } catch (const std::exception& e) {
    verdicts.push_back({"(setup)", "inconclusive", e.what()});
  }

  // condition (1): DOP
  try {
    if (!have_orbit) throw UsageError("no orbit enumeration");
    DopParams params;
    params.delta_width = cfg.delta_width;
    params.fit_lo = w.p_lo;
    params.fit_hi = w.p_hi;
    const DopReport report = dop_audit(m, delta_hat, params);
    if (report.vacuous) {
      verdicts.push_back({"(1) DOP condition", "vacuous", "no parabolic classes declared"});
      rows.push_back({"theorem-audit", echo, "cond1_dop_vacuous", 1.0, "exact"});
    } else {
      bool ok = true;
      std::ostringstream detail;
      for (const auto& c : report.classes) {
        const bool class_ok = c.dop.verdict == Verdict::converging &&
                              c.agreement_ratio >= 1.0 / 3.0 && c.agreement_ratio <= 3.0;
        ok = ok && class_ok;
        detail << "class " << c.orbit_class << ": dop=" << verdict_name(c.dop.verdict)
               << " dual_ratio=" << format_double(c.agreement_ratio)
               << " stabilized_from_N=" << c.stabilized_from << " pgp=" << (c.pgp ? 1 : 0)
               << " delta_p=" << format_double(c.delta_p) << "; ";
        const std::string p = "cond1_class" + std::to_string(c.orbit_class) + "_";
        rows.push_back({"theorem-audit", echo, p + "delta_p", c.delta_p, "fitted"});
        rows.push_back({"theorem-audit", echo, p + "dual_ratio", c.agreement_ratio, "exact"});
        rows.push_back({"theorem-audit", echo, p + "stabilized_from_N",
                        static_cast<double>(c.stabilized_from), "exact"});
      }
      verdicts.push_back({"(1) DOP condition", ok ? "consistent" : "inconsistent", detail.str()});
    }
  } catch (const std::exception& e) {
    verdicts.push_back({"(1) DOP condition", "inconclusive", e.what()});
  }

  // condition (2): orbit annuli
  try {
    if (!have_orbit) throw UsageError("no orbit enumeration");
    const GrowthTable t =
        orbit_growth_table(m, orbit, m.identity(), cfg.delta_width, w.lo, w.hi, delta_hat);
    const double ratio = table_ratio(t);
    rows.push_back({"theorem-audit", echo, "cond2_orbit_ratio", ratio, "exact"});
    verdicts.push_back({"(2) orbit growth", ratio <= cfg.ceiling ? "consistent" : "inconsistent",
                        "max/min normalized = " + format_double(ratio)});
  } catch (const std::exception& e) {
    verdicts.push_back({"(2) orbit growth", "inconclusive", e.what()});
  }

  // condition (3): cones and partial cones
  try {
    if (!have_orbit) throw UsageError("no orbit enumeration");
    const auto centers = parse_centers(m, cfg);
    TransitionParams params{cfg.eps, cfg.big_r, cfg.shadow_r, cfg.delta_width};
    bool ok = true;
    double worst = 0.0;
    std::ostringstream detail;
    for (const auto& c : centers) {
      const ConeScan scan = classify_cones(m, orbit, c, params, true);
      const int hi_c = std::min(
          w.hi, static_cast<int>(std::floor(m.truncation() - scan.center_dist - cfg.delta_width)));
      const GrowthTable cone_t =
          cone_growth_table(m, orbit, scan, cfg.delta_width, w.lo, hi_c, delta_hat, false);
      const GrowthTable pcone_t =
          cone_growth_table(m, orbit, scan, cfg.delta_width, w.lo, hi_c, delta_hat, true);
      const double r1 = table_ratio(cone_t);
      const double r2 = table_ratio(pcone_t);
      worst = std::max({worst, r1, r2});
      ok = ok && r1 <= cfg.ceiling && r2 <= cfg.ceiling;
      detail << element_to_string(m, c) << ": cone=" << format_double(r1)
             << " partial=" << format_double(r2) << "; ";
      const std::string p = "cond3_center_" + element_to_string(m, c);
      rows.push_back({"theorem-audit", echo, p + "_cone_ratio", r1, "exact"});
      rows.push_back({"theorem-audit", echo, p + "_partial_ratio", r2, "exact"});
    }
    verdicts.push_back({"(3) cone growth", ok ? "consistent" : "inconsistent", detail.str()});
  } catch (const std::exception& e) {
    verdicts.push_back({"(3) cone growth", "inconclusive", e.what()});
  }

  // condition (4): horoballs
  try {
    if (m.horoball_count() == 0) {
      verdicts.push_back({"(4) horoball growth", "vacuous", "no horoball system"});
    } else {
      const int hi_h =
          std::min(w.hi, static_cast<int>(std::floor(m.truncation() - cfg.delta_width)));
      const GrowthTable t = horoball_growth_table(m, cfg.delta_width, w.lo, hi_h, delta_hat);
      const double ratio = table_ratio(t);
      rows.push_back({"theorem-audit", echo, "cond4_horoball_ratio", ratio, "exact"});
      verdicts.push_back({"(4) horoball growth",
                          ratio <= cfg.ceiling ? "consistent" : "inconsistent",
                          "max/min normalized = " + format_double(ratio)});
    }
  } catch (const std::exception& e) {
    verdicts.push_back({"(4) horoball growth", "inconclusive", e.what()});
  }

  std::ostringstream text;
  text << "theorem audit: four-way growth equivalence (empirical, finite window)\n";
  text << "params " << echo << "\n\n";
  bool all_ok = true;
  for (const auto& v : verdicts) {
    text << v.name;
    for (std::size_t i = v.name.size(); i < 24; ++i) text << ' ';
    text << v.status << "  " << v.detail << "\n";
    if (v.status == "inconsistent" || v.status == "inconclusive") all_ok = false;
  }
  text << "\nverdicts are empirical: consistent-with / inconsistent-with on the computed window, "
          "never proofs\n";
  text_out = text.str();
  return all_ok ? 0 : 1;
}

}  // namespace

int run_command(const RunConfig& cfg) {
  ModelSpace model;
  try {
    const GroupSpec spec = GroupSpec::load(cfg.spec_path);
    model = build_model(spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    if (cfg.command == "growth") return cmd_growth(model, cfg);
    std::vector<ReportRow> rows;
    int status = 0;
    std::string theorem_text;
    if (cfg.command == "exponent")
      status = cmd_exponent(model, cfg, rows);
    else if (cfg.command == "dop")
      status = cmd_dop(model, cfg, rows);
    else if (cfg.command == "shadow-audit")
      status = cmd_shadow_audit(model, cfg, rows);
    else if (cfg.command == "theorem-audit")
      status = cmd_theorem_audit(model, cfg, rows, theorem_text);
    else {
      std::cerr << "error: unknown command: " << cfg.command << "\n";
      return 2;
    }
    std::string content;
    if (cfg.format == "csv")
      content = audit_rows_csv(rows);
    else if (cfg.format == "json-like" || cfg.format == "json")
      content = rows_as_json(rows);
    else
      content = cfg.command == "theorem-audit" ? theorem_text + "\n" + rows_as_text(rows)
                                               : rows_as_text(rows);
    emit(cfg, content);
    return status;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const TruncationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const FitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace growth
