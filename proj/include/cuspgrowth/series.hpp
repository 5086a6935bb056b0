#ifndef CUSPGROWTH_SERIES_HPP
#define CUSPGROWTH_SERIES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cuspgrowth/enumerate.hpp"

namespace growth {

enum class Verdict { converging, diverging, inconclusive };
const char* verdict_name(Verdict v);

// Partial sums of sum exp(-s d) (optionally weighted by d) over a set of
// enumerated distances, with tail diagnostics. All verdicts are labeled
// heuristics: finite data cannot decide convergence.
struct SeriesEstimate {
  double s = 0.0;
  double cutoff_R = 0.0;
  bool linear_weight = false;
  std::int64_t terms = 0;
  double total = 0.0;
  std::vector<std::pair<std::int64_t, double>> checkpoints;  // (N, S_N), N = 1, 2, 4, ...
  double tail_slope = 0.0;     // log(term) vs log(index) over the last half
  double tail_residual = 0.0;
  bool shell_linear = false;   // unit-radius shell sums stopped decaying
  Verdict verdict = Verdict::inconclusive;

  // |S_2N - S_N| for each checkpoint with 2N recorded
  std::vector<std::pair<std::int64_t, double>> stabilization() const;
  // first checkpoint N from which every later |S_2N - S_N| < tol; -1 if none
  std::int64_t stabilized_from(double tol) const;
};

// `sorted_dists` ascending; terms with d >= cutoff_R enter the sum.
SeriesEstimate poincare_partial(std::span<const double> sorted_dists, double s,
                                double cutoff_R = 0.0, bool linear_weight = false);

struct ExponentEstimate {
  double delta_hat = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
  std::vector<std::pair<double, double>> per_n;  // (n, log #N(o,n) / n)
  double residual = 0.0;
};

// Least-squares slope of log #N(o,n) over the window of a cumulative
// (delta = inf) orbit table.
ExponentEstimate critical_exponent(const GrowthTable& ball_table, double n_lo, double n_hi);

SeriesEstimate divergence_diagnostic(std::span<const double> sorted_dists, double delta_hat);

// ---- DOP / PGP / PCP ------------------------------------------------------

struct DopParams {
  double delta_width = 1.0;
  std::int64_t exponent_cap = 2048;
  double fit_lo = 4.0, fit_hi = 10.0;  // window for the parabolic exponent
  double stab_tol = 0.05;
};

struct DopClassReport {
  int orbit_class = 0;
  std::string parabolic_name;
  double delta_p = 0.0;
  double delta_p_residual = 0.0;
  bool pgp = false;                 // delta_g > delta_p
  SeriesEstimate pcp;               // sum exp(-delta_g d)
  SeriesEstimate dop;               // sum d exp(-delta_g d)
  std::int64_t stabilized_from = -1;
  bool stable_from_128 = false;     // every checkpointed N >= 128 below tol
  double linear_sum = 0.0;          // sum d exp(-delta_g d)
  double double_sum = 0.0;          // sum_{j>=1} sum_{m>=j} #A_P(v,m,D) exp(-delta_g m)
  double agreement_ratio = 0.0;     // double_sum / linear_sum
};

struct DopReport {
  double delta_g = 0.0;
  DopParams params;
  bool vacuous = false;  // no parabolic classes declared
  std::vector<DopClassReport> classes;
};

DopReport dop_audit(const ModelSpace& m, double delta_g, const DopParams& params = {});

// ---- partial sums S_Y and A_Y ---------------------------------------------

// S_Y(z, w, R) = sum over h in G_Y with d(z, h w) >= R of exp(-s d(z, h w))
SeriesEstimate s_series(const ModelSpace& m, const HoroballRef& y, const Point& z,
                        const Point& w, double R, double s, std::int64_t exponent_cap = 200000);

// A_Y(z, R, D) = sum over integers n >= R of #A_Y(z, n, D) exp(-s n)
SeriesEstimate a_series(const ModelSpace& m, const ParabolicOrbit& orbit, double R, double delta,
                        double s);

struct ConversionReport {
  double s = 0.0, delta = 1.0;
  struct Row {
    double R;
    double s_value;   // S_Y(o, o, R - delta)
    double a_value;   // A_Y(o, R, delta)
    double ratio;
    bool skipped;
  };
  std::vector<Row> rows;
  double ratio_min = 0.0, ratio_max = 0.0;

  // conjugate-pair (U = g V) shifted-window comparison
  bool conjugate_checked = false;
  double K = 0.0;
  double c_mult = 0.0;
  bool conjugate_holds = false;
};

ConversionReport conversion_check(const ModelSpace& m, const HoroballRef& y, const Point& o,
                                  std::span<const double> r_grid, double delta, double s,
                                  const GroupElement* conjugator = nullptr, double c_mult = 3.0,
                                  std::int64_t exponent_cap = 200000);

}  // namespace growth

#endif
