#ifndef CUSPGROWTH_BOUNDARY_HPP
#define CUSPGROWTH_BOUNDARY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cuspgrowth/enumerate.hpp"
#include "cuspgrowth/series.hpp"

namespace growth {

// Boundary point: an extended-real tangency for the half-plane, or a far
// "proxy" vertex standing in for a ray endpoint on graphs (approximate,
// horizon-limited).
struct BoundaryPoint {
  Backend backend = Backend::half_plane;
  bool at_infinity = false;
  double xi = 0.0;
  std::int32_t proxy_vertex = -1;
  double proxy_dist = 0.0;
};

BoundaryPoint boundary_point(double xi);
BoundaryPoint boundary_point_infinity();
// Throws HorizonError when the proxy sits closer than the horizon
// (default truncation - 2).
BoundaryPoint boundary_point_graph(const ModelSpace& m, std::int32_t vertex,
                                   double horizon = -1.0);

struct TransitionParams {
  double eps = 1.0;       // neighborhood epsilon
  double big_r = 4.0;     // R of (eps, R)-transition
  double shadow_r = 3.0;  // shadow/cone radius r
  double delta_width = 1.0;
};

struct ShadowResult {
  bool contains = false;
  double slack = 0.0;  // additive radius slack applied (graphs: step/2 + delta_hat)
  double min_dist = 0.0;
};

ShadowResult shadow_contains(const ModelSpace& m, const BoundaryPoint& xi, const GroupElement& g,
                             double r);

struct TransitionScan {
  std::vector<char> is_transition;  // parallel to the path samples
  bool cocompact_all = false;       // no horoball system: everything transitional
  double slack = 0.0;
};

TransitionScan transition_points(const ModelSpace& m, const PathSample& path,
                                 const TransitionParams& params);

ShadowResult partial_shadow_contains(const ModelSpace& m, const BoundaryPoint& xi,
                                     const GroupElement& g, const TransitionParams& params);

// ---- cones ---------------------------------------------------------------

// Per-orbit-element cone and partial-cone membership for one center g.
struct ConeScan {
  GroupElement center;
  double center_dist = 0.0;
  double slack = 0.0;
  std::vector<char> in_cone;
  std::vector<char> in_partial;
};

ConeScan classify_cones(const ModelSpace& m, const OrbitIndex& orbit, const GroupElement& g,
                        const TransitionParams& params, bool with_partial = true);

std::vector<GroupElement> cone_members(const ModelSpace& m, const OrbitIndex& orbit,
                                       const GroupElement& g, double r, double n, double delta);
std::vector<GroupElement> partial_cone_members(const ModelSpace& m, const OrbitIndex& orbit,
                                               const GroupElement& g,
                                               const TransitionParams& params, double n,
                                               double delta);

GrowthTable cone_growth_table(const ModelSpace& m, const OrbitIndex& orbit, const ConeScan& scan,
                              double delta, int n_lo, int n_hi, double delta_hat, bool partial);

// ---- Patterson-Sullivan approximant ---------------------------------------

// Normalized weights exp(-s d(o, g o)) / P(s) over enumerated orbit points
// with d >= cutoff_T; an approximant of the s > delta_hat Patterson sums.
struct MeasureApproximant {
  const OrbitIndex* orbit = nullptr;
  double s = 0.0;
  double cutoff_T = 0.0;
  double normalization = 1.0;  // full Poincare partial sum at s
  std::size_t first = 0;       // first index with d >= cutoff_T

  double weight(std::size_t i) const {
    return std::exp(-s * orbit->dist(i)) / normalization;
  }
};

MeasureApproximant make_ps_approximant(const OrbitIndex& orbit, double s, double cutoff_T,
                                       double delta_hat);

// Total weight of enumerated orbit points satisfying the predicate
// (indices into the orbit).
double ps_measure(const MeasureApproximant& mu, const std::function<bool(std::size_t)>& region);

// ---- audits ----------------------------------------------------------------

struct ShadowAuditRow {
  std::size_t g_index = 0;
  double dist = 0.0;
  double rho_plain = 0.0;
  double rho_partial = 0.0;
  bool empty = false;  // zero shadow weight (cutoff too aggressive)
};

struct ShadowAudit {
  double r = 0.0, s = 0.0, cutoff_T = 0.0;
  std::vector<ShadowAuditRow> rows;
  double plain_min = 0.0, plain_max = 0.0, plain_spread = 0.0;
  double partial_min = 0.0, partial_max = 0.0, partial_spread = 0.0;
  bool partial_le_plain = true;  // checked per row
};

ShadowAudit shadow_lemma_audit(const ModelSpace& m, const OrbitIndex& orbit,
                               std::span<const std::size_t> sample_indices,
                               const TransitionParams& params, double s, double cutoff_T,
                               double delta_hat = 0.0);

double busemann(const ModelSpace& m, const BoundaryPoint& xi, const Point& x, const Point& y);

// Diagnostic visual-metric estimate rho_{o,a}(xi, zeta) ~ exp(-a d(o, (xi, zeta))),
// a = 0.5 by default. Only used for boundary-distance printing.
double visual_metric_estimate(const ModelSpace& m, const BoundaryPoint& xi,
                              const BoundaryPoint& zeta, double a = 0.5);

struct QconfRow {
  double measured = 0.0;   // mu(g A) / mu(A)
  double predicted = 0.0;  // exp(s B_xi(g^-1 o, o)) under the sign convention here
  double ratio = 0.0;
  double inverse_product = 0.0;  // ratio(g) * ratio(g^-1 on the translated region)
  bool zero_weight = false;
};

struct QconfAudit {
  double s = 0.0, cutoff_T = 0.0, r = 0.0;
  std::vector<QconfRow> rows;
  double ratio_min = 0.0, ratio_max = 0.0;
};

QconfAudit quasiconformality_audit(const ModelSpace& m, const OrbitIndex& orbit,
                                   std::span<const std::pair<GroupElement, GroupElement>> samples,
                                   double s, double cutoff_T, double r, double delta_hat = 0.0);

struct StabilityAudit {
  double d_max = 0.0;
  int pairs_used = 0;
  int pairs_skipped = 0;
  std::vector<double> per_pair;
};

// Pairs (alpha_end, gamma_end) share the basepoint as alpha_- = gamma_-.
StabilityAudit transition_stability_audit(const ModelSpace& m,
                                          std::span<const std::pair<Point, Point>> endpoint_pairs,
                                          const TransitionParams& params, double min_tail_L);

struct ConicalCount {
  std::int64_t count = 0;
  bool parabolic_flagged = false;
};

ConicalCount conical_cover_check(const ModelSpace& m, const OrbitIndex& orbit,
                                 const BoundaryPoint& xi, double r, double horizon);

}  // namespace growth

#endif
