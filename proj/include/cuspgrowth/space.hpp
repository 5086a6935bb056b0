#ifndef CUSPGROWTH_SPACE_HPP
#define CUSPGROWTH_SPACE_HPP

#include <span>
#include <utility>
#include <vector>

#include "cuspgrowth/model.hpp"

namespace growth {

// Sampled path with arc-length parametrization. Half-plane geodesics are
// computed analytically and then sampled at the requested step; graph
// geodesics are vertex sequences with unit steps.
struct PathSample {
  std::vector<Point> points;
  std::vector<double> cum;  // cumulative length, cum[0] = 0
  double step = 0.05;
  double length() const { return cum.empty() ? 0.0 : cum.back(); }
};

inline constexpr double kDefaultStep = 0.05;

double distance(const ModelSpace& m, const Point& x, const Point& y);

// (x, y)_z = (d(x,z) + d(y,z) - d(x,y)) / 2
double gromov_product(const ModelSpace& m, const Point& x, const Point& y, const Point& z);

PathSample geodesic(const ModelSpace& m, const Point& x, const Point& y,
                    double step = kDefaultStep);

// Max thin-triangle defect over the sample, consumed as consecutive
// disjoint triples. A sampled lower bound for delta, not a certificate.
double estimate_hyperbolicity(const ModelSpace& m, const std::vector<Point>& sample);

// Nearest point of the closure of the target; deterministic tie-breaks
// (half-plane: lexicographic (re, im); graph: minimal vertex id).
Point project(const ModelSpace& m, const Point& x, const HoroballRef& target);
Point project(const ModelSpace& m, const Point& x, std::span<const Point> target);

// (d(x, Y), d(x, Y) <= eps)
std::pair<double, bool> dist_to_neighborhood(const ModelSpace& m, const Point& x,
                                             const HoroballRef& y, double eps);

// ---- cusped-graph plumbing (shared by model build and audits) ----------

// Adjacency of a registered vertex, in the canonical deterministic order;
// neighbors outside the built truncation are omitted.
std::span<const std::int32_t> cusped_neighbors(const ModelSpace& m, std::int32_t id);

// Recomputes one adjacency row from the word structure (used to build the
// compressed rows and by tests).
std::vector<std::int32_t> cusped_neighbors_raw(const ModelSpace& m, std::int32_t id);

// BFS over the truncated graph from `from`: distances (-1 unreached) and
// deterministic min-id parents.
struct GraphBfs {
  std::vector<std::int32_t> dist;
  std::vector<std::int32_t> parent;
};
GraphBfs bfs_from(const ModelSpace& m, std::int32_t from);

// Exact graph distance, refusing queries whose geodesics may leave the
// truncation (soundness guard (d(o,x) + d(o,y) + d(x,y)) / 2 <= n_max).
double graph_distance(const ModelSpace& m, std::int32_t a, std::int32_t b);

std::vector<std::int32_t> graph_geodesic_vertices(const ModelSpace& m, std::int32_t a,
                                                  std::int32_t b);

}  // namespace growth

#endif
