#ifndef CUSPGROWTH_MODEL_HPP
#define CUSPGROWTH_MODEL_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "cuspgrowth/group_spec.hpp"
#include "cuspgrowth/halfplane_geom.hpp"
#include "cuspgrowth/mat2.hpp"
#include "cuspgrowth/word.hpp"

namespace growth {

// A point of the model space: Im z > 0 for the half-plane backend, a
// registered vertex id for the cusped-graph backend.
struct Point {
  Backend backend = Backend::half_plane;
  Cplx z{0.0, 1.0};
  std::int32_t vertex = -1;
};

// Canonical group element: sign-normalized unimodular matrix, or reduced
// word in a free product of cyclic groups.
struct GroupElement {
  Backend backend = Backend::half_plane;
  Mat2 m{};
  Word w{};

  bool is_identity() const { return backend == Backend::half_plane ? m == Mat2{} : w.empty(); }
  friend bool operator==(const GroupElement& x, const GroupElement& y) {
    return x.backend == y.backend && x.m == y.m && x.w == y.w;
  }
  friend bool operator<(const GroupElement& x, const GroupElement& y) {
    if (x.backend != y.backend) return x.backend < y.backend;
    if (x.backend == Backend::half_plane) return x.m < y.m;
    return x.w < y.w;
  }
};

struct ModelConstants {
  double delta_hat = 0.0;          // sampled thin-triangle constant
  double quasiconvexity_eps = 0.0; // sampled horoball quasiconvexity
  double cocompactness_M = 0.0;    // max d(t_U o, o_U) over the horoball table
};

struct HoroballRef {
  int orbit_class = 0;
  GroupElement translate;  // U = translate . U_class
  GroupElement rep;        // t_U, with d(t_U o, o_U) <= cocompactness_M
  Point foot;              // o_U
  double dist = 0.0;       // d(o, U)
  // backend payloads
  std::int64_t p = 1, q = 0;      // half-plane tangency p/q (q = 0: infinity)
  Word coset_rep{};               // graph: canonical coset representative
  std::int32_t foot_vertex = -1;  // graph
};

struct HalfPlaneModel {
  std::vector<Mat2> gens;
  std::vector<std::vector<Mat2>> parabolic_gens;
  double t = 1.0;  // horoball height
  Cplx basepoint{0.0, 1.0};

  struct HKey {
    std::int64_t p, q;
    double dist;
  };
  std::vector<HKey> htable;  // sorted by (dist, q, p)
};

struct CuspedGraphModel {
  std::vector<int> orders;        // per generator, 0 = infinite
  std::vector<int> parabolic_gen; // generator index per class (infinite cyclic)
  int max_depth = 0;

  // vertex registry; depth-0 vertices have cls = -1
  struct VKey {
    Word w;
    std::int32_t cls = -1;
    std::int32_t depth = 0;
  };
  std::vector<VKey> verts;
  std::vector<std::int32_t> dist_o;    // exact BFS distance from the basepoint
  std::vector<std::int32_t> parent_o;  // deterministic BFS tree toward the basepoint
  std::unordered_map<std::string, std::int32_t> index;
  std::int32_t base = 0;

  // adjacency in canonical order, compressed rows
  std::vector<std::int32_t> adj;
  std::vector<std::int64_t> adj_offset;

  struct HKey {
    std::int32_t cls;
    Word coset_rep;
    std::int32_t foot_vertex;
    double dist;
  };
  std::vector<HKey> htable;  // sorted by (dist, cls, coset key)

  std::int32_t find_vertex(const Word& w, std::int32_t cls, std::int32_t depth) const;
};

// One built model: immutable after construction, safe for concurrent reads.
struct ModelSpace {
  GroupSpec spec;
  Backend backend = Backend::half_plane;
  ModelConstants constants;
  std::vector<Point> delta_sample;  // the triangle sample behind delta_hat
  HalfPlaneModel hp;
  CuspedGraphModel cg;

  double truncation() const { return spec.truncation_radius; }
  Point basepoint() const;
  std::size_t horoball_count() const;
  HoroballRef horoball(std::size_t i) const;
  GroupElement identity() const;
  std::vector<std::string> generator_names() const;
};

ModelSpace build_half_plane(const GroupSpec& spec);
ModelSpace build_cusped_cayley(const GroupSpec& spec);
ModelSpace build_model(const GroupSpec& spec);

// Group operations in the model's group.
GroupElement canonical_element(const ModelSpace& m, const Mat2& raw);
GroupElement canonical_element(const ModelSpace& m, const Word& raw);
GroupElement generator_element(const ModelSpace& m, int gen_index, std::int64_t power = 1);
GroupElement mul(const ModelSpace& m, const GroupElement& x, const GroupElement& y);
GroupElement inv(const ModelSpace& m, const GroupElement& x);

// Parse "T", "S*T", "a^-2*b" over the spec's generator names.
GroupElement parse_element(const ModelSpace& m, const std::string& text);
std::string element_to_string(const ModelSpace& m, const GroupElement& g);

// The isometric action g . x.
Point apply(const ModelSpace& m, const GroupElement& g, const Point& x);

// Signed depth of x in horoball U (positive inside, -distance outside).
double horoball_signed_depth_of(const ModelSpace& m, const HoroballRef& u, const Point& x);

void require_same_backend(const ModelSpace& m, const Point& x, const char* who);

}  // namespace growth

#endif
