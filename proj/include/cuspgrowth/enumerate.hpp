#ifndef CUSPGROWTH_ENUMERATE_HPP
#define CUSPGROWTH_ENUMERATE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cuspgrowth/model.hpp"
#include "cuspgrowth/space.hpp"

namespace growth {

// Deduplicated orbit enumeration out to a radius: every canonical g with
// d(o, g o) <= radius, sorted by (distance, canonical order).
struct OrbitIndex {
  Backend backend = Backend::half_plane;
  Point origin;
  double radius = 0.0;

  struct Packed {
    std::int32_t a, b, c, d;
  };
  std::vector<Packed> mats;         // half-plane payload
  std::vector<std::int32_t> verts;  // graph payload (depth-0 vertex ids)
  std::vector<double> dists;        // ascending, parallel to the payload

  std::size_t size() const { return dists.size(); }
  double dist(std::size_t i) const { return dists[i]; }
  GroupElement element(std::size_t i) const;

  // index of the first element with d >= x
  std::size_t lower(double x) const;
};

enum class EnumStrategy {
  frobenius,      // half-plane: integer matrices with a^2+b^2+c^2+d^2 <= 2 cosh n
  generator_bfs,  // pruned breadth-first words over the declared generators
};

OrbitIndex enumerate_orbit(const ModelSpace& m, double radius,
                           EnumStrategy strategy = EnumStrategy::frobenius,
                           const Point* origin = nullptr, double bfs_slack = 1.5);

// ---- balls and annuli --------------------------------------------------

struct AnnulusQuery {
  GroupElement center;  // the g of A(go, n, Delta)
  double n = 0.0;
  double delta = 1.0;
};

std::vector<GroupElement> ball(const ModelSpace& m, const OrbitIndex& orbit, double n);
std::int64_t ball_count(const ModelSpace& m, const OrbitIndex& orbit, double n);

std::vector<GroupElement> annulus(const ModelSpace& m, const OrbitIndex& orbit,
                                  const AnnulusQuery& q);
std::int64_t annulus_count(const ModelSpace& m, const OrbitIndex& orbit, double center_dist,
                           double n, double delta);

// Horoballs U with -Delta <= d(o, o_U) - n < Delta, optionally one orbit class.
std::vector<HoroballRef> horoball_annulus(const ModelSpace& m, double n, double delta,
                                          std::optional<int> orbit_class = std::nullopt);
std::int64_t horoball_annulus_count(const ModelSpace& m, double n, double delta,
                                    std::optional<int> orbit_class = std::nullopt);

// ---- parabolic orbits ----------------------------------------------------

// Enumerated G_Y-orbit distances d(v, p v), p = g P0^k g^-1, sorted
// ascending, with the generator exponents kept alongside.
struct ParabolicOrbit {
  int orbit_class = 0;
  Point around;
  std::vector<double> dists;
  std::vector<std::int64_t> exponents;  // parallel to dists
  double radius = 0.0;                  // complete out to this distance

  std::size_t size() const { return dists.size(); }
  std::size_t lower(double x) const;
};

ParabolicOrbit parabolic_orbit(const ModelSpace& m, const HoroballRef& y, const Point& v,
                               std::int64_t exponent_cap = 2048);

std::vector<GroupElement> parabolic_annulus(const ModelSpace& m, const HoroballRef& y,
                                            const ParabolicOrbit& orbit, double n, double delta);
std::int64_t parabolic_annulus_count(const ParabolicOrbit& orbit, double n, double delta);

GroupElement parabolic_element(const ModelSpace& m, const HoroballRef& y, std::int64_t exponent);

// Deterministic foot o_U (cached on HoroballRef by the model builder).
Point foot(const ModelSpace& m, const HoroballRef& u, const Point& o);

// Class representative horoball U_k (the table entry nearest the basepoint
// in its class).
HoroballRef class_representative(const ModelSpace& m, int orbit_class);

// ---- growth tables -------------------------------------------------------

struct GrowthTable {
  enum class Kind { orbit, horoball, parabolic, cone, partial_cone };
  Kind kind = Kind::orbit;
  double delta_width = 1.0;  // infinity => cumulative ball counts
  double delta_hat = 0.0;    // exponent used for the normalized column
  double r = 0.0, eps = 0.0, big_r = 0.0;
  std::string center = "e";
  double center_dist = 0.0;
  struct Row {
    double n;
    std::int64_t count;
    double normalized;
  };
  std::vector<Row> rows;

  double max_normalized() const;
  double min_normalized() const;  // over rows with count > 0
};

const char* growth_kind_name(GrowthTable::Kind k);

GrowthTable orbit_growth_table(const ModelSpace& m, const OrbitIndex& orbit,
                               const GroupElement& center, double delta, int n_lo, int n_hi,
                               double delta_hat);
GrowthTable horoball_growth_table(const ModelSpace& m, double delta, int n_lo, int n_hi,
                                  double delta_hat, std::optional<int> orbit_class = std::nullopt);
GrowthTable parabolic_growth_table(const ModelSpace& m, const ParabolicOrbit& orbit, double delta,
                                   int n_lo, int n_hi, double delta_hat);

}  // namespace growth

#endif
