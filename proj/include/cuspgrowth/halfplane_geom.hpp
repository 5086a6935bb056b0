#ifndef CUSPGROWTH_HALFPLANE_GEOM_HPP
#define CUSPGROWTH_HALFPLANE_GEOM_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "cuspgrowth/common.hpp"
#include "cuspgrowth/mat2.hpp"

namespace growth {

using Cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// arccosh(u) = log(u + sqrt(u^2-1)), written via log1p so values of u
// near 1 (distances near 0) do not cancel catastrophically.
inline double acosh_stable(double u) {
  if (u <= 1.0) return 0.0;
  const double e = u - 1.0;
  return std::log1p(e + std::sqrt(e * (u + 1.0)));
}

// cosh d(z,w) = 1 + |z-w|^2 / (2 Im z Im w)
inline double hp_dist(Cplx z, Cplx w) {
  const double dx = z.real() - w.real();
  const double dy = z.imag() - w.imag();
  return acosh_stable(1.0 + (dx * dx + dy * dy) / (2.0 * z.imag() * w.imag()));
}

// Analytic geodesic segment/ray. Points are parametrized by a signed
// arc-length coordinate u: vertical lines have point(u) = x0 + i e^u,
// circles point(u) = c + rho e^{i theta(u)} with theta(u) = 2 atan(e^u);
// in both cases hyperbolic length equals |u1 - u0|.
struct HpSegment {
  bool vertical = true;
  double x0 = 0.0;             // vertical: Re = x0
  double c = 0.0, rho = 1.0;   // circle: center c on R, radius rho
  double u_start = 0.0;        // parameter of the initial endpoint
  double u_end = 0.0;          // parameter of the terminal endpoint (+-inf for rays)
  Cplx z_start{0.0, 1.0};      // endpoint points (z_end meaningful when u_end finite)
  Cplx z_end{0.0, 1.0};

  double length() const { return std::abs(u_end - u_start); }

  Cplx point_at(double u) const {
    if (vertical) return {x0, std::exp(u)};
    const double th = 2.0 * std::atan(std::exp(u));
    return {c + rho * std::cos(th), rho * std::sin(th)};
  }

  double u_of(Cplx z) const {
    if (vertical) return std::log(z.imag());
    // theta = atan2(Im, Re - c); u = log tan(theta/2)
    const double th = std::atan2(z.imag(), z.real() - c);
    return std::log(std::tan(0.5 * th));
  }

  // Point of the segment at arc length t from the initial endpoint.
  Cplx point_at_length(double t) const {
    const double dir = u_end >= u_start ? 1.0 : -1.0;
    return point_at(u_start + dir * t);
  }

  // Parameter of the hyperbolic foot of w on the full geodesic line. The
  // conjugation (z - (c+rho)) / (z - (c-rho)) maps the circle to the
  // vertical axis with point_at(u) -> i e^u, so u_foot = log |m(w)|.
  double foot_u(Cplx w) const {
    if (vertical) {
      const double dx = w.real() - x0;
      return 0.5 * std::log(dx * dx + w.imag() * w.imag());
    }
    const double a2 = std::norm(w - Cplx(c + rho, 0.0));
    const double b2 = std::norm(w - Cplx(c - rho, 0.0));
    return 0.5 * (std::log(a2) - std::log(b2));
  }

  // Foot parameter clamped into the segment range (kept finite so exp/tan
  // stay representable).
  double clamped_foot_u(Cplx w) const {
    const double lo = std::max(std::min(u_start, u_end), -700.0);
    const double hi = std::min(std::max(u_start, u_end), 700.0);
    double u = foot_u(w);
    if (!(u >= lo)) u = lo;
    if (u > hi) u = hi;
    return u;
  }

  // Distance from w to the full geodesic line: sinh d = |x - x0| / y for
  // vertical lines, sinh d = | |w-c|^2 - rho^2 | / (2 rho y) for circles.
  double line_dist(Cplx w) const {
    double sh;
    if (vertical)
      sh = std::abs(w.real() - x0) / w.imag();
    else
      sh = std::abs(std::norm(w - Cplx(c, 0.0)) - rho * rho) / (2.0 * rho * w.imag());
    return std::asinh(sh);
  }

  // Exact distance from w to this segment (distance along a geodesic is
  // convex, so the clamped foot is the minimizer). Interior feet use the
  // closed-form line distance; clamped feet use the stored endpoints.
  double dist_to(Cplx w) const {
    const double lo = std::min(u_start, u_end), hi = std::max(u_start, u_end);
    const double u = foot_u(w);
    if (u < lo || u > hi) {
      const double ue = u < lo ? lo : hi;
      const Cplx z = ue == u_start ? z_start : (std::isinf(ue) ? z_start : z_end);
      return hp_dist(w, z);
    }
    return line_dist(w);
  }

  // Segment between two interior points.
  static HpSegment between(Cplx z1, Cplx z2) {
    HpSegment s;
    s.z_start = z1;
    s.z_end = z2;
    const double dx = z2.real() - z1.real();
    if (std::abs(dx) < 1e-12 * (1.0 + std::abs(z1.real()))) {
      s.vertical = true;
      s.x0 = z1.real();
      s.u_start = std::log(z1.imag());
      s.u_end = std::log(z2.imag());
      return s;
    }
    s.vertical = false;
    s.c = (std::norm(z2) - std::norm(z1)) / (2.0 * dx);
    s.rho = std::abs(z1 - s.c);
    s.u_start = s.u_of(z1);
    s.u_end = s.u_of(z2);
    return s;
  }

  // Ray from z toward boundary point xi (xi = +-inf handled by at_inf).
  static HpSegment ray(Cplx z, double xi, bool at_inf) {
    HpSegment s;
    s.z_start = z;
    s.z_end = z;
    if (at_inf || std::abs(xi - z.real()) < 1e-12 * (1.0 + std::abs(z.real()))) {
      s.vertical = true;
      s.x0 = at_inf ? z.real() : xi;
      s.u_start = std::log(z.imag());
      s.u_end = at_inf ? kInf : -kInf;
      return s;
    }
    s.vertical = false;
    s.c = (std::norm(z) - xi * xi) / (2.0 * (z.real() - xi));
    s.rho = std::abs(z - s.c);
    s.u_start = s.u_of(z);
    // theta -> 0 (u -> -inf) is the right end c + rho; theta -> pi the left
    s.u_end = xi > s.c ? -kInf : kInf;
    return s;
  }
};

// Boundary endpoint of the ray from x through y, as (xi, at_inf).
inline std::pair<double, bool> ray_boundary_point(Cplx x, Cplx y) {
  const HpSegment seg = HpSegment::between(x, y);
  if (seg.vertical) {
    if (y.imag() >= x.imag()) return {0.0, true};
    return {seg.x0, false};
  }
  return {seg.u_end >= seg.u_start ? seg.c - seg.rho : seg.c + seg.rho, false};
}

// ---- horoballs -------------------------------------------------------
//
// The standard horoball of height t is U_inf = {Im z >= t}; every other
// horoball in the PSL(2,Z)-orbit is tangent at a rational p/q (lowest
// terms) with Euclidean diameter 1/(t q^2). Signed log-depth is positive
// inside and minus the distance outside.

inline double horoball_inf_signed_depth(Cplx z, double t) { return std::log(z.imag() / t); }

inline double horoball_pq_signed_depth(Cplx z, std::int64_t p, std::int64_t q, double t) {
  const double dx = z.real() - static_cast<double>(p) / static_cast<double>(q);
  const double qq = static_cast<double>(q) * static_cast<double>(q);
  return std::log(z.imag() / (t * qq * (dx * dx + z.imag() * z.imag())));
}

inline double horoball_signed_depth(Cplx z, std::int64_t p, std::int64_t q, double t) {
  return q == 0 ? horoball_inf_signed_depth(z, t) : horoball_pq_signed_depth(z, p, q, t);
}

inline double horoball_dist(Cplx z, std::int64_t p, std::int64_t q, double t) {
  const double s = horoball_signed_depth(z, p, q, t);
  return s >= 0.0 ? 0.0 : -s;
}

// Deterministic unimodular matrix with first column (p, q), mapping
// U_inf to the horoball tangent at p/q. For q = 0 returns the identity.
inline Mat2 horoball_translate(std::int64_t p, std::int64_t q) {
  if (q == 0) return Mat2{};
  std::int64_t x = 0, y = 0;
  ext_gcd(p, q, x, y);  // p x + q y = 1
  // base solution: d0 = x, b0 = -y; normalize so 0 <= d < q
  std::int64_t d = x % q;
  if (d < 0) d += q;
  const std::int64_t b = (p * d - 1) / q;
  return canonical_mat({p, b, q, d});
}

// Projection of z to the horosphere bounding the (p,q,t) horoball.
inline Cplx horoball_foot(Cplx z, std::int64_t p, std::int64_t q, double t) {
  if (q == 0) return {z.real(), t};
  const Mat2 g = horoball_translate(p, q);
  const Cplx w = mobius(mat_inv(g), z);
  return mobius(g, {w.real(), t});
}

// All horoballs within eps of z: tangency pairs (p,q) in lowest terms,
// q >= 1, plus a flag for U_inf. Direct Farey-style search; cost is
// O(e^eps + sqrt(e^eps / Im z)).
struct NearbyHoroball {
  std::int64_t p, q;  // q = 0 encodes U_inf
  double dist;
};

inline std::vector<NearbyHoroball> horoballs_near(Cplx z, double eps, double t) {
  std::vector<NearbyHoroball> out;
  const double y = z.imag(), x = z.real();
  if (std::log(t / y) <= eps) out.push_back({1, 0, std::max(0.0, std::log(t / y))});
  const double lim = std::exp(eps) * y / t;  // need q^2 ((x-p/q)^2 + y^2) <= lim
  const auto qmax = static_cast<std::int64_t>(std::floor(std::sqrt(lim) / y));
  for (std::int64_t q = 1; q <= qmax; ++q) {
    const double s = lim / (static_cast<double>(q) * q) - y * y;
    if (s < 0) continue;
    const double w = std::sqrt(s);
    const auto plo = static_cast<std::int64_t>(std::ceil((x - w) * q));
    const auto phi = static_cast<std::int64_t>(std::floor((x + w) * q));
    for (std::int64_t p = plo; p <= phi; ++p) {
      std::int64_t u = 0, v = 0;
      if (ext_gcd(p, q, u, v) != 1) continue;
      const double dist = horoball_dist(z, p, q, t);
      if (dist <= eps) out.push_back({p, q, dist});
    }
  }
  return out;
}

// ---- Busemann cocycle ------------------------------------------------
//
// Convention: B_xi(x, y) = lim_{z -> xi} d(y, z) - d(x, z); a point y
// deeper toward xi than x gives a negative value. For xi = inf this is
// log Im x - log Im y; finite xi via the conjugation z -> -1/(z - xi).

inline double busemann_halfplane(double xi, bool at_inf, Cplx x, Cplx y) {
  if (at_inf) return std::log(x.imag()) - std::log(y.imag());
  const double nx = x.imag() / std::norm(x - Cplx(xi, 0.0));
  const double ny = y.imag() / std::norm(y - Cplx(xi, 0.0));
  return std::log(nx) - std::log(ny);
}

}  // namespace growth

#endif
