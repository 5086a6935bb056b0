#ifndef CUSPGROWTH_MAT2_HPP
#define CUSPGROWTH_MAT2_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>

#include "cuspgrowth/common.hpp"

namespace growth {

// Integer 2x2 matrix with det 1, kept in canonical projective form:
// the first nonzero entry of (a, b, c, d) is positive, so each PSL(2,Z)
// element has exactly one representative.
struct Mat2 {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  std::int64_t det() const { return a * d - b * c; }
  std::int64_t norm2() const { return a * a + b * b + c * c + d * d; }

  friend bool operator==(const Mat2&, const Mat2&) = default;
  friend auto operator<=>(const Mat2& x, const Mat2& y) {
    return std::array<std::int64_t, 4>{x.a, x.b, x.c, x.d} <=>
           std::array<std::int64_t, 4>{y.a, y.b, y.c, y.d};
  }
};

inline Mat2 canonical_sign(Mat2 m) {
  const std::int64_t lead = m.a != 0 ? m.a : (m.b != 0 ? m.b : (m.c != 0 ? m.c : m.d));
  if (lead < 0) return {-m.a, -m.b, -m.c, -m.d};
  return m;
}

inline Mat2 canonical_mat(Mat2 m) {
  if (m.det() != 1) throw SpecError("matrix must have determinant 1");
  return canonical_sign(m);
}

inline Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  return canonical_sign({x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                         x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d});
}

inline Mat2 mat_inv(const Mat2& m) { return canonical_sign({m.d, -m.b, -m.c, m.a}); }

inline Mat2 mat_pow(Mat2 m, std::int64_t k) {
  if (k < 0) {
    m = mat_inv(m);
    k = -k;
  }
  Mat2 r{};
  while (k > 0) {
    if (k & 1) r = mat_mul(r, m);
    m = mat_mul(m, m);
    k >>= 1;
  }
  return r;
}

// Mobius action (az+b)/(cz+d) on the upper half-plane.
inline std::complex<double> mobius(const Mat2& m, std::complex<double> z) {
  const std::complex<double> num(m.a * z.real() + m.b, m.a * z.imag());
  const std::complex<double> den(m.c * z.real() + m.d, m.c * z.imag());
  return num / den;
}

// Action on the boundary R u {inf}; `inf` encoded by the bool flag.
inline std::pair<double, bool> mobius_boundary(const Mat2& m, double xi, bool at_inf) {
  if (at_inf) {
    if (m.c == 0) return {0.0, true};
    return {static_cast<double>(m.a) / static_cast<double>(m.c), false};
  }
  const double den = m.c * xi + m.d;
  if (std::abs(den) < 1e-12 * (1.0 + std::abs(m.c * xi) + std::abs(static_cast<double>(m.d))))
    return {0.0, true};
  return {(m.a * xi + m.b) / den, false};
}

inline std::size_t mat_hash(const Mat2& m) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::int64_t v : {m.a, m.b, m.c, m.d}) {
    h ^= static_cast<std::uint64_t>(v);
    h *= 0x100000001b3ull;
  }
  return static_cast<std::size_t>(h);
}

inline std::string mat_to_string(const Mat2& m) {
  return "[" + std::to_string(m.a) + "," + std::to_string(m.b) + "," + std::to_string(m.c) +
         "," + std::to_string(m.d) + "]";
}

// Extended gcd: returns g = gcd(a,b) and x, y with a*x + b*y = g.
inline std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  if (b == 0) {
    x = a >= 0 ? 1 : -1;
    y = 0;
    return a >= 0 ? a : -a;
  }
  std::int64_t x1 = 0, y1 = 0;
  const std::int64_t g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

}  // namespace growth

template <>
struct std::hash<growth::Mat2> {
  std::size_t operator()(const growth::Mat2& m) const { return growth::mat_hash(m); }
};

#endif
