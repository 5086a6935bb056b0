#ifndef CUSPGROWTH_COMMON_HPP
#define CUSPGROWTH_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace growth {

// Bad or unsupported group-spec data.
struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

// Presentation outside the solvable-word-problem fragment we support.
struct UnsupportedPresentationError : SpecError {
  explicit UnsupportedPresentationError(const std::string& msg) : SpecError(msg) {}
};

// Caller error: mixed backends, invalid arguments.
struct UsageError : std::invalid_argument {
  explicit UsageError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Query escapes the built (truncated) model. Never silently clamped.
struct TruncationError : std::runtime_error {
  explicit TruncationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Graph boundary proxy too close to serve as a ray endpoint.
struct HorizonError : std::runtime_error {
  explicit HorizonError(const std::string& msg) : std::runtime_error(msg) {}
};

struct FitError : std::runtime_error {
  explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

// Deterministic RNG. Avoids std distributions so streams are stable
// across standard libraries; only the mt19937_64 core is used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // uniform in [0, n)
  std::uint64_t next_below(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }

 private:
  std::mt19937_64 eng_;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  std::size_t points = 0;
};

inline LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  LineFit f;
  f.points = xs.size();
  if (xs.size() < 2 || xs.size() != ys.size()) throw FitError("least_squares: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw FitError("least_squares: degenerate abscissae");
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (f.slope * xs[i] + f.intercept);
    ss += r * r;
  }
  f.rms_residual = std::sqrt(ss / n);
  return f;
}

}  // namespace growth

#endif
