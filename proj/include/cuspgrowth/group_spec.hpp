#ifndef CUSPGROWTH_GROUP_SPEC_HPP
#define CUSPGROWTH_GROUP_SPEC_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cuspgrowth/common.hpp"
#include "cuspgrowth/mat2.hpp"

namespace growth {

enum class Backend { half_plane, cusped_cayley };

struct GeneratorSpec {
  std::string name;
  std::optional<Mat2> matrix;  // half-plane backend
  int order = 0;               // cusped backend; 0 = infinite
};

// Parsed group-spec file. Schema (JSON, unknown fields rejected):
//   model              "half_plane" | "cusped_cayley"
//   generators         [{name, matrix:[a,b,c,d]} | {name, order?}]
//   parabolics         [[generator names], ...]   one entry per class
//   horoball_height    t > 0        (half_plane)
//   max_depth          D >= 0       (cusped_cayley)
//   truncation_radius  n_max >= 1
//   basepoint          [re, im]     (half_plane, optional, default [0,1])
struct GroupSpec {
  Backend model = Backend::half_plane;
  std::vector<GeneratorSpec> generators;
  std::vector<std::vector<std::string>> parabolics;
  double horoball_height = 1.0;
  int max_depth = 0;
  double truncation_radius = 8.0;
  std::optional<std::complex<double>> basepoint;

  int generator_index(const std::string& name) const;
  void validate() const;

  static GroupSpec parse_json_text(const std::string& text);
  static GroupSpec load(const std::string& path);
};

}  // namespace growth

#endif
