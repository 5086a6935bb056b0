#include "cuspgrowth/group_spec.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace growth {

using nlohmann::json;

int GroupSpec::generator_index(const std::string& name) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].name == name) return static_cast<int>(i);
  throw SpecError("unknown generator name: " + name);
}

void GroupSpec::validate() const {
  if (generators.empty()) throw SpecError("spec declares no generators");
  if (truncation_radius < 1.0) throw SpecError("truncation_radius must be >= 1");
  std::set<std::string> names;
  for (const auto& g : generators) {
    if (g.name.empty()) throw SpecError("generator with empty name");
    if (!names.insert(g.name).second) throw SpecError("duplicate generator name: " + g.name);
    if (model == Backend::half_plane) {
      if (!g.matrix) throw SpecError("half_plane generator " + g.name + " has no matrix");
      if (g.matrix->det() != 1) throw SpecError("generator " + g.name + " is not unimodular");
    } else {
      if (g.order < 0) throw SpecError("generator " + g.name + " has negative order");
      if (g.order == 1) throw SpecError("generator " + g.name + " is trivial (order 1)");
    }
  }
  for (const auto& cls : parabolics) {
    if (cls.empty()) throw SpecError("empty parabolic generator list");
    for (const auto& n : cls) generator_index(n);
  }
  if (model == Backend::half_plane) {
    if (horoball_height <= 0.0) throw SpecError("horoball_height must be > 0");
    if (basepoint && basepoint->imag() <= 0.0) throw SpecError("basepoint must have Im > 0");
  } else {
    if (max_depth < 0) throw SpecError("max_depth must be >= 0");
    if (basepoint) throw SpecError("basepoint override is a half_plane field");
  }
}

GroupSpec GroupSpec::parse_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SpecError(std::string("spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SpecError("spec root must be an object");

  static const std::set<std::string> known = {"model",         "generators",
                                              "parabolics",    "horoball_height",
                                              "max_depth",     "truncation_radius",
                                              "basepoint"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw SpecError("unknown spec field: " + it.key());

  GroupSpec spec;
  if (!j.contains("model") || !j["model"].is_string()) throw SpecError("missing field: model");
  const std::string model = j["model"].get<std::string>();
  if (model == "half_plane")
    spec.model = Backend::half_plane;
  else if (model == "cusped_cayley")
    spec.model = Backend::cusped_cayley;
  else
    throw SpecError("model must be half_plane or cusped_cayley");

  if (!j.contains("generators") || !j["generators"].is_array())
    throw SpecError("missing field: generators");
  for (const auto& g : j["generators"]) {
    if (!g.is_object()) throw SpecError("generator entries must be objects");
    GeneratorSpec gs;
    for (auto it = g.begin(); it != g.end(); ++it) {
      const std::string& k = it.key();
      if (k == "name")
        gs.name = it.value().get<std::string>();
      else if (k == "matrix") {
        if (!it.value().is_array() || it.value().size() != 4)
          throw SpecError("generator matrix must be [a,b,c,d]");
        Mat2 m{it.value()[0].get<std::int64_t>(), it.value()[1].get<std::int64_t>(),
               it.value()[2].get<std::int64_t>(), it.value()[3].get<std::int64_t>()};
        if (m.det() != 1) throw SpecError("generator " + gs.name + " is not unimodular");
        gs.matrix = canonical_sign(m);
      } else if (k == "order")
        gs.order = it.value().get<int>();
      else
        throw SpecError("unknown generator field: " + k);
    }
    spec.generators.push_back(std::move(gs));
  }

  if (j.contains("parabolics")) {
    if (!j["parabolics"].is_array()) throw SpecError("parabolics must be an array of arrays");
    for (const auto& cls : j["parabolics"]) {
      if (!cls.is_array()) throw SpecError("each parabolic class must be an array of names");
      std::vector<std::string> names;
      for (const auto& n : cls) names.push_back(n.get<std::string>());
      spec.parabolics.push_back(std::move(names));
    }
  }

  if (j.contains("horoball_height")) spec.horoball_height = j["horoball_height"].get<double>();
  if (j.contains("max_depth")) spec.max_depth = j["max_depth"].get<int>();
  if (j.contains("truncation_radius"))
    spec.truncation_radius = j["truncation_radius"].get<double>();
  else
    throw SpecError("missing field: truncation_radius");
  if (j.contains("basepoint")) {
    const auto& b = j["basepoint"];
    if (!b.is_array() || b.size() != 2) throw SpecError("basepoint must be [re, im]");
    spec.basepoint = std::complex<double>(b[0].get<double>(), b[1].get<double>());
  }

  spec.validate();
  return spec;
}

GroupSpec GroupSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str());
}

}  // namespace growth
