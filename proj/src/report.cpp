#include "cuspgrowth/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace growth {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string growth_table_csv(const GrowthTable& t) {
  std::ostringstream out;
  out << "kind,n,delta,count,normalized\n";
  for (const auto& row : t.rows)
    out << growth_kind_name(t.kind) << ',' << format_double(row.n) << ','
        << format_double(t.delta_width) << ',' << row.count << ','
        << format_double(row.normalized) << '\n';
  return out.str();
}

std::string audit_rows_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "audit,param_json,key,value\n";
  for (const auto& r : rows)
    out << r.command << ",\"" << r.param_echo << "\"," << r.key << ','
        << format_double(r.value) << '\n';
  return out.str();
}

std::string rows_as_json(const std::vector<ReportRow>& rows) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    o["command"] = r.command;
    o["params"] = r.param_echo;
    o["key"] = r.key;
    o["value"] = format_double(r.value);
    o["provenance"] = r.provenance;
    j.push_back(o);
  }
  return j.dump(2) + "\n";
}

std::string growth_table_json(const GrowthTable& t) {
  nlohmann::ordered_json j;
  j["kind"] = growth_kind_name(t.kind);
  j["delta"] = format_double(t.delta_width);
  j["delta_hat"] = format_double(t.delta_hat);
  j["center"] = t.center;
  j["center_dist"] = format_double(t.center_dist);
  if (t.kind == GrowthTable::Kind::cone || t.kind == GrowthTable::Kind::partial_cone) {
    j["r"] = format_double(t.r);
    j["eps"] = format_double(t.eps);
    j["R"] = format_double(t.big_r);
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json o;
    o["n"] = format_double(row.n);
    o["count"] = row.count;
    o["normalized"] = format_double(row.normalized);
    rows.push_back(o);
  }
  j["rows"] = rows;
  return j.dump(2) + "\n";
}

std::string rows_as_text(const std::vector<ReportRow>& rows) {
  std::size_t kw = 4;
  for (const auto& r : rows) kw = std::max(kw, r.key.size());
  std::ostringstream out;
  for (const auto& r : rows) {
    out << r.key;
    for (std::size_t i = r.key.size(); i < kw + 2; ++i) out << ' ';
    out << format_double(r.value);
    if (!r.provenance.empty()) out << "  [" << r.provenance << "]";
    out << '\n';
  }
  return out.str();
}

std::string growth_table_text(const GrowthTable& t) {
  std::ostringstream out;
  out << "# " << growth_kind_name(t.kind) << " growth, delta=" << format_double(t.delta_width)
      << ", center=" << t.center << " (d=" << format_double(t.center_dist)
      << "), delta_hat=" << format_double(t.delta_hat) << "\n";
  out << "n\tcount\tnormalized\n";
  for (const auto& row : t.rows)
    out << format_double(row.n) << '\t' << row.count << '\t' << format_double(row.normalized)
        << '\n';
  return out.str();
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    if (!out.good()) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

}  // namespace growth
