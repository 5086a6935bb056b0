#ifndef CUSPGROWTH_REPORT_HPP
#define CUSPGROWTH_REPORT_HPP

#include <string>
#include <vector>

#include "cuspgrowth/enumerate.hpp"

namespace growth {

struct ReportRow {
  std::string command;
  std::string param_echo;  // compact JSON echo of the run parameters
  std::string key;
  double value = 0.0;
  std::string provenance;  // exact | fitted | sampled
};

// Deterministic short decimal rendering (round-trippable, no locale).
std::string format_double(double v);

// CSV with header kind,n,delta,count,normalized
std::string growth_table_csv(const GrowthTable& t);

// CSV with header audit,param_json,key,value
std::string audit_rows_csv(const std::vector<ReportRow>& rows);

std::string rows_as_json(const std::vector<ReportRow>& rows);
std::string growth_table_json(const GrowthTable& t);

std::string rows_as_text(const std::vector<ReportRow>& rows);
std::string growth_table_text(const GrowthTable& t);

// Write via temp file + rename so rerenders are all-or-nothing.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace growth

#endif
