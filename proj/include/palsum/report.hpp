#pragma once

// CSV and JSON emission for density tables, bound audits and Prop1 reports.

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

#include "palsum/stats.hpp"
#include "palsum/sumset.hpp"

namespace palsum {

inline constexpr const char* density_csv_header = "g,k,X,count,ratio,lower_comparator,upper_comparator";
inline constexpr const char* bound_audit_csv_header = "n,d,g,exact,trivial,paper_bound,holds";

// Shortest round-trip text for a double.
inline std::string format_real(double v) {
  char buf[64];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline void write_density_csv(std::ostream& os, const std::vector<DensityRecord>& rows) {
  os << density_csv_header << '\n';
  for (const auto& r : rows) {
    os << r.g << ',' << r.k << ',' << r.limit << ',' << r.count << ',' << format_real(r.ratio) << ','
       << format_real(r.lower_comparator) << ',' << format_real(r.upper_comparator) << '\n';
  }
}

inline nlohmann::ordered_json density_json(const std::vector<DensityRecord>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"g", r.g},
                   {"k", r.k},
                   {"X", r.limit},
                   {"count", r.count},
                   {"ratio", r.ratio},
                   {"lower_comparator", r.lower_comparator},
                   {"upper_comparator", r.upper_comparator}});
  }
  return arr;
}

inline void write_bound_audit_csv(std::ostream& os, const std::vector<BoundAuditRow>& rows) {
  os << bound_audit_csv_header << '\n';
  for (const auto& r : rows) {
    os << r.n << ',' << r.d << ',' << r.g << ',' << r.exact << ',' << r.trivial << ','
       << format_real(static_cast<double>(r.paper_bound)) << ',' << (r.holds ? "true" : "false") << '\n';
  }
}

inline nlohmann::ordered_json bound_audit_json(const std::vector<BoundAuditRow>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"n", r.n},
                   {"d", r.d},
                   {"g", r.g},
                   {"exact", r.exact},
                   {"trivial", r.trivial},
                   {"paper_bound", static_cast<double>(r.paper_bound)},
                   {"holds", r.holds}});
  }
  return arr;
}

inline nlohmann::ordered_json prop1_json(const Prop1Report& r) {
  return {{"n", r.cfg.n},
          {"d", r.cfg.d},
          {"g", r.cfg.g},
          {"t", r.cfg.t},
          {"p_hit", static_cast<double>(r.cfg.p_hit)},
          {"mu", static_cast<double>(r.cfg.mu)},
          {"exact_tail", static_cast<double>(r.exact_tail)},
          {"chernoff_bound", static_cast<double>(r.chernoff_bound)},
          {"empirical_tail", r.empirical_tail},
          {"trials", r.trials},
          {"seed", r.seed},
          {"pass", r.pass}};
}

}  // namespace palsum
