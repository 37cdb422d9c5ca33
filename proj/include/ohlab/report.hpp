#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ohlab {

using ParamValue = std::variant<long long, double, std::string>;

struct ReportRow {
  std::string experiment;
  std::vector<std::pair<std::string, ParamValue>> params;
  std::vector<std::pair<std::string, double>> computed;
  std::vector<std::pair<std::string, double>> bounds;
  std::string citation;
  bool pass = false;
};

struct Report {
  std::vector<ReportRow> rows;
  bool all_pass() const;
};

// 12 significant digits, "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double v);

// Header: experiment,param.*,computed.*,bound.*,citation,pass. Columns are
// the union over rows in first-seen order; absent cells stay empty.
std::string to_csv(const Report& report);
// Array of row objects; reals are rounded to the CSV precision first.
std::string to_json(const Report& report);

}  // namespace ohlab
