#include "ohlab/report.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ohlab {

bool Report::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

namespace {

std::string param_text(const ParamValue& v) {
  if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
  return std::get<std::string>(v);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

template <typename Pairs>
void collect_keys(const Pairs& pairs, std::vector<std::string>& keys) {
  for (const auto& [k, v] : pairs)
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
}

template <typename Pairs>
const typename Pairs::value_type* find_key(const Pairs& pairs, const std::string& key) {
  for (const auto& p : pairs)
    if (p.first == key) return &p;
  return nullptr;
}

nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_number(v));
}

}  // namespace

std::string to_csv(const Report& report) {
  std::vector<std::string> params, computed, bounds;
  for (const auto& r : report.rows) {
    collect_keys(r.params, params);
    collect_keys(r.computed, computed);
    collect_keys(r.bounds, bounds);
  }
  std::ostringstream out;
  out << "experiment";
  for (const auto& k : params) out << ",param." << k;
  for (const auto& k : computed) out << ",computed." << k;
  for (const auto& k : bounds) out << ",bound." << k;
  out << ",citation,pass\n";
  for (const auto& r : report.rows) {
    out << csv_escape(r.experiment);
    for (const auto& k : params) {
      out << ',';
      if (const auto* p = find_key(r.params, k)) out << csv_escape(param_text(p->second));
    }
    for (const auto& k : computed) {
      out << ',';
      if (const auto* p = find_key(r.computed, k)) out << format_number(p->second);
    }
    for (const auto& k : bounds) {
      out << ',';
      if (const auto* p = find_key(r.bounds, k)) out << format_number(p->second);
    }
    out << ',' << csv_escape(r.citation) << ',' << (r.pass ? "true" : "false") << '\n';
  }
  return out.str();
}

std::string to_json(const Report& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["experiment"] = r.experiment;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.params) {
      if (const auto* i = std::get_if<long long>(&v)) params[k] = *i;
      else if (const auto* d = std::get_if<double>(&v)) params[k] = json_number(*d);
      else params[k] = std::get<std::string>(v);
    }
    nlohmann::ordered_json computed = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.computed) computed[k] = json_number(v);
    nlohmann::ordered_json bounds = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.bounds) bounds[k] = json_number(v);
    row["params"] = params;
    row["computed"] = computed;
    row["bound"] = bounds;
    row["citation"] = r.citation;
    row["pass"] = r.pass;
    rows.push_back(std::move(row));
  }
  return rows.dump(2) + "\n";
}

}  // namespace ohlab
