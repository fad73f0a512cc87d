#include "fraclap/report.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>

namespace fraclap {

void ReportRecord::add(const std::string& name, double value, double err, const std::string& route) {
  entries.push_back({name, value, err, route});
}

void ReportRecord::check(const std::string& name, bool ok, const std::string& route) {
  add(name, ok ? 1.0 : 0.0, 0.0, route);
  if (!ok) failures.push_back(name);
}

const ReportEntry* ReportRecord::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto fmt = (x != 0.0 && std::abs(x) < 1e-3) ? std::chars_format::scientific : std::chars_format::general;
  const auto res = std::to_chars(buf, buf + sizeof buf, x, fmt);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

nlohmann::json json_number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

void write_csv(const ReportRecord& r, std::ostream& os) {
  os << "name,value,err,route\n";
  for (const auto& e : r.entries)
    os << csv_field(e.name) << ',' << format_number(e.value) << ',' << format_number(e.err) << ','
       << csv_field(e.route) << '\n';
}

void write_json(const ReportRecord& r, std::ostream& os) {
  nlohmann::ordered_json j;
  for (const auto& e : r.entries)
    j[e.name] = {{"value", json_number(e.value)}, {"err", json_number(e.err)}, {"route", e.route}};
  os << j.dump(2) << '\n';
}

void write_csv(const ReportTable& t, std::ostream& os) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << csv_field(t.columns[c]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
    os << '\n';
  }
}

void write_json(const ReportTable& t, std::ostream& os) {
  nlohmann::ordered_json j;
  j["route"] = t.route;
  j["columns"] = t.columns;
  auto rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    auto jr = nlohmann::json::array();
    for (double v : row) jr.push_back(json_number(v));
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  os << j.dump(2) << '\n';
}

}  // namespace fraclap
