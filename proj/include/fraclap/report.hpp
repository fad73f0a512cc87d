#pragma once

// Flat report records and tables with CSV and JSON writers. Every number
// carries the route that produced it.

#include <ostream>
#include <string>
#include <vector>

namespace fraclap {

struct ReportEntry {
  std::string name;
  double value = 0.0;
  double err = 0.0;
  std::string route;
};

struct ReportRecord {
  std::string command;
  std::vector<ReportEntry> entries;
  /// Names of assertions that failed.
  std::vector<std::string> failures;

  void add(const std::string& name, double value, double err, const std::string& route);
  /// Stores 1 or 0 under name and records a failure when ok is false.
  void check(const std::string& name, bool ok, const std::string& route);
  const ReportEntry* find(const std::string& name) const;
  bool passed() const { return failures.empty(); }
};

struct ReportTable {
  std::string route;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Shortest text that round-trips; scientific when 0 < |x| < 1e-3.
std::string format_number(double x);

void write_csv(const ReportRecord& r, std::ostream& os);
void write_json(const ReportRecord& r, std::ostream& os);
void write_csv(const ReportTable& t, std::ostream& os);
void write_json(const ReportTable& t, std::ostream& os);

}  // namespace fraclap
