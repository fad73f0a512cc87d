#pragma once

// Command-line workbench: every command turns a validated RunConfig into a
// ReportRecord (or a table) and an exit code.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fraclap/report.hpp"

namespace fraclap::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3, kAssertion = 4 };

enum class Format { csv, json };

struct RunConfig {
  std::string command;
  double s = 0.5;
  int d = 2;
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
  double cutoff = 8.0;
  bool all_routes = false;
  std::optional<double> volume;
  std::optional<double> surface;

  // kernels and layer tables
  double lambda = 1.0;
  double mu = 2.0;
  double t_min = 1e-3;
  double t_max = 8.0;
  int points = 64;
  std::string plot_script;

  // lattice
  int lattice_points = 64;
  std::vector<double> h_list;
  double c0_tol = 0.03;
  double c1_tol = 0.25;
  double h = 1.0;
  int points_per_h = 8;
  int depth_points = 256;
  int tangential_points = 512;
  double wall_offset = 0.5;
  double gap_tol = 0.10;

  // localization
  std::string shape = "interval";
  double l0 = 0.5;
  std::vector<double> steps{0.5, 0.25, 0.125, 0.0625, 0.03125};
  int samples = 20;
  unsigned seed = 20240611;
  double ims_l0 = 0.25;

  // conversion
  double A = 1.0, B = 0.0, a = 1.0, b = 0.0;

  std::string output;
  Format format = Format::csv;
};

struct CommandResult {
  ReportRecord record;
  std::optional<ReportTable> table;
  bool numerical_failure = false;
};

/// Throws DomainError when a parameter is out of range for the selected command.
void validate(const RunConfig& cfg);

CommandResult cmd_constants(const RunConfig& cfg);
CommandResult cmd_kernels(const RunConfig& cfg);
CommandResult cmd_layer(const RunConfig& cfg);
CommandResult cmd_verify_square(const RunConfig& cfg);
CommandResult cmd_verify_halfspace(const RunConfig& cfg);
CommandResult cmd_order_check(const RunConfig& cfg);
CommandResult cmd_localization_check(const RunConfig& cfg);
CommandResult cmd_convert(const RunConfig& cfg);

CommandResult dispatch(const RunConfig& cfg);

/// h values equispaced in 1/h between 1/h_max and 1/h_min.
std::vector<double> default_h_list(int lattice_points, std::size_t count = 6, double h_max = 0.25);

/// Parses argv, runs the command, writes the report and returns the exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace fraclap::cli
