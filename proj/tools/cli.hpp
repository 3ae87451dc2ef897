#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mcfa::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kInfeasible = 2 };

struct RunConfig {
  std::string command;
  int n = 2;
  double r0 = 2.0;
  double rt = 1.0;
  double t = 1.0;
  int band_limit = 8;       ///< highest degree l for spectra; grid band limit for checks
  int time_grid = 1024;     ///< uniform intervals of sampled trajectories
  std::optional<double> tolerance;
  std::uint64_t seed = 42;
  std::string output;       ///< empty: standard output
  std::string format = "csv";
  bool verbose = false;
  bool plot_script = false;
};

int cmd_trajectory(const RunConfig& cfg);
int cmd_spectrum(const RunConfig& cfg);
int cmd_classify(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);

/// Writes the primary output: to cfg.output through a temporary file renamed on
/// success, or to standard output.
void emit(const RunConfig& cfg, const std::string& content);

/// Human-readable summary line: standard error when the data goes to standard
/// output, standard output otherwise.
void summary(const RunConfig& cfg, const std::string& line);

void log(const RunConfig& cfg, const std::string& line);

}  // namespace mcfa::cli
