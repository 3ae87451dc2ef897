#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "mcfa/errors.hpp"

namespace {

using mcfa::cli::RunConfig;

void add_common(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--n", cfg.n, "Surface dimension n")->envname("MCFA_N")->check(CLI::Range(1, 16));
  sub.add_option("--r0", cfg.r0, "Initial radius R0")->envname("MCFA_R0")->check(CLI::PositiveNumber);
  sub.add_option("--rt", cfg.rt, "Final radius RT")->envname("MCFA_RT")->check(CLI::PositiveNumber);
  sub.add_option("--t", cfg.t, "Duration T")->envname("MCFA_T")->check(CLI::PositiveNumber);
  sub.add_option("--band-limit", cfg.band_limit, "Highest harmonic degree")
      ->envname("MCFA_BAND_LIMIT")
      ->check(CLI::Range(0, 64));
  sub.add_option("--time-grid", cfg.time_grid, "Uniform time intervals of sampled trajectories")
      ->envname("MCFA_TIME_GRID")
      ->check(CLI::Range(16, 1 << 20));
  sub.add_option("--tolerance", cfg.tolerance, "Override of every verification gate")
      ->envname("MCFA_TOLERANCE")
      ->check(CLI::PositiveNumber);
  sub.add_option("--seed", cfg.seed, "Seed of all random probes")->envname("MCFA_SEED");
  sub.add_option("--output,-o", cfg.output, "Output file (default: standard output)")->envname("MCFA_OUTPUT");
  sub.add_option("--format", cfg.format, "Output format")
      ->envname("MCFA_FORMAT")
      ->check(CLI::IsMember({"csv", "json"}));
  sub.add_flag("--verbose,-v", cfg.verbose, "Progress on standard error")->envname("MCFA_VERBOSE");
  sub.add_flag("--plot-script", cfg.plot_script, "Also write <output>.plot.py next to the CSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean curvature flow action: stationary spheres, stability spectra, regime classification"};
  app.require_subcommand(1);
  RunConfig cfg;
  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Entry entries[] = {
      {"trajectory", "Solve the stationary spherical connection and write it as CSV", mcfa::cli::cmd_trajectory},
      {"spectrum", "Minimal Rayleigh quotient of each harmonic degree (n = 2)", mcfa::cli::cmd_spectrum},
      {"classify", "Regime of the connection (R0, RT, T)", mcfa::cli::cmd_classify},
      {"verify", "Run the property suites; non-zero exit on any failure", mcfa::cli::cmd_verify},
  };
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    add_common(*sub, cfg);
    sub->callback([&cfg, name = e.name] { cfg.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mcfa::cli::kFailure;
  }

  try {
    for (const auto& e : entries)
      if (cfg.command == e.name) return e.run(cfg);
  } catch (const mcfa::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return mcfa::cli::kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mcfa::cli::kFailure;
  }
  return mcfa::cli::kFailure;
}
