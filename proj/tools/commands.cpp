#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "json.hpp"
#include "mcfa/errors.hpp"
#include "mcfa/regimes.hpp"
#include "mcfa/stability.hpp"

namespace mcfa::cli {

namespace {

constexpr int kSchemaVersion = 1;

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(10);
  s << x;
  return s.str();
}

const char* branch_name(BvpBranch b) {
  switch (b) {
    case BvpBranch::static_sphere: return "static";
    case BvpBranch::monotone: return "monotone";
    case BvpBranch::turning: return "turning";
  }
  return "unknown";
}

void write_plot_script(const RunConfig& cfg, const std::string& x, const std::string& y) {
  if (!cfg.plot_script) return;
  if (cfg.output.empty() || cfg.format != "csv") throw PreconditionError("--plot-script needs --output with CSV");
  const std::string csv = std::filesystem::path(cfg.output).filename().string();
  std::ostringstream s;
  s << "# Plots " << csv << " (written next to it).\n"
    << "import pathlib\nimport pandas as pd\nimport matplotlib.pyplot as plt\n\n"
    << "here = pathlib.Path(__file__).resolve().parent\n"
    << "df = pd.read_csv(here / \"" << csv << "\")\n"
    << "ax = df.plot(x=\"" << x << "\", y=\"" << y << "\", marker=\".\")\n"
    << "ax.set_title(\"" << cfg.command << "\")\n"
    << "plt.savefig(here / \"" << csv << ".png\", dpi=150)\n";
  RunConfig side = cfg;
  side.output = cfg.output + ".plot.py";
  emit(side, s.str());
}

}  // namespace

void emit(const RunConfig& cfg, const std::string& content) {
  if (cfg.output.empty()) {
    std::cout << content;
    std::cout.flush();
    return;
  }
  const std::string tmp = cfg.output + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f << content;
    f.flush();
    if (!f) {
      std::remove(tmp.c_str());
      throw std::runtime_error("write to " + tmp + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, cfg.output, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot move output into place: " + ec.message());
  }
}

void summary(const RunConfig& cfg, const std::string& line) {
  (cfg.output.empty() ? std::cerr : std::cout) << line << '\n';
}

void log(const RunConfig& cfg, const std::string& line) {
  if (cfg.verbose) std::cerr << "[mcfa] " << line << '\n';
}

int cmd_trajectory(const RunConfig& cfg) {
  const BoundaryData bd{cfg.n, cfg.r0, cfg.rt, cfg.t};
  bd.validate();
  BvpOptions opt;
  opt.intervals = cfg.time_grid;
  std::optional<SphericalTrajectory> traj;
  std::string branch = "closed-form";
  std::size_t roots = 1;
  if (cfg.n == 2) {
    log(cfg, "n = 2: closed-form stationary connection");
    traj = closed_form_n2(bd, cfg.time_grid);
  } else {
    log(cfg, "shooting on the energy constant");
    const auto all = solve_bvp_all(bd, opt);  // throws InfeasibleError with the searched brackets
    roots = all.size();
    traj = all.front().trajectory;
    branch = branch_name(all.front().branch);
  }
  const double S = spherical_action(*traj);
  const double Ec = traj->energy_constant();
  const double E = energy(*traj, 0.0);
  double el = 0.0;
  for (double x : el_residual_spherical(*traj)) el = std::max(el, std::abs(x));

  if (cfg.format == "json") {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "trajectory";
    j["inputs"] = {{"n", cfg.n}, {"R0", cfg.r0}, {"RT", cfg.rt}, {"T", cfg.t}, {"intervals", cfg.time_grid}};
    j["branch"] = branch;
    j["solutions_found"] = roots;
    j["action"] = S;
    j["energy_constant"] = Ec;
    j["energy"] = E;
    j["el_residual_max"] = el;
    auto& samples = j["samples"] = nlohmann::json::array();
    for (std::size_t k = 0; k < traj->size(); ++k)
      samples.push_back({{"t", traj->times()[k]}, {"r", traj->radius()[k]}, {"rdot", traj->velocity()[k]}});
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::ostringstream s;
    traj->write_csv(s);
    emit(cfg, s.str());
    write_plot_script(cfg, "t", "r");
  }
  summary(cfg, "branch " + branch + " (" + std::to_string(roots) + " stationary connection(s) found)");
  summary(cfg, "action " + fmt(S) + " = " + fmt(S / std::numbers::pi) + "π");
  summary(cfg, "energy constant " + fmt(Ec) + ", energy " + fmt(E));
  summary(cfg, "max |EL residual| " + fmt(el));
  return kOk;
}

int cmd_spectrum(const RunConfig& cfg) {
  if (cfg.n != 2) throw UnsupportedError("spectrum: mode analysis is for n = 2");
  const BoundaryData bd{2, cfg.r0, cfg.rt, cfg.t};
  bd.validate();
  const double Tm = mcf_time(2, cfg.r0, cfg.rt);
  log(cfg, "minimal Rayleigh quotients for l = 0.." + std::to_string(cfg.band_limit));
  const auto spec = mode_spectrum(closed_form_n2(bd, 64), cfg.band_limit);
  const auto worst = std::min_element(spec.begin(), spec.end(),
                                      [](const auto& a, const auto& b) { return a.lambda_min < b.lambda_min; });
  const bool definite = worst->lambda_min >= -1e-8;
  bool coarse = false;
  for (const auto& s : spec) coarse = coarse || s.coarse_grid;

  if (cfg.format == "json") {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "spectrum";
    j["inputs"] = {{"R0", cfg.r0}, {"RT", cfg.rt}, {"T", cfg.t}, {"l_max", cfg.band_limit}};
    j["T_MCF"] = Tm;
    j["kappa"] = Tm / cfg.t;
    j["positive_definite"] = definite;
    j["coarse_grid_warning"] = coarse;
    auto& rows = j["modes"] = nlohmann::json::array();
    for (const auto& s : spec)
      rows.push_back({{"l", s.l}, {"c_l", s.coefficient}, {"lambda_min", s.lambda_min}, {"elements", s.elements}});
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::ostringstream s;
    write_spectrum_csv(s, spec, cfg.t, Tm);
    emit(cfg, s.str());
    write_plot_script(cfg, "l", "lambda_min");
  }
  if (coarse) summary(cfg, "warning: eigenvalue not converged under refinement for some degree");
  summary(cfg, std::string(definite ? "positive-definite" : "indefinite") + " over l <= " +
                   std::to_string(cfg.band_limit) + " (smallest lambda_min " + fmt(worst->lambda_min) + " at l = " +
                   std::to_string(worst->l) + ")");
  return kOk;
}

int cmd_classify(const RunConfig& cfg) {
  if (cfg.n != 2) throw UnsupportedError("classify: the regime analysis is for n = 2");
  ClassifyOptions opt;
  opt.l_max = std::max(cfg.band_limit, 2);
  const auto r = classify(cfg.r0, cfg.rt, cfg.t, opt);
  if (cfg.format == "json") {
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "classify";
    j["inputs"] = {{"R0", r.R0}, {"RT", r.RT}, {"T", r.T}};
    j["thresholds"] = {{"T_MCF", r.T_mcf},
                       {"T_local", r.T_local},
                       {"T_global", r.T_global},
                       {"T_cross", r.T_cross},
                       {"T_nuc_feasible", r.T_nuc_feasible}};
    j["actions"] = {{"S_smooth", r.S_smooth}, {"S_nucleation", r.S_nucleation}};
    j["nucleation_feasible"] = r.nucleation_feasible;
    j["verdict"] = verdict_key(r.verdict);
    j["statement"] = r.statement;
    if (r.spectral_lambda_min)
      j["spectral_evidence"] = {{"lambda_min", *r.spectral_lambda_min}, {"degree", *r.spectral_degree}};
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::ostringstream s;
    write_phase_csv(s, {r});
    emit(cfg, s.str());
  }
  summary(cfg, "verdict " + verdict_key(r.verdict) + ": " + r.statement);
  summary(cfg, "S_smooth " + fmt(r.S_smooth / std::numbers::pi) + "π, S_nucleation " + fmt(r.S_nucleation / std::numbers::pi) + "π");
  return kOk;
}

}  // namespace mcfa::cli
