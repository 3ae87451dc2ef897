#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "mcfa/geometry.hpp"
#include "mcfa/regimes.hpp"
#include "mcfa/stability.hpp"
#include "mcfa/variation.hpp"

namespace mcfa::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  std::string suite;
  std::string name;
  double error = 0.0;
  double gate = 0.0;
  bool pass() const { return error <= gate; }
};

class Suites {
 public:
  explicit Suites(const RunConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  void add(const std::string& suite, const std::string& name, double error, double gate) {
    const Check c{suite, name, error, cfg_.tolerance.value_or(gate)};
    log(cfg_, suite + "/" + name + ": " + std::to_string(error) + (c.pass() ? " ok" : " FAIL"));
    checks_.push_back(c);
  }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  const std::vector<Check>& checks() const { return checks_; }

 private:
  const RunConfig& cfg_;
  std::mt19937_64 rng_;
  std::vector<Check> checks_;
};

void analytic_identities(Suites& s) {
  const double R = s.uniform(0.5, 3.0);
  for (int n : {1, 2}) {
    auto grid = n == 2 ? SphereGrid::sphere2(8) : SphereGrid::circle(8);
    const auto g = build_geometry(RadialField::constant(grid, R));
    double e = 0.0;
    for (double H : g.mean_curvature) e = std::max(e, std::abs(H - n / R) * R);
    s.add("analytic-identity", "mean-curvature-round-n" + std::to_string(n), e, 1e-12);
  }
  s.add("analytic-identity", "optimal-action-2-1-1",
        std::abs(spherical_action(closed_form_n2({2, 2.0, 1.0, 1.0})) / (25 * kPi) - 1.0), 1e-10);
  const double Tm = 0.75;
  s.add("analytic-identity", "mode-coefficient-threshold", std::abs(mode_coefficient(2, std::sqrt(3.0) / 3.0 * Tm, Tm)),
        1e-12);
  s.add("analytic-identity", "zero-mode-coefficient", std::abs(mode_coefficient(1, s.uniform(0.01, 5.0), Tm)), 0.0);
  double bvp = 0.0;
  for (int i = 0; i < 4; ++i) {
    const BoundaryData bd{2, s.uniform(0.5, 3.0), s.uniform(0.5, 3.0), s.uniform(0.1, 3.0)};
    const auto a = solve_bvp(bd);
    const auto b = closed_form_n2(bd);
    for (double t : a.times()) bvp = std::max(bvp, std::abs(a.r(t) - b.r(t)));
  }
  s.add("analytic-identity", "bvp-matches-closed-form", bvp, 1e-6);
}

void fd_consistency(Suites& s) {
  auto grid = SphereGrid::sphere2(4);
  const auto tg = TimeGrid::uniform_grid(1.0, 64);
  const auto base = closed_form_n2({2, 2.0, 1.0, 1.0});
  const auto y3 = grid->harmonic(3, -2);
  auto base_r = [&](std::size_t i, double t) { return base.r(t) + 0.05 * std::sin(kPi * t) * y3[i]; };
  auto base_rt = [&](std::size_t i, double t) { return base.rdot(t) + 0.05 * kPi * std::cos(kPi * t) * y3[i]; };
  const auto ev = Evolution::sample(grid, tg, base_r, base_rt);
  double worst = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> shape(grid->size(), 0.0);
    for (int l = 0; l <= 3; ++l)
      for (int m = -l; m <= l; ++m) {
        const double c = s.uniform(-1.0, 1.0) / (1.0 + l);
        const auto y = grid->harmonic(l, m);
        for (std::size_t i = 0; i < shape.size(); ++i) shape[i] += c * y[i];
      }
    const auto prof = sine_profile({s.uniform(-1, 1), s.uniform(-1, 1)}, 1.0);
    auto perturbed = [&](double e) {
      return action(Evolution::sample(
          grid, tg, [&](std::size_t i, double t) { return base_r(i, t) + e * prof.eta(t) * shape[i]; },
          [&](std::size_t i, double t) { return base_rt(i, t) + e * prof.eta_dot(t) * shape[i]; }));
    };
    const double eps = 1e-4;
    const double fd = (perturbed(eps) - perturbed(-eps)) / (2 * eps);
    SpaceTimeField rho(ev.steps(), std::vector<double>(ev.nodes()));
    for (std::size_t k = 1; k + 1 < ev.steps(); ++k)
      for (std::size_t i = 0; i < ev.nodes(); ++i) rho[k][i] = prof.eta(tg.t[k]) * shape[i];
    const double pairing = first_variation_pairing(ev, normal_component(ev, rho));
    worst = std::max(worst, std::abs(fd - pairing) / (1.0 + std::abs(pairing)));
  }
  s.add("fd-consistency", "first-variation-pairing", worst, 1e-4);

  auto fine = SphereGrid::sphere2(12);
  const auto gt = TimeGrid::gauss(1.0, 8, 16);
  double second = 0.0;
  for (int trial = 0; trial < 2; ++trial) {
    const int l = static_cast<int>(s.uniform(0.0, 4.999));
    const ModePerturbation p{l, sine_profile({s.uniform(-1, 1), 0.5 * s.uniform(-1, 1)}, 1.0)};
    std::vector<double> psi = fine->harmonic(l, 0);
    for (double& v : psi) v *= std::sqrt(4 * kPi);
    auto S = [&](double e) {
      return action(Evolution::sample(
          fine, gt, [&](std::size_t i, double t) { return base.r(t) + e * p.profile.eta(t) * psi[i]; },
          [&](std::size_t i, double t) { return base.rdot(t) + e * p.profile.eta_dot(t) * psi[i]; }));
    };
    const double h = 1e-3;
    const double fd = (-S(2 * h) + 16 * S(h) - 30 * S(0) + 16 * S(-h) - S(-2 * h)) / (12 * h * h);
    const double q = second_variation_mode(base, p).value();
    second = std::max(second, std::abs(fd - q) / std::abs(q));
  }
  s.add("fd-consistency", "second-variation-mode", second, 1e-3);
}

void conservation(Suites& s) {
  double drift = 0.0;
  for (int n : {2, 3}) {
    const BoundaryData bd{n, s.uniform(1.0, 2.0), s.uniform(1.0, 2.0), s.uniform(0.1, 0.5)};
    const auto traj = solve_bvp(bd);
    const auto e = traj.energy_constant_samples();
    const auto [lo, hi] = std::minmax_element(e.begin(), e.end());
    drift = std::max(drift, (*hi - *lo) / std::max(1.0, std::abs(e.front())));
  }
  s.add("conservation", "energy-drift", drift, 1e-6);
  const auto ev = Evolution::lift(closed_form_n2({2, 2.0, 1.0, 1.0}), SphereGrid::sphere2(6), TimeGrid::uniform_grid(1.0, 16));
  double am = 0.0;
  for (std::size_t k = 0; k < ev.steps(); ++k) am = std::max(am, angular_momentum(ev, k).cwiseAbs().maxCoeff());
  s.add("conservation", "angular-momentum-spherical", am, 1e-12);
}

void thresholds(Suites& s) {
  const double R0 = s.uniform(0.5, 3.0), RT = s.uniform(0.5, 3.0);
  const double Tl = std::sqrt(3.0) / 3.0 * mcf_time(2, R0, RT);
  double neg = 0.0;
  for (double f : {1.0, 1.0 + s.uniform(0.0, 3.0)}) {
    const double T = std::max(Tl * f, 1e-3);
    for (const auto& m : mode_spectrum(closed_form_n2({2, R0, RT, T}, 64), 8)) neg = std::max(neg, -m.lambda_min);
  }
  s.add("threshold", "non-negative-from-T_local", neg, 1e-8);
  double least = 0.0;
  for (const auto& m : mode_spectrum(closed_form_n2({2, 2.0, 1.0, 0.05 * 0.75}, 64), 8))
    least = std::min(least, m.lambda_min);
  s.add("threshold", "negative-mode-at-short-times", least < 0.0 ? 0.0 : 1.0, 0.0);
}

void crossover(Suites& s) {
  double cross = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double R0 = s.uniform(0.05, 10.0), RT = s.uniform(0.05, 10.0);
    const double N = nucleation_action(R0, RT);
    cross = std::max(cross, std::abs(smooth_optimal_action(R0, RT, (R0 + RT) * (R0 + RT) / 4) - N) / N);
  }
  s.add("crossover", "crossover-identity", cross, 1e-12);
  s.add("crossover", "nucleation-path",
        std::abs(piecewise_action(PiecewiseEvolution::nucleation(2, 2.0, 1.0)) / (40 * kPi) - 1.0), 1e-10);
  double gap = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double R0 = s.uniform(0.3, 3.0), RT = s.uniform(0.3, 3.0);
    const double T = std::max(mcf_time(2, R0, RT), 0.05) * s.uniform(1.0, 4.0);
    gap = std::max(gap, std::abs(global_lower_bound(closed_form_n2({2, R0, RT, T}), R0, RT, T).relative_gap));
  }
  s.add("crossover", "bound-sharpness", gap, 1e-8);
}

std::string sci(double x) {
  std::ostringstream o;
  o.precision(6);
  o << std::scientific << x;
  return o.str();
}

}  // namespace

int cmd_verify(const RunConfig& cfg) {
  Suites s(cfg);
  analytic_identities(s);
  fd_consistency(s);
  conservation(s);
  thresholds(s);
  crossover(s);

  std::vector<std::string> failed;
  for (const auto& c : s.checks())
    if (!c.pass()) failed.push_back(c.suite + "/" + c.name);

  if (cfg.format == "json") {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["command"] = "verify";
    j["seed"] = cfg.seed;
    j["passed"] = failed.empty();
    auto& rows = j["checks"] = nlohmann::json::array();
    for (const auto& c : s.checks())
      rows.push_back({{"suite", c.suite}, {"check", c.name}, {"error", sci(c.error)}, {"gate", sci(c.gate)}, {"pass", c.pass()}});
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::ostringstream o;
    o << "suite,check,error,gate,pass\n";
    for (const auto& c : s.checks())
      o << c.suite << ',' << c.name << ',' << sci(c.error) << ',' << sci(c.gate) << ',' << (c.pass() ? "true" : "false")
        << '\n';
    emit(cfg, o.str());
  }
  for (const auto& f : failed) std::cerr << "FAILED " << f << '\n';
  summary(cfg, std::to_string(s.checks().size() - failed.size()) + "/" + std::to_string(s.checks().size()) +
                   " checks passed");
  return failed.empty() ? kOk : kFailure;
}

}  // namespace mcfa::cli
