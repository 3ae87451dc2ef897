#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mcfa/errors.hpp"
#include "mcfa/regimes.hpp"
#include "mcfa/variation.hpp"
#include "test_support.hpp"

using namespace mcfa;
using mcfa::test::rel_err;

constexpr double kPi = std::numbers::pi;

TEST_CASE("closed-form actions") {
  CHECK(smooth_optimal_action(2, 1, 1) == doctest::Approx(25 * kPi).epsilon(1e-15));
  CHECK(smooth_optimal_action(1.3, 1.3, 2.5) == doctest::Approx(16 * kPi * 2.5).epsilon(1e-15));
  CHECK(smooth_optimal_action(2, 1, 0.75) == doctest::Approx(24 * kPi).epsilon(1e-15));
  CHECK(nucleation_action(2, 1) == doctest::Approx(40 * kPi).epsilon(1e-15));
  CHECK(nucleation_action(1, 0) == doctest::Approx(8 * kPi).epsilon(1e-15));
  CHECK(nucleation_action(1.7, 1.7) == doctest::Approx(16 * kPi * 1.7 * 1.7).epsilon(1e-15));
  CHECK_THROWS_AS(smooth_optimal_action(0, 1, 1), DomainError);
  CHECK_THROWS_AS(nucleation_action(-1, 1), DomainError);

  // The closed form agrees with the quadrature of the solved trajectory.
  for (double T : {0.3, 1.0, 4.0}) {
    const BoundaryData bd{2, 2.0, 1.0, T};
    CHECK(rel_err(spherical_action(solve_bvp(bd)), smooth_optimal_action(2, 1, T)) <= 1e-9);
  }
}

TEST_CASE("jump cost") {
  CHECK(jump_cost(1.4, 1.4) == 0.0);
  CHECK(jump_cost(1, 0) == doctest::Approx(8 * kPi).epsilon(1e-15));
  CHECK(jump_cost(2, 1) == doctest::Approx(40 * kPi).epsilon(1e-15));
  CHECK(jump_cost(0, 0) == 0.0);
  CHECK_THROWS_AS(jump_cost(2, 1, false), UnsupportedError);
  CHECK_THROWS_AS(jump_cost(-2, 1), DomainError);
}

TEST_CASE("classification") {
  SUBCASE("examples") {
    const auto a = classify(2, 1, 0.8);
    CHECK(a.verdict == Verdict::global_among_smooth);
    CHECK(a.T_mcf == doctest::Approx(0.75));
    CHECK(a.T_cross == doctest::Approx(2.25));
    CHECK(a.S_smooth == doctest::Approx(16 * kPi * (0.5625 / 0.8 + 0.8)).epsilon(1e-14));

    const auto b = classify(2, 1, 3);
    CHECK(b.verdict == Verdict::beaten_by_nucleation);
    CHECK(b.S_smooth == doctest::Approx(51 * kPi).epsilon(1e-14));
    CHECK(b.S_nucleation == doctest::Approx(40 * kPi).epsilon(1e-14));
    CHECK(b.nucleation_feasible);

    const auto c = classify(2, 1, 2.25);
    CHECK(c.verdict == Verdict::global_among_smooth);
    CHECK(rel_err(c.S_smooth, c.S_nucleation) <= 1e-14);

    const auto d = classify(2, 1, 0.5);
    CHECK(d.verdict == Verdict::local_minimizer);

    const auto e = classify(2, 1, 0.4);
    CHECK(e.verdict == Verdict::not_locally_minimal_candidate);
    REQUIRE(e.spectral_lambda_min.has_value());
    CHECK(*e.spectral_lambda_min > 0.0);  // the sign change for these radii lies far below T_local
    const auto f = classify(2, 1, 0.05);
    CHECK(*f.spectral_lambda_min < 0.0);
    CHECK(f.statement.find("not a local minimizer") != std::string::npos);

    CHECK_THROWS_AS(classify(2, 1, 0), DomainError);
  }
  SUBCASE("threshold ordering and boundaries land in the stronger regime") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    ClassifyOptions fast;
    fast.spectral_evidence = false;
    for (int i = 0; i < 200; ++i) {
      const double R0 = u(rng), RT = u(rng);
      const auto r = classify(R0, RT, 1.0, fast);
      CHECK(r.T_local <= r.T_global);
      CHECK(r.T_global <= r.T_cross);
      if (r.T_local > 0.0) {
        CHECK(classify(R0, RT, r.T_local, fast).verdict == Verdict::local_minimizer);
        CHECK(classify(R0, RT, r.T_local * (1 - 1e-12), fast).verdict == Verdict::not_locally_minimal_candidate);
        CHECK(classify(R0, RT, r.T_global, fast).verdict == Verdict::global_among_smooth);
        CHECK(classify(R0, RT, r.T_global * (1 - 1e-12), fast).verdict == Verdict::local_minimizer);
      }
      CHECK(classify(R0, RT, r.T_cross, fast).verdict == Verdict::global_among_smooth);
      CHECK(classify(R0, RT, r.T_cross * (1 + 1e-12), fast).verdict == Verdict::beaten_by_nucleation);
    }
    // Equal radii: no local or global threshold.
    CHECK(classify(1, 1, 1e-3).verdict == Verdict::global_among_smooth);
  }
  SUBCASE("crossover and dominance") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05, 10.0), s(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double R0 = u(rng), RT = u(rng);
      const double Tc = (R0 + RT) * (R0 + RT) / 4;
      CHECK(std::abs(smooth_optimal_action(R0, RT, Tc) - nucleation_action(R0, RT)) <= 1e-12 * nucleation_action(R0, RT));
      const double Tg = mcf_time(2, R0, RT);
      const double above = Tc * (1.0 + 0.001 + s(rng));
      const double between = Tg + (Tc - Tg) * (0.001 + 0.998 * s(rng));
      CHECK(nucleation_action(R0, RT) < smooth_optimal_action(R0, RT, above));
      CHECK(smooth_optimal_action(R0, RT, between) < nucleation_action(R0, RT));
    }
  }
  SUBCASE("phase CSV") {
    std::ostringstream os;
    write_phase_csv(os, {classify(2, 1, 1), classify(2, 1, 3)});
    const auto text = os.str();
    CHECK(text.rfind("R0,RT,T,T_local,T_global,T_cross,S_smooth,S_nucleation,verdict\n", 0) == 0);
    CHECK(text.find("beaten-by-nucleation") != std::string::npos);
    CHECK(text.find("global-among-smooth") != std::string::npos);
  }
}

TEST_CASE("piecewise evolutions") {
  SUBCASE("nucleation path reproduces the closed form") {
    const auto pw = PiecewiseEvolution::nucleation(2, 2, 1);
    CHECK(pw.duration() == doctest::Approx(1.25));
    CHECK(std::abs(piecewise_action(pw) - nucleation_action(2, 1)) <= 1e-10 * 40 * kPi);
    // Waiting at the vanished state costs nothing.
    const auto late = PiecewiseEvolution::nucleation(2, 2, 1, 3.0);
    CHECK(late.duration() == doctest::Approx(3.0));
    CHECK(rel_err(piecewise_action(late), 40 * kPi) <= 1e-12);
    CHECK_THROWS_AS(PiecewiseEvolution::nucleation(2, 2, 1, 1.0), InfeasibleError);
    // A single shrinking arc to a point.
    CHECK(rel_err(piecewise_action(PiecewiseEvolution(2).append_mcf_arc(1, 0)), 8 * kPi) <= 1e-14);
    // MCF arcs: ∫2H² dμ dt over the arc, against quadrature of a shrinking trajectory.
    const auto shrink = SphericalTrajectory::from_functions(
        2, 0.75, {[](double t) { return std::sqrt(4 - 4 * t); }, [](double t) { return -2 / std::sqrt(4 - 4 * t); },
                  [](double t) { return -4 / std::pow(4 - 4 * t, 1.5); }});
    CHECK(rel_err(piecewise_action(PiecewiseEvolution(2).append_mcf_arc(2, 1)), spherical_action(shrink)) <= 1e-12);
  }
  SUBCASE("static spheres with a jump") {
    PiecewiseEvolution pw(2);
    pw.append_trajectory(SphericalTrajectory::static_sphere(2, 2.0, 0.4)).append_jump(1.0).append_trajectory(
        SphericalTrajectory::static_sphere(2, 1.0, 0.6));
    CHECK(rel_err(piecewise_action(pw), 56 * kPi) <= 1e-12);
    const auto cert = global_lower_bound(pw, 2, 1, 1);
    CHECK(cert.holds);
    CHECK(cert.gap > 0.0);
  }
  SUBCASE("a single smooth segment equals its spherical action, and splitting adds nothing") {
    const auto traj = closed_form_n2({2, 2.0, 1.0, 1.0});
    PiecewiseEvolution one(2);
    one.append_trajectory(traj);
    CHECK(rel_err(piecewise_action(one), spherical_action(traj)) <= 1e-13);
    PiecewiseEvolution two(2);
    two.append_trajectory(traj, 0.0, 0.37).append_trajectory(traj, 0.37, 1.0);
    CHECK(two.jumps().empty());
    CHECK(rel_err(piecewise_action(two), piecewise_action(one)) <= 1e-13);
    // A zero-size jump at the junction is free.
    PiecewiseEvolution three(2);
    three.append_trajectory(traj, 0.0, 0.37).append_jump(traj.r(0.37)).append_trajectory(traj, 0.37, 1.0);
    CHECK(rel_err(piecewise_action(three), piecewise_action(one)) <= 1e-13);
  }
  SUBCASE("structural errors") {
    const auto st = SphericalTrajectory::static_sphere(2, 1.0, 1.0);
    PiecewiseEvolution mismatch(2);
    mismatch.append_trajectory(st).append_mcf_arc(2.0, 1.0);
    CHECK_THROWS_AS(mismatch.validate(), StructureError);
    CHECK_THROWS_AS(piecewise_action(mismatch), StructureError);

    Segment a, b;
    a.t0 = 0.0, a.t1 = 0.5;
    b.t0 = 0.6, b.t1 = 1.0;
    CHECK_THROWS_AS(PiecewiseEvolution(2, {a, b}, {}).validate(), StructureError);
    CHECK_THROWS_AS(PiecewiseEvolution(2).validate(), StructureError);
    CHECK_THROWS_AS(PiecewiseEvolution(2).append_jump(1.0), StructureError);
    PiecewiseEvolution trailing(2);
    trailing.append_trajectory(st).append_jump(2.0);
    CHECK_THROWS_AS(trailing.validate(), StructureError);
    PiecewiseEvolution skew(2);
    skew.append_trajectory(st).append_jump(2.0, false).append_trajectory(SphericalTrajectory::static_sphere(2, 2.0, 1.0));
    CHECK_THROWS_AS(piecewise_action(skew), UnsupportedError);
  }
}

TEST_CASE("global lower bound") {
  SUBCASE("sharp on the optimal trajectory") {
    const auto cert = global_lower_bound(closed_form_n2({2, 2.0, 1.0, 1.0}), 2, 1, 1);
    CHECK(cert.c_star == doctest::Approx(0.75));
    CHECK(cert.bound == doctest::Approx(25 * kPi).epsilon(1e-14));
    CHECK(std::abs(cert.relative_gap) <= 1e-8);
    CHECK(cert.holds);

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.2, 3.0), s(1.0, 4.0);
    for (int i = 0; i < 50; ++i) {
      const double R0 = u(rng), RT = u(rng);
      const double T = std::max(mcf_time(2, R0, RT), 0.05) * s(rng);
      const auto c = global_lower_bound(solve_bvp({2, R0, RT, T}), R0, RT, T);
      CHECK(std::abs(c.relative_gap) <= 1e-8);
    }
  }
  SUBCASE("strict for non-spherical evolutions") {
    auto grid = SphereGrid::sphere2(8);
    const auto traj = closed_form_n2({2, 2.0, 1.0, 1.0});
    const auto y3 = grid->harmonic(3, 0);
    const auto ev = Evolution::sample(
        grid, TimeGrid::uniform_grid(1.0, 128),
        [&](std::size_t i, double t) { return traj.r(t) + 0.05 * y3[i] * std::sin(kPi * t); },
        [&](std::size_t i, double t) { return traj.rdot(t) + 0.05 * kPi * y3[i] * std::cos(kPi * t); });
    const auto c = global_lower_bound(ev, 2, 1, 1);
    CHECK(c.holds);
    CHECK(c.relative_gap > 1e-4);
  }
  SUBCASE("below T_MCF the clamped multiplier still bounds") {
    const auto c = global_lower_bound(solve_bvp({2, 2.0, 1.0, 0.3}), 2, 1, 0.3);
    CHECK(c.c_star == 1.0);
    CHECK(c.holds);
    CHECK(c.gap > 0.0);
  }
  SUBCASE("boundary mismatch") {
    const auto traj = closed_form_n2({2, 2.0, 1.0, 1.0});
    CHECK_THROWS_AS(global_lower_bound(traj, 2, 1.1, 1), PreconditionError);
    CHECK_THROWS_AS(global_lower_bound(traj, 2, 1, 2), PreconditionError);
    const auto ev = Evolution::lift(traj, SphereGrid::sphere2(4), TimeGrid::gauss(1.0, 2, 4));
    CHECK_THROWS_AS(global_lower_bound(ev, 2, 1, 1), PreconditionError);
  }
}
