#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lgmm/app/checks.hpp"
#include "lgmm/diagnostics.hpp"
#include "lgmm/problems.hpp"
#include "lgmm/scheme.hpp"

using namespace lgmm;

TEST_CASE("eoc") {
  CHECK(eoc(4e-3, 1e-3) == doctest::Approx(2.0));
  CHECK(eoc(2.795558e-3, 8.085728e-4) == doctest::Approx(1.79).epsilon(0.005));
  CHECK(eoc(0.3, 0.3) == 0.0);
  CHECK_THROWS_AS(eoc(0.0, 1.0), Error);
  CHECK_THROWS_AS(eoc(1.0, -1.0), Error);
}

TEST_CASE("interpolated exact solution gives zero errors") {
  const auto exact = [](double x, double t) { return std::exp(-(x - t) * (x - t)); };
  std::vector<PiecewiseLinear<double>> traj;
  for (int n = 0; n <= 4; ++n) {
    const auto mesh = app::random_mesh(static_cast<std::uint64_t>(n), -1.0, 1.0, 10, 0.3, 0.1 * n);
    traj.push_back(interpolate([&](double x) { return exact(x, 0.1 * n); }, mesh));
  }
  const auto e = relative_errors<double>(traj, exact);
  CHECK(e.linf_l2 == 0.0);
  CHECK(e.l2_h1 == 0.0);
  CHECK(e.mass == 0.0);
}

TEST_CASE("relative errors need at least one step and a nonzero reference") {
  std::vector<PiecewiseLinear<double>> traj{interpolate([](double) { return 1.0; }, initial_uniform_mesh(0.0, 1.0, 2))};
  CHECK_THROWS_AS(relative_errors<double>(traj, [](double, double) { return 1.0; }), Error);
  traj.push_back(traj.front());
  CHECK_THROWS_AS(relative_errors<double>(traj, [](double, double) { return 0.0; }), Error);
}

TEST_CASE("relative errors are invariant under a rigid shift of the problem") {
  constexpr double nu = 0.01, shift = 3.25;
  Problem<double> base = problems::traveling_pulse<double>(nu);
  Problem<double> moved = base;
  moved.a += shift;
  moved.b += shift;
  moved.u.eval = [](double x, double t) { return 1 + std::sin(t - (x - shift)); };
  moved.u.grad = [](double x, double t) { return -std::cos(t - (x - shift)); };
  moved.initial = [base](double x) { return base.initial(x - shift); };
  moved.exact = [base](double x, double t) { return base.exact(x - shift, t); };
  SchemeConfig<double> sc;
  sc.nu = nu;
  sc.dt = 4 * 2.0 / 64;
  MeshMotionConfig<double> mc;
  mc.nu_m = nu;
  mc.clamp_boundary = false;
  const auto a = run_simulation(base, initial_uniform_mesh(-1.0, 1.0, 64), mc, sc, true);
  const auto b = run_simulation(moved, initial_uniform_mesh(-1.0 + shift, 1.0 + shift, 64), mc, sc, true);
  CHECK(b.report.errors->linf_l2 == doctest::Approx(a.report.errors->linf_l2).epsilon(1e-6));
  CHECK(b.report.errors->l2_h1 == doctest::Approx(a.report.errors->l2_h1).epsilon(1e-6));
  CHECK(b.report.errors->mass == doctest::Approx(a.report.errors->mass).epsilon(1e-4));
}

TEST_CASE("ledger residuals: constant solution, zero sources") {
  const auto mesh = initial_uniform_mesh(-1.0, 1.0, 8);
  std::vector<PiecewiseLinear<double>> traj(5, interpolate([](double) { return 0.7; }, mesh));
  for (int order : {1, 2}) {
    for (double r : mass_ledger_residual<double>(traj, zero_source<double>(), order, 0.1, gauss_rule<double>()))
      CHECK(r < 1e-15);
  }
}

TEST_CASE("ledger residuals of a scheme run stay at round-off") {
  Problem<double> p = problems::aggregation<double>(0.05);
  SchemeConfig<double> sc;
  sc.nu = 1e-3;
  sc.dt = 1e-3;
  sc.kinks = KinkQuadrature::split_at_preimages;
  MeshMotionConfig<double> mc;
  mc.nu_m = 1e-3;
  for (int order : {1, 2}) {
    sc.order = order;
    const auto r = run_simulation(p, initial_uniform_mesh(-1.0, 1.0, 64), mc, sc, true, {true, {}});
    const auto res = mass_ledger_residual<double>(r.trajectory, p.src, order, sc.dt, gauss_rule<double>(5));
    const double m0 = total_integral(r.trajectory.front());
    REQUIRE(res.size() == r.trajectory.size());
    for (double x : res) CHECK(x <= 1e-10 * m0);
  }
}

TEST_CASE("mutation: dropping the Jacobian weight breaks the balance at order dt") {
  const auto p = problems::aggregation<double>();
  VelocityField<double> faulty = p.u;
  faulty.grad = [](double, double) { return 0.0; };
  const auto mesh = initial_uniform_mesh(-1.0, 1.0, 256);
  const auto state = initial_state(interpolate(p.initial, mesh));
  const double m0 = total_integral(state.current);
  double prev = 0;
  for (double dt : {4e-3, 2e-3, 1e-3}) {
    SchemeConfig<double> sc;
    sc.nu = 1e-3;
    sc.dt = dt;
    sc.kinks = KinkQuadrature::split_at_preimages;
    const auto good = step_first_order(state, mesh.with_time(dt), p.u, p.src, sc);
    const auto bad = step_first_order(state, mesh.with_time(dt), faulty, p.src, sc);
    CHECK(std::abs(total_integral(good) - m0) <= 1e-12 * m0);
    const double r = std::abs(total_integral(bad) - m0) / m0;
    CHECK(r > 1e-4);
    if (prev > 0) CHECK(prev / r == doctest::Approx(2.0).epsilon(0.1));
    prev = r;
  }
}

TEST_CASE("convergence rows and csv layout") {
  const std::vector<Index> ns{128, 256};
  const std::vector<double> dts{0.0625, 0.03125};
  const std::vector<RelativeErrors> errs{{4e-3, 8e-3, 1e-5}, {1e-3, 2e-3, 0.0}};
  const auto rows = convergence_rows(ns, dts, errs);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].eocs.has_value());
  CHECK(rows[1].eocs->linf_l2 == doctest::Approx(2.0));
  CHECK(rows[1].eocs->l2_h1 == doctest::Approx(2.0));
  std::ostringstream os;
  write_convergence_csv(os, rows);
  CHECK(os.str() ==
        "N,dt,E_linf_L2,EOC_linf_L2,E_l2_H1,EOC_l2_H1,E_mass\n"
        "128,0.0625,4.000000e-03,-,8.000000e-03,-,1.000000e-05\n"
        "256,0.03125,1.000000e-03,2.00,2.000000e-03,2.00,0.000000e+00\n");
  const std::vector<RelativeErrors> one{{4e-3, 8e-3, 1e-5}};
  CHECK(convergence_rows(std::span<const Index>(ns).first(1), std::span<const double>(dts).first(1), one).size() == 1);
}

TEST_CASE("true L2 error against the exact function") {
  const auto mesh = initial_uniform_mesh(0.0, 1.0, 1);
  const auto fn = interpolate([](double) { return 0.0; }, mesh);
  CHECK(true_l2_error(fn, [](double, double) { return 1.0; }, gauss_rule<double>()) == doctest::Approx(1.0));
}
