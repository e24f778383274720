#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lgmm/app/checks.hpp"
#include "lgmm/problems.hpp"
#include "lgmm/scheme.hpp"

using namespace lgmm;

namespace {

SchemeConfig<double> scheme(double nu, double dt, int order) {
  SchemeConfig<double> c;
  c.nu = nu;
  c.dt = dt;
  c.order = order;
  return c;
}

Problem<double> still_constant(double c) {
  Problem<double> p;
  p.T = 0.5;
  p.u = zero_velocity<double>();
  p.src = zero_source<double>();
  p.initial = [c](double) { return c; };
  return p;
}

}  // namespace

TEST_CASE("load functional") {
  const auto mesh = app::random_mesh(4, -1.0, 1.0, 7);
  const auto rule = gauss_rule<double>();
  CHECK(load_functional(zero_source<double>(), mesh, 0.0, rule).cwiseAbs().maxCoeff() == 0.0);
  SourceData<double> one = zero_source<double>();
  one.f = [](double, double) { return 1.0; };
  CHECK((load_functional(one, mesh, 0.0, rule) - lumped_masses(mesh)).cwiseAbs().maxCoeff() < 1e-15);
  SourceData<double> flux = zero_source<double>();
  flux.g_left = [](double) { return 3.0; };
  const Vector<double> l = load_functional(flux, mesh, 0.0, rule);
  CHECK(l(0) == 3.0);
  CHECK(l.tail(l.size() - 1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("constants are steady states of both schemes") {
  const auto mesh = app::random_mesh(5, -1.0, 1.0, 12);
  for (int order : {1, 2}) {
    const auto r = run_simulation(still_constant(1.7), mesh, MeshMotionConfig<double>{}, scheme(0.01, 0.05, order), false,
                                  {true, {}});
    CHECK(r.trajectory.size() == 11);
    for (const auto& fn : r.trajectory) CHECK((fn.values.array() - 1.7).abs().maxCoeff() < 1e-12);
    for (const auto& e : r.report.mass_ledger) CHECK(e.residual < 1e-13);
  }
}

TEST_CASE("the first two-step update is the one-step update, bit for bit") {
  const auto p = problems::traveling_pulse<double>(0.01);
  const auto mesh = initial_uniform_mesh(-1.0, 1.0, 64);
  const auto state = initial_state(interpolate(p.initial, mesh));
  const auto next = mesh.with_time(0.125);
  const auto a = step_first_order(state, next, p.u, p.src, scheme(0.01, 0.125, 1));
  const auto b = step_second_order(state, next, p.u, p.src, scheme(0.01, 0.125, 2));
  CHECK(a.values == b.values);
}

TEST_CASE("the two-step scheme needs its history") {
  const auto p = problems::traveling_pulse<double>(0.01);
  const auto mesh = initial_uniform_mesh(-1.0, 1.0, 16);
  auto state = initial_state(interpolate(p.initial, mesh));
  state.step_index = 1;
  try {
    step_second_order(state, mesh.with_time(0.1), p.u, p.src, scheme(0.01, 0.1, 2));
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::missing_history);
  }
}

TEST_CASE("one-step mass balance under a boundary-vanishing field") {
  const auto p = problems::aggregation<double>();
  const auto mesh = initial_uniform_mesh(-1.0, 1.0, 128);
  MeshMotionConfig<double> mc;
  mc.nu_m = 1e-3;
  SchemeConfig<double> sc = scheme(1e-3, 1e-3, 1);
  sc.kinks = KinkQuadrature::split_at_preimages;
  Problem<double> q = p;
  q.T = 0.02;
  for (bool moving : {false, true}) {
    const auto r = run_simulation(q, mesh, mc, sc, moving);
    const double m0 = r.report.mass_ledger.front().mass;
    for (const auto& e : r.report.mass_ledger) CHECK(e.residual <= 1e-10 * std::abs(m0));
  }
}

TEST_CASE("mass balance with sources and boundary fluxes") {
  Problem<double> p = problems::aggregation<double>(0.05);
  p.src.f = [](double x, double t) { return std::cos(x) * (1 + t); };
  p.src.g_left = [](double t) { return 0.3 * t; };
  p.src.g_right = [](double) { return -0.1; };
  SchemeConfig<double> sc = scheme(1e-2, 5e-3, 2);
  sc.kinks = KinkQuadrature::split_at_preimages;
  MeshMotionConfig<double> mc;
  mc.nu_m = 1e-2;
  for (int order : {1, 2}) {
    sc.order = order;
    const auto r = run_simulation(p, initial_uniform_mesh(-1.0, 1.0, 64), mc, sc, true);
    const double m0 = r.report.mass_ledger.front().mass;
    for (const auto& e : r.report.mass_ledger) CHECK(e.residual <= 1e-10 * std::abs(m0));
  }
}

TEST_CASE("fixed-mesh run keeps every level on the initial points") {
  const auto p = problems::traveling_pulse<double>(0.01);
  const auto mesh = initial_uniform_mesh(-1.0, 1.0, 32);
  const auto r = run_simulation(p, mesh, MeshMotionConfig<double>{}, scheme(0.01, 0.125, 2), false, {true, {}});
  for (const auto& fn : r.trajectory) CHECK(fn.mesh.points() == mesh.points());
  CHECK(r.report.mass_ledger.size() == r.trajectory.size());
  CHECK(r.report.mesh_stats.size() == r.trajectory.size());
}

TEST_CASE("T below dt gives the initial state only") {
  auto p = problems::traveling_pulse<double>(0.01, 0.01);
  const auto r = run_simulation(p, initial_uniform_mesh(-1.0, 1.0, 16), MeshMotionConfig<double>{},
                                scheme(0.01, 0.125, 2), true, {true, {}});
  CHECK(r.trajectory.size() == 1);
  CHECK(r.report.mass_ledger.size() == 1);
  CHECK_FALSE(r.report.errors.has_value());
  CHECK(r.final_state.step_index == 0);
}

TEST_CASE("step count tolerates representation error") {
  CHECK(step_count(0.5, 0.0625) == 8);
  CHECK(step_count(2.0, 1e-4) == 20000);
  CHECK(step_count(0.5, 4 * 2.0 / 4096) == 256);
  CHECK(step_count(0.3, 0.25) == 1);
  CHECK(step_count(0.0, 0.1) == 0);
}

TEST_CASE("mesh and scheme dt must agree") {
  const auto p = problems::traveling_pulse<double>(0.01);
  MeshMotionConfig<double> mc;
  mc.dt = 0.1;
  CHECK_THROWS_AS(run_simulation(p, initial_uniform_mesh(-1.0, 1.0, 16), mc, scheme(0.01, 0.125, 2), true), Error);
}

TEST_CASE("one-step scheme is first order, two-step scheme second order, on Example 1") {
  const auto p = problems::traveling_pulse<double>(0.01);
  for (int order : {1, 2}) {
    double prev = 0, rate = 0;
    for (Index n : {Index(256), Index(512)}) {
      const double dt = 4 * 2.0 / static_cast<double>(n);
      MeshMotionConfig<double> mc;
      mc.nu_m = 0.01;
      mc.clamp_boundary = false;
      const auto r = run_simulation(p, initial_uniform_mesh(-1.0, 1.0, n), mc, scheme(0.01, dt, order), true);
      const double e = r.report.errors->linf_l2;
      if (prev > 0) rate = std::log2(prev / e);
      prev = e;
    }
    if (order == 1) {
      CHECK(rate > 0.8);
      CHECK(rate < 1.3);
    } else {
      CHECK(rate > 1.7);
    }
  }
}

TEST_CASE("observer sees every level in order") {
  const auto p = problems::traveling_pulse<double>(0.01);
  std::vector<Index> seen;
  SimulationOptions<double> opts;
  opts.observer = [&](const StepState<double>& s) { seen.push_back(s.step_index); };
  run_simulation(p, initial_uniform_mesh(-1.0, 1.0, 16), MeshMotionConfig<double>{}, scheme(0.01, 0.125, 2), false,
                 opts);
  REQUIRE(seen.size() == 5);
  for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] == static_cast<Index>(i));
}
