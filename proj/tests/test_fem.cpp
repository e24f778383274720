#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lgmm/diagnostics.hpp"
#include "lgmm/fem.hpp"
#include "lgmm/mesh.hpp"

using namespace lgmm;

namespace {
MeshLevel<double> mesh_of(std::initializer_list<double> pts) {
  Vector<double> p(static_cast<Index>(pts.size()));
  Index i = 0;
  for (double x : pts) p(i++) = x;
  return {p, 0.0};
}
}  // namespace

TEST_CASE("mesh level validation") {
  CHECK_THROWS_AS(mesh_of({0.0}), Error);
  CHECK_THROWS_AS(mesh_of({0.0, 0.5, 0.5, 1.0}), Error);
  CHECK_THROWS_AS(mesh_of({0.0, -1.0}), Error);
  const auto m = mesh_of({0.0, 0.25, 1.0});
  CHECK(m.elements() == 2);
  CHECK(m.min_width() == 0.25);
  CHECK(m.max_width() == 0.75);
}

TEST_CASE("hat basis") {
  const auto m = mesh_of({0.0, 0.5, 1.0});
  CHECK(hat_basis_eval(m, 1, 0.5) == 1.0);
  CHECK(hat_basis_eval(m, 1, 0.0) == 0.0);
  CHECK(hat_basis_eval(m, 1, 1.0) == 0.0);
  CHECK(hat_basis_eval(m, 1, 0.25) == 0.5);
  CHECK(hat_basis_eval(m, 0, 0.25) == 0.5);
  CHECK(hat_basis_eval(m, 2, 0.25) == 0.0);
}

TEST_CASE("interpolation reproduces affine and constant functions") {
  const auto m = mesh_of({-1.0, -0.3, 0.1, 0.8, 1.0});
  const auto f = interpolate([](double x) { return 3 * x - 1; }, m);
  for (double x : {-0.95, -0.3, 0.0, 0.5, 0.99}) CHECK(evaluate(f, x) == doctest::Approx(3 * x - 1).epsilon(1e-14));
  const auto c = interpolate([](double) { return 2.5; }, m);
  for (double x : {-0.7, 0.2, 0.9}) CHECK(evaluate(c, x) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("interpolation error of x^2 is second order") {
  const auto rule = gauss_rule<double>(16);
  const auto exact = [](double x, double) { return x * x; };
  double prev = 0;
  for (Index n = 8; n <= 128; n *= 2) {
    const auto m = initial_uniform_mesh(0.0, 1.0, n);
    const double e = true_l2_error(interpolate([](double x) { return x * x; }, m), exact, rule);
    if (prev > 0) CHECK(prev / e == doctest::Approx(4.0).epsilon(1e-6));
    prev = e;
  }
}

TEST_CASE("evaluate outside the hull") {
  const PiecewiseLinear<double> f(mesh_of({0.0, 1.0}), Vector<double>{{0.0, 2.0}});
  CHECK(evaluate(f, 1.5, ExtensionPolicy::linear_extension) == 3.0);
  CHECK(evaluate(f, 1.5, ExtensionPolicy::clamp_end_value) == 2.0);
  CHECK(evaluate(f, -0.5, ExtensionPolicy::clamp_end_value) == 0.0);
  CHECK_THROWS_AS(evaluate(f, 1.5, ExtensionPolicy::error), Error);
  CHECK(evaluate(f, 1.0) == 2.0);
}

TEST_CASE("element location") {
  const auto m = initial_uniform_mesh(0.0, 1.0, 4);
  CHECK(locate_element(m, 0.6) == 2);
  CHECK(locate_element(m, 0.5) == 1);  // interior node: left element
  CHECK(locate_element(m, 0.25, 3) == 0);
  CHECK(locate_element(m, 0.0) == 0);
  CHECK(locate_element(m, 1.0) == 3);
  const auto w = initial_uniform_mesh(-1.0, 1.0, 64);
  CHECK(locate_element(w, -5.0) == 0);
  CHECK(locate_element(w, 5.0) == 63);
  for (Index hint : {Index(0), Index(20), Index(63)})
    CHECK(locate_element(w, 0.51, hint) == static_cast<Index>(std::floor((0.51 + 1) / (2.0 / 64))));
}

TEST_CASE("mass matrix") {
  const double h = 0.25;
  const auto m = assemble_mass(initial_uniform_mesh(0.0, 1.0, 4));
  CHECK(m.lower(2) == doctest::Approx(h / 6));
  CHECK(m.diag(2) == doctest::Approx(2 * h / 3));
  CHECK(m.upper(2) == doctest::Approx(h / 6));
  const auto nu = mesh_of({0.0, 0.1, 0.4, 1.0});
  const Vector<double> sums = row_sums(assemble_mass(nu));
  const Vector<double> lumped = lumped_masses(nu);
  CHECK((sums - lumped).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(lumped(1) == doctest::Approx(0.2));
  const auto one = assemble_mass(mesh_of({0.0, 1.0}));
  CHECK(one.diag(0) == doctest::Approx(1.0 / 3));
  CHECK(one.upper(0) == doctest::Approx(1.0 / 6));
  CHECK(one.lower(1) == doctest::Approx(1.0 / 6));
  CHECK(one.diag(1) == doctest::Approx(1.0 / 3));
}

TEST_CASE("stiffness matrix") {
  const auto mesh = initial_uniform_mesh(0.0, 1.0, 4);
  const auto k = assemble_stiffness(mesh);
  CHECK(k.lower(1) == doctest::Approx(-4.0));
  CHECK(k.diag(1) == doctest::Approx(8.0));
  CHECK(k.upper(1) == doctest::Approx(-4.0));
  CHECK((k * Vector<double>::Constant(5, 3.0).eval()).cwiseAbs().maxCoeff() < 1e-13);
  const auto one = assemble_stiffness(mesh_of({0.0, 1.0}));
  CHECK(one.to_dense()(0, 0) == 1.0);
  CHECK(one.to_dense()(0, 1) == -1.0);
  CHECK(one.to_dense()(1, 1) == 1.0);
  CHECK(is_symmetric(assemble_stiffness(mesh_of({0.0, 0.1, 0.4, 1.0}))));
}

TEST_CASE("norms and integrals") {
  const auto m = mesh_of({-1.0, -0.2, 0.3, 1.0});
  const auto c = interpolate([](double) { return -2.0; }, m);
  CHECK(l2_norm(c) == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(h1_seminorm(c) == 0.0);
  CHECK(total_integral(c) == doctest::Approx(-4.0));
  const auto u = initial_uniform_mesh(0.0, 1.0, 8);
  Vector<double> hat = Vector<double>::Zero(9);
  hat(3) = 1.0;
  CHECK(total_integral(PiecewiseLinear<double>(u, hat)) == doctest::Approx(0.125));
  const auto x = interpolate([](double s) { return s; }, initial_uniform_mesh(0.0, 1.0, 3));
  CHECK(l2_norm(x) == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK(h1_seminorm(x) == doctest::Approx(1.0));
}

TEST_CASE("mismatched nodal values are rejected") {
  CHECK_THROWS_AS(PiecewiseLinear<double>(mesh_of({0.0, 1.0}), Vector<double>::Zero(3)), Error);
}

TEST_CASE("moving interpolant time derivative: trivial cases") {
  const auto level = mesh_of({-1.0, -0.2, 0.5, 1.0});
  const Vector<double> w{{0.0, 0.3, -0.2, 0.0}};
  CHECK(interp_time_derivative([](double, double t) { return std::sin(t); }, level, w, 0.1, 0.05) == 0.0);
  CHECK(interp_time_derivative([](double x, double t) { return x * x + t; }, level, Vector<double>::Zero(4).eval(),
                               0.1, 0.05) == 0.0);
  CHECK_THROWS_AS(interp_time_derivative([](double x, double) { return x; }, level, w, 1.5, 0.05), Error);
}

TEST_CASE("moving interpolant time derivative: affine phi") {
  // phi = x: the interpolant is x itself for all t, so the mesh-motion part is -w(x) * 1.
  const auto level = mesh_of({-1.0, -0.2, 0.5, 1.0});
  const Vector<double> w{{0.0, 0.3, -0.2, 0.0}};
  const double t = 0.1, x = 0.2;
  const Vector<double> p = trajectory_points(level, w, t);
  const double s = (x - p(1)) / (p(2) - p(1));
  const double expected = -((1 - s) * w(1) + s * w(2));
  CHECK(interp_time_derivative([](double y, double) { return y; }, level, w, x, t) == doctest::Approx(expected));
}
