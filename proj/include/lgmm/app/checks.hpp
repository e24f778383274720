#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lgmm/diagnostics.hpp"
#include "lgmm/velocity.hpp"

namespace lgmm::app {

/// Outcome of one property suite.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Random field u = (1 - x^2) sum_k a_k sin(k pi x + w_k t + p_k) on (-1, 1), with analytic sup and Lipschitz bounds.
VelocityField<double> random_boundary_vanishing_field(std::uint64_t seed, int modes = 3);

/// Random strictly increasing mesh on (a, b): uniform points with interior jitter up to `jitter` widths.
MeshLevel<double> random_mesh(std::uint64_t seed, double a, double b, Index elements, double jitter = 0.4,
                              double time = 0.0);

/// Point dynamics under random fields with dt |u|_W1inf <= 0.9 and nu_M in {0, nu}:
/// no overlap, strict M-matrix and positive gap right side at every step.
CheckResult check_non_overlap(std::uint64_t seed, int cases = 200, int steps = 100, double nu = 0.01);

/// gamma and gamma~ ranges of a finished run lie in [1/2, 3/2].
CheckResult check_jacobian_ranges(const RunReport& report);

/// Example 2 on the moving mesh (N = 256, 20000 steps) followed by check_jacobian_ranges.
CheckResult check_jacobian_ranges_example2(Index n_elements = 256);

/// Interpolation of sin(pi x) on uniform meshes 16..256: L2 EOC 2 +- 0.1 and H1 EOC 1 +- 0.1.
CheckResult check_interpolation_orders();

/// interp_time_derivative against a central difference in time of the moving interpolant with frozen
/// nodal values, at `samples` random (x, t) points with step dt_fd; relative tolerance 1e-4.
CheckResult check_time_derivative(std::uint64_t seed, int samples = 100, double dt_fd = 1e-5);

/// composed_load (split mode, 16-point rule) on random meshes of at most 8 elements against a 2000-point
/// composite midpoint oracle.
CheckResult check_composed_load_oracle(std::uint64_t seed, int cases = 50);

/// Example 1 (nu = 0.01, N = 256) on the moving mesh: balance-identity residuals <= 1e-9 |int phi^0|
/// for the given order.
CheckResult check_mass_identity(int order, Index n_elements = 256);

/// All property suites, in a fixed order.
std::vector<CheckResult> run_selftest(std::uint64_t seed);

}  // namespace lgmm::app
