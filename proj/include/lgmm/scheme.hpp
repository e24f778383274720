#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "lgmm/diagnostics.hpp"
#include "lgmm/error.hpp"
#include "lgmm/fem.hpp"
#include "lgmm/mesh.hpp"
#include "lgmm/quadrature.hpp"
#include "lgmm/source.hpp"
#include "lgmm/transport.hpp"

namespace lgmm {

template <typename Scalar>
struct SchemeConfig {
  Scalar nu = 0;
  Scalar dt = 0;
  int order = 2;
  Scalar cg_tol = Scalar(1e-12);
  int cg_max_iter = 0;  // 0 selects 10 * point count
  ExtensionPolicy extension = ExtensionPolicy::linear_extension;
  KinkQuadrature kinks = KinkQuadrature::whole_element;
  int quadrature_points = 5;

  void validate() const {
    if (!(nu > 0)) throw Error(ErrorKind::invalid_argument, "nu must be positive");
    if (!(dt > 0)) throw Error(ErrorKind::invalid_argument, "dt must be positive");
    if (order != 1 && order != 2) throw Error(ErrorKind::invalid_argument, "order must be 1 or 2");
    if (!(cg_tol > 0)) throw Error(ErrorKind::invalid_argument, "cg_tol must be positive");
  }
};

/// Two-step window: phi^n on its mesh and, once available, phi^{n-1} on its own (older) mesh.
template <typename Scalar>
struct StepState {
  PiecewiseLinear<Scalar> current;
  std::optional<PiecewiseLinear<Scalar>> previous;
  Index step_index = 0;
  Scalar time = 0;
};

template <typename Scalar>
StepState<Scalar> initial_state(PiecewiseLinear<Scalar> phi0) {
  const Scalar t = phi0.time();
  return {std::move(phi0), std::nullopt, 0, t};
}

/// Moves the window forward after a step produced `next`.
template <typename Scalar>
StepState<Scalar> advance_state(const StepState<Scalar>& state, PiecewiseLinear<Scalar> next) {
  const Scalar t = next.time();
  return {std::move(next), state.current, state.step_index + 1, t};
}

struct StepDiagnostics {
  SolverStats cg;
  JacobianRange gamma;
  JacobianRange gamma_tilde;
};

namespace detail {

template <typename Scalar>
PiecewiseLinear<Scalar> solve_step(const MeshLevel<Scalar>& new_mesh, Scalar mass_factor, const Vector<Scalar>& rhs,
                                   const Vector<Scalar>& guess, const SchemeConfig<Scalar>& cfg,
                                   StepDiagnostics* diag) {
  const Tridiagonal<Scalar> a = mass_factor * assemble_mass(new_mesh) + cfg.nu * assemble_stiffness(new_mesh);
  const int max_iter = cfg.cg_max_iter > 0 ? cfg.cg_max_iter : static_cast<int>(10 * new_mesh.size());
  SolverStats stats;
  Vector<Scalar> values = cg_solve(a, rhs, cfg.cg_tol, max_iter, &guess, &stats);
  if (diag) diag->cg = stats;
  return {new_mesh, std::move(values)};
}

template <typename Scalar>
void check_step_inputs(const StepState<Scalar>& state, const MeshLevel<Scalar>& new_mesh,
                       const SchemeConfig<Scalar>& cfg) {
  cfg.validate();
  if (new_mesh.size() != state.current.mesh.size())
    throw Error(ErrorKind::mismatched_levels, "new mesh has a different point count");
}

}  // namespace detail

/// One-step scheme:  (M/dt + nu K) phi^n = L(phi^{n-1}, X_1^n)/dt + F^n,
/// with L the composed load on the new mesh and X_1^n built from u(., t^n) and dt.
template <typename Scalar>
PiecewiseLinear<Scalar> step_first_order(const StepState<Scalar>& state, const MeshLevel<Scalar>& new_mesh,
                                         const VelocityField<Scalar>& u, const SourceData<Scalar>& src,
                                         const SchemeConfig<Scalar>& cfg, StepDiagnostics* diag = nullptr) {
  detail::check_step_inputs(state, new_mesh, cfg);
  const Scalar t = new_mesh.time();
  const QuadratureRule<Scalar> rule = gauss_rule<Scalar>(cfg.quadrature_points);
  const UpwindMap<Scalar> map(u, t, cfg.dt);
  const Vector<Scalar> composed = composed_load(state.current, map, new_mesh, rule, cfg.extension, cfg.kinks,
                                                diag ? &diag->gamma : nullptr);
  const Vector<Scalar> rhs = composed / cfg.dt + load_functional(src, new_mesh, t, rule);
  return detail::solve_step(new_mesh, 1 / cfg.dt, rhs, state.current.values, cfg, diag);
}

/// Two-step scheme for n >= 2:
///   (3M/(2dt) + nu K) phi^n = [4 L(phi^{n-1}, X_1^n) - L(phi^{n-2}, X~_1^n)]/(2dt) + F^n,
/// X~ using step 2dt. The first step (n = 1) is the one-step scheme.
template <typename Scalar>
PiecewiseLinear<Scalar> step_second_order(const StepState<Scalar>& state, const MeshLevel<Scalar>& new_mesh,
                                          const VelocityField<Scalar>& u, const SourceData<Scalar>& src,
                                          const SchemeConfig<Scalar>& cfg, StepDiagnostics* diag = nullptr) {
  if (state.step_index == 0) return step_first_order(state, new_mesh, u, src, cfg, diag);
  detail::check_step_inputs(state, new_mesh, cfg);
  if (!state.previous) throw Error(ErrorKind::missing_history, "two-step scheme needs phi^{n-2}");
  const Scalar t = new_mesh.time();
  const QuadratureRule<Scalar> rule = gauss_rule<Scalar>(cfg.quadrature_points);
  const UpwindMap<Scalar> map(u, t, cfg.dt);
  const UpwindMap<Scalar> map2(u, t, 2 * cfg.dt);
  const Vector<Scalar> l1 = composed_load(state.current, map, new_mesh, rule, cfg.extension, cfg.kinks,
                                          diag ? &diag->gamma : nullptr);
  const Vector<Scalar> l2 = composed_load(*state.previous, map2, new_mesh, rule, cfg.extension, cfg.kinks,
                                          diag ? &diag->gamma_tilde : nullptr);
  const Vector<Scalar> rhs = (4 * l1 - l2) / (2 * cfg.dt) + load_functional(src, new_mesh, t, rule);
  return detail::solve_step(new_mesh, 3 / (2 * cfg.dt), rhs, state.current.values, cfg, diag);
}

/// Problem data on Omega = (a, b) up to time T.
template <typename Scalar>
struct Problem {
  Scalar a = -1;
  Scalar b = 1;
  Scalar T = 0;
  VelocityField<Scalar> u;
  SourceData<Scalar> src;
  std::function<Scalar(Scalar)> initial;
  std::function<Scalar(Scalar, Scalar)> exact;  // optional; enables the error norms
  std::function<Scalar(Scalar, Scalar)> exact_dt;  // optional, d/dt of exact
  std::function<Scalar(Scalar, Scalar)> exact_dx;  // optional, d/dx of exact
};

/// floor(T / dt), tolerant to the representation error of T / dt.
template <typename Scalar>
Index step_count(Scalar T, Scalar dt) {
  if (!(T >= 0)) return 0;
  const Scalar ratio = T / dt;
  const Scalar nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= Scalar(1e-9) * std::max(Scalar(1), nearest)) return static_cast<Index>(nearest);
  return static_cast<Index>(std::floor(ratio));
}

template <typename Scalar>
struct SimulationOptions {
  bool store_trajectory = false;
  /// Called with the initial state and after every step.
  std::function<void(const StepState<Scalar>&)> observer;
};

template <typename Scalar>
struct SimulationResult {
  RunReport report;
  HypothesisReport hypotheses;
  std::vector<PiecewiseLinear<Scalar>> trajectory;  // phi^0..phi^{N_T} when stored
  StepState<Scalar> final_state;
};

/// For n = 1..N_T: advance the mesh (or keep it when `moving` is false), then step the scheme.
/// phi^0 is the nodal interpolant of the initial datum on `initial_mesh`.
template <typename Scalar>
SimulationResult<Scalar> run_simulation(const Problem<Scalar>& problem, const MeshLevel<Scalar>& initial_mesh,
                                        MeshMotionConfig<Scalar> mesh_cfg, const SchemeConfig<Scalar>& scheme_cfg,
                                        bool moving, const SimulationOptions<Scalar>& options = {}) {
  scheme_cfg.validate();
  if (mesh_cfg.dt == Scalar(0)) mesh_cfg.dt = scheme_cfg.dt;
  if (mesh_cfg.dt != scheme_cfg.dt) throw Error(ErrorKind::invalid_argument, "mesh and scheme dt differ");
  if (moving) mesh_cfg.validate();

  const Scalar dt = scheme_cfg.dt;
  const Index steps = step_count(problem.T, dt);
  const QuadratureRule<Scalar> rule = gauss_rule<Scalar>(scheme_cfg.quadrature_points);

  MeshLevel<Scalar> mesh0 = initial_mesh.with_time(0);
  StepState<Scalar> state = initial_state(interpolate(problem.initial, mesh0));

  SimulationResult<Scalar> result{{}, hypothesis_check(problem.u, dt), {}, state};
  RunReport& report = result.report;
  MassLedger ledger(scheme_cfg.order, static_cast<double>(dt), static_cast<double>(total_integral(state.current)));
  ErrorAccumulator<Scalar> errors;
  report.mesh_stats.push_back({0, 0.0, static_cast<double>(mesh0.min_width()), static_cast<double>(mesh0.max_width())});
  report.min_gap_rhs = std::numeric_limits<double>::infinity();
  JacobianRange gamma, gamma_tilde;

  if (options.store_trajectory) result.trajectory.push_back(state.current);
  if (options.observer) options.observer(state);

  for (Index n = 1; n <= steps; ++n) {
    const Scalar t = Scalar(n) * dt;
    const MeshLevel<Scalar>& prev_mesh = state.current.mesh;
    std::optional<MeshLevel<Scalar>> next_mesh;
    if (moving) {
      MeshStep<Scalar> ms = advance_mesh_detailed(prev_mesh, problem.u, mesh_cfg);
      report.max_sor_iterations = std::max(report.max_sor_iterations, ms.solver.iterations);
      if (!ms.m_matrix) ++report.m_matrix_failures;
      report.min_gap_rhs = std::min(report.min_gap_rhs, static_cast<double>(ms.gap_rhs_min));
      next_mesh.emplace(ms.level.points(), t);
    } else {
      next_mesh.emplace(prev_mesh.points(), t);
    }

    StepDiagnostics diag;
    PiecewiseLinear<Scalar> next = scheme_cfg.order == 1
                                       ? step_first_order(state, *next_mesh, problem.u, problem.src, scheme_cfg, &diag)
                                       : step_second_order(state, *next_mesh, problem.u, problem.src, scheme_cfg, &diag);
    report.max_cg_iterations = std::max(report.max_cg_iterations, diag.cg.iterations);
    gamma.merge(diag.gamma);
    gamma_tilde.merge(diag.gamma_tilde);

    ledger.add(n, static_cast<double>(t), static_cast<double>(total_integral(next)),
               static_cast<double>(source_total(problem.src, next.mesh, t, rule)));
    report.mesh_stats.push_back({n, static_cast<double>(t), static_cast<double>(next.mesh.min_width()),
                                 static_cast<double>(next.mesh.max_width())});
    if (problem.exact) errors.add(next, problem.exact);

    state = advance_state(state, std::move(next));
    if (options.store_trajectory) result.trajectory.push_back(state.current);
    if (options.observer) options.observer(state);
  }

  report.mass_ledger = ledger.entries();
  if (problem.exact && errors.count() > 0) report.errors = errors.result();
  if (!(report.min_gap_rhs < std::numeric_limits<double>::infinity())) report.min_gap_rhs = 0.0;
  if (gamma.min <= gamma.max) {
    report.gamma_min = gamma.min;
    report.gamma_max = gamma.max;
  }
  if (gamma_tilde.min <= gamma_tilde.max) {
    report.gamma_tilde_min = gamma_tilde.min;
    report.gamma_tilde_max = gamma_tilde.max;
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace lgmm
