#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lgmm/error.hpp"
#include "lgmm/fem.hpp"
#include "lgmm/mesh_level.hpp"
#include "lgmm/tridiagonal.hpp"
#include "lgmm/velocity.hpp"

namespace lgmm {

/// Parameters of the linearly implicit point-dynamics step.
template <typename Scalar>
struct MeshMotionConfig {
  Scalar nu_m = 0;           // regularization
  Scalar dt = 0;
  bool clamp_boundary = true;  // end points fixed at a and b; otherwise they follow the flow
  Scalar sor_omega = Scalar(1.2);
  Scalar sor_tol = Scalar(1e-12);
  int sor_max_iter = 0;  // 0 selects 10 * point count

  void validate() const {
    if (!(nu_m >= 0)) throw Error(ErrorKind::invalid_argument, "nu_M must be nonnegative");
    if (!(dt > 0)) throw Error(ErrorKind::invalid_argument, "mesh dt must be positive");
    if (!(sor_omega > 0 && sor_omega < 2)) throw Error(ErrorKind::invalid_argument, "sor_omega must lie in (0,2)");
    if (!(sor_tol > 0)) throw Error(ErrorKind::invalid_argument, "sor_tol must be positive");
  }
};

/// w_i = (P_i^n - P_i^{n-1}) / dt.
template <typename Scalar>
struct NodeVelocities {
  Vector<Scalar> values;
  Scalar dt;
};

template <typename Scalar>
MeshLevel<Scalar> initial_uniform_mesh(Scalar a, Scalar b, Index n_elements, Scalar time = 0) {
  if (!(a < b)) throw Error(ErrorKind::invalid_argument, "invalid interval: a must be smaller than b");
  if (n_elements < 1) throw Error(ErrorKind::invalid_argument, "invalid element count");
  Vector<Scalar> p(n_elements + 1);
  const Scalar h = (b - a) / Scalar(n_elements);
  for (Index i = 0; i <= n_elements; ++i) p(i) = a + Scalar(i) * h;
  p(n_elements) = b;
  return {std::move(p), time};
}

/// Samples u(P_i^{n-1}, t^{n-1}).
template <typename Scalar>
Vector<Scalar> sample_velocity(const VelocityField<Scalar>& u, const MeshLevel<Scalar>& level) {
  Vector<Scalar> v(level.size());
  for (Index i = 0; i < level.size(); ++i) v(i) = u.eval(level.point(i), level.time());
  return v;
}

/// Linear system for P^n. Interior row i:
///   (1/dt + 2 c_i) P_i - c_i (P_{i-1} + P_{i+1}) = P_i^{n-1}/dt + u_prev[i],
///   c_i = nu_M / ((P_i^{n-1} - P_{i-1}^{n-1}) (P_{i+1}^{n-1} - P_i^{n-1})).
/// End rows are identities: P = a, b when clamping, P^{n-1} + dt u_prev otherwise.
template <typename Scalar>
TridiagonalSystem<Scalar> assemble_motion_system(const MeshLevel<Scalar>& prev, const Vector<Scalar>& u_prev,
                                                 const MeshMotionConfig<Scalar>& cfg) {
  const Index n = prev.size();
  if (u_prev.size() != n) throw Error(ErrorKind::mismatched_levels, "velocity samples do not match mesh");
  for (Index k = 0; k < prev.elements(); ++k)
    if (!(prev.width(k) > 0)) throw Error(ErrorKind::degenerate_mesh, "nonpositive element width");
  TridiagonalSystem<Scalar> sys{Tridiagonal<Scalar>(n), Vector<Scalar>(n)};
  const Scalar inv_dt = 1 / cfg.dt;
  for (Index i = 1; i + 1 < n; ++i) {
    const Scalar c = cfg.nu_m / (prev.width(i - 1) * prev.width(i));
    sys.matrix.diag(i) = inv_dt + 2 * c;
    sys.matrix.lower(i) = -c;
    sys.matrix.upper(i) = -c;
    sys.rhs(i) = prev.point(i) * inv_dt + u_prev(i);
  }
  sys.matrix.diag(0) = 1;
  sys.matrix.diag(n - 1) = 1;
  if (cfg.clamp_boundary) {
    sys.rhs(0) = prev.left();
    sys.rhs(n - 1) = prev.right();
  } else {
    sys.rhs(0) = prev.left() + cfg.dt * u_prev(0);
    sys.rhs(n - 1) = prev.right() + cfg.dt * u_prev(n - 1);
  }
  return sys;
}

/// Smallest right side u(P_{i+1}) - u(P_i) + h_i/dt of the gap system; positive under the step restriction.
template <typename Scalar>
Scalar gap_rhs_min(const MeshLevel<Scalar>& prev, const Vector<Scalar>& u_prev, Scalar dt) {
  Scalar m = std::numeric_limits<Scalar>::infinity();
  for (Index k = 0; k < prev.elements(); ++k) m = std::min(m, u_prev(k + 1) - u_prev(k) + prev.width(k) / dt);
  return m;
}

/// dt * |u|_{W^{1,inf}}; compare against C_0 < 1 for non-overlap and 1/8 for the Jacobian bounds.
template <typename Scalar>
Scalar cfl_margin(const VelocityField<Scalar>& u, Scalar dt) {
  return dt * u.w1inf_bound();
}

template <typename Scalar>
struct MeshStep {
  MeshLevel<Scalar> level;
  SolverStats solver;
  bool m_matrix = true;
  Scalar gap_rhs_min = 0;
};

/// One step of the point dynamics, with diagnostics of the assembled system.
template <typename Scalar>
MeshStep<Scalar> advance_mesh_detailed(const MeshLevel<Scalar>& prev, const VelocityField<Scalar>& u,
                                       const MeshMotionConfig<Scalar>& cfg) {
  cfg.validate();
  const Vector<Scalar> u_prev = sample_velocity(u, prev);
  const TridiagonalSystem<Scalar> sys = assemble_motion_system(prev, u_prev, cfg);
  const int max_iter = cfg.sor_max_iter > 0 ? cfg.sor_max_iter : static_cast<int>(10 * prev.size());
  SolverStats stats;
  const Vector<Scalar> guess = prev.points() + cfg.dt * u_prev;  // explicit transport predictor
  Vector<Scalar> p = sor_solve(sys.matrix, sys.rhs, cfg.sor_omega, cfg.sor_tol, max_iter, &guess, &stats);
  if (cfg.clamp_boundary) {
    p(0) = prev.left();
    p(p.size() - 1) = prev.right();
  }
  for (Index i = 0; i + 1 < p.size(); ++i) {
    if (!(p(i) < p(i + 1))) {
      std::ostringstream msg;
      msg << "gap " << i << " is " << p(i + 1) - p(i) << " at t = " << prev.time() + cfg.dt
          << " (dt |u|_W1inf = " << cfl_margin(u, cfg.dt) << ")";
      throw Error(ErrorKind::overlap_detected, msg.str());
    }
  }
  return {MeshLevel<Scalar>(std::move(p), prev.time() + cfg.dt), stats, is_strict_m_matrix(sys.matrix),
          gap_rhs_min(prev, u_prev, cfg.dt)};
}

template <typename Scalar>
MeshLevel<Scalar> advance_mesh(const MeshLevel<Scalar>& prev, const VelocityField<Scalar>& u,
                               const MeshMotionConfig<Scalar>& cfg) {
  return advance_mesh_detailed(prev, u, cfg).level;
}

template <typename Scalar>
NodeVelocities<Scalar> node_velocities(const MeshLevel<Scalar>& prev, const MeshLevel<Scalar>& next) {
  if (prev.size() != next.size()) throw Error(ErrorKind::mismatched_levels, "levels have different point counts");
  const Scalar dt = next.time() - prev.time();
  if (!(dt > 0)) throw Error(ErrorKind::mismatched_levels, "next level must be later than prev");
  return {(next.points() - prev.points()) / dt, dt};
}

/// Piecewise linear blend of nodal velocities over the mesh positions at the evaluation time;
/// outside the hull the end element is extended linearly.
template <typename Scalar>
Scalar velocity_extension(const NodeVelocities<Scalar>& velocities, const MeshLevel<Scalar>& level_at_t, Scalar x) {
  if (velocities.values.size() != level_at_t.size())
    throw Error(ErrorKind::mismatched_levels, "velocity count does not match mesh point count");
  const Index k = locate_element(level_at_t, x);
  const Scalar s = (x - level_at_t.point(k)) / level_at_t.width(k);
  return (1 - s) * velocities.values(k) + s * velocities.values(k + 1);
}

}  // namespace lgmm
