#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <utility>

#include "lgmm/error.hpp"
#include "lgmm/mesh_level.hpp"
#include "lgmm/tridiagonal.hpp"

namespace lgmm {

/// What evaluate() does for points outside the mesh hull.
enum class ExtensionPolicy {
  linear_extension,  // continue the end element's affine segment
  clamp_end_value,   // hold the end nodal value
  error,             // throw out-of-domain
};

/// Continuous P1 function: a mesh level plus one value per node.
template <typename Scalar>
struct PiecewiseLinear {
  MeshLevel<Scalar> mesh;
  Vector<Scalar> values;

  PiecewiseLinear(MeshLevel<Scalar> m, Vector<Scalar> v) : mesh(std::move(m)), values(std::move(v)) {
    if (values.size() != mesh.size())
      throw Error(ErrorKind::mismatched_levels, "nodal value count does not match mesh point count");
  }

  Scalar time() const { return mesh.time(); }
};

/// Element k with P_k <= x <= P_{k+1}. Interior nodes belong to the element on their left;
/// points outside the hull map to the first or last element.
/// Walks from `hint` for up to 8 elements before falling back to bisection.
template <typename Scalar>
Index locate_element(const MeshLevel<Scalar>& mesh, Scalar x, Index hint = 0) {
  const Index last = mesh.elements() - 1;
  const auto& p = mesh.points();
  if (x <= p(1)) return 0;
  if (x > p(last)) return last;
  // Now 1 <= k <= last - 1 ... last with p(k) < x <= p(k+1).
  Index k = std::clamp<Index>(hint, 0, last);
  for (int steps = 0; steps < 8; ++steps) {
    if (x <= p(k)) {
      --k;
    } else if (x > p(k + 1)) {
      ++k;
    } else {
      return k;
    }
  }
  const Scalar* begin = p.data() + 1;
  const Scalar* end = p.data() + p.size();
  return static_cast<Index>(std::lower_bound(begin, end, x) - begin);
}

/// Value of the i-th hat function; zero outside its support (and outside the hull).
template <typename Scalar>
Scalar hat_basis_eval(const MeshLevel<Scalar>& mesh, Index i, Scalar x) {
  if (i < 0 || i >= mesh.size()) throw Error(ErrorKind::invalid_argument, "basis index out of range");
  const Scalar pi = mesh.point(i);
  if (x == pi) return Scalar(1);
  if (x < pi) {
    if (i == 0) return Scalar(0);
    const Scalar pl = mesh.point(i - 1);
    return x > pl ? (x - pl) / (pi - pl) : Scalar(0);
  }
  if (i + 1 == mesh.size()) return Scalar(0);
  const Scalar pr = mesh.point(i + 1);
  return x < pr ? (pr - x) / (pr - pi) : Scalar(0);
}

template <typename Scalar, typename F>
PiecewiseLinear<Scalar> interpolate(F&& f, const MeshLevel<Scalar>& mesh) {
  Vector<Scalar> v(mesh.size());
  for (Index i = 0; i < mesh.size(); ++i) v(i) = f(mesh.point(i));
  return {mesh, std::move(v)};
}

/// Evaluation with a known element (x may lie outside it when extending).
template <typename Scalar>
Scalar evaluate_on_element(const PiecewiseLinear<Scalar>& fn, Index k, Scalar x) {
  const Scalar pl = fn.mesh.point(k);
  const Scalar pr = fn.mesh.point(k + 1);
  const Scalar s = (x - pl) / (pr - pl);
  return (1 - s) * fn.values(k) + s * fn.values(k + 1);
}

template <typename Scalar>
Scalar evaluate(const PiecewiseLinear<Scalar>& fn, Scalar x,
                ExtensionPolicy policy = ExtensionPolicy::linear_extension, Index* hint = nullptr) {
  const Index k = locate_element(fn.mesh, x, hint ? *hint : Index(0));
  if (hint) *hint = k;
  const bool outside = x < fn.mesh.left() || x > fn.mesh.right();
  if (outside) {
    switch (policy) {
      case ExtensionPolicy::linear_extension:
        break;
      case ExtensionPolicy::clamp_end_value:
        return x < fn.mesh.left() ? fn.values(0) : fn.values(fn.values.size() - 1);
      case ExtensionPolicy::error: {
        std::ostringstream msg;
        msg << "x = " << x << " outside [" << fn.mesh.left() << ", " << fn.mesh.right() << "]";
        throw Error(ErrorKind::out_of_domain, msg.str());
      }
    }
  }
  return evaluate_on_element(fn, k, x);
}

/// Exact P1 mass matrix.
template <typename Scalar>
Tridiagonal<Scalar> assemble_mass(const MeshLevel<Scalar>& mesh) {
  Tridiagonal<Scalar> m(mesh.size());
  for (Index k = 0; k < mesh.elements(); ++k) {
    const Scalar h = mesh.width(k);
    m.diag(k) += h / 3;
    m.diag(k + 1) += h / 3;
    m.upper(k) = h / 6;
    m.lower(k + 1) = h / 6;
  }
  return m;
}

/// Exact P1 stiffness matrix (without the diffusion coefficient).
template <typename Scalar>
Tridiagonal<Scalar> assemble_stiffness(const MeshLevel<Scalar>& mesh) {
  Tridiagonal<Scalar> k_mat(mesh.size());
  for (Index k = 0; k < mesh.elements(); ++k) {
    const Scalar inv_h = 1 / mesh.width(k);
    k_mat.diag(k) += inv_h;
    k_mat.diag(k + 1) += inv_h;
    k_mat.upper(k) = -inv_h;
    k_mat.lower(k + 1) = -inv_h;
  }
  return k_mat;
}

/// Lumped masses (h_{i-1} + h_i) / 2, i.e. integrals of the hat functions.
template <typename Scalar>
Vector<Scalar> lumped_masses(const MeshLevel<Scalar>& mesh) {
  Vector<Scalar> m = Vector<Scalar>::Zero(mesh.size());
  for (Index k = 0; k < mesh.elements(); ++k) {
    const Scalar h = mesh.width(k);
    m(k) += h / 2;
    m(k + 1) += h / 2;
  }
  return m;
}

template <typename Scalar>
Scalar l2_norm(const PiecewiseLinear<Scalar>& fn) {
  Scalar s = 0;
  for (Index k = 0; k < fn.mesh.elements(); ++k) {
    const Scalar a = fn.values(k), b = fn.values(k + 1);
    s += fn.mesh.width(k) * (a * a + a * b + b * b) / 3;
  }
  return std::sqrt(s);
}

template <typename Scalar>
Scalar h1_seminorm(const PiecewiseLinear<Scalar>& fn) {
  Scalar s = 0;
  for (Index k = 0; k < fn.mesh.elements(); ++k) {
    const Scalar d = fn.values(k + 1) - fn.values(k);
    s += d * d / fn.mesh.width(k);
  }
  return std::sqrt(s);
}

template <typename Scalar>
Scalar total_integral(const PiecewiseLinear<Scalar>& fn) {
  Scalar s = 0;
  for (Index k = 0; k < fn.mesh.elements(); ++k) s += fn.mesh.width(k) * (fn.values(k) + fn.values(k + 1)) / 2;
  return s;
}

/// Node trajectories P_i(t) = P_i^{n-1} + w_i (t - t^{n-1}) evaluated at t.
template <typename Scalar>
Vector<Scalar> trajectory_points(const MeshLevel<Scalar>& level, const Vector<Scalar>& velocities, Scalar t) {
  if (velocities.size() != level.size())
    throw Error(ErrorKind::mismatched_levels, "velocity count does not match mesh point count");
  return level.points() + velocities * (t - level.time());
}

/// Closed form of sum_i phi(P_i(t), t) d/dt psi_i(x, t) on the element containing x:
///   I = -(phi_{k+1} - phi_k) / (P_{k+1} - P_k) * (w_{k+1} psi_{k+1}(x) + w_k psi_k(x)).
/// `level` is the mesh at the start of the time slab, `velocities` the nodal velocities on it.
template <typename Scalar, typename Phi>
Scalar interp_time_derivative(Phi&& phi, const MeshLevel<Scalar>& level, const Vector<Scalar>& velocities, Scalar x,
                              Scalar t) {
  const Vector<Scalar> p = trajectory_points(level, velocities, t);
  const Index n = p.size();
  if (x < p(0) || x > p(n - 1)) {
    std::ostringstream msg;
    msg << "x = " << x << " outside the mesh hull at t = " << t;
    throw Error(ErrorKind::out_of_domain, msg.str());
  }
  const Scalar* begin = p.data() + 1;
  Index k = static_cast<Index>(std::lower_bound(begin, p.data() + n, x) - begin);
  k = std::min<Index>(k, n - 2);
  const Scalar h = p(k + 1) - p(k);
  const Scalar psi_right = (x - p(k)) / h;
  const Scalar psi_left = (p(k + 1) - x) / h;
  const Scalar slope = (phi(p(k + 1), t) - phi(p(k), t)) / h;
  return -slope * (velocities(k + 1) * psi_right + velocities(k) * psi_left);
}

}  // namespace lgmm
