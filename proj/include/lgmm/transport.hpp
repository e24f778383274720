#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "lgmm/fem.hpp"
#include "lgmm/mesh.hpp"
#include "lgmm/quadrature.hpp"
#include "lgmm/velocity.hpp"

namespace lgmm {

/// x -> x - step * u(x, time), the backward Euler foot of the characteristic through x.
/// `step` is dt for the one-step map and 2 dt for the two-step map.
template <typename Scalar>
struct UpwindMap {
  VelocityField<Scalar> velocity;
  Scalar time;
  Scalar step;

  UpwindMap(VelocityField<Scalar> u, Scalar t, Scalar s) : velocity(std::move(u)), time(t), step(s) {
    if (!(step > 0)) throw Error(ErrorKind::invalid_argument, "upwind step must be positive");
  }
};

template <typename Scalar>
Scalar upwind_point(const UpwindMap<Scalar>& map, Scalar x) {
  return x - map.step * map.velocity.eval(x, map.time);
}

/// det dX/dx = 1 - step * du/dx.
template <typename Scalar>
Scalar jacobian(const UpwindMap<Scalar>& map, Scalar x) {
  return 1 - map.step * map.velocity.grad(x, map.time);
}

/// How the composed integrand is integrated over a new-mesh element.
enum class KinkQuadrature {
  whole_element,        // one rule per element, kinks of prev_fn o X left inside
  split_at_preimages,   // subdivide at X^{-1}(old nodes) so each piece is smooth
};

/// Range of the Jacobian over the quadrature points visited by composed_load.
struct JacobianRange {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double g) {
    min = std::min(min, g);
    max = std::max(max, g);
  }
  void merge(const JacobianRange& o) {
    min = std::min(min, o.min);
    max = std::max(max, o.max);
  }
};

namespace detail {

/// Solves X(x) = target on [lo, hi] where X is increasing with X(lo) < target < X(hi).
template <typename Scalar>
Scalar invert_upwind(const UpwindMap<Scalar>& map, Scalar target, Scalar lo, Scalar hi) {
  Scalar x = (lo + hi) / 2;
  for (int it = 0; it < 60; ++it) {
    const Scalar fx = upwind_point(map, x) - target;
    if (fx > 0) hi = x; else lo = x;
    const Scalar g = jacobian(map, x);
    Scalar next = g > 0 ? x - fx / g : (lo + hi) / 2;
    if (!(next > lo && next < hi)) next = (lo + hi) / 2;
    if (std::abs(next - x) <= 4 * std::numeric_limits<Scalar>::epsilon() * (1 + std::abs(x))) return next;
    x = next;
  }
  return x;
}

}  // namespace detail

/// Entries  int prev_fn(X(x)) gamma(x) psi_j(x) dx  over the new mesh, one per test function psi_j.
/// prev_fn is evaluated on its own mesh; the element search starts from the element with the same index.
template <typename Scalar>
Vector<Scalar> composed_load(const PiecewiseLinear<Scalar>& prev_fn, const UpwindMap<Scalar>& map,
                             const MeshLevel<Scalar>& new_mesh, const QuadratureRule<Scalar>& rule,
                             ExtensionPolicy policy = ExtensionPolicy::linear_extension,
                             KinkQuadrature kinks = KinkQuadrature::whole_element,
                             JacobianRange* gamma_range = nullptr) {
  Vector<Scalar> out = Vector<Scalar>::Zero(new_mesh.size());
  const MeshLevel<Scalar>& old_mesh = prev_fn.mesh;
  const Index old_last = old_mesh.elements() - 1;
  std::vector<Scalar> breaks;
  Index hint = 0;

  for (Index k = 0; k < new_mesh.elements(); ++k) {
    const Scalar xl = new_mesh.point(k);
    const Scalar xr = new_mesh.point(k + 1);
    const Scalar h = xr - xl;
    hint = std::min(k, old_last);

    breaks.clear();
    breaks.push_back(xl);
    if (kinks == KinkQuadrature::split_at_preimages) {
      const Scalar yl = upwind_point(map, xl);
      const Scalar yr = upwind_point(map, xr);
      if (yl < yr) {
        Index m = locate_element(old_mesh, yl, hint);
        for (; m < old_mesh.size() && old_mesh.point(m) < yr; ++m) {
          if (old_mesh.point(m) > yl) breaks.push_back(detail::invert_upwind(map, old_mesh.point(m), xl, xr));
        }
      }
    }
    breaks.push_back(xr);

    Scalar acc_left = 0, acc_right = 0;
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
      const Scalar half = (breaks[s + 1] - breaks[s]) / 2;
      const Scalar mid = (breaks[s + 1] + breaks[s]) / 2;
      if (!(half > 0)) continue;
      for (Index q = 0; q < rule.size(); ++q) {
        const Scalar x = mid + half * rule.nodes(q);
        const Scalar gamma = jacobian(map, x);
        if (gamma_range) gamma_range->add(static_cast<double>(gamma));
        const Scalar value = evaluate(prev_fn, upwind_point(map, x), policy, &hint) * gamma;
        const Scalar w = half * rule.weights(q) * value;
        acc_left += w * (xr - x) / h;
        acc_right += w * (x - xl) / h;
      }
    }
    out(k) += acc_left;
    out(k + 1) += acc_right;
  }
  return out;
}

struct HypothesisReport {
  bool boundary_vanishing = false;  // u = 0 on the boundary for all t
  bool step_restriction = false;    // dt |u|_{W^{1,inf}} <= 1/8
  double cfl_margin = 0.0;
};

/// Advisory check; the schemes run regardless of the outcome.
template <typename Scalar>
HypothesisReport hypothesis_check(const VelocityField<Scalar>& u, Scalar dt) {
  const Scalar margin = cfl_margin(u, dt);
  return {u.vanishes_on_boundary, margin <= Scalar(0.125), static_cast<double>(margin)};
}

}  // namespace lgmm
