#pragma once

#include <functional>

#include "lgmm/fem.hpp"
#include "lgmm/quadrature.hpp"

namespace lgmm {

/// Right-hand side data: volume source f(x, t) and boundary fluxes g at the left and right ends.
template <typename Scalar>
struct SourceData {
  std::function<Scalar(Scalar, Scalar)> f;
  std::function<Scalar(Scalar)> g_left;
  std::function<Scalar(Scalar)> g_right;
};

template <typename Scalar>
SourceData<Scalar> zero_source() {
  return {[](Scalar, Scalar) { return Scalar(0); }, [](Scalar) { return Scalar(0); }, [](Scalar) { return Scalar(0); }};
}

/// <F(t), psi_j> = (f(t), psi_j) + g_left(t) psi_j(a) + g_right(t) psi_j(b), with a, b the mesh ends.
template <typename Scalar>
Vector<Scalar> load_functional(const SourceData<Scalar>& src, const MeshLevel<Scalar>& mesh, Scalar t,
                               const QuadratureRule<Scalar>& rule) {
  Vector<Scalar> out = Vector<Scalar>::Zero(mesh.size());
  for (Index k = 0; k < mesh.elements(); ++k) {
    const Scalar xl = mesh.point(k), xr = mesh.point(k + 1), h = xr - xl;
    const Scalar half = h / 2, mid = (xl + xr) / 2;
    for (Index q = 0; q < rule.size(); ++q) {
      const Scalar x = mid + half * rule.nodes(q);
      const Scalar w = half * rule.weights(q) * src.f(x, t);
      out(k) += w * (xr - x) / h;
      out(k + 1) += w * (x - xl) / h;
    }
  }
  out(0) += src.g_left(t);
  out(out.size() - 1) += src.g_right(t);
  return out;
}

}  // namespace lgmm
