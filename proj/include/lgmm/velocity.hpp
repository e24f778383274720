#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

namespace lgmm {

/// Velocity u(x, t) with its spatial derivative and the bounds used by the step-size hypotheses.
template <typename Scalar>
struct VelocityField {
  std::function<Scalar(Scalar, Scalar)> eval;
  std::function<Scalar(Scalar, Scalar)> grad;
  Scalar sup_bound = 0;         // sup |u|
  Scalar lipschitz_bound = 0;   // sup |du/dx|
  bool vanishes_on_boundary = false;

  Scalar operator()(Scalar x, Scalar t) const { return eval(x, t); }

  /// |u|_{W^{1,inf}} as max of the sup and Lipschitz bounds.
  Scalar w1inf_bound() const { return std::max(sup_bound, lipschitz_bound); }
};

template <typename Scalar>
VelocityField<Scalar> zero_velocity() {
  return {[](Scalar, Scalar) { return Scalar(0); }, [](Scalar, Scalar) { return Scalar(0); }, Scalar(0), Scalar(0),
          true};
}

template <typename Scalar>
VelocityField<Scalar> constant_velocity(Scalar c) {
  using std::abs;
  return {[c](Scalar, Scalar) { return c; }, [](Scalar, Scalar) { return Scalar(0); }, abs(c), Scalar(0),
          c == Scalar(0)};
}

}  // namespace lgmm
