#pragma once

#include <cmath>
#include <numbers>

#include "lgmm/scheme.hpp"

namespace lgmm::problems {

/// Traveling pulse on (-1, 1): u = 1 + sin(t - x), phi = exp(-(1 - cos(t - x)) / nu), f = g = 0, T = 0.5.
/// The velocity does not vanish on the boundary.
template <typename Scalar>
Problem<Scalar> traveling_pulse(Scalar nu, Scalar T = Scalar(0.5)) {
  Problem<Scalar> p;
  p.a = -1;
  p.b = 1;
  p.T = T;
  p.u = {[](Scalar x, Scalar t) { return 1 + std::sin(t - x); }, [](Scalar x, Scalar t) { return -std::cos(t - x); },
         Scalar(2), Scalar(1), false};
  p.src = zero_source<Scalar>();
  p.exact = [nu](Scalar x, Scalar t) { return std::exp(-(1 - std::cos(t - x)) / nu); };
  p.exact_dt = [nu](Scalar x, Scalar t) {
    return -std::sin(t - x) / nu * std::exp(-(1 - std::cos(t - x)) / nu);
  };
  p.exact_dx = [nu](Scalar x, Scalar t) {
    return std::sin(t - x) / nu * std::exp(-(1 - std::cos(t - x)) / nu);
  };
  p.initial = [nu](Scalar x) { return std::exp(-(1 - std::cos(x)) / nu); };
  return p;
}

/// Aggregating flow on (-1, 1): u = sin(2 pi x), phi^0 = exp(-100 (1 - cos x)), f = g = 0, T = 2.
/// No closed-form solution; u vanishes on the boundary.
template <typename Scalar>
Problem<Scalar> aggregation(Scalar T = Scalar(2)) {
  const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  Problem<Scalar> p;
  p.a = -1;
  p.b = 1;
  p.T = T;
  p.u = {[two_pi](Scalar x, Scalar) { return std::sin(two_pi * x); },
         [two_pi](Scalar x, Scalar) { return two_pi * std::cos(two_pi * x); }, Scalar(1), two_pi, true};
  p.src = zero_source<Scalar>();
  p.initial = [](Scalar x) { return std::exp(-100 * (1 - std::cos(x))); };
  return p;
}

}  // namespace lgmm::problems
