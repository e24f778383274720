#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <numbers>

#include "lgmm/error.hpp"
#include "lgmm/tridiagonal.hpp"

namespace lgmm {

/// Rule on the reference element [-1, 1].
template <typename Scalar>
struct QuadratureRule {
  Vector<Scalar> nodes;
  Vector<Scalar> weights;

  Index size() const { return nodes.size(); }
  int exactness_degree() const { return 2 * static_cast<int>(size()) - 1; }

  /// Integral of f over [left, right] with the mapped rule.
  template <typename F>
  Scalar integrate(F&& f, Scalar left, Scalar right) const {
    const Scalar half = (right - left) / 2;
    const Scalar mid = (right + left) / 2;
    Scalar sum = 0;
    for (Index q = 0; q < size(); ++q) sum += weights(q) * f(mid + half * nodes(q));
    return half * sum;
  }
};

/// Gauss-Legendre nodes (ascending) and weights; Newton iteration on P_n from Chebyshev guesses.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_rule(int points = 9) {
  if (points < 1 || points > 16) throw Error(ErrorKind::invalid_argument, "unsupported quadrature order");
  const int n = points;
  QuadratureRule<Scalar> rule{Vector<Scalar>(n), Vector<Scalar>(n)};
  const Scalar pi = std::numbers::pi_v<Scalar>;
  // Returns (P_n(x), P_n'(x)).
  auto legendre = [n](Scalar x) {
    Scalar p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const Scalar pk = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    return std::pair<Scalar, Scalar>{p1, n * (x * p1 - p0) / (x * x - 1)};
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const Scalar dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 4 * std::numeric_limits<Scalar>::epsilon()) break;
    }
    const Scalar dp = legendre(x).second;
    const Scalar w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes(i) = -x;
    rule.nodes(n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0;
  return rule;
}

}  // namespace lgmm
