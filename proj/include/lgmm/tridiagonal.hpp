#pragma once

#include <Eigen/Core>

#include <cmath>
#include <sstream>

#include "lgmm/error.hpp"

namespace lgmm {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

/// Three-band square matrix. Row i reads
///   lower(i) * x(i-1) + diag(i) * x(i) + upper(i) * x(i+1),
/// with lower(0) and upper(n-1) unused and kept at zero.
template <typename Scalar>
struct Tridiagonal {
  Vector<Scalar> lower;
  Vector<Scalar> diag;
  Vector<Scalar> upper;

  Tridiagonal() = default;
  explicit Tridiagonal(Index n)
      : lower(Vector<Scalar>::Zero(n)), diag(Vector<Scalar>::Zero(n)), upper(Vector<Scalar>::Zero(n)) {}

  Index size() const { return diag.size(); }

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> to_dense() const {
    const Index n = size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      m(i, i) = diag(i);
      if (i > 0) m(i, i - 1) = lower(i);
      if (i + 1 < n) m(i, i + 1) = upper(i);
    }
    return m;
  }
};

/// A matrix together with its right-hand side.
template <typename Scalar>
struct TridiagonalSystem {
  Tridiagonal<Scalar> matrix;
  Vector<Scalar> rhs;
};

template <typename Scalar>
Vector<Scalar> operator*(const Tridiagonal<Scalar>& a, const Vector<Scalar>& x) {
  const Index n = a.size();
  Vector<Scalar> y(n);
  for (Index i = 0; i < n; ++i) {
    Scalar s = a.diag(i) * x(i);
    if (i > 0) s += a.lower(i) * x(i - 1);
    if (i + 1 < n) s += a.upper(i) * x(i + 1);
    y(i) = s;
  }
  return y;
}

template <typename Scalar>
Tridiagonal<Scalar> operator*(Scalar alpha, const Tridiagonal<Scalar>& a) {
  Tridiagonal<Scalar> r = a;
  r.lower *= alpha;
  r.diag *= alpha;
  r.upper *= alpha;
  return r;
}

template <typename Scalar>
Tridiagonal<Scalar> operator+(const Tridiagonal<Scalar>& a, const Tridiagonal<Scalar>& b) {
  Tridiagonal<Scalar> r = a;
  r.lower += b.lower;
  r.diag += b.diag;
  r.upper += b.upper;
  return r;
}

template <typename Scalar>
Vector<Scalar> row_sums(const Tridiagonal<Scalar>& a) {
  return a.lower + a.diag + a.upper;
}

template <typename Scalar>
bool is_symmetric(const Tridiagonal<Scalar>& a, Scalar rel_tol = Scalar(1e-13)) {
  using std::abs;
  for (Index i = 0; i + 1 < a.size(); ++i) {
    const Scalar scale = abs(a.upper(i)) + abs(a.lower(i + 1));
    if (abs(a.upper(i) - a.lower(i + 1)) > rel_tol * scale) return false;
  }
  return true;
}

/// Positive diagonal, nonpositive off-diagonals and diag(i) > |lower(i)| + |upper(i)| in every row.
template <typename Scalar>
bool is_strict_m_matrix(const Tridiagonal<Scalar>& a) {
  using std::abs;
  for (Index i = 0; i < a.size(); ++i) {
    if (!(a.diag(i) > 0) || a.lower(i) > 0 || a.upper(i) > 0) return false;
    if (!(a.diag(i) > abs(a.lower(i)) + abs(a.upper(i)))) return false;
  }
  return true;
}

/// Direct elimination (Thomas algorithm) without pivoting.
/// Stable for diagonally dominant or symmetric positive definite matrices.
template <typename Scalar>
Vector<Scalar> thomas_solve(const Tridiagonal<Scalar>& a, const Vector<Scalar>& rhs) {
  const Index n = a.size();
  if (rhs.size() != n) throw Error(ErrorKind::invalid_argument, "rhs size does not match matrix");
  Vector<Scalar> c(n), d(n);
  Scalar denom = a.diag(0);
  if (denom == Scalar(0)) throw Error(ErrorKind::no_convergence, "zero pivot in elimination");
  c(0) = n > 1 ? a.upper(0) / denom : Scalar(0);
  d(0) = rhs(0) / denom;
  for (Index i = 1; i < n; ++i) {
    denom = a.diag(i) - a.lower(i) * c(i - 1);
    if (denom == Scalar(0)) throw Error(ErrorKind::no_convergence, "zero pivot in elimination");
    c(i) = i + 1 < n ? a.upper(i) / denom : Scalar(0);
    d(i) = (rhs(i) - a.lower(i) * d(i - 1)) / denom;
  }
  Vector<Scalar> x(n);
  x(n - 1) = d(n - 1);
  for (Index i = n - 1; i-- > 0;) x(i) = d(i) - c(i) * x(i + 1);
  return x;
}

struct SolverStats {
  int iterations = 0;
  double residual = 0.0;
};

/// Successive over-relaxation. Stops once
///   max|rhs - A x| <= tol * (1 + max|rhs|).
/// Throws no-convergence (with the final residual) after max_iter sweeps.
template <typename Scalar>
Vector<Scalar> sor_solve(const Tridiagonal<Scalar>& a, const Vector<Scalar>& rhs, Scalar omega, Scalar tol,
                         int max_iter, const Vector<Scalar>* initial = nullptr, SolverStats* stats = nullptr) {
  const Index n = a.size();
  if (rhs.size() != n) throw Error(ErrorKind::invalid_argument, "rhs size does not match matrix");
  if (!(omega > 0 && omega < 2)) throw Error(ErrorKind::invalid_argument, "SOR omega must lie in (0,2)");
  if (!(tol > 0)) throw Error(ErrorKind::invalid_argument, "SOR tolerance must be positive");
  Vector<Scalar> x = initial ? *initial : Vector<Scalar>::Zero(n);
  const Scalar threshold = tol * (Scalar(1) + rhs.cwiseAbs().maxCoeff());
  Scalar residual = 0;
  for (int it = 1; it <= max_iter; ++it) {
    for (Index i = 0; i < n; ++i) {
      Scalar s = rhs(i);
      if (i > 0) s -= a.lower(i) * x(i - 1);
      if (i + 1 < n) s -= a.upper(i) * x(i + 1);
      x(i) += omega * (s / a.diag(i) - x(i));
    }
    residual = (rhs - a * x).cwiseAbs().maxCoeff();
    if (residual <= threshold) {
      if (stats) *stats = {it, static_cast<double>(residual)};
      return x;
    }
  }
  std::ostringstream msg;
  msg << "SOR did not converge in " << max_iter << " iterations, residual " << residual;
  throw Error(ErrorKind::no_convergence, msg.str());
}

/// Unpreconditioned conjugate gradients; stops at ||rhs - A x||_2 <= tol ||rhs||_2.
/// The matrix must be symmetric; an asymmetric one points at an assembly bug.
template <typename Scalar>
Vector<Scalar> cg_solve(const Tridiagonal<Scalar>& a, const Vector<Scalar>& rhs, Scalar tol, int max_iter,
                        const Vector<Scalar>* initial = nullptr, SolverStats* stats = nullptr) {
  using std::sqrt;
  const Index n = a.size();
  if (rhs.size() != n) throw Error(ErrorKind::invalid_argument, "rhs size does not match matrix");
  if (!is_symmetric(a)) throw Error(ErrorKind::asymmetric_system, "CG requires a symmetric matrix");
  const Scalar bnorm = rhs.norm();
  if (bnorm == Scalar(0)) {
    if (stats) *stats = {0, 0.0};
    return Vector<Scalar>::Zero(n);
  }
  Vector<Scalar> x = initial ? *initial : Vector<Scalar>::Zero(n);
  Vector<Scalar> r = rhs - a * x;
  Vector<Scalar> p = r;
  Scalar rr = r.squaredNorm();
  const Scalar threshold = tol * bnorm;
  if (sqrt(rr) <= threshold) {
    if (stats) *stats = {0, static_cast<double>(sqrt(rr) / bnorm)};
    return x;
  }
  for (int it = 1; it <= max_iter; ++it) {
    const Vector<Scalar> ap = a * p;
    const Scalar pap = p.dot(ap);
    if (!(pap > 0)) {
      std::ostringstream msg;
      msg << "CG breakdown (p'Ap = " << pap << "), matrix not positive definite";
      throw Error(ErrorKind::no_convergence, msg.str());
    }
    const Scalar alpha = rr / pap;
    x += alpha * p;
    r -= alpha * ap;
    const Scalar rr_next = r.squaredNorm();
    if (sqrt(rr_next) <= threshold) {
      if (stats) *stats = {it, static_cast<double>(sqrt(rr_next) / bnorm)};
      return x;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  std::ostringstream msg;
  msg << "CG did not converge in " << max_iter << " iterations, relative residual " << sqrt(rr) / bnorm;
  throw Error(ErrorKind::no_convergence, msg.str());
}

}  // namespace lgmm
