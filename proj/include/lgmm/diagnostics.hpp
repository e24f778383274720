#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "lgmm/error.hpp"
#include "lgmm/fem.hpp"
#include "lgmm/quadrature.hpp"
#include "lgmm/source.hpp"

namespace lgmm {

/// E_{l^inf(L2)}, E_{l^2(H^1_0)} and E_mass, all relative to the interpolated exact solution.
struct RelativeErrors {
  double linf_l2 = 0.0;
  double l2_h1 = 0.0;
  double mass = 0.0;
};

struct LedgerEntry {
  Index step = 0;
  double time = 0.0;
  double mass = 0.0;      // left side of the balance identity
  double rhs = 0.0;       // initial mass plus accumulated sources
  double residual = 0.0;  // |mass - rhs|
};

struct MeshStats {
  Index step = 0;
  double time = 0.0;
  double min_h = 0.0;
  double max_h = 0.0;
};

struct RunReport {
  std::optional<RelativeErrors> errors;  // present when an exact solution was supplied and N_T >= 1
  std::vector<LedgerEntry> mass_ledger;  // N_T + 1 entries, starting at step 0
  std::vector<MeshStats> mesh_stats;     // N_T + 1 entries
  int max_sor_iterations = 0;
  int max_cg_iterations = 0;
  Index m_matrix_failures = 0;           // steps whose motion system was not a strict M-matrix
  double min_gap_rhs = 0.0;              // smallest gap-system right side over all steps
  double gamma_min = 1.0;                // Jacobian range over all quadrature points
  double gamma_max = 1.0;
  double gamma_tilde_min = 1.0;          // same for the two-step map
  double gamma_tilde_max = 1.0;
};

/// Running version of the error norms: feed n = 1..N_T in order.
/// l^inf and l^2 are taken over n >= 1; the sqrt(dt) weight of l^2 cancels in the ratio.
template <typename Scalar>
class ErrorAccumulator {
 public:
  template <typename Exact>
  void add(const PiecewiseLinear<Scalar>& approx, Exact&& exact) {
    const Scalar t = approx.time();
    PiecewiseLinear<Scalar> interp = interpolate([&](Scalar x) { return exact(x, t); }, approx.mesh);
    const PiecewiseLinear<Scalar> diff(approx.mesh, approx.values - interp.values);
    err_linf_ = std::max(err_linf_, static_cast<double>(l2_norm(diff)));
    ref_linf_ = std::max(ref_linf_, static_cast<double>(l2_norm(interp)));
    const double eh = static_cast<double>(h1_seminorm(diff));
    const double rh = static_cast<double>(h1_seminorm(interp));
    err_h1_sq_ += eh * eh;
    ref_h1_sq_ += rh * rh;
    mass_approx_ = static_cast<double>(total_integral(approx));
    mass_interp_ = static_cast<double>(total_integral(interp));
    ++count_;
  }

  Index count() const { return count_; }

  RelativeErrors result() const {
    if (count_ == 0) throw Error(ErrorKind::zero_denominator, "no time levels with n >= 1");
    if (ref_linf_ == 0.0 || ref_h1_sq_ == 0.0 || mass_interp_ == 0.0)
      throw Error(ErrorKind::zero_denominator, "interpolated exact solution has zero norm");
    return {err_linf_ / ref_linf_, std::sqrt(err_h1_sq_ / ref_h1_sq_),
            std::abs(mass_approx_ - mass_interp_) / std::abs(mass_interp_)};
  }

 private:
  double err_linf_ = 0.0, ref_linf_ = 0.0;
  double err_h1_sq_ = 0.0, ref_h1_sq_ = 0.0;
  double mass_approx_ = 0.0, mass_interp_ = 0.0;
  Index count_ = 0;
};

/// Errors of a stored trajectory (entry 0 is the initial level and is skipped).
template <typename Scalar, typename Exact>
RelativeErrors relative_errors(std::span<const PiecewiseLinear<Scalar>> trajectory, Exact&& exact) {
  ErrorAccumulator<Scalar> acc;
  for (std::size_t n = 1; n < trajectory.size(); ++n) acc.add(trajectory[n], exact);
  return acc.result();
}

/// L2 distance to the exact function itself, integrated with a Gauss rule per element.
template <typename Scalar, typename Exact>
Scalar true_l2_error(const PiecewiseLinear<Scalar>& approx, Exact&& exact, const QuadratureRule<Scalar>& rule) {
  const Scalar t = approx.time();
  Scalar s = 0;
  for (Index k = 0; k < approx.mesh.elements(); ++k) {
    s += rule.integrate(
        [&](Scalar x) {
          const Scalar d = evaluate_on_element(approx, k, x) - exact(x, t);
          return d * d;
        },
        approx.mesh.point(k), approx.mesh.point(k + 1));
  }
  return std::sqrt(s);
}

/// Discrete balance identity. Order 1:  int phi^n = int phi^0 + dt sum_{i<=n} S_i.
/// Order 2:  int (3/2 phi^n - 1/2 phi^{n-1}) = int phi^0 + dt sum_{i<=n} S_i + dt/2 S_1,
/// where S_i = int f^i + g^i(a) + g^i(b); the dt/2 S_1 term comes from the one-step start.
class MassLedger {
 public:
  MassLedger(int order, double dt, double initial_mass) : order_(order), dt_(dt), initial_(initial_mass) {
    prev_mass_ = initial_mass;
    entries_.push_back({0, 0.0, initial_mass, initial_mass, 0.0});
  }

  const LedgerEntry& add(Index step, double time, double mass, double source_total) {
    if (step == 1) first_source_ = source_total;
    accumulated_ += dt_ * source_total;
    double lhs = mass;
    double rhs = initial_ + accumulated_;
    if (order_ == 2) {
      lhs = 1.5 * mass - 0.5 * prev_mass_;
      rhs += 0.5 * dt_ * first_source_;
    }
    prev_mass_ = mass;
    entries_.push_back({step, time, lhs, rhs, std::abs(lhs - rhs)});
    return entries_.back();
  }

  const std::vector<LedgerEntry>& entries() const { return entries_; }

 private:
  int order_;
  double dt_;
  double initial_;
  double prev_mass_;
  double accumulated_ = 0.0;
  double first_source_ = 0.0;
  std::vector<LedgerEntry> entries_;
};

template <typename Scalar>
Scalar source_total(const SourceData<Scalar>& src, const MeshLevel<Scalar>& mesh, Scalar t,
                    const QuadratureRule<Scalar>& rule) {
  return load_functional(src, mesh, t, rule).sum();
}

/// Per-step |lhs - rhs| of the balance identity for a stored trajectory (entry 0 = initial level).
template <typename Scalar>
std::vector<double> mass_ledger_residual(std::span<const PiecewiseLinear<Scalar>> trajectory,
                                         const SourceData<Scalar>& src, int order, Scalar dt,
                                         const QuadratureRule<Scalar>& rule) {
  if (trajectory.empty()) return {};
  MassLedger ledger(order, static_cast<double>(dt), static_cast<double>(total_integral(trajectory[0])));
  for (std::size_t n = 1; n < trajectory.size(); ++n) {
    const auto& fn = trajectory[n];
    ledger.add(static_cast<Index>(n), static_cast<double>(fn.time()), static_cast<double>(total_integral(fn)),
               static_cast<double>(source_total(src, fn.mesh, fn.time(), rule)));
  }
  std::vector<double> out;
  for (const auto& e : ledger.entries()) out.push_back(e.residual);
  return out;
}

/// log2(coarse / fine).
inline double eoc(double err_coarse, double err_fine) {
  if (!(err_coarse > 0) || !(err_fine > 0)) throw Error(ErrorKind::invalid_argument, "nonpositive error in EOC");
  return std::log2(err_coarse / err_fine);
}

struct ConvergenceRow {
  Index n_elements = 0;
  double dt = 0.0;
  RelativeErrors errors;
  std::optional<RelativeErrors> eocs;  // absent on the coarsest row
};

/// Rows in refinement order; EOCs of the l^inf(L2) and l^2(H1) columns, and of E_mass when both are positive.
inline std::vector<ConvergenceRow> convergence_rows(std::span<const Index> n_elements, std::span<const double> dts,
                                                    std::span<const RelativeErrors> errors) {
  std::vector<ConvergenceRow> rows;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    ConvergenceRow row{n_elements[i], dts[i], errors[i], std::nullopt};
    if (i > 0) {
      const auto& c = errors[i - 1];
      const auto& f = errors[i];
      RelativeErrors e;
      e.linf_l2 = eoc(c.linf_l2, f.linf_l2);
      e.l2_h1 = eoc(c.l2_h1, f.l2_h1);
      e.mass = (c.mass > 0 && f.mass > 0) ? eoc(c.mass, f.mass) : 0.0;
      row.eocs = e;
    }
    rows.push_back(row);
  }
  return rows;
}

/// Table layout: N, dt, E_linf(L2), EOC, E_l2(H1_0), EOC, E_mass. Missing EOCs print as "-".
inline void write_convergence_csv(std::ostream& os, std::span<const ConvergenceRow> rows) {
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << "N,dt,E_linf_L2,EOC_linf_L2,E_l2_H1,EOC_l2_H1,E_mass\n";
  for (const auto& r : rows) {
    os.precision(17);
    os << r.n_elements << ',' << std::defaultfloat << r.dt << ',';
    os << std::scientific << std::setprecision(6) << r.errors.linf_l2 << ',';
    if (r.eocs) os << std::fixed << std::setprecision(2) << r.eocs->linf_l2; else os << '-';
    os << ',' << std::scientific << std::setprecision(6) << r.errors.l2_h1 << ',';
    if (r.eocs) os << std::fixed << std::setprecision(2) << r.eocs->l2_h1; else os << '-';
    os << ',' << std::scientific << std::setprecision(6) << r.errors.mass << '\n';
  }
  os.flags(old_flags);
  os.precision(old_prec);
}

}  // namespace lgmm
