#include "lgmm/app/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "lgmm/app/experiment.hpp"
#include "lgmm/error.hpp"
#include "lgmm/fem.hpp"
#include "lgmm/mesh.hpp"
#include "lgmm/problems.hpp"
#include "lgmm/transport.hpp"

namespace lgmm::app {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

CheckResult result(std::string name, bool ok, const std::string& detail) { return {std::move(name), ok, detail}; }

}  // namespace

namespace {

struct FieldModes {
  std::vector<double> amplitude, frequency, phase;
};

FieldModes draw_modes(std::uint64_t seed, int modes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(-1.0, 1.0), phase(0.0, 2 * pi), freq(-3.0, 3.0);
  FieldModes m;
  for (int k = 0; k < modes; ++k) {
    m.amplitude.push_back(amp(rng) / (k + 1));
    m.frequency.push_back(freq(rng));
    m.phase.push_back(phase(rng));
  }
  return m;
}

template <typename Scalar>
VelocityField<Scalar> field_from_modes(const FieldModes& m) {
  using std::cos;
  using std::sin;
  const Scalar s_pi = boost::math::constants::pi<Scalar>();
  std::vector<Scalar> a, w, p;
  for (std::size_t k = 0; k < m.amplitude.size(); ++k) {
    a.emplace_back(m.amplitude[k]);
    w.emplace_back(m.frequency[k]);
    p.emplace_back(m.phase[k]);
  }
  double sum_a = 0, sum_ka = 0;
  for (std::size_t k = 0; k < m.amplitude.size(); ++k) {
    sum_a += std::abs(m.amplitude[k]);
    sum_ka += static_cast<double>(k + 1) * pi * std::abs(m.amplitude[k]);
  }
  VelocityField<Scalar> u;
  u.eval = [a, w, p, s_pi](Scalar x, Scalar t) {
    Scalar s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * sin(Scalar(k + 1) * s_pi * x + w[k] * t + p[k]);
    return (1 - x * x) * s;
  };
  u.grad = [a, w, p, s_pi](Scalar x, Scalar t) {
    Scalar s = 0, ds = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const Scalar arg = Scalar(k + 1) * s_pi * x + w[k] * t + p[k];
      s += a[k] * sin(arg);
      ds += a[k] * Scalar(k + 1) * s_pi * cos(arg);
    }
    return -2 * x * s + (1 - x * x) * ds;
  };
  u.sup_bound = Scalar(sum_a);
  u.lipschitz_bound = Scalar(2 * sum_a + sum_ka);
  u.vanishes_on_boundary = true;
  return u;
}

/// The same motion in 400-bit arithmetic, where 100 contracting steps cannot exhaust the mantissa.
/// Returns the number of steps completed with strictly increasing points.
int replay_wide(const FieldModes& modes, const MeshLevel<double>& start, const MeshMotionConfig<double>& cfg,
                int steps, bool& m_matrix_ok) {
  using Wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400>,
                                             boost::multiprecision::et_off>;
  const VelocityField<Wide> u = field_from_modes<Wide>(modes);
  MeshMotionConfig<Wide> wide;
  wide.nu_m = Wide(cfg.nu_m);
  wide.dt = Wide(cfg.dt);
  wide.clamp_boundary = cfg.clamp_boundary;
  wide.sor_omega = Wide(cfg.sor_omega);
  wide.sor_tol = Wide(1e-100);
  wide.sor_max_iter = 100 * cfg.sor_max_iter;
  Vector<Wide> p(start.size());
  for (Index i = 0; i < p.size(); ++i) p(i) = Wide(start.point(i));
  MeshLevel<Wide> level(std::move(p), Wide(start.time()));
  m_matrix_ok = true;
  for (int n = 0; n < steps; ++n) {
    try {
      MeshStep<Wide> s = advance_mesh_detailed(level, u, wide);
      m_matrix_ok = m_matrix_ok && s.m_matrix && s.gap_rhs_min > 0;
      level = std::move(s.level);
    } catch (const Error&) {
      return n;
    }
  }
  return steps;
}

}  // namespace

VelocityField<double> random_boundary_vanishing_field(std::uint64_t seed, int modes) {
  return field_from_modes<double>(draw_modes(seed, modes));
}

MeshLevel<double> random_mesh(std::uint64_t seed, double a, double b, Index elements, double jitter, double time) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-jitter, jitter);
  const double h = (b - a) / static_cast<double>(elements);
  Vector<double> p(elements + 1);
  for (Index i = 0; i <= elements; ++i) p(i) = a + static_cast<double>(i) * h;
  for (Index i = 1; i < elements; ++i) p(i) += d(rng) * h;
  p(elements) = b;
  return {std::move(p), time};
}

CheckResult check_non_overlap(std::uint64_t seed, int cases, int steps, double nu) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> frac(0.1, 1.0);
  std::uniform_int_distribution<Index> elements(4, 64);
  int overlaps = 0, replays = 0, m_failures = 0, gap_failures = 0, solver_failures = 0;
  double worst_margin = 0, min_gap = std::numeric_limits<double>::infinity();
  for (int c = 0; c < cases; ++c) {
    const FieldModes modes = draw_modes(rng(), 3);
    const VelocityField<double> u = field_from_modes<double>(modes);
    MeshMotionConfig<double> cfg;
    cfg.nu_m = (c % 2 == 0) ? 0.0 : nu;
    cfg.dt = 0.9 * frac(rng) / u.w1inf_bound();
    cfg.clamp_boundary = true;
    const MeshLevel<double> start = random_mesh(rng(), -1.0, 1.0, elements(rng));
    // Stiff regularized rows (nu_M dt / h^2 >> 1) need far more sweeps than the default cap.
    cfg.sor_max_iter = static_cast<int>(1000 * start.size());
    worst_margin = std::max(worst_margin, cfg.dt * u.w1inf_bound());
    MeshLevel<double> level = start;
    for (int n = 0; n < steps; ++n) {
      try {
        MeshStep<double> s = advance_mesh_detailed(level, u, cfg);
        if (!s.m_matrix) ++m_failures;
        if (!(s.gap_rhs_min > 0)) ++gap_failures;
        level = std::move(s.level);
        min_gap = std::min(min_gap, level.min_width());
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::overlap_detected) {
          ++solver_failures;
          break;
        }
        // A gap contracting toward a stagnation point can drop below the spacing of doubles, so the
        // points coincide after rounding. Decide the case in wide arithmetic instead.
        ++replays;
        bool wide_ok = true;
        if (replay_wide(modes, start, cfg, steps, wide_ok) < steps) ++overlaps;
        if (!wide_ok) ++m_failures;
        break;
      }
    }
  }
  const bool ok = overlaps == 0 && m_failures == 0 && gap_failures == 0 && solver_failures == 0;
  return result("non-overlap", ok,
                std::to_string(cases) + " fields x " + std::to_string(steps) + " steps, max dt|u|_W1inf = " +
                    fmt(worst_margin) + ", overlaps = " + std::to_string(overlaps) + ", M-matrix failures = " +
                    std::to_string(m_failures) + ", gap failures = " + std::to_string(gap_failures) +
                    ", solver failures = " + std::to_string(solver_failures) + ", min double gap = " + fmt(min_gap) +
                    ", cases replayed in 400-bit arithmetic = " + std::to_string(replays));
}

CheckResult check_jacobian_ranges(const RunReport& r) {
  const bool ok = r.gamma_min >= 0.5 && r.gamma_max <= 1.5 && r.gamma_tilde_min >= 0.5 && r.gamma_tilde_max <= 1.5;
  return result("jacobian bounds", ok,
                "gamma in [" + fmt(r.gamma_min) + ", " + fmt(r.gamma_max) + "], gamma~ in [" +
                    fmt(r.gamma_tilde_min) + ", " + fmt(r.gamma_tilde_max) + "]");
}

CheckResult check_jacobian_ranges_example2(Index n_elements) {
  ExperimentConfig cfg = preset_defaults(Preset::example2);
  cfg.n_elements = static_cast<long>(n_elements);
  const auto r = simulate(cfg, true);
  if (!r.hypotheses.step_restriction)
    return result("jacobian bounds", false, "step restriction violated: " + fmt(r.hypotheses.cfl_margin));
  return check_jacobian_ranges(r.report);
}

CheckResult check_interpolation_orders() {
  const auto v = [](double x, double) { return std::sin(pi * x); };
  const auto dv = [](double x) { return pi * std::cos(pi * x); };
  const QuadratureRule<double> rule = gauss_rule<double>(16);
  std::vector<double> l2, h1;
  for (Index n = 16; n <= 256; n *= 2) {
    const MeshLevel<double> mesh = initial_uniform_mesh(-1.0, 1.0, n);
    const PiecewiseLinear<double> iv = interpolate([&](double x) { return v(x, 0.0); }, mesh);
    l2.push_back(true_l2_error(iv, v, rule));
    double s = 0;
    for (Index k = 0; k < mesh.elements(); ++k) {
      const double slope = (iv.values(k + 1) - iv.values(k)) / mesh.width(k);
      s += rule.integrate([&](double x) { return (dv(x) - slope) * (dv(x) - slope); }, mesh.point(k), mesh.point(k + 1));
    }
    h1.push_back(std::sqrt(s));
  }
  bool ok = true;
  std::string detail = "EOC L2/H1:";
  for (std::size_t i = 1; i < l2.size(); ++i) {
    const double a = eoc(l2[i - 1], l2[i]), b = eoc(h1[i - 1], h1[i]);
    ok = ok && std::abs(a - 2.0) <= 0.1 && std::abs(b - 1.0) <= 0.1;
    detail += " " + fmt(a) + "/" + fmt(b);
  }
  return result("interpolation orders", ok, detail);
}

CheckResult check_time_derivative(std::uint64_t seed, int samples, double dt_fd) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0), vel(-1.0, 1.0);
  const auto phi = [](double x, double t) { return std::sin(2 * x + t) * std::exp(-0.5 * x * x) + 0.3 * t * x; };
  double worst = 0;
  int taken = 0, attempts = 0;
  while (taken < samples && attempts < 100 * samples) {
    ++attempts;
    const Index n = 4 + static_cast<Index>(unit(rng) * 12);
    const double t0 = unit(rng);
    const double slab = 0.05;
    const MeshLevel<double> level = random_mesh(rng(), -1.0, 1.0, n, 0.3, t0);
    Vector<double> w(level.size());
    const double wmax = 0.5 * level.min_width() / slab;
    for (Index i = 0; i < w.size(); ++i) w(i) = wmax * vel(rng);
    const double t = t0 + slab * (0.1 + 0.8 * unit(rng));
    const Vector<double> p = trajectory_points(level, w, t);
    const double x = p(0) + (p(p.size() - 1) - p(0)) * unit(rng);

    // The FD stencil must stay inside one element of the moving mesh.
    const double guard = 10 * dt_fd * wmax + 1e-9;
    bool near_node = false;
    for (Index i = 0; i < p.size(); ++i) near_node = near_node || std::abs(x - p(i)) < guard;
    if (near_node) continue;

    const Vector<double> nodal = [&] {
      Vector<double> v(p.size());
      for (Index i = 0; i < p.size(); ++i) v(i) = phi(p(i), t);
      return v;
    }();
    const auto frozen = [&](double s) {
      const PiecewiseLinear<double> fn(MeshLevel<double>(trajectory_points(level, w, s), s), nodal);
      return evaluate(fn, x);
    };
    const double fd = (frozen(t + dt_fd) - frozen(t - dt_fd)) / (2 * dt_fd);
    const double closed = interp_time_derivative(phi, level, w, x, t);

    const Index k = locate_element(MeshLevel<double>(p, t), x);
    const double slope = std::abs(nodal(k + 1) - nodal(k)) / (p(k + 1) - p(k));
    const double scale = std::max(slope * w.cwiseAbs().maxCoeff(), 1e-12);
    worst = std::max(worst, std::abs(closed - fd) / scale);
    ++taken;
  }
  const bool ok = taken == samples && worst <= 1e-4;
  return result("time derivative of moving interpolant", ok,
                std::to_string(taken) + " samples, max relative error = " + fmt(worst));
}

CheckResult check_composed_load_oracle(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0), val(-1.0, 1.0);
  // Elements can be as wide as the domain, so the smooth pieces get the widest rule.
  const QuadratureRule<double> rule = gauss_rule<double>(16);
  double worst = 0;
  for (int c = 0; c < cases; ++c) {
    const Index n = 1 + static_cast<Index>(unit(rng) * 8) % 8;
    const MeshLevel<double> old_mesh = random_mesh(rng(), -1.0, 1.0, n, 0.4, 0.0);
    const MeshLevel<double> new_mesh = random_mesh(rng(), -1.0, 1.0, n, 0.4, 0.1);
    Vector<double> values(old_mesh.size());
    for (Index i = 0; i < values.size(); ++i) values(i) = val(rng);
    const PiecewiseLinear<double> prev(old_mesh, values);
    const VelocityField<double> u = random_boundary_vanishing_field(rng());
    const double step = 0.5 * unit(rng) / u.w1inf_bound() + 1e-3 / u.w1inf_bound();
    const UpwindMap<double> map(u, new_mesh.time(), step);

    const Vector<double> got = composed_load(prev, map, new_mesh, rule, ExtensionPolicy::linear_extension,
                                             KinkQuadrature::split_at_preimages);
    Vector<double> want = Vector<double>::Zero(new_mesh.size());
    constexpr int m = 2000;
    for (Index k = 0; k < new_mesh.elements(); ++k) {
      const double xl = new_mesh.point(k), h = new_mesh.width(k);
      for (int s = 0; s < m; ++s) {
        const double x = xl + (s + 0.5) * h / m;
        const double f = evaluate(prev, upwind_point(map, x)) * jacobian(map, x) * h / m;
        want(k) += f * (new_mesh.point(k + 1) - x) / h;
        want(k + 1) += f * (x - xl) / h;
      }
    }
    const double denom = std::max(want.cwiseAbs().maxCoeff(), 1e-300);
    worst = std::max(worst, (got - want).cwiseAbs().maxCoeff() / denom);
  }
  return result("composed load oracle", worst <= 1e-6,
                std::to_string(cases) + " cases, max relative deviation = " + fmt(worst));
}

CheckResult check_mass_identity(int order, Index n_elements) {
  ExperimentConfig cfg = preset_defaults(Preset::example1);
  cfg.n_elements = static_cast<long>(n_elements);
  cfg.order = order;
  cfg.kinks = KinkQuadrature::split_at_preimages;
  cfg.cg_tol = 1e-12;
  const auto r = simulate(cfg, true);
  const auto& ledger = r.report.mass_ledger;
  const double m0 = std::abs(ledger.front().mass);
  double worst = 0;
  for (const auto& e : ledger) worst = std::max(worst, e.residual / m0);
  return result("mass identity, order " + std::to_string(order), worst <= 1e-9,
                std::to_string(ledger.size() - 1) + " steps, max residual / |int phi^0| = " + fmt(worst));
}

std::vector<CheckResult> run_selftest(std::uint64_t seed) {
  std::vector<CheckResult> out;
  out.push_back(check_mass_identity(1));
  out.push_back(check_mass_identity(2));
  out.push_back(check_non_overlap(seed));
  out.push_back(check_jacobian_ranges_example2());
  out.push_back(check_interpolation_orders());
  out.push_back(check_time_derivative(seed + 1));
  out.push_back(check_composed_load_oracle(seed + 2));
  return out;
}

}  // namespace lgmm::app
