#include "lgmm/app/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <numbers>
#include <ostream>

#include "lgmm/csv.hpp"
#include "lgmm/error.hpp"
#include "lgmm/problems.hpp"

namespace lgmm::app {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Problem<double> custom_problem(const ExperimentConfig& c) {
  Problem<double> p;
  p.a = c.a;
  p.b = c.b;
  p.T = c.T;
  const double c0 = c.velocity_constant;
  const double amp = c.velocity_amplitude;
  const double k = 2 * std::numbers::pi * c.velocity_frequency;
  p.u.eval = [c0, amp, k](double x, double) { return c0 + amp * std::sin(k * x); };
  p.u.grad = [amp, k](double x, double) { return amp * k * std::cos(k * x); };
  p.u.sup_bound = std::abs(c0) + std::abs(amp);
  p.u.lipschitz_bound = std::abs(amp * k);
  p.u.vanishes_on_boundary = std::abs(p.u.eval(c.a, 0)) < 1e-14 && std::abs(p.u.eval(c.b, 0)) < 1e-14;
  p.src = zero_source<double>();
  const double x0 = c.initial_center, w = c.initial_width, off = c.initial_offset;
  p.initial = [x0, w, off](double x) {
    const double s = (x - x0) / w;
    return off + std::exp(-s * s);
  };
  return p;
}

std::ofstream open_output(const fs::path& path, std::vector<fs::path>& files) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::config, "cannot write " + path.string());
  files.push_back(path);
  return os;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::config, "cannot create output_dir " + dir.string() + ": " + ec.message());
}

void warn_hypotheses(const HypothesisReport& h, std::ostream& log) {
  if (!h.step_restriction)
    log << "warning: dt |u|_W1inf = " << h.cfl_margin << " exceeds 1/8; the Jacobian bounds are not guaranteed\n";
}

void print_errors(std::ostream& log, const RelativeErrors& e) {
  log << "E_linf_L2 = " << e.linf_l2 << "\nE_l2_H1   = " << e.l2_h1 << "\nE_mass    = " << e.mass << '\n';
}

}  // namespace

Problem<double> make_problem(const ExperimentConfig& cfg) {
  switch (cfg.preset) {
    case Preset::example1: return problems::traveling_pulse<double>(cfg.nu, cfg.T);
    case Preset::example2: return problems::aggregation<double>(cfg.T);
    case Preset::custom: return custom_problem(cfg);
  }
  throw Error(ErrorKind::config, "unknown preset");
}

MeshMotionConfig<double> mesh_config(const ExperimentConfig& cfg) {
  MeshMotionConfig<double> m;
  m.nu_m = cfg.resolved_nu_m();
  m.dt = cfg.dt();
  m.clamp_boundary = cfg.clamp_boundary;
  m.sor_omega = cfg.sor_omega;
  m.sor_tol = cfg.sor_tol;
  return m;
}

SchemeConfig<double> scheme_config(const ExperimentConfig& cfg) {
  SchemeConfig<double> s;
  s.nu = cfg.nu;
  s.dt = cfg.dt();
  s.order = cfg.order;
  s.cg_tol = cfg.cg_tol;
  s.extension = cfg.extension;
  s.kinks = cfg.kinks;
  s.quadrature_points = cfg.quadrature_points;
  return s;
}

SimulationResult<double> simulate(const ExperimentConfig& cfg, bool moving, const SimulationOptions<double>& options) {
  validate(cfg);
  const Problem<double> problem = make_problem(cfg);
  const MeshLevel<double> mesh0 = initial_uniform_mesh(problem.a, problem.b, static_cast<Index>(cfg.n_elements));
  return run_simulation(problem, mesh0, mesh_config(cfg), scheme_config(cfg), moving, options);
}

std::vector<Index> snapshot_steps(std::span<const double> times, double dt, Index steps) {
  std::vector<Index> out;
  for (double t : times) {
    if (t < 0) continue;
    const Index n = static_cast<Index>(std::llround(t / dt));
    if (n > steps) continue;
    if (out.empty() || out.back() != n) out.push_back(n);
  }
  return out;
}

Index effective_mesh_stride(const ExperimentConfig& cfg, Index steps) {
  if (cfg.mesh_stride > 0) return cfg.mesh_stride;
  return std::max<Index>(1, (steps + 199) / 200);
}

RunSummary cmd_run(const ExperimentConfig& cfg, std::ostream& log) {
  validate(cfg);
  const fs::path dir(cfg.output_dir);
  ensure_dir(dir);
  std::vector<fs::path> files;
  const Index steps = step_count(cfg.T, cfg.dt());
  const std::vector<Index> snaps = snapshot_steps(cfg.snapshot_times, cfg.dt(), steps);
  const Index stride = effective_mesh_stride(cfg, steps);

  std::ofstream snap_os = open_output(dir / "snapshots.csv", files);
  std::ofstream mesh_os = open_output(dir / "mesh_trajectory.csv", files);
  csv::write_snapshot_header(snap_os);
  csv::write_mesh_header(mesh_os);

  SimulationOptions<double> opts;
  opts.observer = [&](const StepState<double>& s) {
    const Index n = s.step_index;
    if (std::find(snaps.begin(), snaps.end(), n) != snaps.end()) csv::write_snapshot(snap_os, s.current);
    if (n % stride == 0 || n == steps) csv::write_mesh_level(mesh_os, n, s.current.mesh);
  };

  const auto start = Clock::now();
  SimulationResult<double> sim = simulate(cfg, cfg.moving, opts);
  RunSummary out{std::move(sim), std::move(files), seconds_since(start)};

  std::ofstream ledger_os = open_output(dir / "mass_ledger.csv", out.files);
  csv::write_mass_ledger(ledger_os, out.result.report.mass_ledger);
  std::ofstream stats_os = open_output(dir / "mesh_stats.csv", out.files);
  csv::write_mesh_stats(stats_os, out.result.report.mesh_stats);
  std::ofstream final_os = open_output(dir / "solution_final.csv", out.files);
  csv::write_function(final_os, out.result.final_state.current, cfg.samples_per_element);

  const RunReport& r = out.result.report;
  warn_hypotheses(out.result.hypotheses, log);
  log << (cfg.moving ? "LGMM" : "LG") << " order " << cfg.order << ", N = " << cfg.n_elements << ", dt = " << cfg.dt()
      << ", steps = " << steps << " (" << out.seconds << " s)\n";
  if (r.errors) print_errors(log, *r.errors);
  double worst = 0.0;
  for (const auto& e : r.mass_ledger) worst = std::max(worst, e.residual);
  log << "max ledger residual = " << worst << '\n';
  log << "min nodal value = " << out.result.final_state.current.values.minCoeff() << '\n';
  if (cfg.moving) {
    log << "max SOR iterations = " << r.max_sor_iterations << ", M-matrix failures = " << r.m_matrix_failures << '\n';
  }
  log << "gamma in [" << r.gamma_min << ", " << r.gamma_max << "], gamma~ in [" << r.gamma_tilde_min << ", "
      << r.gamma_tilde_max << "]\n";
  for (const auto& f : out.files) log << "wrote " << f.string() << '\n';
  return out;
}

std::vector<ConvergenceRow> cmd_convergence(const ExperimentConfig& cfg, std::span<const long> levels,
                                            std::ostream& log, bool write_csv) {
  validate(cfg);
  if (levels.empty()) throw Error(ErrorKind::config, "no refinement levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 1 || (levels[i] & (levels[i] - 1)) != 0) throw Error(ErrorKind::config, "levels must be powers of two");
    if (i > 0 && levels[i] <= levels[i - 1]) throw Error(ErrorKind::config, "levels must be increasing");
  }
  const Problem<double> probe = make_problem(cfg);
  if (!probe.exact) throw Error(ErrorKind::config, "convergence needs a preset with an exact solution");

  std::vector<ExperimentConfig> configs;
  for (long n : levels) {
    ExperimentConfig c = cfg;
    c.n_elements = n;
    configs.push_back(c);
  }
  std::vector<std::future<RelativeErrors>> jobs;
  for (const auto& c : configs) {
    jobs.push_back(std::async(std::launch::async, [&c] {
      const auto r = simulate(c, c.moving);
      if (!r.report.errors) throw Error(ErrorKind::zero_denominator, "no time steps at this level");
      return *r.report.errors;
    }));
  }
  std::vector<RelativeErrors> errors;
  for (auto& j : jobs) errors.push_back(j.get());

  std::vector<Index> ns;
  std::vector<double> dts;
  for (const auto& c : configs) {
    ns.push_back(static_cast<Index>(c.n_elements));
    dts.push_back(c.dt());
  }
  std::vector<ConvergenceRow> rows = convergence_rows(ns, dts, errors);
  write_convergence_csv(log, rows);
  if (write_csv) {
    ensure_dir(cfg.output_dir);
    std::vector<fs::path> files;
    std::ofstream os = open_output(fs::path(cfg.output_dir) / "convergence.csv", files);
    write_convergence_csv(os, rows);
    log << "wrote " << files.front().string() << '\n';
  }
  return rows;
}

VariantSummary summarize(const SimulationResult<double>& r, double seconds) {
  VariantSummary s;
  const Vector<double>& v = r.final_state.current.values;
  s.min_value = v.minCoeff();
  s.max_abs = v.cwiseAbs().maxCoeff();
  for (Index i = 0; i + 1 < v.size(); ++i) s.total_variation += std::abs(v(i + 1) - v(i));
  s.mesh_stats = r.report.mesh_stats;
  s.errors = r.report.errors;
  s.seconds = seconds;
  return s;
}

CompareReport cmd_compare(const ExperimentConfig& cfg, std::ostream& log, bool write_csv) {
  validate(cfg);
  CompareReport rep;
  SimulationResult<double> moving_run = [&] {
    const auto start = Clock::now();
    auto r = simulate(cfg, true);
    rep.moving = summarize(r, seconds_since(start));
    return r;
  }();
  SimulationResult<double> fixed_run = [&] {
    const auto start = Clock::now();
    auto r = simulate(cfg, false);
    rep.fixed = summarize(r, seconds_since(start));
    return r;
  }();

  warn_hypotheses(moving_run.hypotheses, log);
  const auto line = [&](const char* name, const VariantSummary& s) {
    log << name << ": min = " << s.min_value << ", max|phi| = " << s.max_abs << ", TV = " << s.total_variation
        << ", time = " << s.seconds << " s";
    if (s.errors) log << ", E_linf_L2 = " << s.errors->linf_l2 << ", E_l2_H1 = " << s.errors->l2_h1;
    log << '\n';
  };
  line("LGMM", rep.moving);
  line("LG  ", rep.fixed);

  if (write_csv) {
    const fs::path dir(cfg.output_dir);
    ensure_dir(dir);
    std::vector<fs::path> files;
    {
      std::ofstream os = open_output(dir / "compare.csv", files);
      csv::set_precision(os);
      os << "step,time,lgmm_min_h,lgmm_max_h,lg_min_h,lg_max_h\n";
      for (std::size_t n = 0; n < rep.moving.mesh_stats.size(); ++n) {
        const auto& m = rep.moving.mesh_stats[n];
        const auto& f = rep.fixed.mesh_stats[n];
        os << m.step << ',' << m.time << ',' << m.min_h << ',' << m.max_h << ',' << f.min_h << ',' << f.max_h << '\n';
      }
    }
    {
      std::ofstream os = open_output(dir / "compare_summary.csv", files);
      csv::set_precision(os);
      os << "variant,min_value,max_abs,total_variation\n";
      os << "lgmm," << rep.moving.min_value << ',' << rep.moving.max_abs << ',' << rep.moving.total_variation << '\n';
      os << "lg," << rep.fixed.min_value << ',' << rep.fixed.max_abs << ',' << rep.fixed.total_variation << '\n';
    }
    {
      std::ofstream os = open_output(dir / "solution_final_lgmm.csv", files);
      csv::write_function(os, moving_run.final_state.current, cfg.samples_per_element);
    }
    {
      std::ofstream os = open_output(dir / "solution_final_lg.csv", files);
      csv::write_function(os, fixed_run.final_state.current, cfg.samples_per_element);
    }
    for (const auto& f : files) log << "wrote " << f.string() << '\n';
  }
  return rep;
}

}  // namespace lgmm::app
