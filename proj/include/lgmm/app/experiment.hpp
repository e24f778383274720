#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lgmm/app/config.hpp"
#include "lgmm/scheme.hpp"

namespace lgmm::app {

/// Problem data of the configured preset; `exact` is set only for example1.
Problem<double> make_problem(const ExperimentConfig& cfg);

MeshMotionConfig<double> mesh_config(const ExperimentConfig& cfg);
SchemeConfig<double> scheme_config(const ExperimentConfig& cfg);

/// Uniform initial mesh, the problem and both solver configurations, then run_simulation.
SimulationResult<double> simulate(const ExperimentConfig& cfg, bool moving,
                                  const SimulationOptions<double>& options = {});

/// Steps whose time is nearest to each requested snapshot time (requests past T are dropped).
std::vector<Index> snapshot_steps(std::span<const double> times, double dt, Index steps);

/// Mesh levels kept in mesh_trajectory.csv: every stride-th plus the last.
Index effective_mesh_stride(const ExperimentConfig& cfg, Index steps);

struct RunSummary {
  SimulationResult<double> result;
  std::vector<std::filesystem::path> files;
  double seconds = 0.0;
};

/// Writes snapshots.csv, mesh_trajectory.csv, mass_ledger.csv, mesh_stats.csv and solution_final.csv
/// into cfg.output_dir; a human-readable summary goes to `log`.
RunSummary cmd_run(const ExperimentConfig& cfg, std::ostream& log);

/// One simulation per level, dispatched concurrently; rows come back in level order.
/// Writes convergence.csv when `write_csv` is set.
std::vector<ConvergenceRow> cmd_convergence(const ExperimentConfig& cfg, std::span<const long> levels,
                                            std::ostream& log, bool write_csv = true);

struct VariantSummary {
  double min_value = 0.0;
  double max_abs = 0.0;
  double total_variation = 0.0;
  std::vector<MeshStats> mesh_stats;
  std::optional<RelativeErrors> errors;
  double seconds = 0.0;
};

struct CompareReport {
  VariantSummary moving;  // LGMM
  VariantSummary fixed;   // LG
};

VariantSummary summarize(const SimulationResult<double>& r, double seconds);

/// Runs the moving and the fixed-mesh variant on identical inputs. Writes compare.csv (per-step mesh sizes)
/// and compare_summary.csv, plus the final solution of each variant.
CompareReport cmd_compare(const ExperimentConfig& cfg, std::ostream& log, bool write_csv = true);

}  // namespace lgmm::app
