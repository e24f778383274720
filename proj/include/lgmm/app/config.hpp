#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lgmm/fem.hpp"
#include "lgmm/transport.hpp"

namespace lgmm::app {

enum class Preset { example1, example2, custom };

/// Everything needed to run one experiment. Flat key = value; see print_config for the key list.
struct ExperimentConfig {
  Preset preset = Preset::example1;
  double nu = 0.01;
  bool nu_m_follows_nu = true;  // "nu_m = nu"
  double nu_m = 0.01;
  long n_elements = 128;
  bool dt_proportional = true;  // dt = dt_factor * h0 when true, dt = dt_value otherwise
  double dt_factor = 4.0;
  double dt_value = 0.0;
  double T = 0.5;
  int order = 2;
  bool moving = true;
  bool clamp_boundary = false;
  std::string output_dir = "out";
  std::uint64_t seed = 20240229;

  ExtensionPolicy extension = ExtensionPolicy::linear_extension;
  KinkQuadrature kinks = KinkQuadrature::whole_element;
  int quadrature_points = 5;
  double cg_tol = 1e-12;
  double sor_omega = 1.2;
  double sor_tol = 1e-12;

  std::vector<double> snapshot_times{0.0, 0.234, 0.4875};
  long mesh_stride = 0;  // 0 picks a stride giving at most ~200 stored levels
  int samples_per_element = 0;
  std::vector<long> levels{128, 256, 512, 1024};

  // custom preset: u = velocity_constant + velocity_amplitude sin(2 pi velocity_frequency x),
  // phi^0 = initial_offset + exp(-((x - initial_center) / initial_width)^2) on (a, b)
  double a = -1.0;
  double b = 1.0;
  double velocity_constant = 0.0;
  double velocity_amplitude = 0.0;
  double velocity_frequency = 1.0;
  double initial_center = 0.0;
  double initial_width = 0.1;
  double initial_offset = 0.0;

  double resolved_nu_m() const { return nu_m_follows_nu ? nu : nu_m; }
  double h0() const { return (b - a) / static_cast<double>(n_elements); }
  double dt() const { return dt_proportional ? dt_factor * h0() : dt_value; }

  bool operator==(const ExperimentConfig&) const = default;
};

/// Defaults for a preset (example1: pulse, nu = 0.01, dt = 4 h0, T = 0.5, unclamped moving mesh;
/// example2: aggregation, nu = 1e-5, dt = 1e-4, T = 2, N = 256, clamped moving mesh).
ExperimentConfig preset_defaults(Preset preset);

/// Parses `key = value` lines ('#' starts a comment) and then the overrides, in that order.
/// The preset is resolved first so that its defaults sit underneath every explicit key.
/// Throws Error(config) naming `source:line` on the first bad line.
ExperimentConfig parse_config(std::istream& in, const std::string& source,
                              const std::vector<std::string>& overrides = {});
ExperimentConfig parse_config_overrides(const std::vector<std::string>& overrides);

/// Applies one key/value pair; `where` prefixes error messages.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value, const std::string& where);

/// Every key with its current value, parseable by parse_config.
void print_config(std::ostream& os, const ExperimentConfig& cfg);

void validate(const ExperimentConfig& cfg);

std::string to_string(Preset p);

}  // namespace lgmm::app
