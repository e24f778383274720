#include "lgmm/app/config.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <utility>

#include "lgmm/error.hpp"

namespace lgmm::app {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw Error(ErrorKind::config, where + ": " + msg);
}

double parse_double(const std::string& v, const std::string& where) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) fail(where, "expected a number, got '" + v + "'");
  return out;
}

template <typename Int>
Int parse_int(const std::string& v, const std::string& where) {
  Int out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) fail(where, "expected an integer, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(where, "expected true/false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Preset parse_preset(const std::string& v, const std::string& where) {
  if (v == "example1") return Preset::example1;
  if (v == "example2") return Preset::example2;
  if (v == "custom") return Preset::custom;
  fail(where, "unknown preset '" + v + "' (example1, example2, custom)");
}

std::string fmt(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

std::string to_string(ExtensionPolicy p) {
  switch (p) {
    case ExtensionPolicy::linear_extension: return "linear";
    case ExtensionPolicy::clamp_end_value: return "clamp";
    case ExtensionPolicy::error: return "error";
  }
  return "?";
}

std::string to_string(KinkQuadrature k) {
  return k == KinkQuadrature::split_at_preimages ? "split" : "whole";
}

struct Line {
  std::string key, value, where;
};

Line split_setting(const std::string& text, const std::string& where) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) fail(where, "expected key = value");
  Line l{trim(std::string_view(text).substr(0, eq)), trim(std::string_view(text).substr(eq + 1)), where};
  if (l.key.empty()) fail(where, "empty key");
  return l;
}

ExperimentConfig build(const std::vector<Line>& lines) {
  Preset preset = Preset::example1;
  for (const auto& l : lines)
    if (l.key == "preset") preset = parse_preset(l.value, l.where);
  ExperimentConfig cfg = preset_defaults(preset);
  for (const auto& l : lines) apply_setting(cfg, l.key, l.value, l.where);
  validate(cfg);
  return cfg;
}

}  // namespace

std::string to_string(Preset p) {
  switch (p) {
    case Preset::example1: return "example1";
    case Preset::example2: return "example2";
    case Preset::custom: return "custom";
  }
  return "?";
}

ExperimentConfig preset_defaults(Preset preset) {
  ExperimentConfig c;
  c.preset = preset;
  switch (preset) {
    case Preset::example1:
      break;
    case Preset::example2:
      c.nu = 1e-5;
      c.nu_m = 1e-5;
      c.n_elements = 256;
      c.dt_proportional = false;
      c.dt_value = 1e-4;
      c.T = 2.0;
      c.clamp_boundary = true;
      c.snapshot_times = {0.0, 1.0, 2.0};
      break;
    case Preset::custom:
      c.velocity_constant = 1.0;
      c.dt_proportional = false;
      c.dt_value = 0.01;
      c.T = 0.5;
      c.snapshot_times = {0.0, 0.5};
      break;
  }
  return c;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& v, const std::string& where) {
  if (key == "preset") {
    c.preset = parse_preset(v, where);
  } else if (key == "nu") {
    c.nu = parse_double(v, where);
  } else if (key == "nu_m") {
    if (v == "nu") {
      c.nu_m_follows_nu = true;
    } else {
      c.nu_m_follows_nu = false;
      c.nu_m = parse_double(v, where);
    }
  } else if (key == "N") {
    c.n_elements = parse_int<long>(v, where);
  } else if (key == "dt") {
    const auto star = v.find('*');
    if (star != std::string::npos) {
      if (trim(std::string_view(v).substr(star + 1)) != "h0") fail(where, "proportional dt must read 'c*h0'");
      c.dt_proportional = true;
      c.dt_factor = parse_double(trim(std::string_view(v).substr(0, star)), where);
    } else {
      c.dt_proportional = false;
      c.dt_value = parse_double(v, where);
    }
  } else if (key == "T") {
    c.T = parse_double(v, where);
  } else if (key == "order") {
    c.order = parse_int<int>(v, where);
  } else if (key == "moving") {
    c.moving = parse_bool(v, where);
  } else if (key == "clamp_boundary") {
    c.clamp_boundary = parse_bool(v, where);
  } else if (key == "output_dir") {
    if (v.empty()) fail(where, "output_dir must not be empty");
    c.output_dir = v;
  } else if (key == "seed") {
    c.seed = parse_int<std::uint64_t>(v, where);
  } else if (key == "extension") {
    if (v == "linear") c.extension = ExtensionPolicy::linear_extension;
    else if (v == "clamp") c.extension = ExtensionPolicy::clamp_end_value;
    else if (v == "error") c.extension = ExtensionPolicy::error;
    else fail(where, "extension must be linear, clamp or error");
  } else if (key == "kink_quadrature") {
    if (v == "whole") c.kinks = KinkQuadrature::whole_element;
    else if (v == "split") c.kinks = KinkQuadrature::split_at_preimages;
    else fail(where, "kink_quadrature must be whole or split");
  } else if (key == "quadrature_points") {
    c.quadrature_points = parse_int<int>(v, where);
  } else if (key == "cg_tol") {
    c.cg_tol = parse_double(v, where);
  } else if (key == "sor_omega") {
    c.sor_omega = parse_double(v, where);
  } else if (key == "sor_tol") {
    c.sor_tol = parse_double(v, where);
  } else if (key == "snapshot_times") {
    c.snapshot_times.clear();
    for (const auto& s : split_list(v)) c.snapshot_times.push_back(parse_double(s, where));
  } else if (key == "mesh_stride") {
    c.mesh_stride = parse_int<long>(v, where);
  } else if (key == "samples_per_element") {
    c.samples_per_element = parse_int<int>(v, where);
  } else if (key == "levels") {
    c.levels.clear();
    for (const auto& s : split_list(v)) c.levels.push_back(parse_int<long>(s, where));
  } else if (key == "a") {
    c.a = parse_double(v, where);
  } else if (key == "b") {
    c.b = parse_double(v, where);
  } else if (key == "velocity_constant") {
    c.velocity_constant = parse_double(v, where);
  } else if (key == "velocity_amplitude") {
    c.velocity_amplitude = parse_double(v, where);
  } else if (key == "velocity_frequency") {
    c.velocity_frequency = parse_double(v, where);
  } else if (key == "initial_center") {
    c.initial_center = parse_double(v, where);
  } else if (key == "initial_width") {
    c.initial_width = parse_double(v, where);
  } else if (key == "initial_offset") {
    c.initial_offset = parse_double(v, where);
  } else {
    fail(where, "unknown key '" + key + "'");
  }
}

void validate(const ExperimentConfig& c) {
  const std::string w = "config";
  if (!(c.nu > 0)) fail(w, "nu must be positive");
  if (!c.nu_m_follows_nu && !(c.nu_m >= 0)) fail(w, "nu_m must be nonnegative");
  if (c.n_elements < 1) fail(w, "N must be at least 1");
  if (!(c.dt() > 0)) fail(w, "dt must be positive");
  if (!(c.T >= 0)) fail(w, "T must be nonnegative");
  if (c.order != 1 && c.order != 2) fail(w, "order must be 1 or 2");
  if (c.quadrature_points < 1 || c.quadrature_points > 16) fail(w, "quadrature_points must be in 1..16");
  if (!(c.cg_tol > 0) || !(c.sor_tol > 0)) fail(w, "solver tolerances must be positive");
  if (!(c.sor_omega > 0 && c.sor_omega < 2)) fail(w, "sor_omega must lie in (0, 2)");
  if (c.mesh_stride < 0) fail(w, "mesh_stride must be nonnegative");
  if (c.samples_per_element < 0) fail(w, "samples_per_element must be nonnegative");
  if (!(c.a < c.b)) fail(w, "a must be less than b");
  if (c.preset != Preset::custom && (c.a != -1.0 || c.b != 1.0)) fail(w, "a and b are fixed to -1 and 1 by the example presets");
  if (!(c.initial_width > 0)) fail(w, "initial_width must be positive");
  for (std::size_t i = 0; i < c.levels.size(); ++i) {
    const long n = c.levels[i];
    if (n < 1 || (n & (n - 1)) != 0) fail(w, "levels must be powers of two");
    if (i > 0 && n <= c.levels[i - 1]) fail(w, "levels must be increasing");
  }
}

ExperimentConfig parse_config(std::istream& in, const std::string& source, const std::vector<std::string>& overrides) {
  std::vector<Line> lines;
  std::string text;
  int number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    if (trim(text).empty()) continue;
    lines.push_back(split_setting(text, source + ":" + std::to_string(number)));
  }
  for (const auto& o : overrides) lines.push_back(split_setting(o, "--set " + o));
  return build(lines);
}

ExperimentConfig parse_config_overrides(const std::vector<std::string>& overrides) {
  std::istringstream empty;
  return parse_config(empty, "<none>", overrides);
}

void print_config(std::ostream& os, const ExperimentConfig& c) {
  os << "# problem\n";
  os << "preset = " << to_string(c.preset) << '\n';
  os << "nu = " << fmt(c.nu) << '\n';
  os << "nu_m = " << (c.nu_m_follows_nu ? std::string("nu") : fmt(c.nu_m)) << '\n';
  os << "N = " << c.n_elements << '\n';
  os << "dt = " << (c.dt_proportional ? fmt(c.dt_factor) + "*h0" : fmt(c.dt_value)) << "  # resolves to "
     << fmt(c.dt()) << '\n';
  os << "T = " << fmt(c.T) << '\n';
  os << "order = " << c.order << '\n';
  os << "moving = " << fmt_bool(c.moving) << '\n';
  os << "clamp_boundary = " << fmt_bool(c.clamp_boundary) << '\n';
  os << "# numerics\n";
  os << "extension = " << to_string(c.extension) << '\n';
  os << "kink_quadrature = " << to_string(c.kinks) << '\n';
  os << "quadrature_points = " << c.quadrature_points << '\n';
  os << "cg_tol = " << fmt(c.cg_tol) << '\n';
  os << "sor_omega = " << fmt(c.sor_omega) << '\n';
  os << "sor_tol = " << fmt(c.sor_tol) << '\n';
  os << "# output\n";
  os << "output_dir = " << c.output_dir << '\n';
  os << "seed = " << c.seed << '\n';
  os << "snapshot_times = ";
  for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) os << (i ? "," : "") << fmt(c.snapshot_times[i]);
  os << '\n';
  os << "mesh_stride = " << c.mesh_stride << '\n';
  os << "samples_per_element = " << c.samples_per_element << '\n';
  os << "levels = ";
  for (std::size_t i = 0; i < c.levels.size(); ++i) os << (i ? "," : "") << c.levels[i];
  os << '\n';
  os << "# custom preset\n";
  os << "a = " << fmt(c.a) << '\n';
  os << "b = " << fmt(c.b) << '\n';
  os << "velocity_constant = " << fmt(c.velocity_constant) << '\n';
  os << "velocity_amplitude = " << fmt(c.velocity_amplitude) << '\n';
  os << "velocity_frequency = " << fmt(c.velocity_frequency) << '\n';
  os << "initial_center = " << fmt(c.initial_center) << '\n';
  os << "initial_width = " << fmt(c.initial_width) << '\n';
  os << "initial_offset = " << fmt(c.initial_offset) << '\n';
}

}  // namespace lgmm::app
