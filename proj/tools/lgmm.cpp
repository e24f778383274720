// Command-line front end: run, convergence, compare, print-config, selftest.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lgmm/app/checks.hpp"
#include "lgmm/app/config.hpp"
#include "lgmm/app/experiment.hpp"
#include "lgmm/error.hpp"

namespace {

enum Exit { ok = 0, config_error = 2, numerical_failure = 3, selftest_failure = 4 };

struct Common {
  std::string config_file;
  std::vector<std::string> sets;
};

lgmm::app::ExperimentConfig load(const Common& c) {
  if (c.config_file.empty()) return lgmm::app::parse_config_overrides(c.sets);
  std::ifstream in(c.config_file);
  if (!in) throw lgmm::Error(lgmm::ErrorKind::config, "cannot open " + c.config_file);
  return lgmm::app::parse_config(in, c.config_file, c.sets);
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config_file, "key = value config file");
  sub->add_option("-s,--set", c.sets, "override, e.g. --set N=256 (repeatable)")->take_all();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrange-Galerkin schemes on a moving mesh for 1D convection-diffusion"};
  app.require_subcommand(1);

  Common run_opts, conv_opts, cmp_opts, print_opts, self_opts;
  CLI::App* run = app.add_subcommand("run", "single simulation; writes snapshot, mesh and ledger CSVs");
  add_common(run, run_opts);
  CLI::App* conv = app.add_subcommand("convergence", "refinement study over `levels`; writes convergence.csv");
  add_common(conv, conv_opts);
  CLI::App* cmp = app.add_subcommand("compare", "moving-mesh vs fixed-mesh run on identical inputs");
  add_common(cmp, cmp_opts);
  CLI::App* print = app.add_subcommand("print-config", "dump the resolved configuration with all defaults");
  add_common(print, print_opts);
  CLI::App* self = app.add_subcommand("selftest", "run the property suites");
  add_common(self, self_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    if (*run) {
      lgmm::app::cmd_run(load(run_opts), std::cout);
    } else if (*conv) {
      const auto cfg = load(conv_opts);
      lgmm::app::cmd_convergence(cfg, cfg.levels, std::cout);
    } else if (*cmp) {
      lgmm::app::cmd_compare(load(cmp_opts), std::cout);
    } else if (*print) {
      lgmm::app::print_config(std::cout, load(print_opts));
    } else if (*self) {
      const auto cfg = load(self_opts);
      bool all = true;
      for (const auto& r : lgmm::app::run_selftest(cfg.seed)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
        all = all && r.passed;
      }
      return all ? ok : selftest_failure;
    }
  } catch (const lgmm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.kind() == lgmm::ErrorKind::config || e.kind() == lgmm::ErrorKind::invalid_argument) return config_error;
    return numerical_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return numerical_failure;
  }
  return ok;
}
