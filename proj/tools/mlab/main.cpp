#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "mlab/errors.hpp"
#include "mlab/harness.hpp"
#include "mlab/multiplier.hpp"

namespace h = mlab::harness;

namespace {

void print_line(const h::ExperimentReport& r) {
  std::cout << h::to_string(r.verdict) << "  " << r.config.name << "  (" << r.wall_time << " s)";
  if (!r.error.empty()) std::cout << "  error: " << r.error;
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for Lorentz-space Fourier multiplier estimates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(h::toolkit_version()));

  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> tol_scale;
  int threads = 1;
  auto add_flags = [&](CLI::App* c) {
    c->add_option("--seed", seed, "Override the root seed");
    c->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    c->add_option("--out-dir", out_dir, "Directory for reports and CSV files");
    c->add_option("--tolerance-scale", tol_scale, "Multiply every tolerance")->check(CLI::PositiveNumber);
  };

  std::string config_path, manifest_path;
  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  add_flags(run);
  auto* suite = app.add_subcommand("suite", "Run every experiment in a manifest");
  suite->add_option("manifest", manifest_path, "Manifest file (JSON)")->required()->check(CLI::ExistingFile);
  add_flags(suite);
  auto* catalog = app.add_subcommand("catalog", "List experiments and symbol families");

  CLI11_PARSE(app, argc, argv);

  h::SuiteOverrides o;
  o.seed = seed;
  if (out_dir) o.out_dir = *out_dir;
  o.tolerance_scale = tol_scale;
  o.threads = threads;

  try {
    if (catalog->parsed()) {
      std::cout << "experiments:\n";
      for (const auto& n : h::experiment_names()) std::cout << "  " << n << '\n';
      std::cout << "symbols:\n";
      for (const auto& n : mlab::multiplier::catalog_names()) std::cout << "  " << n << '\n';
      return 0;
    }
    if (run->parsed()) {
      auto cfg = h::load_config(config_path);
      if (o.seed) cfg.seed = *o.seed;
      if (o.out_dir) cfg.out_dir = *o.out_dir;
      if (o.tolerance_scale) cfg.tolerance_scale = *o.tolerance_scale;
      if (run->count("--threads")) cfg.threads = threads;
      auto rep = h::run_experiment(cfg);
      print_line(rep);
      return rep.verdict == h::Verdict::Fail ? 1 : 0;
    }
    auto manifest = h::load_manifest(manifest_path, o);
    auto summary = h::run_suite(manifest, threads);
    for (const auto& r : summary.reports) print_line(r);
    std::cout << (summary.any_fail ? "suite: FAIL" : "suite: PASS") << '\n';
    return summary.any_fail ? 1 : 0;
  } catch (const mlab::precondition_error& e) {
    std::cerr << "mlab: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mlab: " << e.what() << '\n';
    return 2;
  }
}
