#include <chrono>
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "lab/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for polarization and symmetrization"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "run one experiment from a JSON config");
  std::string config_path;
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = run->add_option("--seed", seed, "override the RNG seed");
  std::string out_dir;
  CLI::Option* out_opt = run->add_option("--out", out_dir, "output directory");
  int threads = 0;
  CLI::Option* thr_opt =
      run->add_option("--threads", threads, "worker threads (default: LAB_THREADS or 1)");

  CLI::App* list = app.add_subcommand("list", "list the available experiments");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& [name, blurb] : lab::experiment_list())
      std::cout << name << "\n    " << blurb << "\n";
    return 0;
  }

  lab::RunOptions opt;
  if (*seed_opt) opt.seed = seed;
  if (*out_opt) opt.out_dir = out_dir;
  if (*thr_opt) opt.threads = threads;

  try {
    const auto t0 = std::chrono::steady_clock::now();
    lab::ExpResult r = lab::run_experiment_file(config_path, opt);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << r.name << ": " << (r.pass ? "PASS" : "FAIL") << "\n"
              << r.summary << "  outputs: " << r.out_dir << "\n  wall time: " << secs
              << " s\n";
    return r.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return 2;
  }
}
