#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "conedual/app/app.hpp"

int main(int argc, char** argv) {
  CLI::App cli{"Certified primal/dual brackets for positive definite extremal problems"};
  cli.set_version_flag("--version", conedual::app::kToolVersion);

  std::string config;
  std::string out_dir = "out";
  conedual::app::Overrides overrides;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  double eps_pd = 0.0;

  cli.add_option("--config", config, "run configuration (JSON)")->required();
  cli.add_option("--out", out_dir, "output directory for report.json and bracket.csv");
  auto* seed_opt = cli.add_option("--seed", seed, "random seed (overrides the config)");
  auto* workers_opt = cli.add_option("--workers", workers, "worker threads, 0 = all cores");
  auto* eps_opt = cli.add_option("--eps-pd", eps_pd, "positive-definiteness slack")->check(CLI::PositiveNumber);
  cli.add_flag("--dump-lp", overrides.dump_lp, "write every LP to <out>/lp/");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : conedual::app::kExitConfigError;
  }
  if (*seed_opt) overrides.seed = seed;
  if (*workers_opt) overrides.workers = workers;
  if (*eps_opt) overrides.eps_pd = eps_pd;

  conedual::app::configure_logging();
  try {
    return conedual::app::run(config, out_dir, overrides);
  } catch (const std::exception& e) {
    std::cerr << "conedual: " << e.what() << '\n';
    return conedual::app::kExitSoundnessFailure;
  }
}
