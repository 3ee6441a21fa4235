#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Analytic Helmholtz boundary integrals over flat polygonal panels"};
  app.require_subcommand(1);

  int threads = 1;
  std::uint64_t seed = 0;
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for random_points in the job file");

  std::string job_path, out_path;
  auto* compute = app.add_subcommand("compute", "evaluate the panel integrals");
  compute->add_option("job", job_path, "job file (JSON)")->required();
  compute->add_option("-o,--output", out_path, "result file (default: stdout)");

  auto* compare = app.add_subcommand("compare", "compare against the quadrature oracle");
  compare->add_option("job", job_path, "job file (JSON)")->required();
  compare->add_option("-o,--output", out_path, "report file (default: stdout)");

  auto* convergence = app.add_subcommand("convergence", "truncation-order convergence table (CSV)");
  convergence->add_option("job", job_path, "job file (JSON)")->required();
  convergence->add_option("-o,--output", out_path, "CSV file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  return hbi::cli::dispatch(command, job_path, out_path, threads, seed, std::cout, std::cerr);
}
