#include <CLI11.hpp>

#include "tropk/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Tropical kernels: positivity checks, conjugations, interpolation and least-action kernels"};
  app.require_subcommand(1);

  tropk::cli::RunConfig cfg;
  double tol = 0.0;
  for (const auto& name : tropk::cli::commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("-i,--input", cfg.input_path, "input JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output", cfg.output_path, "output JSON file (default: stdout)");
    sub->add_option("--csv", cfg.csv_path, "CSV artifact for grid-valued results");
    sub->add_option("--seed", cfg.seed, "seed for randomized checks");
    auto* t = sub->add_option("--tol", tol, "tolerance override for numerical comparisons")
                  ->check(CLI::NonNegativeNumber);
    sub->callback([&cfg, &tol, t, name] {
      cfg.command = name;
      if (t->count() > 0) cfg.tol = tol;
    });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return tropk::cli::run(cfg);
}
