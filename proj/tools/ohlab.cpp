#include "ohlab/experiments.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>

int main(int argc, char** argv) {
  ohlab::ExperimentConfig cfg;
  CLI::App app{"ohlab: desk-scale experiments for operator Hilbert space bounds"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--n", cfg.n_values, "Comma-separated n (or m, or t) values")->delimiter(',');
  app.add_option("--grid", cfg.grid, "Quadrature resolution per axis");
  app.add_option("--depth", cfg.depth, "Fock space truncation depth");
  app.add_option("--restarts", cfg.restarts, "Restarts for the sup-form optimiser");
  app.add_option("--tol", cfg.tol, "Tolerance");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--trials", cfg.trials, "Randomised instances per row");
  app.add_option("--cap", cfg.fock_cap, "Largest Fock space dimension allowed");
  app.add_option("--out", cfg.out, "Write the report here instead of stdout");
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  const std::map<std::string, std::string> about{
      {"pw-verify", "Pusz-Woronowicz primal and dual against sqrt(ab) and the geometric mean"},
      {"gdiag-scaling", "Lower and upper bounds for the diagonal of G (x) G"},
      {"proj-const-table", "Derived projection and Grothendieck constant bounds"},
      {"ncp", "Non-crossing pairings against Catalan numbers"},
      {"fock-moments", "Vacuum moments on the truncated Fock space against pair-partition sums"},
      {"voiculescu", "Voiculescu's inequality for sums of free semicirculars"},
      {"kfunc-duality", "Duality and the large-t limit for the discrete K-functional"},
      {"oh-norm", "OH norm in spectral and sup form, with column and row norms"},
  };
  for (const auto& name : ohlab::experiment_names()) {
    auto* sub = app.add_subcommand(name, about.count(name) ? about.at(name) : std::string{});
    if (name == "oh-norm")
      sub->add_option("--input", cfg.input, "JSON array of matrices of [re,im] pairs")->check(CLI::ExistingFile);
    sub->callback([&cfg, name] { cfg.command = name; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    const ohlab::Report report = ohlab::run_experiment(cfg);
    const std::string text = cfg.format == "json" ? ohlab::to_json(report) : ohlab::to_csv(report);
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.out);
      if (!(out << text)) {
        std::cerr << "ohlab: cannot write " << cfg.out << "\n";
        return 2;
      }
    }
    return report.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "ohlab: " << e.what() << "\n";
    return 2;
  }
}
