#pragma once

#include "ohlab/freeprob.hpp"
#include "ohlab/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ohlab {

inline constexpr std::uint64_t kDefaultSeed = 20040617;

// Unset optional fields (empty n_values, grid == 0, depth == 0) take the
// command's own default.
struct ExperimentConfig {
  std::string command;
  std::vector<int> n_values;
  int grid = 0;
  int depth = 0;
  int restarts = 8;
  double tol = 1e-6;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format = "csv";
  std::string input;  // oh-norm: JSON file of matrices
  std::size_t fock_cap = kDefaultFockCap;
  int trials = 0;     // randomized rows; 0 selects the command default
};

const std::vector<std::string>& experiment_names();

// Throws std::invalid_argument on a malformed config.
void validate(const ExperimentConfig& cfg);

Report run_experiment(const ExperimentConfig& cfg);

Report run_pw_verify(const ExperimentConfig& cfg);
Report run_gdiag_scaling(const ExperimentConfig& cfg);
Report run_proj_const_table(const ExperimentConfig& cfg);
Report run_ncp(const ExperimentConfig& cfg);
Report run_fock_moments(const ExperimentConfig& cfg);
Report run_voiculescu(const ExperimentConfig& cfg);
Report run_kfunc_duality(const ExperimentConfig& cfg);
Report run_oh_norm(const ExperimentConfig& cfg);

// Catalan numbers by the convolution recursion.
std::uint64_t catalan(int k);

}  // namespace ohlab
