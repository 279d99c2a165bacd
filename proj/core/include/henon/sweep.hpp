#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace henon {

struct RunConfig {
  double tol = 1e-10;       // integrator relative tolerance
  double tol_beta = 1e-8;   // shooting bracket width
  double r_max = 1e3;
  double r_max_cap = 1e5;
  int grid = 512;           // eigenvalue grid
  std::string out_dir = "out";
  bool fixture_mode = false;  // pinned timestamps, reproducible bytes
  int jobs = 1;

  static RunConfig from_file(const std::string& path);
  void set(const std::string& key, const std::string& value);
  std::string canonical() const;  // sorted key=value block
  std::uint64_t hash() const;     // FNV-1a of canonical()
};

// One (N, alpha) cell of the phase atlas.
struct SweepRecord {
  int dim = 0;
  double alpha = 0;
  bool ok = false;
  std::string error;  // per-cell failure, sweep continues
  double beta0 = 0;
  double bracket = 0;
  double n_alpha_value = 0;
  bool has_beta1 = false;
  double beta1 = 0;
  double beta_prime_level = 0;
  // stability classification per sampled beta
  std::vector<std::pair<double, std::string>> sample_class;
  std::string asym_note;
  std::string timestamp;
  std::uint64_t settings_hash = 0;
};

std::string record_json(const SweepRecord& rec);

SweepRecord compute_cell(int dim, double alpha, const RunConfig& cfg);

// Runs the grid through a worker pool with ordered commits into
// <out_dir>/manifest.jsonl; existing cells are skipped when `resume`. The
// manifest is rewritten in grid order on completion, so identical configs
// give bit-identical files.
void run_sweep(const std::vector<int>& dims, const std::vector<double>& alphas,
               const RunConfig& cfg, bool resume);

}  // namespace henon
