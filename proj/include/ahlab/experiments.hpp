#pragma once

// Experiment driver: key-value config, k-sweeps, CSV emission, pencil
// certification and the invariant suite. This is the layer the C API and
// the CLI expose.

#include <string>
#include <vector>

#include "ahlab/types.hpp"

namespace ahlab {

struct ExperimentConfig {
  std::string model = "torus";  // torus | flat
  int n = 1;
  double ball_radius = 2.0;
  std::vector<int> k_list = {100, 400, 1600, 6400};
  double D = 2.0;
  double lattice_cutoff = 0;    // 0: default
  int resolution = 0;           // marching per-axis; 0: derived from k
  int ambient_resolution = 0;   // pencil/ambient grids; 0: derived
  int equi_cells = 16;          // equidistribution partition per run
  double sard_delta = 0.05;
  int sard_p = 2;
  double pencil_chi_factor = 0.2;
  double pencil_eps_factor = 0.5;
  double pencil_mesh = 1.2;     // full-lattice mesh for the pencil pair
  double eta_epsilon = 0.05;
  std::string out_dir = "out";
  unsigned seed = 1;

  void validate() const;            // throws ErrorCode::config
  std::string serialize() const;    // canonical key-value text
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  uint64_t hash() const;            // FNV-1a over the canonical text
};

struct RunResult {
  int exit_code = 0;  // 0 pass, 1 certification failure, 2 config error
  std::string summary;
  std::vector<std::string> files_written;
};

// One CSV row per k: sites, N, N/k^{n/2}, min inradius * sqrt(k), eta,
// equidistribution CV; plus a fitted log-log slope with confidence band.
RunResult run_scaling_study(const ExperimentConfig& cfg);

// The four pencil certificates, reality sup, Delta/Gamma tables.
RunResult run_pencil_report(const ExperimentConfig& cfg);

// Every module's invariant block, machine-readable pass/fail lines.
RunResult run_invariant_suite(const ExperimentConfig& cfg);

// Randomized real-Sard picking demo with CSV trace.
RunResult run_sard_demo(const ExperimentConfig& cfg, int instances = 50);

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double stderr_slope = 0;
  double band95 = 0;  // 1.96 * stderr
};
SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ahlab
