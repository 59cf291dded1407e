#pragma once

// The three headline section constructions: the lattice-of-quadrics section
// (many real components), the nonvanishing section (empty real part), and
// the symmetric colored transversalization recursion for line bundles.

#include <string>
#include <vector>

#include "ahlab/fields.hpp"
#include "ahlab/sard.hpp"
#include "ahlab/transversality.hpp"

namespace ahlab {

struct LatticeConfig {
  double D = 2.0;        // g_k mesh on the real locus
  double cutoff_gk = 0;  // 0: default max(k^{1/6}, D)
  int k = 100;
};

struct SpheresSection {
  SectionField field;
  int sites = 0;
  int sites_per_axis = 0;
  // Tail interference of the complementary sum, measured at every site.
  double max_interference_value = 0;
  double max_interference_grad = 0;  // per sqrt(k)
};

// Sum of Quadric bumps over the real lattice; symmetric by construction.
SpheresSection build_spheres_section(const ModelManifold& m,
                                     const ScaledFrame& f,
                                     const LatticeConfig& cfg);

// Sum of Unit bumps (coefficient 1) over a mesh-1 covering of the real
// locus; min |s| >= 1/4 there, so the real zero set is empty.
SectionField build_nonvanishing_section(const ModelManifold& m,
                                        const ScaledFrame& f);

// Quadric bumps over a c-invariant full 2n-dimensional lattice with the
// given g_k mesh (zero set spread over the whole torus).
SectionField build_full_lattice_section(const ModelManifold& m,
                                        const ScaledFrame& f, double mesh_gk);

struct TransversalizeConfig {
  double target_eta = 0.1;
  double epsilon = 0.05;        // sublevel threshold for eta measurements
  double net_separation = 6.0;  // D of the colored ball net
  SardParams sard{};            // fixed per-ball delta
  double budget_factor = 0.1;   // sum |w| <= budget_factor * C0(s)
  int ball_grid_per_axis = 23;  // local eta screening on unit balls
  int global_grid_per_axis = 0; // 0: derived from k
};

struct BallLog {
  int color = 0;
  CPoint center;
  bool fixed = false;
  bool perturbed = false;
  bool skipped_transverse = false;
  double w_real = 0;        // sigma-hat coefficient (real-w form)
  cplx w_complex{};         // off-real disjoint-support form
  double local_eta_before = 0;
  double local_eta_after = 0;
};

struct TransversalizationTrace {
  std::vector<BallLog> balls;
  int colors = 0;
  int perturbed = 0;
  double eta_before = 0;
  double eta_after = 0;
  double budget_used = 0;
  double budget_limit = 0;
};

struct TransversalizeResult {
  SectionField field;
  TransversalizationTrace trace;
};

// Colored Donaldson recursion over the ball net: per ball, a real w from the
// Sard picker applied to s / sigma-hat, update s += w sigma-hat; conjugate
// balls are certified without perturbation; off-real balls with disjoint
// conjugate supports use the w sigma + conj(w) kappa(sigma) form.
// pre: s symmetric. Output symmetric (certificate < 1e-9), measured eta > 0.
TransversalizeResult transversalize_symmetric(const ModelManifold& m,
                                              const ScaledFrame& f,
                                              const SectionField& s,
                                              const TransversalizeConfig& cfg);

std::string serialize_trace(const TransversalizationTrace& t);

}  // namespace ahlab
