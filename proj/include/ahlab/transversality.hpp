#pragma once

// Measured AH constants and eta-transversality of a SectionField on grids
// at scale g_k. Pure functions, deterministic traversal, honest grid
// Lipschitz corrections reported next to every minimum.

#include <optional>

#include "ahlab/fields.hpp"
#include "ahlab/grid.hpp"

namespace ahlab {

struct AHReport {
  double C0 = 0;    // sup |s|
  double C1 = 0;    // sup |grad s| / sqrt(k)
  double C2 = 0;    // sup |grad grad s| / k, finite differences of the gradient
  double Cbar = 0;  // sup of the per-bump covariant dbar residue
  GridSpec grid;
};

// pre: grid cell diameter <= 0.2 in g_k (refused otherwise).
AHReport ah_report(const ModelManifold& m, const SectionField& s,
                   const GridSpec& grid);

struct TransversalityReport {
  double epsilon = 0;
  double eta = 0;                  // min over {|s| <= eps} of |grad s|/sqrt(k)
  bool sublevel_empty = false;     // eta reported as +inf
  CPoint witness;                  // argmin when sublevel nonempty
  double witness_value = 0;        // |s| at witness
  double lipschitz_correction = 0; // C2 * (cell diameter in g_k)
  bool restricted_to_real = false;
};

// restrict_real: minimize |grad of Re s along real axes| / sqrt(k) over the
// real-locus sublevel (s must restrict real-valued there).
TransversalityReport eta_transversality(const ModelManifold& m,
                                        const SectionField& s,
                                        const GridSpec& grid, double epsilon,
                                        bool restrict_real);

std::string serialize_report(const AHReport& r);
std::string serialize_report(const TransversalityReport& r);

}  // namespace ahlab
