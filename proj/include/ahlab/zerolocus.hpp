#pragma once

// Real zero locus of a symmetric section on the real locus: sign-change
// marching (flips / squares / cubes with the asymptotic decider), connected
// components via union-find, per-component inradius packing data, complex
// zero counting by the argument principle (n = 1), and the equidistribution
// statistic.

#include <optional>
#include <string>
#include <vector>

#include "ahlab/fields.hpp"
#include "ahlab/grid.hpp"

namespace ahlab {

struct Component {
  int id = 0;
  long long cell_count = 0;
  double inradius_g = 0;    // largest ball with trivial sign region, g units
  std::vector<double> bbox_lo, bbox_hi;
  // n=1: crossing coordinates; n=2: polyline segments; n=3: facet centers.
  std::vector<std::vector<double>> geometry;
};

struct ComponentInventory {
  int count = 0;
  std::vector<Component> components;
  GridSpec grid;
  double min_inradius_g = 0;
};

// pre: s symmetric (measured certificate < 1e-9), grid cell <= 0.2 in g_k.
// Throws ErrorCode::degenerate_vertex when a grid vertex has |s| < 1e-12
// (re-run on grid.jittered(...)); never silently perturbs.
ComponentInventory real_components(const ModelManifold& m,
                                   const SectionField& s, const GridSpec& grid);

// Retries real_components on jittered grids when vertices degenerate.
ComponentInventory real_components_auto(const ModelManifold& m,
                                        const SectionField& s, GridSpec grid,
                                        int max_attempts = 5,
                                        unsigned seed = 12345);

struct PackingCertificate {
  bool ok = true;
  double volume_bound = 0;   // N * (min inradius_g)^n
  double real_volume = 0;    // vol(RX)
  double implied_C = 0;      // N / k^{n/2}
};

PackingCertificate packing_check(const ComponentInventory& inv,
                                 const ModelManifold& m, const ScaledFrame& f);

struct WindingCount {
  long long total = 0;              // signed zero count over the region
  std::vector<long long> per_cell;  // row-major over the contour grid
  double worst_integrality = 0;     // max |raw - rounded| over cells
};

// Argument-principle zero count over an axis-aligned box of C (n = 1 only).
// Throws ErrorCode::resolution if a winding integral is non-integer beyond
// 0.1, ErrorCode::degenerate_vertex when |s| vanishes on a contour.
WindingCount complex_zero_count(const ModelManifold& m, const SectionField& s,
                                const std::array<double, 2>& lo,
                                const std::array<double, 2>& hi, int cells_x,
                                int cells_y, int samples_per_edge = 8);

enum class EquiDomain { Ambient, RealLocus };

struct EquidistributionStat {
  int cells = 0;
  std::vector<double> cell_measure;  // per-cell zero count scaled by 1/k
  double mean = 0;
  double cv = 0;  // coefficient of variation
};

// n = 1 only (ambient: winding counts over the 2-torus/box; real locus:
// sign-change counts per interval). n >= 2 is out of scope and rejected.
EquidistributionStat equidistribution(const ModelManifold& m,
                                      const SectionField& s, int cells_per_axis,
                                      EquiDomain domain,
                                      int fine_per_cell = 0);

// Line-oriented component table and polyline/facet export for plotting.
std::string inventory_table(const ComponentInventory& inv);
std::string geometry_export(const ComponentInventory& inv);

}  // namespace ahlab
