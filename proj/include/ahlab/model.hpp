#pragma once

// Ambient models: flat ball in C^n and the torus C^n/(Z^n+iZ^n), with the
// standard symplectic form, the metrics g and g_k = k g, the involution
// c(z) = conj(z), and grid/lattice generation on the real locus.

#include <vector>

#include "ahlab/types.hpp"

namespace ahlab {

enum class ModelKind { FlatBall, Torus };

// Tensor power k and the sqrt(k) scale between g- and g_k-lengths.
struct ScaledFrame {
  int k = 1;
  explicit ScaledFrame(int k_) : k(k_) {
    if (k_ < 1) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
  }
  double sqrt_k() const { return std::sqrt(static_cast<double>(k)); }
};

struct ModelManifold {
  ModelKind kind = ModelKind::Torus;
  int n = 1;
  double ball_radius = 2.0;  // g-units, FlatBall only

  static ModelManifold torus(int n);
  static ModelManifold flat_ball(int n, double radius);

  // c(z) = conj(z), coordinatewise. Exact involution in arithmetic.
  CPoint involution(const CPoint& z) const { return z.conj(); }

  bool contains(const CPoint& z) const;

  // Displacement y - x with torus coordinates reduced to [-1/2, 1/2) per
  // real axis (nearest-image representative). Flat model: plain difference.
  CPoint displacement(const CPoint& x, const CPoint& y) const;

  double g_distance(const CPoint& x, const CPoint& y) const {
    return displacement(x, y).norm();
  }
  double gk_distance(const ScaledFrame& f, const CPoint& x,
                     const CPoint& y) const;

  // g-distance to the real locus {Im z = 0} (torus: nearest-image).
  double g_distance_to_real_locus(const CPoint& z) const;

  double real_locus_volume() const;
};

struct RealLattice {
  std::vector<CPoint> points;
  int per_axis = 0;
  bool degenerate_mesh = false;  // D exceeded the domain, single center
};

// Points of the real locus pairwise >= D apart in g_k. Torus: uniform grid
// with floor(sqrt(k)/D) points per real axis (at least 1).
RealLattice real_lattice(const ModelManifold& m, const ScaledFrame& f,
                         double D);

// One conjugation orbit of the ball net: the representative plus (when the
// center is off the real locus) its conjugate partner.
struct NetOrbit {
  CPoint center;       // representative
  bool fixed = false;  // c(center) == center (center on the real locus)
  int color = 0;
};

struct ColoredBallNet {
  std::vector<NetOrbit> orbits;
  int num_colors = 0;
  double separation = 0;     // requested D
  double spacing_gk = 0;     // realized per-axis spacing
};

// Deterministic c-invariant net of unit g_k-balls covering the domain
// together with the conjugate balls; within one color, distinct orbits are
// pairwise >= D apart in g_k (all four cross-pair distances).
ColoredBallNet colored_ball_net(const ModelManifold& m, const ScaledFrame& f,
                                double D);

}  // namespace ahlab
