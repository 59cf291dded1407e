#pragma once

// Regular sample grids over the ambient domain (2n real axes) or the real
// locus (n real axes). Iteration order is row-major and deterministic; all
// sup/min estimates in the library traverse in this order.

#include <functional>
#include <vector>

#include "ahlab/model.hpp"
#include "ahlab/types.hpp"

namespace ahlab {

struct GridSpec {
  std::vector<double> lo, hi;   // per real axis
  std::vector<int> res;         // samples per axis (>= 1)
  std::vector<bool> periodic;   // torus axes omit the duplicate endpoint

  int dims() const { return static_cast<int>(lo.size()); }
  long long total() const {
    long long t = 1;
    for (int r : res) t *= r;
    return t;
  }
  double step(int axis) const {
    double span = hi[axis] - lo[axis];
    int r = res[axis];
    if (r <= 1) return span;
    return periodic[axis] ? span / r : span / (r - 1);
  }
  // Cell diagonal in g_k units.
  double cell_diameter_gk(const ScaledFrame& f) const {
    double s2 = 0;
    for (int a = 0; a < dims(); ++a) {
      double h = step(a);
      s2 += h * h;
    }
    return std::sqrt(s2) * f.sqrt_k();
  }
  std::vector<double> point(long long idx) const {
    std::vector<double> p(dims());
    for (int a = dims() - 1; a >= 0; --a) {
      int i = static_cast<int>(idx % res[a]);
      idx /= res[a];
      p[a] = lo[a] + step(a) * i;
    }
    return p;
  }
  // Offsets every axis by frac*step (used for degeneracy jitter).
  GridSpec jittered(double frac) const {
    GridSpec g = *this;
    for (int a = 0; a < dims(); ++a) {
      double d = step(a) * frac;
      g.lo[a] += d;
      g.hi[a] += d;
    }
    return g;
  }
};

// Ambient grid: 2n axes ordered (x_1, y_1, ..., x_n, y_n).
GridSpec ambient_grid(const ModelManifold& m, int per_axis);
// Real-locus grid: n axes (x_1, ..., x_n).
GridSpec real_locus_grid(const ModelManifold& m, int per_axis);

inline CPoint ambient_point(const ModelManifold& m,
                            const std::vector<double>& c) {
  CPoint p(m.n);
  for (int j = 0; j < m.n; ++j) p[j] = cplx(c[2 * j], c[2 * j + 1]);
  return p;
}
inline CPoint real_point(const ModelManifold& m,
                         const std::vector<double>& c) {
  CPoint p(m.n);
  for (int j = 0; j < m.n; ++j) p[j] = cplx(c[j], 0.0);
  return p;
}

// Visits every grid point inside the model domain, in index order.
void for_each_ambient_point(
    const ModelManifold& m, const GridSpec& g,
    const std::function<void(long long, const CPoint&)>& fn);
void for_each_real_point(
    const ModelManifold& m, const GridSpec& g,
    const std::function<void(long long, const CPoint&)>& fn);

// Ambient grid over a g_k ball around x (box clipped to the domain for the
// flat model). per_axis samples across the diameter.
GridSpec ball_grid(const ModelManifold& m, const ScaledFrame& f,
                   const CPoint& x, double radius_gk, int per_axis);

}  // namespace ahlab
