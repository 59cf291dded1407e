#include "ahlab/grid.hpp"

#include <algorithm>

namespace ahlab {

GridSpec ambient_grid(const ModelManifold& m, int per_axis) {
  if (per_axis < 2)
    throw Error(ErrorCode::invalid_argument, "grid resolution must be >= 2");
  GridSpec g;
  int axes = 2 * m.n;
  g.lo.assign(axes, 0.0);
  g.hi.assign(axes, 0.0);
  g.res.assign(axes, per_axis);
  g.periodic.assign(axes, m.kind == ModelKind::Torus);
  for (int a = 0; a < axes; ++a) {
    if (m.kind == ModelKind::Torus) {
      g.lo[a] = 0.0;
      g.hi[a] = 1.0;
    } else {
      g.lo[a] = -m.ball_radius;
      g.hi[a] = m.ball_radius;
    }
  }
  return g;
}

GridSpec real_locus_grid(const ModelManifold& m, int per_axis) {
  if (per_axis < 2)
    throw Error(ErrorCode::invalid_argument, "grid resolution must be >= 2");
  GridSpec g;
  g.lo.assign(m.n, 0.0);
  g.hi.assign(m.n, 0.0);
  g.res.assign(m.n, per_axis);
  g.periodic.assign(m.n, m.kind == ModelKind::Torus);
  for (int a = 0; a < m.n; ++a) {
    if (m.kind == ModelKind::Torus) {
      g.lo[a] = 0.0;
      g.hi[a] = 1.0;
    } else {
      g.lo[a] = -m.ball_radius;
      g.hi[a] = m.ball_radius;
    }
  }
  return g;
}

void for_each_ambient_point(
    const ModelManifold& m, const GridSpec& g,
    const std::function<void(long long, const CPoint&)>& fn) {
  long long total = g.total();
  bool clip = m.kind == ModelKind::FlatBall;
  for (long long i = 0; i < total; ++i) {
    auto c = g.point(i);
    CPoint p = ambient_point(m, c);
    if (clip && p.norm() > m.ball_radius) continue;
    fn(i, p);
  }
}

void for_each_real_point(
    const ModelManifold& m, const GridSpec& g,
    const std::function<void(long long, const CPoint&)>& fn) {
  long long total = g.total();
  bool clip = m.kind == ModelKind::FlatBall;
  for (long long i = 0; i < total; ++i) {
    auto c = g.point(i);
    CPoint p = real_point(m, c);
    if (clip && p.norm() > m.ball_radius) continue;
    fn(i, p);
  }
}

GridSpec ball_grid(const ModelManifold& m, const ScaledFrame& f,
                   const CPoint& x, double radius_gk, int per_axis) {
  if (per_axis < 2)
    throw Error(ErrorCode::invalid_argument, "grid resolution must be >= 2");
  GridSpec g;
  int axes = 2 * m.n;
  double r_g = radius_gk / f.sqrt_k();
  g.lo.resize(axes);
  g.hi.resize(axes);
  g.res.assign(axes, per_axis);
  g.periodic.assign(axes, false);
  for (int j = 0; j < m.n; ++j) {
    g.lo[2 * j] = x[j].real() - r_g;
    g.hi[2 * j] = x[j].real() + r_g;
    g.lo[2 * j + 1] = x[j].imag() - r_g;
    g.hi[2 * j + 1] = x[j].imag() + r_g;
  }
  return g;
}

}  // namespace ahlab
