#include "ahlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ahlab {

ModelManifold ModelManifold::torus(int n) {
  if (n < 1 || n > kMaxDim)
    throw Error(ErrorCode::invalid_argument, "n must be in [1,3]");
  ModelManifold m;
  m.kind = ModelKind::Torus;
  m.n = n;
  return m;
}

ModelManifold ModelManifold::flat_ball(int n, double radius) {
  if (n < 1 || n > kMaxDim)
    throw Error(ErrorCode::invalid_argument, "n must be in [1,3]");
  if (!(radius > 0))
    throw Error(ErrorCode::invalid_argument, "ball radius must be positive");
  ModelManifold m;
  m.kind = ModelKind::FlatBall;
  m.n = n;
  m.ball_radius = radius;
  return m;
}

bool ModelManifold::contains(const CPoint& z) const {
  if (z.n != n) return false;
  if (kind == ModelKind::Torus) return true;
  return z.norm() <= ball_radius + 1e-12;
}

namespace {
inline double reduce_mod1(double d) {
  d -= std::floor(d);        // [0,1)
  if (d >= 0.5) d -= 1.0;    // [-1/2, 1/2)
  return d;
}
}  // namespace

CPoint ModelManifold::displacement(const CPoint& x, const CPoint& y) const {
  CPoint d(n);
  for (int j = 0; j < n; ++j) {
    double re = y[j].real() - x[j].real();
    double im = y[j].imag() - x[j].imag();
    if (kind == ModelKind::Torus) {
      re = reduce_mod1(re);
      im = reduce_mod1(im);
    }
    d[j] = cplx(re, im);
  }
  return d;
}

double ModelManifold::gk_distance(const ScaledFrame& f, const CPoint& x,
                                  const CPoint& y) const {
  if (kind == ModelKind::FlatBall && (!contains(x) || !contains(y)))
    throw Error(ErrorCode::domain, "point outside the flat ball");
  return f.sqrt_k() * g_distance(x, y);
}

double ModelManifold::g_distance_to_real_locus(const CPoint& z) const {
  double s = 0;
  for (int j = 0; j < n; ++j) {
    double im = z[j].imag();
    if (kind == ModelKind::Torus) im = reduce_mod1(im);
    s += im * im;
  }
  return std::sqrt(s);
}

double ModelManifold::real_locus_volume() const {
  if (kind == ModelKind::Torus) return 1.0;
  // Real ball of radius R: volume of the n-ball.
  double R = ball_radius;
  switch (n) {
    case 1: return 2 * R;
    case 2: return kPi * R * R;
    default: return 4.0 / 3.0 * kPi * R * R * R;
  }
}

RealLattice real_lattice(const ModelManifold& m, const ScaledFrame& f,
                         double D) {
  if (!(D > 0)) throw Error(ErrorCode::invalid_argument, "D must be positive");
  RealLattice out;
  double sk = f.sqrt_k();
  if (m.kind == ModelKind::Torus) {
    int per = static_cast<int>(std::floor(sk / D));
    if (per < 1) {
      per = 1;
      out.degenerate_mesh = true;
    }
    out.per_axis = per;
    std::array<int, kMaxDim> idx{};
    while (true) {
      CPoint p(m.n);
      for (int j = 0; j < m.n; ++j)
        p[j] = cplx(static_cast<double>(idx[j]) / per, 0.0);
      out.points.push_back(p);
      int a = m.n - 1;
      while (a >= 0 && ++idx[a] == per) idx[a--] = 0;
      if (a < 0) break;
    }
  } else {
    double spacing = D / sk;  // g units
    int reach = static_cast<int>(std::floor(m.ball_radius / spacing));
    if (2.0 * m.ball_radius < spacing) {
      out.points.push_back(CPoint(m.n));
      out.per_axis = 1;
      out.degenerate_mesh = true;
      return out;
    }
    out.per_axis = 2 * reach + 1;
    std::array<int, kMaxDim> idx{};
    for (int j = 0; j < m.n; ++j) idx[j] = -reach;
    while (true) {
      CPoint p(m.n);
      double r2 = 0;
      for (int j = 0; j < m.n; ++j) {
        double v = idx[j] * spacing;
        p[j] = cplx(v, 0.0);
        r2 += v * v;
      }
      if (r2 <= m.ball_radius * m.ball_radius) out.points.push_back(p);
      int a = m.n - 1;
      while (a >= 0 && ++idx[a] > reach) idx[a--] = -reach;
      if (a < 0) break;
    }
    if (out.points.empty()) {
      out.points.push_back(CPoint(m.n));
      out.degenerate_mesh = true;
    }
  }
  return out;
}

namespace {

// Orbit distance: min over the four cross pairs of {x, c(x)} vs {y, c(y)}.
double orbit_distance(const ModelManifold& m, const CPoint& a,
                      const CPoint& b) {
  double d = m.g_distance(a, b);
  d = std::min(d, m.g_distance(a, m.involution(b)));
  d = std::min(d, m.g_distance(m.involution(a), b));
  d = std::min(d, m.g_distance(m.involution(a), m.involution(b)));
  return d;
}

}  // namespace

ColoredBallNet colored_ball_net(const ModelManifold& m, const ScaledFrame& f,
                                double D) {
  if (!(D > 0)) throw Error(ErrorCode::invalid_argument, "D must be positive");
  ColoredBallNet net;
  net.separation = D;
  double sk = f.sqrt_k();
  int axes = 2 * m.n;
  // Per-axis g_k spacing with covering radius (half cell diagonal) <= 0.99.
  double target = 1.98 / std::sqrt(static_cast<double>(axes));

  // Residue coloring with period c needs c | m (torus wrap) and c*s >= D.
  // c is derived from the target spacing so the color count does not grow
  // with k; only in the small-torus regime (sqrt(k) ~ D) does c inflate.
  int c = std::max(1, static_cast<int>(std::ceil(D / target)));
  int count = 1;
  double spacing_g = 0;
  if (m.kind == ModelKind::Torus) {
    for (;; ++c) {
      count = c * std::max(1, static_cast<int>(std::ceil(sk / (target * c))));
      double s = sk / count;
      if (c * s >= D - 1e-12) break;
      if (c > 4096)
        throw Error(ErrorCode::internal, "ball net coloring failed");
    }
    spacing_g = 1.0 / count;
    net.spacing_gk = sk / count;
  } else {
    spacing_g = target / sk;
    count = 2 * static_cast<int>(std::ceil(m.ball_radius / spacing_g)) + 1;
    net.spacing_gk = target;
    c = std::max(1, static_cast<int>(std::ceil(D / target)));
  }

  // Grid values per imaginary axis are symmetric under negation (torus:
  // {j/m}; flat: centered at 0), so the full grid is c-invariant and rows
  // with zero imaginary index lie on the real locus exactly.
  net.num_colors = 0;
  std::map<std::array<int, 2 * kMaxDim>, int> color_ids;
  int reach = (count - 1) / 2;  // flat only

  std::vector<int> idx(axes, 0);
  while (true) {
    CPoint p(m.n);
    bool keep = true;
    bool representative = true;
    std::array<int, 2 * kMaxDim> key{};
    for (int j = 0; j < m.n; ++j) {
      double re, im;
      int ri = idx[2 * j], ii = idx[2 * j + 1];
      int folded;
      if (m.kind == ModelKind::Torus) {
        re = ri * spacing_g;
        im = ii * spacing_g;
        int neg = (count - ii) % count;
        folded = std::min(ii, neg);
        if (ii > neg) representative = false;
        key[2 * j] = ri % c;
      } else {
        re = (ri - reach) * spacing_g;
        int signed_i = ii - reach;
        im = signed_i * spacing_g;
        folded = std::abs(signed_i);
        if (signed_i < 0) representative = false;
        key[2 * j] = ((ri % c) + c) % c;
      }
      key[2 * j + 1] = folded % c;
      p[j] = cplx(re, im);
    }
    if (m.kind == ModelKind::FlatBall)
      keep = p.norm() <= m.ball_radius + 1.0 / sk;
    if (keep && representative) {
      NetOrbit orbit;
      orbit.center = p;
      orbit.fixed = (m.g_distance_to_real_locus(p) * sk) < 1e-9;
      auto it = color_ids.find(key);
      if (it == color_ids.end())
        it = color_ids.emplace(key, net.num_colors++).first;
      orbit.color = it->second;
      net.orbits.push_back(orbit);
    }
    int a = axes - 1;
    while (a >= 0 && ++idx[a] == count) idx[a--] = 0;
    if (a < 0) break;
  }
  (void)orbit_distance;  // assertable via tests
  return net;
}

}  // namespace ahlab
