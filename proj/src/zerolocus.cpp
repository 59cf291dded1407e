#include "ahlab/zerolocus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "numerics.hpp"

namespace ahlab {

namespace {

constexpr double kVertexTol = 1e-12;
constexpr double kImagTol = 1e-9;

struct VertexData {
  std::vector<double> value;  // Re s, NaN outside the flat-ball domain
  std::vector<int> dims;      // vertices per axis
  GridSpec grid;
  bool periodic = false;
  int n = 0;

  long long index(const std::vector<int>& c) const {
    long long idx = 0;
    for (int a = 0; a < n; ++a) idx = idx * dims[a] + c[a];
    return idx;
  }
  bool wrap(std::vector<int>& c) const {
    for (int a = 0; a < n; ++a) {
      if (c[a] < 0 || c[a] >= dims[a]) {
        if (!periodic) return false;
        c[a] = ((c[a] % dims[a]) + dims[a]) % dims[a];
      }
    }
    return true;
  }
  double coord(int axis, int i) const {
    return grid.lo[axis] + grid.step(axis) * i;
  }
};

VertexData sample_real_locus(const ModelManifold& m, const SectionField& s,
                             const GridSpec& grid) {
  VertexData vd;
  vd.grid = grid;
  vd.n = m.n;
  vd.periodic = m.kind == ModelKind::Torus;
  vd.dims.assign(grid.res.begin(), grid.res.end());
  vd.value.assign(grid.total(), std::numeric_limits<double>::quiet_NaN());
  double max_imag = 0;
  long long total = grid.total();
  for (long long i = 0; i < total; ++i) {
    CPoint p = real_point(m, grid.point(i));
    if (m.kind == ModelKind::FlatBall && p.norm() > m.ball_radius) continue;
    cplx v = evaluate(s, p);
    max_imag = std::max(max_imag, std::fabs(v.imag()));
    if (std::fabs(v.real()) < kVertexTol) {
      std::ostringstream msg;
      msg << "degenerate vertex |s| < 1e-12 at grid index " << i
          << "; re-run with a jittered grid";
      throw Error(ErrorCode::degenerate_vertex, msg.str());
    }
    vd.value[i] = v.real();
  }
  if (max_imag > kImagTol)
    throw Error(ErrorCode::invalid_argument,
                "field is not symmetric: Im s on the real locus exceeds 1e-9");
  return vd;
}

// Number of cells along an axis (periodic: res, else res-1).
int cells_along(const VertexData& vd, int axis) {
  return vd.periodic ? vd.dims[axis] : vd.dims[axis] - 1;
}

struct RegionInfo {
  // Connected constant-sign vertex regions (face adjacency), used for the
  // inradius distance transform.
  std::vector<int> region_of;  // per vertex, -1 outside
  int count = 0;
};

RegionInfo sign_regions(const VertexData& vd) {
  long long total = static_cast<long long>(vd.value.size());
  UnionFind uf(static_cast<int>(total));
  for (long long i = 0; i < total; ++i) {
    if (std::isnan(vd.value[i])) continue;
    // decode i
    std::vector<int> c(vd.n);
    long long rem = i;
    for (int a = vd.n - 1; a >= 0; --a) {
      c[a] = static_cast<int>(rem % vd.dims[a]);
      rem /= vd.dims[a];
    }
    for (int a = 0; a < vd.n; ++a) {
      std::vector<int> nb = c;
      nb[a] += 1;
      std::vector<int> w = nb;
      if (!vd.wrap(w)) continue;
      long long j = vd.index(w);
      if (std::isnan(vd.value[j])) continue;
      if ((vd.value[i] > 0) == (vd.value[j] > 0))
        uf.unite(static_cast<int>(i), static_cast<int>(j));
    }
  }
  RegionInfo info;
  info.region_of.assign(total, -1);
  std::map<int, int> ids;
  for (long long i = 0; i < total; ++i) {
    if (std::isnan(vd.value[i])) continue;
    int root = uf.find(static_cast<int>(i));
    auto it = ids.find(root);
    if (it == ids.end()) it = ids.emplace(root, info.count++).first;
    info.region_of[i] = it->second;
  }
  return info;
}

double axis_distance(const VertexData& vd, int axis, int i, int j) {
  double d = std::fabs(vd.coord(axis, i) - vd.coord(axis, j));
  if (vd.periodic) {
    double span = vd.grid.hi[axis] - vd.grid.lo[axis];
    d = std::min(d, span - d);
  }
  return d;
}

double vertex_distance(const VertexData& vd, const std::vector<int>& a,
                       const std::vector<int>& b) {
  double s = 0;
  for (int ax = 0; ax < vd.n; ++ax) {
    double d = axis_distance(vd, ax, a[ax], b[ax]);
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<int> decode(const VertexData& vd, long long i) {
  std::vector<int> c(vd.n);
  for (int a = vd.n - 1; a >= 0; --a) {
    c[a] = static_cast<int>(i % vd.dims[a]);
    i /= vd.dims[a];
  }
  return c;
}

}  // namespace

ComponentInventory real_components(const ModelManifold& m,
                                   const SectionField& s,
                                   const GridSpec& grid) {
  ScaledFrame f(s.k);
  if (grid.cell_diameter_gk(f) > 0.2 + 1e-9)
    throw Error(ErrorCode::resolution,
                "marching grid too coarse: need cell diameter <= 0.2 g_k");
  if (static_cast<int>(grid.res.size()) != m.n)
    throw Error(ErrorCode::invalid_argument, "grid must be on the real locus");

  VertexData vd = sample_real_locus(m, s, grid);

  // Crossing structure. Nodes for the union-find are edge crossings (n=1:
  // cells, n=2: edges with a sign change, n=3: crossing cells united
  // through mixed-sign shared faces).
  ComponentInventory inv;
  inv.grid = grid;

  struct CellRef {
    std::vector<int> cell;
    int comp = -1;
  };
  std::vector<CellRef> crossing_cells;
  std::vector<int> comp_of_crossing;  // per union-find node
  int components = 0;

  if (m.n == 1) {
    int cx = cells_along(vd, 0);
    for (int i = 0; i < cx; ++i) {
      std::vector<int> a{i}, b{i + 1};
      if (!vd.wrap(b)) continue;
      double va = vd.value[vd.index(a)], vb = vd.value[vd.index(b)];
      if (std::isnan(va) || std::isnan(vb)) continue;
      if ((va > 0) != (vb > 0)) {
        CellRef ref;
        ref.cell = {i};
        ref.comp = components++;
        // crossing coordinate by linear interpolation
        double x0 = vd.coord(0, i);
        double t = va / (va - vb);
        Component c;
        c.id = ref.comp;
        c.cell_count = 1;
        c.geometry.push_back({x0 + t * grid.step(0)});
        c.bbox_lo = {x0};
        c.bbox_hi = {x0 + grid.step(0)};
        inv.components.push_back(std::move(c));
        crossing_cells.push_back(std::move(ref));
      }
    }
  } else if (m.n == 2) {
    int cx = cells_along(vd, 0), cy = cells_along(vd, 1);
    // Edge crossing ids: x-edges (i,j)-(i+1,j), y-edges (i,j)-(i,j+1).
    std::map<std::pair<int, long long>, int> edge_ids;  // (dir, vertex idx)
    auto edge_id = [&](int dir, int i, int j) -> int {
      std::vector<int> c{i, j};
      if (!vd.wrap(c)) return -1;
      long long vi = vd.index(c);
      auto key = std::make_pair(dir, vi);
      auto it = edge_ids.find(key);
      if (it == edge_ids.end())
        it = edge_ids.emplace(key, static_cast<int>(edge_ids.size())).first;
      return it->second;
    };
    auto value_at = [&](int i, int j) -> double {
      std::vector<int> c{i, j};
      if (!vd.wrap(c)) return std::numeric_limits<double>::quiet_NaN();
      return vd.value[vd.index(c)];
    };
    auto cross_point = [&](int dir, int i, int j) -> std::array<double, 2> {
      double va = value_at(i, j);
      double vb = dir == 0 ? value_at(i + 1, j) : value_at(i, j + 1);
      double t = va / (va - vb);
      double x = vd.coord(0, i), y = vd.coord(1, j);
      if (dir == 0) x += t * grid.step(0);
      else y += t * grid.step(1);
      return {x, y};
    };

    struct Seg {
      int e1, e2;
      std::array<double, 2> p1, p2;
      int ci, cj;
    };
    std::vector<Seg> segs;
    int max_edge = 0;
    for (int j = 0; j < cy; ++j)
      for (int i = 0; i < cx; ++i) {
        double v00 = value_at(i, j), v10 = value_at(i + 1, j);
        double v01 = value_at(i, j + 1), v11 = value_at(i + 1, j + 1);
        if (std::isnan(v00) || std::isnan(v10) || std::isnan(v01) ||
            std::isnan(v11))
          continue;
        int code = (v00 > 0 ? 1 : 0) | (v10 > 0 ? 2 : 0) | (v01 > 0 ? 4 : 0) |
                   (v11 > 0 ? 8 : 0);
        if (code == 0 || code == 15) continue;
        // Edges: 0 bottom (dir0 @ i,j), 1 top (dir0 @ i,j+1),
        //        2 left (dir1 @ i,j), 3 right (dir1 @ i+1,j).
        int eb = edge_id(0, i, j), et = edge_id(0, i, j + 1);
        int el = edge_id(1, i, j), er = edge_id(1, i + 1, j);
        auto add = [&](int ea, int eb2, int dira, int ia, int ja, int dirb,
                       int ib, int jb) {
          Seg sg;
          sg.e1 = ea;
          sg.e2 = eb2;
          sg.p1 = cross_point(dira, ia, ja);
          sg.p2 = cross_point(dirb, ib, jb);
          sg.ci = i;
          sg.cj = j;
          segs.push_back(sg);
          max_edge = std::max({max_edge, ea, eb2});
        };
        bool b = (v00 > 0) != (v10 > 0);
        bool t = (v01 > 0) != (v11 > 0);
        bool l = (v00 > 0) != (v01 > 0);
        bool r = (v10 > 0) != (v11 > 0);
        int nc = (b ? 1 : 0) + (t ? 1 : 0) + (l ? 1 : 0) + (r ? 1 : 0);
        if (nc == 2) {
          std::vector<std::tuple<int, int, int, int>> hit;  // edge, dir, i, j
          if (b) hit.emplace_back(eb, 0, i, j);
          if (t) hit.emplace_back(et, 0, i, j + 1);
          if (l) hit.emplace_back(el, 1, i, j);
          if (r) hit.emplace_back(er, 1, i + 1, j);
          add(std::get<0>(hit[0]), std::get<0>(hit[1]), std::get<1>(hit[0]),
              std::get<2>(hit[0]), std::get<3>(hit[0]), std::get<1>(hit[1]),
              std::get<2>(hit[1]), std::get<3>(hit[1]));
        } else {
          // Saddle (all four edges cross): asymptotic decider on the
          // bilinear center value picks the pairing.
          double denom = v00 + v11 - v10 - v01;
          double center = std::fabs(denom) > 1e-300
                              ? (v00 * v11 - v10 * v01) / denom
                              : 0.0;
          bool same_as_v00 = (center > 0) == (v00 > 0);
          if (same_as_v00) {
            // v00-corner connects through: pair (bottom,left) stays apart;
            // actually connect bottom-right and top-left
            add(eb, er, 0, i, j, 1, i + 1, j);
            add(et, el, 0, i, j + 1, 1, i, j);
          } else {
            add(eb, el, 0, i, j, 1, i, j);
            add(et, er, 0, i, j + 1, 1, i + 1, j);
          }
        }
      }
    int edges = static_cast<int>(edge_ids.size());
    UnionFind uf(std::max(edges, 1));
    for (const Seg& sg : segs) uf.unite(sg.e1, sg.e2);
    std::map<int, int> comp_ids;
    auto comp_of = [&](int e) {
      int root = uf.find(e);
      auto it = comp_ids.find(root);
      if (it == comp_ids.end())
        it = comp_ids.emplace(root, static_cast<int>(comp_ids.size())).first;
      return it->second;
    };
    std::map<int, Component> comps;
    for (const Seg& sg : segs) {
      int id = comp_of(sg.e1);
      Component& c = comps[id];
      c.id = id;
      c.cell_count += 1;
      c.geometry.push_back({sg.p1[0], sg.p1[1], sg.p2[0], sg.p2[1]});
      double xlo = vd.coord(0, sg.ci), ylo = vd.coord(1, sg.cj);
      if (c.bbox_lo.empty()) {
        c.bbox_lo = {xlo, ylo};
        c.bbox_hi = {xlo + grid.step(0), ylo + grid.step(1)};
      } else {
        c.bbox_lo[0] = std::min(c.bbox_lo[0], xlo);
        c.bbox_lo[1] = std::min(c.bbox_lo[1], ylo);
        c.bbox_hi[0] = std::max(c.bbox_hi[0], xlo + grid.step(0));
        c.bbox_hi[1] = std::max(c.bbox_hi[1], ylo + grid.step(1));
      }
      CellRef ref;
      ref.cell = {sg.ci, sg.cj};
      ref.comp = id;
      crossing_cells.push_back(ref);
    }
    components = static_cast<int>(comps.size());
    for (auto& [id, c] : comps) inv.components.push_back(std::move(c));
  } else {
    // n = 3: crossing cells united through shared faces carrying a sign
    // change (a transverse wall between cells blocks the merge).
    int cx = cells_along(vd, 0), cy = cells_along(vd, 1),
        cz = cells_along(vd, 2);
    auto value_at = [&](int i, int j, int l) -> double {
      std::vector<int> c{i, j, l};
      if (!vd.wrap(c)) return std::numeric_limits<double>::quiet_NaN();
      return vd.value[vd.index(c)];
    };
    auto cell_state = [&](int i, int j, int l) -> int {
      // 0: uniform sign or outside, 1: crossing
      bool pos = false, neg = false;
      for (int d = 0; d < 8; ++d) {
        double v = value_at(i + (d & 1), j + ((d >> 1) & 1), l + (d >> 2));
        if (std::isnan(v)) return -1;
        (v > 0 ? pos : neg) = true;
      }
      return pos && neg ? 1 : 0;
    };
    auto face_mixed = [&](int i, int j, int l, int axis) -> bool {
      // Shared face between cell (i,j,l) and its +axis neighbor.
      bool pos = false, neg = false;
      for (int d = 0; d < 4; ++d) {
        int di = 0, dj = 0, dl = 0;
        if (axis == 0) {
          di = 1;
          dj = d & 1;
          dl = d >> 1;
        } else if (axis == 1) {
          dj = 1;
          di = d & 1;
          dl = d >> 1;
        } else {
          dl = 1;
          di = d & 1;
          dj = d >> 1;
        }
        double v = value_at(i + di, j + dj, l + dl);
        if (std::isnan(v)) return false;
        (v > 0 ? pos : neg) = true;
      }
      return pos && neg;
    };
    std::map<std::array<int, 3>, int> cell_node;
    for (int l = 0; l < cz; ++l)
      for (int j = 0; j < cy; ++j)
        for (int i = 0; i < cx; ++i)
          if (cell_state(i, j, l) == 1)
            cell_node[{i, j, l}] = static_cast<int>(cell_node.size());
    UnionFind uf(std::max<int>(1, static_cast<int>(cell_node.size())));
    for (const auto& [c, id] : cell_node)
      for (int axis = 0; axis < 3; ++axis) {
        std::array<int, 3> nb = c;
        nb[axis] += 1;
        std::array<int, 3> w = nb;
        std::vector<int> wv(w.begin(), w.end());
        if (!vd.wrap(wv)) continue;
        std::array<int, 3> wn{wv[0], wv[1], wv[2]};
        auto it = cell_node.find(wn);
        if (it == cell_node.end()) continue;
        if (face_mixed(c[0], c[1], c[2], axis)) uf.unite(id, it->second);
      }
    std::map<int, int> comp_ids;
    std::map<int, Component> comps;
    for (const auto& [c, id] : cell_node) {
      int root = uf.find(id);
      auto it = comp_ids.find(root);
      if (it == comp_ids.end())
        it = comp_ids.emplace(root, static_cast<int>(comp_ids.size())).first;
      int cid = it->second;
      Component& comp = comps[cid];
      comp.id = cid;
      comp.cell_count += 1;
      double x = vd.coord(0, c[0]) + grid.step(0) / 2;
      double y = vd.coord(1, c[1]) + grid.step(1) / 2;
      double z = vd.coord(2, c[2]) + grid.step(2) / 2;
      comp.geometry.push_back({x, y, z});
      if (comp.bbox_lo.empty()) {
        comp.bbox_lo = {x, y, z};
        comp.bbox_hi = {x, y, z};
      } else {
        for (int a = 0; a < 3; ++a) {
          double v = comp.geometry.back()[a];
          comp.bbox_lo[a] = std::min(comp.bbox_lo[a], v);
          comp.bbox_hi[a] = std::max(comp.bbox_hi[a], v);
        }
      }
      CellRef ref;
      ref.cell = {c[0], c[1], c[2]};
      ref.comp = cid;
      crossing_cells.push_back(ref);
    }
    components = static_cast<int>(comps.size());
    for (auto& [id, c] : comps) inv.components.push_back(std::move(c));
  }
  (void)comp_of_crossing;

  inv.count = static_cast<int>(inv.components.size());
  if (inv.count == 0) {
    inv.min_inradius_g = 0;
    return inv;
  }

  // Inradius per component: distance transform on adjacent constant-sign
  // vertex regions exclusive to the component; fallback half-separation.
  RegionInfo regions = sign_regions(vd);
  // region -> set of adjacent components
  std::vector<std::vector<int>> region_comps(regions.count);
  std::vector<std::vector<long long>> comp_vertices_all;  // crossing vertices
  std::vector<std::vector<std::vector<int>>> comp_cross_coords(inv.count);
  for (const auto& ref : crossing_cells) {
    // vertices of the crossing cell
    int corners = 1 << m.n;
    for (int d = 0; d < corners; ++d) {
      std::vector<int> c = ref.cell;
      for (int a = 0; a < m.n; ++a) c[a] += (d >> a) & 1;
      std::vector<int> w = c;
      if (!vd.wrap(w)) continue;
      long long vi = vd.index(w);
      int reg = regions.region_of[vi];
      if (reg >= 0) {
        auto& lst = region_comps[reg];
        if (std::find(lst.begin(), lst.end(), ref.comp) == lst.end())
          lst.push_back(ref.comp);
      }
      comp_cross_coords[ref.comp].push_back(w);
    }
  }
  // Vertices per region (for the exclusive-region transform).
  std::vector<std::vector<long long>> region_vertices(regions.count);
  for (long long i = 0; i < static_cast<long long>(vd.value.size()); ++i) {
    int r = regions.region_of[i];
    if (r >= 0) region_vertices[r].push_back(i);
  }

  double cell_size = 0;
  for (int a = 0; a < m.n; ++a) cell_size = std::max(cell_size, grid.step(a));

  inv.min_inradius_g = std::numeric_limits<double>::infinity();
  for (auto& comp : inv.components) {
    double best = 0;
    for (int r = 0; r < regions.count; ++r) {
      if (region_comps[r].size() != 1 || region_comps[r][0] != comp.id)
        continue;
      // exclusive region: max over region vertices of distance to the
      // component's crossing vertices
      double far = 0;
      for (long long vi : region_vertices[r]) {
        auto vc = decode(vd, vi);
        double near = std::numeric_limits<double>::infinity();
        for (const auto& cc : comp_cross_coords[comp.id])
          near = std::min(near, vertex_distance(vd, vc, cc));
        far = std::max(far, near);
      }
      best = std::max(best, far);
    }
    if (best == 0) {
      // fallback: half distance to the nearest other component
      double sep = std::numeric_limits<double>::infinity();
      for (const auto& other : inv.components) {
        if (other.id == comp.id) continue;
        for (const auto& a : comp_cross_coords[comp.id])
          for (const auto& b : comp_cross_coords[other.id])
            sep = std::min(sep, vertex_distance(vd, a, b));
      }
      best = std::isinf(sep) ? cell_size : sep / 2;
    }
    comp.inradius_g = std::max(best, cell_size);
    inv.min_inradius_g = std::min(inv.min_inradius_g, comp.inradius_g);
  }
  return inv;
}

ComponentInventory real_components_auto(const ModelManifold& m,
                                        const SectionField& s, GridSpec grid,
                                        int max_attempts, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> frac(0.05, 0.45);
  for (int attempt = 0;; ++attempt) {
    try {
      return real_components(m, s, grid);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate_vertex ||
          attempt + 1 >= max_attempts)
        throw;
      grid = grid.jittered(frac(rng));
    }
  }
}

PackingCertificate packing_check(const ComponentInventory& inv,
                                 const ModelManifold& m,
                                 const ScaledFrame& f) {
  PackingCertificate cert;
  cert.real_volume = m.real_locus_volume();
  cert.volume_bound =
      inv.count * std::pow(inv.min_inradius_g, static_cast<double>(m.n));
  cert.implied_C =
      inv.count / std::pow(static_cast<double>(f.k), m.n / 2.0);
  cert.ok = inv.count == 0 || cert.volume_bound <= cert.real_volume + 1e-12;
  return cert;
}

WindingCount complex_zero_count(const ModelManifold& m, const SectionField& s,
                                const std::array<double, 2>& lo,
                                const std::array<double, 2>& hi, int cells_x,
                                int cells_y, int samples_per_edge) {
  if (m.n != 1)
    throw Error(ErrorCode::unsupported, "winding counts: n = 1 only");
  if (cells_x < 1 || cells_y < 1 || samples_per_edge < 2)
    throw Error(ErrorCode::invalid_argument, "bad contour grid");
  double hx = (hi[0] - lo[0]) / cells_x;
  double hy = (hi[1] - lo[1]) / cells_y;

  auto field_at = [&](double x, double y) {
    CPoint p(1);
    p[0] = cplx(x, y);
    cplx v = evaluate(s, p);
    if (std::abs(v) < kVertexTol)
      throw Error(ErrorCode::degenerate_vertex,
                  "field vanishes on a contour; jitter the contour grid");
    return v;
  };
  auto arg_delta = [&](cplx a, cplx b) {
    double d = std::arg(b / a);
    if (std::fabs(d) > 2.5)
      throw Error(ErrorCode::resolution,
                  "phase step too large; refine the contour sampling");
    return d;
  };

  // Shared-edge phase sums. H[j][i]: edge (i,j)->(i+1,j); V[j][i]: (i,j)->(i,j+1).
  std::vector<std::vector<double>> H(cells_y + 1,
                                     std::vector<double>(cells_x, 0.0));
  std::vector<std::vector<double>> V(cells_y,
                                     std::vector<double>(cells_x + 1, 0.0));
  for (int j = 0; j <= cells_y; ++j)
    for (int i = 0; i < cells_x; ++i) {
      double y = lo[1] + j * hy;
      double acc = 0;
      cplx prev = field_at(lo[0] + i * hx, y);
      for (int t = 1; t <= samples_per_edge; ++t) {
        cplx cur = field_at(lo[0] + i * hx + hx * t / samples_per_edge, y);
        acc += arg_delta(prev, cur);
        prev = cur;
      }
      H[j][i] = acc;
    }
  for (int j = 0; j < cells_y; ++j)
    for (int i = 0; i <= cells_x; ++i) {
      double x = lo[0] + i * hx;
      double acc = 0;
      cplx prev = field_at(x, lo[1] + j * hy);
      for (int t = 1; t <= samples_per_edge; ++t) {
        cplx cur = field_at(x, lo[1] + j * hy + hy * t / samples_per_edge);
        acc += arg_delta(prev, cur);
        prev = cur;
      }
      V[j][i] = acc;
    }

  WindingCount out;
  out.per_cell.resize(static_cast<size_t>(cells_x) * cells_y);
  for (int j = 0; j < cells_y; ++j)
    for (int i = 0; i < cells_x; ++i) {
      double loop = H[j][i] + V[j][i + 1] - H[j + 1][i] - V[j][i];
      double raw = loop / (2 * kPi);
      long long w = std::llround(raw);
      double err = std::fabs(raw - w);
      out.worst_integrality = std::max(out.worst_integrality, err);
      if (err > 0.1)
        throw Error(ErrorCode::resolution,
                    "winding integral non-integer beyond 0.1");
      out.per_cell[static_cast<size_t>(j) * cells_x + i] = w;
      out.total += w;
    }
  return out;
}

EquidistributionStat equidistribution(const ModelManifold& m,
                                      const SectionField& s,
                                      int cells_per_axis, EquiDomain domain,
                                      int fine_per_cell) {
  if (m.n != 1)
    throw Error(ErrorCode::unsupported,
                "equidistribution statistic: n = 1 only");
  ScaledFrame f(s.k);
  EquidistributionStat stat;
  double inv_k = 1.0 / s.k;

  if (domain == EquiDomain::Ambient) {
    int M = cells_per_axis;
    if (fine_per_cell <= 0)
      fine_per_cell = std::max(
          2, static_cast<int>(std::ceil(2.0 * f.sqrt_k() / M)));
    double lo0 = 0, hi0 = 1;
    if (m.kind == ModelKind::FlatBall) {
      lo0 = -m.ball_radius;
      hi0 = m.ball_radius;
    }
    WindingCount wc = complex_zero_count(m, s, {lo0, lo0}, {hi0, hi0},
                                         M * fine_per_cell, M * fine_per_cell);
    stat.cells = M * M;
    stat.cell_measure.assign(stat.cells, 0.0);
    int fx = M * fine_per_cell;
    for (int j = 0; j < fx; ++j)
      for (int i = 0; i < fx; ++i) {
        long long w = wc.per_cell[static_cast<size_t>(j) * fx + i];
        if (w == 0) continue;
        int cj = j / fine_per_cell, ci = i / fine_per_cell;
        stat.cell_measure[static_cast<size_t>(cj) * M + ci] +=
            std::llabs(w) * inv_k;
      }
  } else {
    // Real locus: sign-change counts per interval of the circle/segment.
    int M = cells_per_axis;
    int fine = fine_per_cell > 0
                   ? fine_per_cell
                   : std::max(2, static_cast<int>(std::ceil(
                                     5.0 * f.sqrt_k() / M)));
    GridSpec g = real_locus_grid(m, M * fine);
    stat.cells = M;
    stat.cell_measure.assign(M, 0.0);
    long long total = g.total();
    int cells = m.kind == ModelKind::Torus ? static_cast<int>(total)
                                           : static_cast<int>(total) - 1;
    std::vector<double> vals(total);
    for (long long i = 0; i < total; ++i) {
      CPoint p = real_point(m, g.point(i));
      vals[i] = evaluate(s, p).real();
    }
    for (int i = 0; i < cells; ++i) {
      double a = vals[i], b = vals[(i + 1) % total];
      if ((a > 0) != (b > 0))
        stat.cell_measure[std::min<long long>(i / fine, M - 1)] += inv_k;
    }
  }

  double mean = 0;
  for (double v : stat.cell_measure) mean += v;
  mean /= stat.cells;
  stat.mean = mean;
  double var = 0;
  for (double v : stat.cell_measure) var += (v - mean) * (v - mean);
  var /= stat.cells;
  stat.cv = mean > 0 ? std::sqrt(var) / mean : 0.0;
  return stat;
}

std::string inventory_table(const ComponentInventory& inv) {
  std::ostringstream out;
  out << "# id size inradius_g bbox\n";
  for (const auto& c : inv.components) {
    out << c.id << " " << c.cell_count << " " << c.inradius_g << " ";
    for (size_t a = 0; a < c.bbox_lo.size(); ++a)
      out << "[" << c.bbox_lo[a] << "," << c.bbox_hi[a] << "]";
    out << "\n";
  }
  return out.str();
}

std::string geometry_export(const ComponentInventory& inv) {
  std::ostringstream out;
  for (const auto& c : inv.components) {
    out << "component " << c.id << "\n";
    for (const auto& g : c.geometry) {
      for (size_t i = 0; i < g.size(); ++i)
        out << (i ? " " : "") << g[i];
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace ahlab
