#include "ahlab/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "numerics.hpp"

namespace ahlab {

namespace {

int derived_res(const ModelManifold& m, int k) {
  double sk = std::sqrt(static_cast<double>(k));
  double span = m.kind == ModelKind::Torus ? 1.0 : 2 * m.ball_radius;
  if (m.n == 1)
    return std::max(16, static_cast<int>(std::ceil(span * sk * 7.2)));
  return std::max(10, static_cast<int>(std::ceil(span * sk * 1.8)));
}

// Singular values of a complex n x n matrix (n <= 3) via the hermitian Gram.
void complex_sv_range(const cplx* H, int n, double& smin, double& smax) {
  // G = H^* H, hermitian PSD; eigenvalues via the real embedding.
  std::vector<double> G(2 * n * 2 * n, 0.0);
  std::vector<cplx> gram(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx s = 0;
      for (int r = 0; r < n; ++r) s += std::conj(H[r * n + i]) * H[r * n + j];
      gram[i * n + j] = s;
    }
  // real embedding [Re -Im; Im Re] has doubled eigenvalues of gram
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      G[i * 2 * n + j] = gram[i * n + j].real();
      G[i * 2 * n + (j + n)] = -gram[i * n + j].imag();
      G[(i + n) * 2 * n + j] = gram[i * n + j].imag();
      G[(i + n) * 2 * n + (j + n)] = gram[i * n + j].real();
    }
  auto ev = symmetric_eigenvalues(G, 2 * n);
  smin = std::sqrt(std::max(0.0, ev.front()));
  smax = std::sqrt(std::max(0.0, ev.back()));
}

struct FPair {
  FieldEval e0, e1;
};

FPair eval_pair(const PencilData& p, const CPoint& z) {
  return {evaluate_full(p.s0, z), evaluate_full(p.s1, z)};
}

// dF/dz_j (holomorphic part) and raw dbarF/dz_j from the quotient rule.
void quotient_wirtinger(const FPair& fp, int n, cplx* dz, cplx* dzbar) {
  cplx s0 = fp.e0.value, s1 = fp.e1.value;
  for (int j = 0; j < n; ++j) {
    cplx fx = (fp.e1.dx[j] * s0 - s1 * fp.e0.dx[j]) / (s0 * s0);
    cplx fy = (fp.e1.dy[j] * s0 - s1 * fp.e0.dy[j]) / (s0 * s0);
    dz[j] = 0.5 * (fx - cplx(0, 1) * fy);
    dzbar[j] = 0.5 * (fx + cplx(0, 1) * fy);
  }
}

}  // namespace

cplx pencil_value(const PencilData& p, const CPoint& z) {
  return evaluate(p.s1, z) / evaluate(p.s0, z);
}

void pencil_dF(const PencilData& p, const CPoint& z, cplx* out) {
  FPair fp = eval_pair(p, z);
  cplx dzbar[kMaxDim];
  quotient_wirtinger(fp, p.model.n, out, dzbar);
  double sk = std::sqrt(static_cast<double>(p.k));
  for (int j = 0; j < p.model.n; ++j) out[j] /= sk;  // g_k coordinates
}

PencilData make_pencil(const ModelManifold& m, const ScaledFrame& f,
                       const SectionField& s0, const SectionField& s1,
                       const PencilConfig& cfg) {
  if (m.n > 2)
    throw Error(ErrorCode::unsupported, "pencils: n <= 2 only");
  PencilData p;
  p.model = m;
  p.k = f.k;
  p.s0 = s0;
  p.s1 = s1;

  SymmetryCertificate c0 = measure_symmetry(m, s0, 12);
  SymmetryCertificate c1 = measure_symmetry(m, s1, 12);
  if (c0.sup_deviation > cfg.symmetry_tol || c1.sup_deviation > cfg.symmetry_tol) {
    std::ostringstream msg;
    msg << "symmetry gate: certificates " << c0.sup_deviation << ", "
        << c1.sup_deviation << " exceed " << cfg.symmetry_tol;
    throw Error(ErrorCode::certification, msg.str());
  }

  int res = cfg.ambient_per_axis > 0 ? cfg.ambient_per_axis
                                     : derived_res(m, f.k);
  GridSpec grid = ambient_grid(m, res);
  double sk = f.sqrt_k();

  double C0 = 0;
  for_each_ambient_point(m, grid, [&](long long, const CPoint& z) {
    C0 = std::max(C0, std::abs(evaluate(s0, z)));
  });
  p.chi = cfg.chi_factor * C0;
  p.epsilon = cfg.eps_factor * p.chi;

  // Pair transversality on {|s0|^2 + |s1|^2 <= eps^2}: least singular value
  // of the 4 x 2n real derivative, normalized by sqrt(k).
  p.pair_sublevel_empty = true;
  p.pair_eta = std::numeric_limits<double>::infinity();
  CPoint witness;
  for_each_ambient_point(m, grid, [&](long long, const CPoint& z) {
    FPair fp = eval_pair(p, z);
    double n2 = std::norm(fp.e0.value) + std::norm(fp.e1.value);
    if (n2 > p.epsilon * p.epsilon) return;
    std::vector<double> M(4 * 2 * m.n);
    for (int j = 0; j < m.n; ++j) {
      M[0 * 2 * m.n + 2 * j] = fp.e0.dx[j].real();
      M[0 * 2 * m.n + 2 * j + 1] = fp.e0.dy[j].real();
      M[1 * 2 * m.n + 2 * j] = fp.e0.dx[j].imag();
      M[1 * 2 * m.n + 2 * j + 1] = fp.e0.dy[j].imag();
      M[2 * 2 * m.n + 2 * j] = fp.e1.dx[j].real();
      M[2 * 2 * m.n + 2 * j + 1] = fp.e1.dy[j].real();
      M[3 * 2 * m.n + 2 * j] = fp.e1.dx[j].imag();
      M[3 * 2 * m.n + 2 * j + 1] = fp.e1.dy[j].imag();
    }
    double smin, smax;
    singular_range(M, 4, 2 * m.n, smin, smax);
    double eta = smin / sk;
    if (p.pair_sublevel_empty || eta < p.pair_eta) {
      p.pair_sublevel_empty = false;
      p.pair_eta = eta;
      witness = z;
    }
  });
  if (!p.pair_sublevel_empty && p.pair_eta < cfg.pair_eta_floor) {
    std::ostringstream msg;
    msg << "pair transversality rejected: eta " << p.pair_eta << " < "
        << cfg.pair_eta_floor << " at witness";
    for (int j = 0; j < m.n; ++j)
      msg << " " << witness[j].real() << "+" << witness[j].imag() << "i";
    throw Error(ErrorCode::certification, msg.str());
  }

  // Item-1 certificate for s0.
  TransversalityReport t0 =
      eta_transversality(m, s0, grid, p.epsilon, false);
  p.s0_sublevel_empty = t0.sublevel_empty;
  p.s0_eta = t0.sublevel_empty ? std::numeric_limits<double>::infinity()
                               : t0.eta;

  // Reality sup on the c-invariant grid, avoiding {|s0| < eps/2}.
  double sup = 0;
  for_each_ambient_point(m, grid, [&](long long, const CPoint& z) {
    if (std::abs(evaluate(s0, z)) < p.epsilon / 2) return;
    CPoint cz = m.involution(z);
    if (std::abs(evaluate(s0, cz)) < p.epsilon / 2) return;
    cplx dev = pencil_value(p, cz) - std::conj(pencil_value(p, z));
    sup = std::max(sup, std::abs(dev));
  });
  p.reality_sup = sup;
  return p;
}

std::vector<BasePoint> base_locus(const PencilData& p, int seeds_per_axis) {
  const ModelManifold& m = p.model;
  if (m.n != 2)
    throw Error(ErrorCode::unsupported,
                "base locus: real codimension 4 needs n = 2");
  double sk = std::sqrt(static_cast<double>(p.k));
  GridSpec grid = ambient_grid(m, seeds_per_axis);
  std::vector<CPoint> seeds;
  for_each_ambient_point(m, grid, [&](long long, const CPoint& z) {
    double v = std::abs(evaluate(p.s0, z)) + std::abs(evaluate(p.s1, z));
    if (v < 2 * p.epsilon) seeds.push_back(z);
  });
  std::vector<BasePoint> points;
  for (const CPoint& seed : seeds) {
    CPoint z = seed;
    bool ok = false;
    for (int it = 0; it < 80; ++it) {
      FPair fp = eval_pair(p, z);
      double res = std::abs(fp.e0.value) + std::abs(fp.e1.value);
      if (res < 1e-11) {
        ok = true;
        break;
      }
      std::vector<double> J(16), b(4), step;
      for (int j = 0; j < 2; ++j) {
        J[0 * 4 + 2 * j] = fp.e0.dx[j].real();
        J[0 * 4 + 2 * j + 1] = fp.e0.dy[j].real();
        J[1 * 4 + 2 * j] = fp.e0.dx[j].imag();
        J[1 * 4 + 2 * j + 1] = fp.e0.dy[j].imag();
        J[2 * 4 + 2 * j] = fp.e1.dx[j].real();
        J[2 * 4 + 2 * j + 1] = fp.e1.dy[j].real();
        J[3 * 4 + 2 * j] = fp.e1.dx[j].imag();
        J[3 * 4 + 2 * j + 1] = fp.e1.dy[j].imag();
      }
      b = {fp.e0.value.real(), fp.e0.value.imag(), fp.e1.value.real(),
           fp.e1.value.imag()};
      if (!solve_linear(J, b, step, 4)) break;
      double norm = 0;
      for (double v : step) norm += v * v;
      if (std::sqrt(norm) * sk > 3.0) break;  // leaving the basin
      for (int j = 0; j < 2; ++j)
        z[j] -= cplx(step[2 * j], step[2 * j + 1]);
    }
    if (!ok) continue;
    bool dup = false;
    for (const auto& q : points)
      if (m.g_distance(q.position, z) * sk < 0.5) {
        dup = true;
        break;
      }
    if (dup) continue;
    BasePoint bp;
    bp.position = z;
    bp.residual =
        std::abs(evaluate(p.s0, z)) + std::abs(evaluate(p.s1, z));
    points.push_back(bp);
  }
  return points;
}

CriticalSetResult critical_set(PencilData& p, int seeds_per_axis) {
  const ModelManifold& m = p.model;
  double sk = std::sqrt(static_cast<double>(p.k));
  int n = m.n;
  GridSpec grid = ambient_grid(m, seeds_per_axis);

  // |dF| over the grid (g_k units), Omega_chi mask.
  std::vector<double> mag(grid.total(),
                          std::numeric_limits<double>::quiet_NaN());
  std::vector<CPoint> pts(grid.total());
  for_each_ambient_point(m, grid, [&](long long i, const CPoint& z) {
    if (std::abs(evaluate(p.s0, z)) < p.chi) return;
    cplx u[kMaxDim];
    pencil_dF(p, z, u);
    double s = 0;
    for (int j = 0; j < n; ++j) s += std::norm(u[j]);
    mag[i] = std::sqrt(s);
    pts[i] = z;
  });

  // Seeds: grid-local minima of |dF| within Omega_chi.
  std::vector<CPoint> seeds;
  long long total = grid.total();
  for (long long i = 0; i < total; ++i) {
    if (std::isnan(mag[i])) continue;
    bool localmin = true;
    long long stride = 1;
    for (int a = grid.dims() - 1; a >= 0 && localmin; --a) {
      int ia = static_cast<int>((i / stride) % grid.res[a]);
      for (int d = -1; d <= 1 && localmin; d += 2) {
        int jb = ia + d;
        if (grid.periodic[a])
          jb = (jb + grid.res[a]) % grid.res[a];
        else if (jb < 0 || jb >= grid.res[a])
          continue;
        long long nb = i + (jb - ia) * stride;
        if (!std::isnan(mag[nb]) && mag[nb] < mag[i]) localmin = false;
      }
      stride *= grid.res[a];
    }
    if (localmin) seeds.push_back(pts[i]);
  }

  CriticalSetResult out;
  double fd = 1e-4 / sk;  // FD step, 1e-4 in g_k
  auto dF_at = [&](const CPoint& z, cplx* u) { pencil_dF(p, z, u); };

  for (const CPoint& seed : seeds) {
    CPoint z = seed;
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      cplx u[kMaxDim];
      dF_at(z, u);
      double res = 0;
      for (int j = 0; j < n; ++j) res += std::norm(u[j]);
      res = std::sqrt(res);
      if (res < 1e-11) {
        ok = true;
        break;
      }
      // Real 2n x 2n Jacobian of u by central differences.
      std::vector<double> J(4 * n * n * 4), b(2 * n), step;
      std::vector<double> Jm(2 * n * 2 * n);
      for (int a = 0; a < 2 * n; ++a) {
        CPoint zp = z, zm = z;
        cplx delta = (a % 2 == 0) ? cplx(fd, 0) : cplx(0, fd);
        zp[a / 2] += delta;
        zm[a / 2] -= delta;
        cplx up[kMaxDim], um[kMaxDim];
        dF_at(zp, up);
        dF_at(zm, um);
        for (int j = 0; j < n; ++j) {
          cplx d = (up[j] - um[j]) / (2 * fd);
          Jm[(2 * j) * 2 * n + a] = d.real();
          Jm[(2 * j + 1) * 2 * n + a] = d.imag();
        }
      }
      for (int j = 0; j < n; ++j) {
        b[2 * j] = u[j].real();
        b[2 * j + 1] = u[j].imag();
      }
      if (!solve_linear(Jm, b, step, 2 * n)) break;
      double sn = 0;
      for (double v : step) sn += v * v;
      if (std::sqrt(sn) > 2.0) break;  // steps are in g units here
      for (int j = 0; j < n; ++j)
        z[j] -= cplx(step[2 * j], step[2 * j + 1]);
      (void)J;
    }
    if (!ok) {
      ++out.diverged_seeds;
      continue;
    }
    if (std::abs(evaluate(p.s0, z)) < p.chi) continue;  // left Omega_chi
    bool dup = false;
    for (const auto& q : out.crit)
      if (m.g_distance(q.position, z) * sk < 0.35) {
        dup = true;
        break;
      }
    if (dup) continue;
    CriticalPoint cp;
    cp.position = z;
    cp.value = pencil_value(p, z);
    cplx u[kMaxDim];
    dF_at(z, u);
    double res = 0;
    for (int j = 0; j < n; ++j) res += std::norm(u[j]);
    cp.residual = std::sqrt(res);
    // Complex Hessian (holomorphic part of the derivative of dF).
    cplx H[kMaxDim * kMaxDim];
    for (int j = 0; j < n; ++j) {
      CPoint zxp = z, zxm = z, zyp = z, zym = z;
      zxp[j] += cplx(fd, 0);
      zxm[j] -= cplx(fd, 0);
      zyp[j] += cplx(0, fd);
      zym[j] -= cplx(0, fd);
      cplx uxp[kMaxDim], uxm[kMaxDim], uyp[kMaxDim], uym[kMaxDim];
      dF_at(zxp, uxp);
      dF_at(zxm, uxm);
      dF_at(zyp, uyp);
      dF_at(zym, uym);
      for (int i2 = 0; i2 < n; ++i2) {
        cplx ux = (uxp[i2] - uxm[i2]) / (2 * fd * sk);  // d u_i / d zeta_x
        cplx uy = (uyp[i2] - uym[i2]) / (2 * fd * sk);
        H[i2 * n + j] = 0.5 * (ux - cplx(0, 1) * uy);
      }
    }
    complex_sv_range(H, n, cp.hessian_min_sv, cp.hessian_max_sv);
    cp.on_real_locus = m.g_distance_to_real_locus(z) * sk < 1e-6;
    out.crit.push_back(cp);
  }

  // Gamma statistics over the grid.
  long long omega_pts = 0;
  out.gamma.max_dist_to_crit = 0;
  for_each_ambient_point(m, grid, [&](long long, const CPoint& z) {
    if (std::abs(evaluate(p.s0, z)) < p.chi) return;
    ++omega_pts;
    FPair fp = eval_pair(p, z);
    cplx dz[kMaxDim], dzb[kMaxDim];
    quotient_wirtinger(fp, n, dz, dzb);
    double a = 0, b2 = 0;
    for (int j = 0; j < n; ++j) {
      a += std::norm(dz[j]);
      b2 += std::norm(dzb[j]);
    }
    if (a > b2) return;  // outside Gamma
    ++out.gamma.gamma_points;
    double dmin = std::numeric_limits<double>::infinity();
    for (const auto& q : out.crit)
      dmin = std::min(dmin, m.g_distance(q.position, z) * sk);
    if (!out.crit.empty())
      out.gamma.max_dist_to_crit =
          std::max(out.gamma.max_dist_to_crit, dmin);
  });
  out.gamma.fraction =
      omega_pts > 0 ? static_cast<double>(out.gamma.gamma_points) / omega_pts
                    : 0.0;

  // Pairwise separation.
  double sep = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < out.crit.size(); ++i)
    for (size_t j = i + 1; j < out.crit.size(); ++j)
      sep = std::min(sep, m.g_distance(out.crit[i].position,
                                       out.crit[j].position) * sk);
  p.crit = out.crit;
  p.crit_min_separation_gk = out.crit.size() > 1 ? sep : 0;
  p.gamma = out.gamma;
  return out;
}

ModelVCertificate model_v_certificate(const PencilData& p, const CPoint& q) {
  const ModelManifold& m = p.model;
  int n = m.n;
  double sk = std::sqrt(static_cast<double>(p.k));
  double fd = 1e-4 / sk;
  cplx H[kMaxDim * kMaxDim], A[kMaxDim * kMaxDim];
  for (int j = 0; j < n; ++j) {
    CPoint zxp = q, zxm = q, zyp = q, zym = q;
    zxp[j] += cplx(fd, 0);
    zxm[j] -= cplx(fd, 0);
    zyp[j] += cplx(0, fd);
    zym[j] -= cplx(0, fd);
    cplx uxp[kMaxDim], uxm[kMaxDim], uyp[kMaxDim], uym[kMaxDim];
    pencil_dF(p, zxp, uxp);
    pencil_dF(p, zxm, uxm);
    pencil_dF(p, zyp, uyp);
    pencil_dF(p, zym, uym);
    for (int i = 0; i < n; ++i) {
      cplx ux = (uxp[i] - uxm[i]) / (2 * fd * sk);
      cplx uy = (uyp[i] - uym[i]) / (2 * fd * sk);
      H[i * n + j] = 0.5 * (ux - cplx(0, 1) * uy);
      A[i * n + j] = 0.5 * (ux + cplx(0, 1) * uy);
    }
  }
  ModelVCertificate cert;
  complex_sv_range(H, n, cert.hessian_min_sv, cert.hessian_max_sv);
  double amin, amax;
  complex_sv_range(A, n, amin, amax);
  cert.antiholomorphic_residue =
      cert.hessian_max_sv > 0 ? amax / cert.hessian_max_sv : 0.0;
  cert.degenerate = cert.hessian_min_sv < 1e-6 * cert.hessian_max_sv;
  return cert;
}

double measure_dF_eta(const PencilData& p, int per_axis, double eps) {
  const ModelManifold& m = p.model;
  int n = m.n;
  double sk = std::sqrt(static_cast<double>(p.k));
  double fd = 1e-4 / sk;
  GridSpec grid = ambient_grid(m, per_axis);
  double eta = std::numeric_limits<double>::infinity();
  for_each_ambient_point(m, grid, [&](long long, const CPoint& z) {
    if (std::abs(evaluate(p.s0, z)) < p.epsilon) return;  // outside Z_k_eps
    cplx u[kMaxDim];
    pencil_dF(p, z, u);
    double mag = 0;
    for (int j = 0; j < n; ++j) mag += std::norm(u[j]);
    mag = std::sqrt(mag);
    if (mag > eps) return;
    std::vector<double> Jm(2 * n * 2 * n);
    for (int a = 0; a < 2 * n; ++a) {
      CPoint zp = z, zm = z;
      cplx delta = (a % 2 == 0) ? cplx(fd, 0) : cplx(0, fd);
      zp[a / 2] += delta;
      zm[a / 2] -= delta;
      cplx up[kMaxDim], um[kMaxDim];
      pencil_dF(p, zp, up);
      pencil_dF(p, zm, um);
      for (int j = 0; j < n; ++j) {
        cplx d = (up[j] - um[j]) / (2 * fd * sk);  // per g_k step
        Jm[(2 * j) * 2 * n + a] = d.real();
        Jm[(2 * j + 1) * 2 * n + a] = d.imag();
      }
    }
    double smin, smax;
    singular_range(Jm, 2 * n, 2 * n, smin, smax);
    eta = std::min(eta, smin);
  });
  return eta;
}

DFTransversalizeResult transversalize_dF(const ModelManifold& m,
                                         const ScaledFrame& f, PencilData& p,
                                         double target,
                                         const SardParams& sard) {
  if (m.n > 2)
    throw Error(ErrorCode::unsupported, "transversalize_dF: n <= 2 only");
  sard.validate();
  int res = derived_res(m, f.k);
  double eps_dF = 4 * target;
  DFTransversalizeResult out;
  out.s1 = p.s1;
  out.eta_before = measure_dF_eta(p, res, eps_dF);
  if (out.eta_before >= target) {
    out.eta_after = out.eta_before;
    return out;
  }
  double sk = f.sqrt_k();

  for (int attempt = 0; attempt < 6; ++attempt) {
    double eta = measure_dF_eta(p, res, eps_dF);
    if (eta >= target) break;
    // Worst witness: rescan for the argmin.
    GridSpec grid = ambient_grid(m, res);
    CPoint worst;
    double worst_mag = std::numeric_limits<double>::infinity();
    for_each_ambient_point(m, grid, [&](long long, const CPoint& z) {
      if (std::abs(evaluate(p.s0, z)) < p.epsilon) return;
      cplx u[kMaxDim];
      pencil_dF(p, z, u);
      double mag = 0;
      for (int j = 0; j < m.n; ++j) mag += std::norm(u[j]);
      mag = std::sqrt(mag);
      if (mag < worst_mag) {
        worst_mag = mag;
        worst = z;
      }
    });
    // Ball centered on the real-locus projection of the witness.
    CPoint x = worst;
    for (int j = 0; j < m.n; ++j) x[j] = cplx(x[j].real(), 0.0);
    SectionField sigma_hat = symmetrize(concentrated_sigma(m, f, x));

    bool applied = false;
    for (int r = 0; r < m.n && !applied; ++r) {
      for (double rho : {1.0, 0.5}) {
        // zeta section: the change of pi_r dF per unit w, measured on the
        // ball; perturbation is w (z_r - x_r) sigma_hat on s1.
        SectionField pert_unit(m, f, sigma_hat.bumps[0].cutoff_gk);
        for (const Bump& sb : sigma_hat.bumps) {
          Bump b = sb;
          std::vector<Monomial> ms(1);
          ms[0].coeff = sb.coeff / sk;  // (z_r - x_r) = u_r / sqrt k
          ms[0].powers[r] = 1;
          b.model = BumpModel::polynomial(ms);
          b.coeff = 1.0;
          // recenter the monomial at x, not at the bump's own center
          if (!(sb.center == x)) {
            // (z_r - x_r) = (z_r - c_r) + (c_r - x_r)
            Monomial shift;
            shift.coeff = sb.coeff * (sb.center[r] - x[r]);
            ms.push_back(shift);
            ms[0].coeff = sb.coeff / sk;
            b.model = BumpModel::polynomial(ms);
          }
          pert_unit.add_bump(b);
        }
        // f_w = pi_r dF / zeta + w on the rho-ball, zeta from the unit pert.
        auto zeta_at = [&](const CPoint& z) -> cplx {
          // d/dzeta_r of (s1 + w pert)/s0 at w-derivative: quotient linear
          FieldEval ep = evaluate_full(pert_unit, z);
          FieldEval e0 = evaluate_full(p.s0, z);
          cplx px = (ep.dx[r] * e0.value - ep.value * e0.dx[r]) /
                    (e0.value * e0.value);
          cplx py = (ep.dy[r] * e0.value - ep.value * e0.dy[r]) /
                    (e0.value * e0.value);
          return 0.5 * (px - cplx(0, 1) * py) / sk;
        };
        // zeta floor on the ball
        GridSpec bg = ball_grid(m, f, x, rho, 13);
        double zmin = std::numeric_limits<double>::infinity();
        long long totalb = bg.total();
        for (long long i = 0; i < totalb; ++i) {
          CPoint z = ambient_point(m, bg.point(i));
          if (m.displacement(x, z).norm() * sk > rho) continue;
          if (std::abs(evaluate(p.s0, z)) < p.epsilon) continue;
          zmin = std::min(zmin, std::abs(zeta_at(z)));
        }
        if (!(zmin > 0.05) || std::isinf(zmin)) continue;  // floor violated

        SampledFn fn;
        fn.n = m.n;
        double scale_a = 0;
        {
          GridSpec sg = ball_grid(m, f, x, 1.1 * rho, 13);
          long long t2 = sg.total();
          for (long long i = 0; i < t2; ++i) {
            CPoint z = ambient_point(m, sg.point(i));
            if (m.displacement(x, z).norm() * sk > 1.1 * rho) continue;
            cplx u[kMaxDim];
            pencil_dF(p, z, u);
            cplx zv = zeta_at(z);
            if (std::abs(zv) < 0.05) continue;
            scale_a = std::max(scale_a, std::abs(u[r] / zv));
          }
          scale_a = std::max(1.0, 1.05 * scale_a);
        }
        PencilData* pp = &p;
        double rr = rho;
        CPoint xc = x;
        int comp = r;
        fn.value = [pp, zeta_at, scale_a, xc, sk, rr, comp](const CPoint& zeta) {
          CPoint z = xc;
          for (int j = 0; j < z.n; ++j) z[j] += zeta[j] * rr / sk;
          cplx u[kMaxDim];
          pencil_dF(*pp, z, u);
          return u[comp] / zeta_at(z) / scale_a;
        };
        fn.gradient = [fn2 = fn.value, sk, rr](const CPoint& zeta, cplx* out2) {
          double h = 1e-5;
          for (int a = 0; a < 2 * zeta.n; ++a) {
            CPoint zp = zeta, zm = zeta;
            cplx delta = (a % 2 == 0) ? cplx(h, 0) : cplx(0, h);
            zp[a / 2] += delta;
            zm[a / 2] -= delta;
            out2[a] = (fn2(zp) - fn2(zm)) / (2 * h);
          }
          (void)sk;
          (void)rr;
        };
        SardPick pick = pick_real_w(fn, sard);
        double w = -scale_a * pick.w;
        SectionField delta_field = scale(pert_unit, w);
        p.s1 = add(p.s1, delta_field);
        out.s1 = p.s1;
        out.perturbed_balls += 1;
        applied = true;
        break;
      }
    }
    if (!applied) break;
  }
  out.eta_after = measure_dF_eta(p, res, eps_dF);
  return out;
}

std::string pencil_report_text(const PencilData& p) {
  std::ostringstream out;
  out << "pencil.k = " << p.k << "\n";
  out << "pencil.chi = " << p.chi << "\n";
  out << "pencil.epsilon = " << p.epsilon << "\n";
  out << "pencil.reality_sup = " << p.reality_sup << "\n";
  out << "pencil.s0_eta = "
      << (p.s0_sublevel_empty ? std::string("inf (empty sublevel)")
                              : std::to_string(p.s0_eta))
      << "\n";
  out << "pencil.pair_eta = "
      << (p.pair_sublevel_empty ? std::string("inf (empty sublevel)")
                                : std::to_string(p.pair_eta))
      << "\n";
  out << "pencil.crit_count = " << p.crit.size() << "\n";
  out << "pencil.crit_min_separation_gk = " << p.crit_min_separation_gk
      << "\n";
  out << "pencil.gamma_fraction = " << p.gamma.fraction << "\n";
  out << "pencil.gamma_rho0 = " << p.gamma.max_dist_to_crit << "\n";
  out << "# critical points: position | F | hessian min sv\n";
  for (const auto& c : p.crit) {
    for (int j = 0; j < c.position.n; ++j)
      out << c.position[j].real() << (c.position[j].imag() >= 0 ? "+" : "")
          << c.position[j].imag() << "i ";
    out << "| " << c.value.real() << (c.value.imag() >= 0 ? "+" : "")
        << c.value.imag() << "i | " << c.hessian_min_sv << "\n";
  }
  return out.str();
}

}  // namespace ahlab
