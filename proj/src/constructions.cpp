#include "ahlab/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ahlab {

namespace {

double default_cutoff(const ScaledFrame& f, double D) {
  return std::max(std::pow(static_cast<double>(f.k), 1.0 / 6.0), D);
}

int derived_ambient_res(const ModelManifold& m, const ScaledFrame& f) {
  double span = m.kind == ModelKind::Torus ? 1.0 : 2 * m.ball_radius;
  double diag = std::sqrt(static_cast<double>(2 * m.n));
  return std::max(8, static_cast<int>(std::ceil(
                         span * f.sqrt_k() * diag / 0.2)));
}

}  // namespace

SpheresSection build_spheres_section(const ModelManifold& m,
                                     const ScaledFrame& f,
                                     const LatticeConfig& cfg) {
  RealLattice lat = real_lattice(m, f, cfg.D);
  double cutoff =
      cfg.cutoff_gk > 0 ? cfg.cutoff_gk : default_cutoff(f, cfg.D);
  SpheresSection out;
  out.field = SectionField(m, f, cutoff);
  out.sites = static_cast<int>(lat.points.size());
  out.sites_per_axis = lat.per_axis;
  for (const CPoint& x : lat.points) {
    Bump b;
    b.center = x;
    b.coeff = 1.0;
    b.model = BumpModel::quadric();
    out.field.add_bump(b);
  }
  // Interference of the complementary sum at each site, value and C^1.
  for (int i = 0; i < out.sites; ++i) {
    SectionField self(m, f, cutoff);
    self.bumps.push_back(out.field.bumps[i]);
    FieldEval full = evaluate_full(out.field, lat.points[i]);
    FieldEval own = evaluate_full(self, lat.points[i]);
    double v = std::abs(full.value - own.value);
    double g = 0;
    for (int j = 0; j < m.n; ++j)
      g += std::norm(full.dx[j] - own.dx[j]) + std::norm(full.dy[j] - own.dy[j]);
    g = std::sqrt(g) / f.sqrt_k();
    out.max_interference_value = std::max(out.max_interference_value, v);
    out.max_interference_grad = std::max(out.max_interference_grad, g);
  }
  return out;
}

SectionField build_nonvanishing_section(const ModelManifold& m,
                                        const ScaledFrame& f) {
  LatticeConfig cfg;
  cfg.D = 1.0;
  cfg.k = f.k;
  RealLattice lat = real_lattice(m, f, cfg.D);
  SectionField s(m, f, default_cutoff(f, 1.0));
  for (const CPoint& x : lat.points) {
    Bump b;
    b.center = x;
    b.coeff = 1.0;
    b.model = BumpModel::unit();
    s.add_bump(b);
  }
  return s;
}

SectionField build_full_lattice_section(const ModelManifold& m,
                                        const ScaledFrame& f, double mesh_gk) {
  if (!(mesh_gk > 0))
    throw Error(ErrorCode::invalid_argument, "mesh must be positive");
  SectionField s(m, f, default_cutoff(f, mesh_gk));
  int axes = 2 * m.n;
  if (m.kind == ModelKind::Torus) {
    int per = std::max(1, static_cast<int>(std::floor(f.sqrt_k() / mesh_gk)));
    std::vector<int> idx(axes, 0);
    while (true) {
      Bump b;
      b.center = CPoint(m.n);
      for (int j = 0; j < m.n; ++j)
        b.center[j] = cplx(static_cast<double>(idx[2 * j]) / per,
                           static_cast<double>(idx[2 * j + 1]) / per);
      b.coeff = 1.0;
      b.model = BumpModel::quadric();
      s.add_bump(b);
      int a = axes - 1;
      while (a >= 0 && ++idx[a] == per) idx[a--] = 0;
      if (a < 0) break;
    }
  } else {
    double spacing = mesh_gk / f.sqrt_k();
    int reach = static_cast<int>(std::floor(m.ball_radius / spacing));
    std::vector<int> idx(axes, -reach);
    while (true) {
      Bump b;
      b.center = CPoint(m.n);
      double r2 = 0;
      for (int j = 0; j < m.n; ++j) {
        double re = idx[2 * j] * spacing, im = idx[2 * j + 1] * spacing;
        b.center[j] = cplx(re, im);
        r2 += re * re + im * im;
      }
      if (r2 <= m.ball_radius * m.ball_radius) {
        b.coeff = 1.0;
        b.model = BumpModel::quadric();
        s.add_bump(b);
      }
      int a = axes - 1;
      while (a >= 0 && ++idx[a] > reach) idx[a--] = -reach;
      if (a < 0) break;
    }
  }
  return s;
}

namespace {

// Local eta on the unit g_k ball around x: min over sublevel of |grad|/sqrt k.
double local_eta(const ModelManifold& m, const ScaledFrame& f,
                 const SectionField& s, const CPoint& x, double epsilon,
                 int per_axis) {
  GridSpec g = ball_grid(m, f, x, 1.0, per_axis);
  double sk = f.sqrt_k();
  double eta = std::numeric_limits<double>::infinity();
  long long total = g.total();
  for (long long i = 0; i < total; ++i) {
    CPoint p = ambient_point(m, g.point(i));
    CPoint d = m.displacement(x, p);
    if (d.norm() * sk > 1.0) continue;
    if (m.kind == ModelKind::FlatBall && p.norm() > m.ball_radius) continue;
    FieldEval e = evaluate_full(s, p);
    if (std::abs(e.value) > epsilon) continue;
    eta = std::min(eta, e.grad_norm(m.n) / sk);
  }
  return eta;
}

// s / g as a SampledFn in local g_k coordinates around x.
SampledFn quotient_fn(const ModelManifold& m, const ScaledFrame& f,
                      const SectionField* s, const SectionField* g,
                      CPoint x, double normalize) {
  SampledFn fn;
  fn.n = m.n;
  double sk = f.sqrt_k();
  auto to_ambient = [m, x, sk](const CPoint& zeta) {
    CPoint p = x;
    for (int j = 0; j < m.n; ++j) p[j] += zeta[j] / sk;
    return p;
  };
  fn.value = [s, g, to_ambient, normalize](const CPoint& zeta) {
    CPoint p = to_ambient(zeta);
    return evaluate(*s, p) / evaluate(*g, p) / normalize;
  };
  fn.gradient = [s, g, to_ambient, normalize, sk](const CPoint& zeta,
                                                  cplx* out) {
    CPoint p = to_ambient(zeta);
    FieldEval es = evaluate_full(*s, p);
    FieldEval eg = evaluate_full(*g, p);
    cplx q = es.value / eg.value;
    int n = p.n;
    for (int j = 0; j < n; ++j) {
      out[2 * j] = (es.dx[j] - q * eg.dx[j]) / eg.value / (normalize * sk);
      out[2 * j + 1] = (es.dy[j] - q * eg.dy[j]) / eg.value / (normalize * sk);
    }
  };
  return fn;
}

double sup_on_unit_ball(const ModelManifold& m, const ScaledFrame& f,
                        const SectionField& s, const SectionField& g,
                        const CPoint& x, int per_axis) {
  GridSpec grid = ball_grid(m, f, x, 1.1, per_axis);
  double sup = 0;
  long long total = grid.total();
  for (long long i = 0; i < total; ++i) {
    CPoint p = ambient_point(m, grid.point(i));
    CPoint d = m.displacement(x, p);
    if (d.norm() * f.sqrt_k() > 1.1) continue;
    double gv = std::abs(evaluate(g, p));
    if (gv < 1e-6) continue;
    sup = std::max(sup, std::abs(evaluate(s, p)) / gv);
  }
  return sup;
}

}  // namespace

TransversalizeResult transversalize_symmetric(const ModelManifold& m,
                                              const ScaledFrame& f,
                                              const SectionField& s,
                                              const TransversalizeConfig& cfg) {
  cfg.sard.validate();
  SymmetryCertificate sym = measure_symmetry(m, s, 16);
  if (sym.sup_deviation > 1e-9)
    throw Error(ErrorCode::invalid_argument,
                "transversalize: input is not symmetric");

  TransversalizeResult out;
  out.field = s;
  int gres = cfg.global_grid_per_axis > 0 ? cfg.global_grid_per_axis
                                          : derived_ambient_res(m, f);
  GridSpec global = ambient_grid(m, gres);
  auto global_eta = [&](const SectionField& field) {
    TransversalityReport r =
        eta_transversality(m, field, global, cfg.epsilon, false);
    return r.sublevel_empty ? std::numeric_limits<double>::infinity() : r.eta;
  };
  out.trace.eta_before = global_eta(s);
  AHReport ah0 = ah_report(m, s, global);
  out.trace.budget_limit = cfg.budget_factor * ah0.C0;
  if (out.trace.eta_before >= cfg.target_eta) {
    out.trace.eta_after = out.trace.eta_before;
    return out;  // identity: already transverse
  }

  ColoredBallNet net = colored_ball_net(m, f, cfg.net_separation);
  out.trace.colors = net.num_colors;
  double sigma_cutoff = std::pow(static_cast<double>(f.k), 1.0 / 6.0);

  for (int color = 0; color < net.num_colors; ++color) {
    const SectionField snapshot = out.field;  // same-color balls see this
    std::vector<SectionField> updates;
    for (const NetOrbit& orbit : net.orbits) {
      if (orbit.color != color) continue;
      BallLog log;
      log.color = color;
      log.center = orbit.center;
      log.fixed = orbit.fixed;
      log.local_eta_before = local_eta(m, f, snapshot, orbit.center,
                                       cfg.epsilon, cfg.ball_grid_per_axis);
      if (log.local_eta_before >= cfg.target_eta) {
        log.skipped_transverse = true;
        out.trace.balls.push_back(log);
        continue;
      }
      CPoint x = orbit.center;
      SectionField sigma = concentrated_sigma(m, f, x);
      SectionField sigma_hat = symmetrize(sigma);
      // Uniform floor of the symmetrized section; re-center once if deep
      // overlap erodes it (cannot happen for the Unit profile, kept as a
      // guard).
      if (std::abs(evaluate(sigma_hat, x)) < 0.4) {
        x[0] += cplx(0.25 / f.sqrt_k(), 0);
        sigma = concentrated_sigma(m, f, x);
        sigma_hat = symmetrize(sigma);
      }
      double dcx = m.g_distance(x, m.involution(x)) * f.sqrt_k();
      bool disjoint = dcx > 2 * sigma_cutoff + 0.2;

      SectionField update(m, f, sigma.cutoff_gk);
      if (!disjoint) {
        double a = std::max(
            1.0, 1.05 * sup_on_unit_ball(m, f, snapshot, sigma_hat, x,
                                         cfg.ball_grid_per_axis));
        SampledFn fn = quotient_fn(m, f, &snapshot, &sigma_hat, x, a);
        SardPick pick = pick_real_w(fn, cfg.sard);
        double w = -a * pick.w;
        log.w_real = w;
        update = scale(sigma_hat, w);
      } else {
        double a = std::max(
            1.0, 1.05 * sup_on_unit_ball(m, f, snapshot, sigma, x,
                                         cfg.ball_grid_per_axis));
        SectionField ks = kappa(sigma);
        SampledFn fn = quotient_fn(m, f, &snapshot, &sigma, x, a);
        SampledFn h = quotient_fn(m, f, &ks, &sigma, x, 1.0);
        PathPick pick =
            pick_path_w({fn}, {h}, cfg.sard, cfg.sard.sigma() / 4);
        cplx w = -a * pick.w[0];
        log.w_complex = w;
        update = add(scale(sigma, w), scale(ks, std::conj(w)));
      }
      log.perturbed = true;
      out.trace.perturbed += 1;
      double wmag = log.perturbed
                        ? (log.w_real != 0 ? std::fabs(log.w_real)
                                           : 2 * std::abs(log.w_complex))
                        : 0;
      out.trace.budget_used += wmag;
      if (out.trace.budget_used > out.trace.budget_limit) {
        std::ostringstream msg;
        msg << "perturbation budget exhausted: " << out.trace.budget_used
            << " > " << out.trace.budget_limit << " after "
            << out.trace.perturbed << " balls";
        throw Error(ErrorCode::budget_exhausted, msg.str());
      }
      updates.push_back(update);
      out.trace.balls.push_back(log);
    }
    for (const SectionField& u : updates)
      for (const Bump& b : u.bumps) out.field.bumps.push_back(b);
    // local after-measurements for this color
    for (auto& log : out.trace.balls) {
      if (log.color == color && log.perturbed)
        log.local_eta_after = local_eta(m, f, out.field, log.center,
                                        cfg.epsilon, cfg.ball_grid_per_axis);
    }
  }
  out.trace.eta_after = global_eta(out.field);
  return out;
}

std::string serialize_trace(const TransversalizationTrace& t) {
  std::ostringstream out;
  out << "colors = " << t.colors << "\n";
  out << "perturbed = " << t.perturbed << "\n";
  out << "eta_before = " << t.eta_before << "\n";
  out << "eta_after = " << t.eta_after << "\n";
  out << "budget = " << t.budget_used << " / " << t.budget_limit << "\n";
  for (const auto& b : t.balls) {
    out << "ball color=" << b.color << " center=";
    for (int j = 0; j < b.center.n; ++j)
      out << b.center[j].real() << (b.center[j].imag() >= 0 ? "+" : "")
          << b.center[j].imag() << "i ";
    if (b.skipped_transverse)
      out << "skipped eta=" << b.local_eta_before;
    else if (b.perturbed)
      out << "perturbed w=" << b.w_real << " w_c=(" << b.w_complex.real()
          << "," << b.w_complex.imag() << ") eta " << b.local_eta_before
          << " -> " << b.local_eta_after;
    out << "\n";
  }
  return out.str();
}

}  // namespace ahlab
