#include "ahlab/transversality.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ahlab {

namespace {

// |grad grad s| at z by central differences of the analytic gradient,
// h = 1e-4 in g_k units. Frobenius norm over the 2n x 2n complex block.
double hess_norm(const ModelManifold& m, const SectionField& s,
                 const CPoint& z) {
  double h = 1e-4 / s.sqrt_k();
  double acc = 0;
  for (int a = 0; a < 2 * m.n; ++a) {
    CPoint zp = z, zm = z;
    int j = a / 2;
    cplx step = (a % 2 == 0) ? cplx(h, 0) : cplx(0, h);
    zp[j] += step;
    zm[j] -= step;
    FieldEval ep = evaluate_full(s, zp);
    FieldEval em = evaluate_full(s, zm);
    for (int b = 0; b < m.n; ++b) {
      acc += std::norm((ep.dx[b] - em.dx[b]) / (2 * h));
      acc += std::norm((ep.dy[b] - em.dy[b]) / (2 * h));
    }
  }
  return std::sqrt(acc);
}

}  // namespace

AHReport ah_report(const ModelManifold& m, const SectionField& s,
                   const GridSpec& grid) {
  ScaledFrame f(s.k);
  double diam = grid.cell_diameter_gk(f);
  if (diam > 0.2 + 1e-12) {
    std::ostringstream msg;
    msg << "grid too coarse for AH sup estimates: cell diameter " << diam
        << " g_k > 0.2; use >= "
        << static_cast<int>(std::ceil(grid.res[0] * diam / 0.2))
        << " samples per axis";
    throw Error(ErrorCode::resolution, msg.str());
  }
  AHReport rep;
  rep.grid = grid;
  double sk = s.sqrt_k();
  for_each_ambient_point(m, grid, [&](long long, const CPoint& z) {
    FieldEval e = evaluate_full(s, z);
    rep.C0 = std::max(rep.C0, std::abs(e.value));
    rep.C1 = std::max(rep.C1, e.grad_norm(m.n) / sk);
    rep.Cbar = std::max(rep.Cbar, e.dbar_norm(m.n));
  });
  // C2 on a decimated subgrid: the FD Hessian costs 4n evaluations per
  // point and sup|grad grad| varies on the g_k scale, not the cell scale.
  GridSpec coarse = grid;
  for (auto& r : coarse.res) r = std::max(2, r / 2);
  for_each_ambient_point(m, coarse, [&](long long, const CPoint& z) {
    rep.C2 = std::max(rep.C2, hess_norm(m, s, z) / s.k);
  });
  return rep;
}

TransversalityReport eta_transversality(const ModelManifold& m,
                                        const SectionField& s,
                                        const GridSpec& grid, double epsilon,
                                        bool restrict_real) {
  ScaledFrame f(s.k);
  TransversalityReport rep;
  rep.epsilon = epsilon;
  rep.restricted_to_real = restrict_real;
  rep.sublevel_empty = true;
  rep.eta = std::numeric_limits<double>::infinity();
  double sk = s.sqrt_k();

  auto consider = [&](const CPoint& z) {
    FieldEval e = evaluate_full(s, z);
    double val = restrict_real ? std::fabs(e.value.real())
                               : std::abs(e.value);
    if (val > epsilon) return;
    double gn;
    if (restrict_real) {
      // Gradient of Re s along the real axes only.
      double acc = 0;
      for (int j = 0; j < m.n; ++j) acc += e.dx[j].real() * e.dx[j].real();
      gn = std::sqrt(acc);
    } else {
      gn = e.grad_norm(m.n);
    }
    double eta = gn / sk;
    if (rep.sublevel_empty || eta < rep.eta) {
      rep.sublevel_empty = false;
      rep.eta = eta;
      rep.witness = z;
      rep.witness_value = val;
    }
  };

  if (restrict_real)
    for_each_real_point(m, grid, [&](long long, const CPoint& z) { consider(z); });
  else
    for_each_ambient_point(m, grid,
                           [&](long long, const CPoint& z) { consider(z); });

  // Honest grid correction: |grad s|/sqrt(k) moves by at most C2 per unit
  // g_k step, so the continuum minimum can undershoot the grid minimum by
  // C2 * (cell diameter). A cheap sup proxy for C2 near the witness.
  if (!rep.sublevel_empty) {
    double c2 = hess_norm(m, s, rep.witness) / s.k;
    rep.lipschitz_correction = c2 * grid.cell_diameter_gk(f);
  }
  return rep;
}

std::string serialize_report(const AHReport& r) {
  std::ostringstream out;
  out << "ah.C0 = " << r.C0 << "\n";
  out << "ah.C1 = " << r.C1 << "\n";
  out << "ah.C2 = " << r.C2 << "\n";
  out << "ah.Cbar = " << r.Cbar << "\n";
  out << "ah.grid = " << (r.grid.res.empty() ? 0 : r.grid.res[0]) << "\n";
  return out.str();
}

std::string serialize_report(const TransversalityReport& r) {
  std::ostringstream out;
  out << "eta.epsilon = " << r.epsilon << "\n";
  out << "eta.value = " << (r.sublevel_empty ? "inf" : std::to_string(r.eta))
      << "\n";
  out << "eta.restricted = " << (r.restricted_to_real ? 1 : 0) << "\n";
  out << "eta.lipschitz_correction = " << r.lipschitz_correction << "\n";
  if (!r.sublevel_empty) {
    out << "eta.witness =";
    for (int j = 0; j < r.witness.n; ++j)
      out << " " << r.witness[j].real() << " " << r.witness[j].imag();
    out << "\n";
  }
  return out.str();
}

}  // namespace ahlab
