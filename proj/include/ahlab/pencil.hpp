#pragma once

// F = s1/s0 from a symmetric transverse pair: base locus, critical set and
// Gamma region, numerical certificates for the pencil axioms (reality,
// pair transversality, Morse local models), and dF transversalization.

#include <optional>
#include <string>
#include <vector>

#include "ahlab/fields.hpp"
#include "ahlab/grid.hpp"
#include "ahlab/sard.hpp"

namespace ahlab {

struct CriticalPoint {
  CPoint position;
  cplx value;                  // F at the point
  double hessian_min_sv = 0;   // complex Hessian in g_k coordinates
  double hessian_max_sv = 0;
  double residual = 0;         // |dF|/sqrt(k) after Newton
  bool on_real_locus = false;
};

struct BasePoint {
  CPoint position;
  double residual = 0;  // |s0| + |s1|
};

struct GammaStats {
  double fraction = 0;        // grid fraction of Omega_chi with |dF| <= |dbarF|
  double max_dist_to_crit = 0;  // g_k distance, the measured rho_0
  long long gamma_points = 0;
};

struct PencilData {
  SectionField s0, s1;
  ModelManifold model;
  int k = 1;
  double chi = 0;      // Omega_chi = {|s0| >= chi}
  double epsilon = 0;  // Z_{k,eps} threshold
  double reality_sup = 0;
  double pair_eta = 0;          // min least-sv/sqrt(k) on the pair sublevel
  bool pair_sublevel_empty = false;
  double s0_eta = 0;            // item-1 certificate
  bool s0_sublevel_empty = false;
  std::vector<CriticalPoint> crit;
  double crit_min_separation_gk = 0;
  GammaStats gamma;
};

struct PencilConfig {
  double chi_factor = 0.2;      // chi = chi_factor * C0(s0)
  double eps_factor = 0.5;      // epsilon = eps_factor * chi
  int ambient_per_axis = 0;     // 0: derived from k and n
  double pair_eta_floor = 0.05; // rejection threshold for the pair gate
  double symmetry_tol = 1e-9;
  int newton_max_iter = 60;
  double dedupe_radius_gk = 0.35;
};

// pre: s0, s1 symmetric; the pair epsilon-transverse as a rank-2 system
// (verified on the grid, rejection carries a witness).
PencilData make_pencil(const ModelManifold& m, const ScaledFrame& f,
                       const SectionField& s0, const SectionField& s1,
                       const PencilConfig& cfg = {});

// Newton-refined common zeros {s0 = s1 = 0} (n >= 2; codim 4 needs dim >= 2).
std::vector<BasePoint> base_locus(const PencilData& p, int seeds_per_axis);

// Newton census of {dF = 0} inside Omega_chi plus Gamma statistics; stored
// into p.crit / p.gamma and returned.
struct CriticalSetResult {
  std::vector<CriticalPoint> crit;
  GammaStats gamma;
  int diverged_seeds = 0;
};
CriticalSetResult critical_set(PencilData& p, int seeds_per_axis);

struct ModelVCertificate {
  double hessian_min_sv = 0;
  double hessian_max_sv = 0;
  double antiholomorphic_residue = 0;  // |dbar dF| / |d dF| at the point
  bool degenerate = false;             // min sv < 1e-6 * max sv
};

ModelVCertificate model_v_certificate(const PencilData& p, const CPoint& q);

struct DFTransversalizeResult {
  SectionField s1;          // perturbed; s0 unchanged
  int perturbed_balls = 0;
  double eta_before = 0;    // dF transversality on Z_{k,eps}, g_k-normalized
  double eta_after = 0;
};

// Componentwise transversalization of dF on Z_{k,eps} by symmetric
// w z_r sigma-hat perturbations of s1 (n <= 2).
DFTransversalizeResult transversalize_dF(const ModelManifold& m,
                                         const ScaledFrame& f, PencilData& p,
                                         double target,
                                         const SardParams& sard = {});

// dF transversality measurement used before/after (min over the grid
// sublevel {|dF|/sqrt(k) <= eps} of least-sv(grad dF)/k, within Z_{k,eps}).
double measure_dF_eta(const PencilData& p, int per_axis, double eps);

cplx pencil_value(const PencilData& p, const CPoint& z);
// dF components dF/dzeta_j in g_k coordinates (zeta = z sqrt(k)).
void pencil_dF(const PencilData& p, const CPoint& z, cplx* out);

std::string pencil_report_text(const PencilData& p);

}  // namespace ahlab
