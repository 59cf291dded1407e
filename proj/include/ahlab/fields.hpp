#pragma once

// Closed-form sections: finite sums of Gaussian-weighted holomorphic bumps
//
//   s(z) = sum_i w_i * f_i((z - x_i) sqrt(k)) * e^{-lambda_i k |z - x_i|^2}
//                * beta(d_k(z, x_i))
//
// with beta a C^2 quintic plateau (== 1 on [0, r/2], == 0 beyond r). On the
// torus the sum runs over the period translates that can reach z; cutoff
// radii are capped below one g-period so the periodized field is exact and
// smooth. Values, first derivatives and the per-bump covariant dbar residue
// are all closed-form.

#include <string>
#include <vector>

#include "ahlab/grid.hpp"
#include "ahlab/model.hpp"
#include "ahlab/types.hpp"

namespace ahlab {

struct Monomial {
  std::array<int, kMaxDim> powers{};
  cplx coeff;
};

struct BumpModel {
  enum class Kind { Unit, Quadric, Polynomial };
  Kind kind = Kind::Unit;
  std::vector<Monomial> monomials;  // Polynomial only

  static BumpModel unit() { return BumpModel{}; }
  static BumpModel quadric() { return BumpModel{Kind::Quadric, {}}; }
  static BumpModel polynomial(std::vector<Monomial> ms) {
    return BumpModel{Kind::Polynomial, std::move(ms)};
  }

  // Model with conjugated coefficients: fbar(u) = conj(f(conj(u))).
  BumpModel conjugated() const;
  bool conjugation_symmetric() const;  // fbar == f (real coefficients)

  cplx value(const CPoint& u) const;
  // Complex derivatives df/du_j (f holomorphic in u).
  void derivative(const CPoint& u, cplx* du) const;
};

struct Bump {
  CPoint center;
  cplx coeff;
  BumpModel model;
  double gauss_scale = 1.0;  // lambda; 1.0 is the tau_k weight
  double cutoff_gk = 4.0;    // plateau support radius in g_k
};

struct SectionField {
  int n = 1;
  int k = 1;
  ModelKind domain = ModelKind::Torus;
  bool periodize = true;   // Torus only
  double cutoff_gk = 4.0;  // default for bumps added via add_bump
  std::vector<Bump> bumps;

  SectionField() = default;
  SectionField(const ModelManifold& m, const ScaledFrame& f, double cutoff);

  void add_bump(Bump b) {
    if (b.cutoff_gk <= 0) b.cutoff_gk = cutoff_gk;
    bumps.push_back(std::move(b));
  }
  double max_cutoff_gk() const;  // torus cap keeps support within one period
  double sqrt_k() const { return std::sqrt(static_cast<double>(k)); }
};

struct FieldEval {
  cplx value{};
  // Partials wrt Re z_j and Im z_j.
  std::array<cplx, kMaxDim> dx{}, dy{};
  // Per-bump covariant antiholomorphic residue (plateau term only; exactly 0
  // where every contributing bump has beta' = 0).
  std::array<cplx, kMaxDim> dbar{};

  double grad_norm(int n) const {
    double s = 0;
    for (int j = 0; j < n; ++j) s += std::norm(dx[j]) + std::norm(dy[j]);
    return std::sqrt(s);
  }
  double dbar_norm(int n) const {
    double s = 0;
    for (int j = 0; j < n; ++j) s += std::norm(dbar[j]);
    return std::sqrt(s);
  }
};

cplx evaluate(const SectionField& s, const CPoint& z);
FieldEval evaluate_full(const SectionField& s, const CPoint& z);

// kappa(s)(z) = conj(s(c(z))), realized structurally on the bump list.
// kappa(kappa(s)) == s exactly.
SectionField kappa(const SectionField& s);

// (s + kappa(s))/2 with structurally equal bumps merged.
SectionField symmetrize(const SectionField& s);

SectionField add(const SectionField& a, const SectionField& b);
SectionField scale(const SectionField& s, cplx a);

// True when the bump list is closed under (x, w, f) -> (c(x), conj w, fbar).
bool structurally_symmetric(const SectionField& s);

struct SymmetryCertificate {
  double sup_deviation = 0;  // sup over grid of |s(z) - kappa(s)(z)|
  int grid_per_axis = 0;
};

SymmetryCertificate measure_symmetry(const ModelManifold& m,
                                     const SectionField& s, int per_axis);

// Lemma-7-style concentrated section: one Unit bump at x, cutoff k^{1/6} in
// g_k. Gentle gauss_scale (1/12) keeps |sigma| >= 1/2 on B_{g_k}(x,1) while
// the quadratic envelope (1+120 d^2)e^{-d^2} holds on the support.
inline constexpr double kSigmaGaussScale = 1.0 / 12.0;
inline double sigma_envelope(double d) {
  return (1.0 + 120.0 * d * d) * std::exp(-d * d);
}
SectionField concentrated_sigma(const ModelManifold& m, const ScaledFrame& f,
                                const CPoint& x);

// Flat record serialization (human-readable key-value, round-trips exactly).
std::string serialize_field(const SectionField& s);
SectionField parse_field(const std::string& text);

}  // namespace ahlab
