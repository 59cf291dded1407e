#pragma once

// Quantitative-Sard perturbation picking: choose a real constant w avoiding
// a measured forbidden neighborhood of near-critical values so that f - w is
// uniformly sigma-transverse, plus the one-parameter path variant. The
// forbidden set is found by direct sweep; every pick is re-verified by grid
// minimization before being returned.

#include <functional>
#include <vector>

#include "ahlab/types.hpp"

namespace ahlab {

struct SardParams {
  double delta = 0.05;
  int p = 2;

  static constexpr double kDelta0 = 0.1;

  double sigma() const {
    double l = std::log(1.0 / delta);
    return delta * std::pow(l, -static_cast<double>(p));
  }
  void validate() const {
    if (!(delta > 0 && delta < kDelta0))
      throw Error(ErrorCode::config, "sard delta must be in (0, 0.1)");
    if (p < 1) throw Error(ErrorCode::config, "sard p must be >= 1");
    if (!(sigma() < delta))
      throw Error(ErrorCode::config, "sard sigma >= delta");
  }
};

// A complex function on a ball of C^n with a gradient evaluator. Gradient
// fills 2n complex partials ordered (d/dx_1, d/dy_1, ..., d/dx_n, d/dy_n).
struct SampledFn {
  int n = 1;
  std::function<cplx(const CPoint&)> value;
  std::function<void(const CPoint&, cplx*)> gradient;
};

// Operator norm of the real differential (largest singular value of the
// 2 x 2n real matrix). Equals |f'| for holomorphic f.
double differential_norm(const SampledFn& f, const CPoint& z);

struct ForbiddenTrace {
  std::vector<std::pair<double, double>> intervals;  // sorted, disjoint
  double total_length = 0;
  double grid_h = 0;
  long long low_gradient_samples = 0;

  bool contains(double w) const;
  double distance(double w) const;  // 0 inside
};

// Sweep a grid of B(0, 11/10) with per-axis step grid_h (<= sigma/4 required);
// the trace is the union of the real slices of sigma-disks around f at the
// sampled points where the differential norm is <= sigma. Intervals are
// clipped to [-delta-sigma, delta+sigma] when delta > 0 is given.
ForbiddenTrace forbidden_trace(const SampledFn& f, double sigma, double grid_h,
                               double clip_delta = 0);

struct SardPick {
  double w = 0;
  double clearance = 0;          // distance from w to the trace
  double verified_margin = 0;    // min |df| - sigma over the sublevel, or +inf
  bool sublevel_empty = false;
  ForbiddenTrace trace;
};

// pre (caller-verified): |f| <= 1 and |dbar f|_{C1} <= sigma on B(0, 11/10).
// Returns real w, |w| <= delta, maximizing clearance to the forbidden trace;
// f - w is re-verified sigma-transverse on the unit ball before returning.
// Throws ErrorCode::no_admissible_w when the trace covers [-delta, delta].
SardPick pick_real_w(const SampledFn& f, const SardParams& params);

struct PathPick {
  std::vector<cplx> w;          // one per t-slice
  double max_step = 0;          // max |w_{t+1} - w_t|
  double slice_modulus = 0;     // reported max |f_{t+1} - f_t| at ball center
  double min_margin = 0;        // worst verified margin over slices
};

// Discrete path w_t in the closed delta-disk such that every slice
// f_t - w_t - conj(w_t) h_t is sigma-transverse on the unit ball; found by
// shortest-path search over the (t, w-grid) admissibility graph.
// Throws ErrorCode::no_admissible_path carrying the bottleneck t.
PathPick pick_path_w(const std::vector<SampledFn>& f_t,
                     const std::vector<SampledFn>& h_t,
                     const SardParams& params, double ball_grid_h);

}  // namespace ahlab
