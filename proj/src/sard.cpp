#include "ahlab/sard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace ahlab {

namespace {

// Largest singular value of the 2 x 2n real differential via the 2x2 Gram.
double op_norm_2xm(const cplx* grad, int n2) {
  double a = 0, b = 0, c = 0;  // [a b; b c] = M M^T
  for (int i = 0; i < n2; ++i) {
    a += grad[i].real() * grad[i].real();
    b += grad[i].real() * grad[i].imag();
    c += grad[i].imag() * grad[i].imag();
  }
  double tr = a + c, det = a * c - b * b;
  double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
  return std::sqrt(std::max(0.0, tr / 2 + disc));
}

// Visits points of the closed ball |z| <= radius on a grid with per-axis
// step h, in row-major order.
template <typename Fn>
void sweep_ball(int n, double radius, double h, const Fn& fn) {
  int per = static_cast<int>(std::floor(radius / h));
  int count = 2 * per + 1;
  int axes = 2 * n;
  std::vector<int> idx(axes, 0);
  CPoint z(n);
  while (true) {
    double r2 = 0;
    for (int j = 0; j < n; ++j) {
      double re = (idx[2 * j] - per) * h;
      double im = (idx[2 * j + 1] - per) * h;
      z[j] = cplx(re, im);
      r2 += re * re + im * im;
    }
    if (r2 <= radius * radius) fn(z);
    int a = axes - 1;
    while (a >= 0 && ++idx[a] == count) idx[a--] = 0;
    if (a < 0) break;
  }
}

}  // namespace

double differential_norm(const SampledFn& f, const CPoint& z) {
  cplx grad[2 * kMaxDim];
  f.gradient(z, grad);
  return op_norm_2xm(grad, 2 * f.n);
}

bool ForbiddenTrace::contains(double w) const {
  for (const auto& iv : intervals)
    if (w >= iv.first && w <= iv.second) return true;
  return false;
}

double ForbiddenTrace::distance(double w) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& iv : intervals) {
    if (w >= iv.first && w <= iv.second) return 0.0;
    d = std::min(d, std::min(std::fabs(w - iv.first), std::fabs(w - iv.second)));
  }
  return d;
}

ForbiddenTrace forbidden_trace(const SampledFn& f, double sigma, double grid_h,
                               double clip_delta) {
  if (!(sigma > 0))
    throw Error(ErrorCode::invalid_argument, "sigma must be positive");
  if (grid_h > sigma / 4 + 1e-15)
    throw Error(ErrorCode::resolution,
                "forbidden_trace grid too coarse: need cell <= sigma/4");
  ForbiddenTrace tr;
  tr.grid_h = grid_h;
  std::vector<std::pair<double, double>> raw;
  sweep_ball(f.n, 1.1, grid_h, [&](const CPoint& z) {
    if (differential_norm(f, z) > sigma) return;
    ++tr.low_gradient_samples;
    cplx v = f.value(z);
    double im = v.imag();
    if (std::fabs(im) > sigma) return;  // disk misses the real line
    double half = std::sqrt(std::max(0.0, sigma * sigma - im * im));
    raw.emplace_back(v.real() - half, v.real() + half);
  });
  if (clip_delta > 0) {
    std::vector<std::pair<double, double>> clipped;
    for (auto& iv : raw) {
      double a = std::max(iv.first, -clip_delta);
      double b = std::min(iv.second, clip_delta);
      if (a <= b) clipped.emplace_back(a, b);
    }
    raw.swap(clipped);
  }
  std::sort(raw.begin(), raw.end());
  for (const auto& iv : raw) {
    if (!tr.intervals.empty() && iv.first <= tr.intervals.back().second)
      tr.intervals.back().second =
          std::max(tr.intervals.back().second, iv.second);
    else
      tr.intervals.push_back(iv);
  }
  for (const auto& iv : tr.intervals) tr.total_length += iv.second - iv.first;
  return tr;
}

SardPick pick_real_w(const SampledFn& f, const SardParams& params) {
  params.validate();
  double sigma = params.sigma();
  double delta = params.delta;
  double h = sigma / 4;
  SardPick pick;
  pick.trace = forbidden_trace(f, sigma, h, delta);

  // Free segments of [-delta, delta] between trace intervals.
  std::vector<std::pair<double, double>> free_segs;
  double cursor = -delta;
  for (const auto& iv : pick.trace.intervals) {
    if (iv.first > cursor) free_segs.emplace_back(cursor, iv.first);
    cursor = std::max(cursor, iv.second);
  }
  if (cursor < delta) free_segs.emplace_back(cursor, delta);
  if (free_segs.empty())
    throw Error(ErrorCode::no_admissible_w,
                "forbidden trace covers [-delta, delta]");

  std::vector<double> candidates;
  for (const auto& seg : free_segs) {
    candidates.push_back(0.5 * (seg.first + seg.second));
    candidates.push_back(seg.first);
    candidates.push_back(seg.second);
  }
  double best_w = 0, best_clear = -1;
  for (double w : candidates) {
    if (w < -delta || w > delta || pick.trace.contains(w)) continue;
    double c = pick.trace.distance(w);
    if (c > best_clear + 1e-15 ||
        (std::fabs(c - best_clear) <= 1e-15 && std::fabs(w) < std::fabs(best_w)))
      best_w = w, best_clear = c;
  }
  if (best_clear < 0)
    throw Error(ErrorCode::no_admissible_w,
                "no admissible w in [-delta, delta]");
  pick.w = best_w;
  pick.clearance = best_clear;

  // Certificate sweep: f - w sigma-transverse on the unit ball.
  pick.sublevel_empty = true;
  pick.verified_margin = std::numeric_limits<double>::infinity();
  sweep_ball(f.n, 1.0, h, [&](const CPoint& z) {
    cplx v = f.value(z) - pick.w;
    if (std::abs(v) > sigma) return;
    pick.sublevel_empty = false;
    double dn = differential_norm(f, z);
    pick.verified_margin = std::min(pick.verified_margin, dn - sigma);
  });
  if (!pick.sublevel_empty && pick.verified_margin < 0)
    throw Error(ErrorCode::no_admissible_w,
                "verification failed: precondition violated or grid too "
                "coarse");
  return pick;
}

PathPick pick_path_w(const std::vector<SampledFn>& f_t,
                     const std::vector<SampledFn>& h_t,
                     const SardParams& params, double ball_grid_h) {
  params.validate();
  if (f_t.empty())
    throw Error(ErrorCode::invalid_argument, "empty path");
  if (!h_t.empty() && h_t.size() != f_t.size())
    throw Error(ErrorCode::invalid_argument, "h path size mismatch");
  double sigma = params.sigma();
  double delta = params.delta;
  int n = f_t[0].n;

  // w-grid over the closed delta-disk.
  const int side = 15;
  double spacing = 2 * delta / (side - 1);
  struct Node {
    cplx w;
  };
  std::vector<Node> nodes;
  for (int iy = 0; iy < side; ++iy)
    for (int ix = 0; ix < side; ++ix) {
      cplx w(-delta + ix * spacing, -delta + iy * spacing);
      if (std::abs(w) <= delta + 1e-12) nodes.push_back({w});
    }
  int W = static_cast<int>(nodes.size());
  int T = static_cast<int>(f_t.size());

  // Candidate sample points per slice: only where the differential can dip
  // below sigma for some admissible w.
  struct Sample {
    cplx f, h;
    cplx df[2 * kMaxDim], dh[2 * kMaxDim];
  };
  PathPick out;
  out.min_margin = std::numeric_limits<double>::infinity();

  std::vector<std::vector<char>> admissible(T, std::vector<char>(W, 0));
  std::vector<double> slice_margin(T,
                                   std::numeric_limits<double>::infinity());
  double modulus = 0;
  std::vector<cplx> prev_probe;
  for (int t = 0; t < T; ++t) {
    std::vector<Sample> cands;
    std::vector<cplx> probe;
    long long counter = 0;
    sweep_ball(n, 1.0, ball_grid_h, [&](const CPoint& z) {
      Sample s;
      s.f = f_t[t].value(z);
      f_t[t].gradient(z, s.df);
      if (!h_t.empty()) {
        s.h = h_t[t].value(z);
        h_t[t].gradient(z, s.dh);
      } else {
        s.h = 0;
        for (int a = 0; a < 2 * n; ++a) s.dh[a] = 0;
      }
      if (counter++ % 97 == 0) probe.push_back(s.f);
      double dfn = op_norm_2xm(s.df, 2 * n);
      double dhn = op_norm_2xm(s.dh, 2 * n);
      // |d(f - w - conj(w) h)| >= |df| - delta |dh|
      if (dfn - delta * dhn < sigma + 1e-12) cands.push_back(s);
    });
    if (!prev_probe.empty()) {
      size_t c = std::min(prev_probe.size(), probe.size());
      for (size_t i = 0; i < c; ++i)
        modulus = std::max(modulus, std::abs(probe[i] - prev_probe[i]));
    }
    prev_probe = probe;

    for (int wi = 0; wi < W; ++wi) {
      cplx w = nodes[wi].w;
      bool ok = true;
      double margin = std::numeric_limits<double>::infinity();
      for (const Sample& s : cands) {
        cplx val = s.f - w - std::conj(w) * s.h;
        if (std::abs(val) > sigma) continue;
        cplx dv[2 * kMaxDim];
        for (int a = 0; a < 2 * n; ++a)
          dv[a] = s.df[a] - std::conj(w) * s.dh[a];
        double dn = op_norm_2xm(dv, 2 * n);
        if (dn < sigma) {
          ok = false;
          break;
        }
        margin = std::min(margin, dn - sigma);
      }
      admissible[t][wi] = ok ? 1 : 0;
      if (ok) slice_margin[t] = std::min(slice_margin[t], margin);
    }
  }
  out.slice_modulus = modulus;

  // Shortest path (BFS layered in t) with steps bounded by adjacent nodes.
  double step_bound = 1.5 * spacing + 1e-12;
  std::vector<std::vector<int>> parent(T, std::vector<int>(W, -1));
  std::vector<char> reach_prev(W, 0), reach_cur(W, 0);
  for (int wi = 0; wi < W; ++wi) reach_prev[wi] = admissible[0][wi];
  if (std::count(reach_prev.begin(), reach_prev.end(), 1) == 0)
    throw Error(ErrorCode::no_admissible_path, "no admissible w at t index 0");
  for (int t = 1; t < T; ++t) {
    std::fill(reach_cur.begin(), reach_cur.end(), 0);
    for (int wi = 0; wi < W; ++wi) {
      if (!admissible[t][wi]) continue;
      for (int pj = 0; pj < W; ++pj) {
        if (!reach_prev[pj]) continue;
        if (std::abs(nodes[wi].w - nodes[pj].w) <= step_bound) {
          reach_cur[wi] = 1;
          parent[t][wi] = pj;
          break;
        }
      }
    }
    if (std::count(reach_cur.begin(), reach_cur.end(), 1) == 0) {
      std::ostringstream msg;
      msg << "no admissible path: bottleneck at t index " << t << " of " << T;
      throw Error(ErrorCode::no_admissible_path, msg.str());
    }
    reach_prev = reach_cur;
  }
  int end = -1;
  for (int wi = 0; wi < W; ++wi)
    if (reach_prev[wi]) {
      end = wi;
      break;
    }
  std::vector<int> chain(T);
  chain[T - 1] = end;
  for (int t = T - 1; t > 0; --t) chain[t - 1] = parent[t][chain[t]];
  out.w.resize(T);
  for (int t = 0; t < T; ++t) out.w[t] = nodes[chain[t]].w;
  for (int t = 0; t + 1 < T; ++t)
    out.max_step = std::max(out.max_step, std::abs(out.w[t + 1] - out.w[t]));
  for (int t = 0; t < T; ++t)
    out.min_margin = std::min(out.min_margin, slice_margin[t]);
  return out;
}

}  // namespace ahlab
