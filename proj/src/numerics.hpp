#pragma once

// Small dense numerics used across modules: Gaussian elimination, symmetric
// eigenvalues via Jacobi sweeps, least singular values of skinny matrices,
// and a plain union-find. Sizes are tiny (<= 8), nothing clever needed.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace ahlab {

// Solves A x = b in place (n x n, row-major). Returns false when singular.
inline bool solve_linear(std::vector<double> A, std::vector<double> b,
                         std::vector<double>& x, int n) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(A[r * n + col]) > std::fabs(A[piv * n + col])) piv = r;
    if (std::fabs(A[piv * n + col]) < 1e-300) return false;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(A[col * n + c], A[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      double f = A[r * n + col] / A[col * n + col];
      for (int c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= A[r * n + c] * x[c];
    x[r] = s / A[r * n + r];
  }
  return true;
}

// Eigenvalues of a symmetric n x n matrix (row-major), ascending.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> A,
                                                 int n) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A[p * n + q] * A[p * n + q];
    if (off < 1e-28) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = A[p * n + q];
        if (std::fabs(apq) < 1e-300) continue;
        double theta = (A[q * n + q] - A[p * n + p]) / (2 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (int i = 0; i < n; ++i) {
          double aip = A[i * n + p], aiq = A[i * n + q];
          A[i * n + p] = c * aip - s * aiq;
          A[i * n + q] = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          double api = A[p * n + i], aqi = A[q * n + i];
          A[p * n + i] = c * api - s * aqi;
          A[q * n + i] = s * api + c * aqi;
        }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = A[i * n + i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Least/greatest singular value of an m x c real matrix (row-major),
// i.e. sqrt of the extreme eigenvalues of the c x c Gram matrix.
inline void singular_range(const std::vector<double>& M, int m, int c,
                           double& smin, double& smax) {
  std::vector<double> G(c * c, 0.0);
  for (int i = 0; i < c; ++i)
    for (int j = i; j < c; ++j) {
      double s = 0;
      for (int r = 0; r < m; ++r) s += M[r * c + i] * M[r * c + j];
      G[i * c + j] = G[j * c + i] = s;
    }
  auto ev = symmetric_eigenvalues(G, c);
  smin = std::sqrt(std::max(0.0, ev.front()));
  smax = std::sqrt(std::max(0.0, ev.back()));
}

struct UnionFind {
  std::vector<int> parent, rank_;
  explicit UnionFind(int n) : parent(n), rank_(n, 0) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }
};

inline uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace ahlab
