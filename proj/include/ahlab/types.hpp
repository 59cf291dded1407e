#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ahlab {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 3;          // complex dimension n <= 3
inline constexpr double kPi = 3.14159265358979323846;

// Point of C^n (n active coordinates) stored as n complex numbers.
// On the torus, coordinates are representatives mod Z+iZ; evaluation code
// reduces displacements, so representatives never need wrapping.
struct CPoint {
  std::array<cplx, kMaxDim> z{};
  int n = 0;

  CPoint() = default;
  explicit CPoint(int dim) : n(dim) {}

  cplx& operator[](int i) { return z[i]; }
  const cplx& operator[](int i) const { return z[i]; }

  CPoint conj() const {
    CPoint r(n);
    for (int i = 0; i < n; ++i) r.z[i] = std::conj(z[i]);
    return r;
  }
  double norm2() const {
    double s = 0;
    for (int i = 0; i < n; ++i) s += std::norm(z[i]);
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  friend CPoint operator-(const CPoint& a, const CPoint& b) {
    CPoint r(a.n);
    for (int i = 0; i < a.n; ++i) r.z[i] = a.z[i] - b.z[i];
    return r;
  }
  friend CPoint operator+(const CPoint& a, const CPoint& b) {
    CPoint r(a.n);
    for (int i = 0; i < a.n; ++i) r.z[i] = a.z[i] + b.z[i];
    return r;
  }
  friend bool operator==(const CPoint& a, const CPoint& b) {
    if (a.n != b.n) return false;
    for (int i = 0; i < a.n; ++i)
      if (a.z[i] != b.z[i]) return false;
    return true;
  }
};

inline CPoint make_point1(cplx z0) {
  CPoint p(1);
  p[0] = z0;
  return p;
}
inline CPoint make_point2(cplx z0, cplx z1) {
  CPoint p(2);
  p[0] = z0;
  p[1] = z1;
  return p;
}

// Error taxonomy shared with the C API (codes must stay in sync with ahlab.h).
enum class ErrorCode : int {
  ok = 0,
  certification = 1,
  config = 2,
  domain = 3,
  degenerate_vertex = 4,
  no_admissible_w = 5,
  resolution = 6,
  budget_exhausted = 7,
  no_admissible_path = 8,
  unsupported = 9,
  invalid_argument = 10,
  internal = 11,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ahlab
