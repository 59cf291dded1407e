#include "ahlab/fields.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace ahlab {

BumpModel BumpModel::conjugated() const {
  BumpModel r = *this;
  for (auto& mn : r.monomials) mn.coeff = std::conj(mn.coeff);
  return r;
}

bool BumpModel::conjugation_symmetric() const {
  if (kind != Kind::Polynomial) return true;  // Unit/Quadric: real coefficients
  for (const auto& mn : monomials)
    if (mn.coeff.imag() != 0.0) return false;
  return true;
}

cplx BumpModel::value(const CPoint& u) const {
  switch (kind) {
    case Kind::Unit:
      return 1.0;
    case Kind::Quadric: {
      cplx s = -0.5;
      for (int j = 0; j < u.n; ++j) s += u[j] * u[j];
      return s;
    }
    case Kind::Polynomial: {
      cplx s = 0.0;
      for (const auto& mn : monomials) {
        cplx t = mn.coeff;
        for (int j = 0; j < u.n; ++j)
          for (int p = 0; p < mn.powers[j]; ++p) t *= u[j];
        s += t;
      }
      return s;
    }
  }
  return 0.0;
}

void BumpModel::derivative(const CPoint& u, cplx* du) const {
  for (int j = 0; j < u.n; ++j) du[j] = 0.0;
  switch (kind) {
    case Kind::Unit:
      return;
    case Kind::Quadric:
      for (int j = 0; j < u.n; ++j) du[j] = 2.0 * u[j];
      return;
    case Kind::Polynomial:
      for (const auto& mn : monomials) {
        for (int j = 0; j < u.n; ++j) {
          if (mn.powers[j] == 0) continue;
          cplx t = mn.coeff * static_cast<double>(mn.powers[j]);
          for (int l = 0; l < u.n; ++l) {
            int p = mn.powers[l] - (l == j ? 1 : 0);
            for (int q = 0; q < p; ++q) t *= u[l];
          }
          du[j] += t;
        }
      }
      return;
  }
}

SectionField::SectionField(const ModelManifold& m, const ScaledFrame& f,
                           double cutoff)
    : n(m.n), k(f.k), domain(m.kind), periodize(m.kind == ModelKind::Torus),
      cutoff_gk(cutoff) {}

double SectionField::max_cutoff_gk() const {
  if (domain == ModelKind::Torus && periodize)
    return 0.999 * sqrt_k();  // support must stay within one g-period
  return 1e300;
}

namespace {

// C^2 quintic plateau: 1 on [0, r/2], 0 beyond r.
inline void plateau(double d, double r, double& beta, double& dbeta) {
  double h = 0.5 * r;
  if (d <= h) {
    beta = 1.0;
    dbeta = 0.0;
    return;
  }
  if (d >= r) {
    beta = 0.0;
    dbeta = 0.0;
    return;
  }
  double t = (d - h) / h;
  double t2 = t * t;
  beta = 1.0 - t2 * t * (10.0 - 15.0 * t + 6.0 * t2);
  dbeta = -30.0 * t2 * (1.0 - t) * (1.0 - t) / h;
}

inline double reduce_mod1(double d) {
  d -= std::floor(d);
  if (d >= 0.5) d -= 1.0;
  return d;
}

struct TermAccum {
  cplx value{};
  std::array<cplx, kMaxDim> dx{}, dy{}, dbar{};
};

// One bump evaluated at physical displacement delta (g units, already the
// chosen translate). k-scaled internally.
void accumulate_term(const Bump& b, int n, double k, double r_g,
                     const std::array<double, 2 * kMaxDim>& delta,
                     bool want_grad, TermAccum& acc) {
  double sk = std::sqrt(k);
  double dist2_g = 0;
  for (int a = 0; a < 2 * n; ++a) dist2_g += delta[a] * delta[a];
  if (dist2_g >= r_g * r_g) return;

  CPoint u(n);
  for (int j = 0; j < n; ++j)
    u[j] = cplx(delta[2 * j] * sk, delta[2 * j + 1] * sk);

  double dk = sk * std::sqrt(dist2_g);
  double beta, dbeta;
  plateau(dk, r_g * sk, beta, dbeta);
  if (beta == 0.0 && dbeta == 0.0) return;

  double E = std::exp(-b.gauss_scale * k * dist2_g);
  cplx fval = b.model.value(u);
  cplx core = b.coeff * fval * E;
  acc.value += core * beta;
  if (!want_grad) return;

  std::array<cplx, kMaxDim> df{};
  b.model.derivative(u, df.data());
  double dist_g = std::sqrt(dist2_g);
  for (int j = 0; j < n; ++j) {
    double ax = delta[2 * j], ay = delta[2 * j + 1];
    cplx dfj = b.coeff * df[j] * E * beta * sk;
    // d/dx_j and d/dy_j of f(u) E beta (f holomorphic in u = delta sqrt k)
    cplx gx = dfj - 2.0 * b.gauss_scale * k * ax * core * beta;
    cplx gy = cplx(0, 1) * dfj - 2.0 * b.gauss_scale * k * ay * core * beta;
    if (dbeta != 0.0 && dist_g > 0) {
      double dd = dbeta * sk / dist_g;  // d(beta(d_k))/d(delta component)
      gx += core * dd * ax;
      gy += core * dd * ay;
      // covariant dbar residue: plateau term only
      acc.dbar[j] += core * dbeta * sk * cplx(ax, ay) / (2.0 * dist_g);
    }
    acc.dx[j] += gx;
    acc.dy[j] += gy;
  }
}

void eval_impl(const SectionField& s, const CPoint& z, bool want_grad,
               TermAccum& acc) {
  int n = s.n;
  double k = s.k;
  double cap = s.max_cutoff_gk();
  bool torus = s.domain == ModelKind::Torus && s.periodize;

  std::array<double, 2 * kMaxDim> delta{};
  for (const Bump& b : s.bumps) {
    double r_g = std::min(b.cutoff_gk, cap) / std::sqrt(k);
    // Reduced displacement per real axis; torus adds the translates that can
    // still reach z (candidates in {-1, 0, 1} per axis).
    std::array<double, 2 * kMaxDim> d0{};
    for (int j = 0; j < n; ++j) {
      double re = z[j].real() - b.center[j].real();
      double im = z[j].imag() - b.center[j].imag();
      if (torus) {
        re = reduce_mod1(re);
        im = reduce_mod1(im);
      }
      d0[2 * j] = re;
      d0[2 * j + 1] = im;
    }
    if (!torus) {
      double q2 = 0;
      for (int a = 0; a < 2 * n; ++a) q2 += d0[a] * d0[a];
      if (q2 >= r_g * r_g) continue;
      accumulate_term(b, n, k, r_g, d0, want_grad, acc);
      continue;
    }
    // Per-axis offset candidates.
    std::array<std::array<double, 2>, 2 * kMaxDim> cand{};
    std::array<int, 2 * kMaxDim> ncand{};
    bool reachable = true;
    for (int a = 0; a < 2 * n; ++a) {
      int c = 0;
      for (int o = -1; o <= 1; ++o) {
        double v = d0[a] + o;
        if (std::fabs(v) <= r_g && c < 2) cand[a][c++] = v;
      }
      if (c == 0) {
        reachable = false;
        break;
      }
      ncand[a] = c;
    }
    if (!reachable) continue;
    // Cartesian product of candidates (almost always a single combo).
    std::array<int, 2 * kMaxDim> pick{};
    while (true) {
      for (int a = 0; a < 2 * n; ++a) delta[a] = cand[a][pick[a]];
      accumulate_term(b, n, k, r_g, delta, want_grad, acc);
      int a = 2 * n - 1;
      while (a >= 0 && ++pick[a] == ncand[a]) pick[a--] = 0;
      if (a < 0) break;
    }
  }
}

}  // namespace

cplx evaluate(const SectionField& s, const CPoint& z) {
  TermAccum acc;
  eval_impl(s, z, false, acc);
  return acc.value;
}

FieldEval evaluate_full(const SectionField& s, const CPoint& z) {
  TermAccum acc;
  eval_impl(s, z, true, acc);
  FieldEval out;
  out.value = acc.value;
  out.dx = acc.dx;
  out.dy = acc.dy;
  out.dbar = acc.dbar;
  return out;
}

SectionField kappa(const SectionField& s) {
  SectionField r = s;
  for (auto& b : r.bumps) {
    b.center = b.center.conj();
    b.coeff = std::conj(b.coeff);
    b.model = b.model.conjugated();
  }
  return r;
}

namespace {

bool model_equal(const BumpModel& a, const BumpModel& b) {
  if (a.kind != b.kind) return false;
  if (a.kind != BumpModel::Kind::Polynomial) return true;
  if (a.monomials.size() != b.monomials.size()) return false;
  for (size_t i = 0; i < a.monomials.size(); ++i) {
    if (a.monomials[i].powers != b.monomials[i].powers) return false;
    if (a.monomials[i].coeff != b.monomials[i].coeff) return false;
  }
  return true;
}

bool bump_key_less(const Bump& a, const Bump& b) {
  for (int j = 0; j < a.center.n; ++j) {
    if (a.center[j].real() != b.center[j].real())
      return a.center[j].real() < b.center[j].real();
    if (a.center[j].imag() != b.center[j].imag())
      return a.center[j].imag() < b.center[j].imag();
  }
  if (a.gauss_scale != b.gauss_scale) return a.gauss_scale < b.gauss_scale;
  return static_cast<int>(a.model.kind) < static_cast<int>(b.model.kind);
}

bool bump_mergeable(const Bump& a, const Bump& b) {
  if (a.gauss_scale != b.gauss_scale || a.cutoff_gk != b.cutoff_gk)
    return false;
  if (!model_equal(a.model, b.model)) return false;
  for (int j = 0; j < a.center.n; ++j)
    if (a.center[j] != b.center[j]) return false;
  return true;
}

}  // namespace

SectionField symmetrize(const SectionField& s) {
  SectionField half = scale(s, 0.5);
  SectionField out = add(half, kappa(half));
  std::stable_sort(out.bumps.begin(), out.bumps.end(), bump_key_less);
  std::vector<Bump> merged;
  for (const Bump& b : out.bumps) {
    if (!merged.empty() && bump_mergeable(merged.back(), b))
      merged.back().coeff += b.coeff;
    else
      merged.push_back(b);
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Bump& b) { return b.coeff == 0.0; }),
               merged.end());
  out.bumps = std::move(merged);
  return out;
}

SectionField add(const SectionField& a, const SectionField& b) {
  if (a.n != b.n || a.k != b.k || a.domain != b.domain)
    throw Error(ErrorCode::invalid_argument, "field sum: mismatched frames");
  SectionField r = a.bumps.empty() ? b : a;
  if (!a.bumps.empty() && !b.bumps.empty()) {
    r = a;
    r.bumps.insert(r.bumps.end(), b.bumps.begin(), b.bumps.end());
  }
  return r;
}

SectionField scale(const SectionField& s, cplx a) {
  SectionField r = s;
  for (auto& b : r.bumps) b.coeff *= a;
  return r;
}

bool structurally_symmetric(const SectionField& s) {
  std::vector<bool> used(s.bumps.size(), false);
  SectionField ks = kappa(s);
  for (size_t i = 0; i < s.bumps.size(); ++i) {
    bool found = false;
    for (size_t j = 0; j < ks.bumps.size(); ++j) {
      if (used[j]) continue;
      if (bump_mergeable(s.bumps[i], ks.bumps[j]) &&
          s.bumps[i].coeff == ks.bumps[j].coeff) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

SymmetryCertificate measure_symmetry(const ModelManifold& m,
                                     const SectionField& s, int per_axis) {
  SectionField ks = kappa(s);
  GridSpec g = ambient_grid(m, per_axis);
  double sup = 0;
  for_each_ambient_point(m, g, [&](long long, const CPoint& z) {
    double d = std::abs(evaluate(s, z) - evaluate(ks, z));
    if (d > sup) sup = d;
  });
  return SymmetryCertificate{sup, per_axis};
}

SectionField concentrated_sigma(const ModelManifold& m, const ScaledFrame& f,
                                const CPoint& x) {
  if (!m.contains(x)) throw Error(ErrorCode::domain, "sigma center outside");
  double cutoff = std::pow(static_cast<double>(f.k), 1.0 / 6.0);
  SectionField s(m, f, cutoff);
  Bump b;
  b.center = x;
  b.coeff = 1.0;
  b.model = BumpModel::unit();
  b.gauss_scale = kSigmaGaussScale;
  s.add_bump(b);
  return s;
}

namespace {
std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

std::string serialize_field(const SectionField& s) {
  std::ostringstream out;
  out << "field.n = " << s.n << "\n";
  out << "field.k = " << s.k << "\n";
  out << "field.domain = "
      << (s.domain == ModelKind::Torus ? "torus" : "flat") << "\n";
  out << "field.periodize = " << (s.periodize ? 1 : 0) << "\n";
  out << "field.cutoff_gk = " << fmt_double(s.cutoff_gk) << "\n";
  out << "field.bumps = " << s.bumps.size() << "\n";
  for (size_t i = 0; i < s.bumps.size(); ++i) {
    const Bump& b = s.bumps[i];
    out << "bump." << i << ".center =";
    for (int j = 0; j < s.n; ++j)
      out << " " << fmt_double(b.center[j].real()) << " "
          << fmt_double(b.center[j].imag());
    out << "\n";
    out << "bump." << i << ".coeff = " << fmt_double(b.coeff.real()) << " "
        << fmt_double(b.coeff.imag()) << "\n";
    const char* kind = b.model.kind == BumpModel::Kind::Unit      ? "unit"
                       : b.model.kind == BumpModel::Kind::Quadric ? "quadric"
                                                                  : "poly";
    out << "bump." << i << ".model = " << kind << "\n";
    out << "bump." << i << ".scale = " << fmt_double(b.gauss_scale) << "\n";
    out << "bump." << i << ".cutoff = " << fmt_double(b.cutoff_gk) << "\n";
    if (b.model.kind == BumpModel::Kind::Polynomial) {
      out << "bump." << i << ".monomials =";
      for (const auto& mn : b.model.monomials) {
        out << " " << mn.powers[0] << " " << mn.powers[1] << " "
            << mn.powers[2] << " " << fmt_double(mn.coeff.real()) << " "
            << fmt_double(mn.coeff.imag()) << " ;";
      }
      out << "\n";
    }
  }
  return out.str();
}

namespace {
std::string kv_value(const std::string& text, const std::string& key) {
  size_t pos = 0;
  std::string needle = key + " =";
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string line = text.substr(pos, eol - pos);
    if (line.rfind(needle, 0) == 0) {
      std::string v = line.substr(needle.size());
      size_t b = v.find_first_not_of(' ');
      return b == std::string::npos ? "" : v.substr(b);
    }
    pos = eol + 1;
  }
  throw Error(ErrorCode::invalid_argument, "field record missing key: " + key);
}
}  // namespace

SectionField parse_field(const std::string& text) {
  SectionField s;
  s.n = std::stoi(kv_value(text, "field.n"));
  s.k = std::stoi(kv_value(text, "field.k"));
  s.domain = kv_value(text, "field.domain") == "torus" ? ModelKind::Torus
                                                       : ModelKind::FlatBall;
  s.periodize = kv_value(text, "field.periodize") == "1";
  s.cutoff_gk = std::stod(kv_value(text, "field.cutoff_gk"));
  int count = std::stoi(kv_value(text, "field.bumps"));
  for (int i = 0; i < count; ++i) {
    std::string pfx = "bump." + std::to_string(i);
    Bump b;
    b.center = CPoint(s.n);
    {
      std::istringstream in(kv_value(text, pfx + ".center"));
      for (int j = 0; j < s.n; ++j) {
        double re, im;
        in >> re >> im;
        b.center[j] = cplx(re, im);
      }
    }
    {
      std::istringstream in(kv_value(text, pfx + ".coeff"));
      double re, im;
      in >> re >> im;
      b.coeff = cplx(re, im);
    }
    std::string kind = kv_value(text, pfx + ".model");
    if (kind == "unit")
      b.model = BumpModel::unit();
    else if (kind == "quadric")
      b.model = BumpModel::quadric();
    else {
      std::vector<Monomial> ms;
      std::istringstream in(kv_value(text, pfx + ".monomials"));
      while (true) {
        Monomial mn;
        double re, im;
        std::string semi;
        if (!(in >> mn.powers[0] >> mn.powers[1] >> mn.powers[2] >> re >> im >>
              semi))
          break;
        mn.coeff = cplx(re, im);
        ms.push_back(mn);
      }
      b.model = BumpModel::polynomial(std::move(ms));
    }
    b.gauss_scale = std::stod(kv_value(text, pfx + ".scale"));
    b.cutoff_gk = std::stod(kv_value(text, pfx + ".cutoff"));
    s.bumps.push_back(std::move(b));
  }
  return s;
}

}  // namespace ahlab
