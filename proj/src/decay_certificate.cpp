#include "hypocert/decay_certificate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "hypocert/hermite_basis.hpp"
#include "hypocert/lyapunov_ansatz.hpp"
#include "hypocert/operator_assembly.hpp"
#include "parallel.hpp"

namespace hypocert {

namespace {

const double s2 = std::numbers::sqrt2;
const double s3 = std::numbers::sqrt3;
const double s6 = std::sqrt(6.0);

// a_k = scale * c_k * ell^k: the coefficient lists below are written in
// the variable x = ell * alpha.
Poly hom(double ell, std::vector<double> c, double scale = 1.0) {
  double p = scale;
  for (auto& v : c) {
    v *= p;
    p *= ell;
  }
  return {c};
}

Poly zero() { return {{0.0}}; }

// (6 - ell alpha) alpha^2 times s.
Poly six_minus(double ell, double s) { return {{0.0, 0.0, 6.0 * s, -ell * s}}; }

double find(const std::vector<std::pair<std::string, double>>& f, const char* name) {
  for (const auto& [n, v] : f)
    if (n == name) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double Poly::operator()(double x) const {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

Poly Poly::derivative() const {
  Poly d;
  for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(static_cast<double>(k) * c[k]);
  if (d.c.empty()) d.c.push_back(0.0);
  return d;
}

std::vector<double> Poly::real_roots() const {
  std::size_t n = c.size();
  while (n > 0 && c[n - 1] == 0.0) --n;
  if (n <= 1) return {};
  const std::size_t deg = n - 1;
  Matrix comp = Matrix::Zero(deg, deg);
  for (std::size_t i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  Eigen::EigenSolver<Matrix> es(comp, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const cdouble z = es.eigenvalues()(i);
    if (std::abs(z.imag()) <= 1e-9 * std::max(1.0, std::abs(z))) out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r;
  r.c.assign(std::max(c.size(), o.c.size()), 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
  for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
  return r;
}

Poly Poly::operator*(double s) const {
  Poly r = *this;
  for (auto& v : r.c) v *= s;
  return r;
}

double RationalFactor::operator()(double kappa, double alpha) const {
  const double ik = 1.0 / (kappa * kappa);
  return (p0(alpha) + p1(alpha) * ik) * ik + p2(alpha);
}

int minor_count(int d) {
  require_dim(d);
  return min_block_size(d);
}

std::vector<RationalFactor> minor_factors(int d, double ell) {
  require_dim(d);
  require(ell > 0.0 && std::isfinite(ell), "ell must be positive");
  const double l = ell;
  const double l2 = l * l;
  switch (d) {
    case 1:
      return {
          {"q2", zero(), zero(), hom(l, {1.0, -3.0})},
          {"q3", Poly{{0.0, -6.0}}, zero(), hom(l, {8.0, -48.0, 72.0}, l)},
      };
    case 2:
      return {
          {"p5", Poly{{0.0, -1.0}}, zero(), hom(l, {4.0, -4.0}, l)},
          {"p6", Poly{{0.0, -2.0}}, zero(), hom(l, {2.0, -54.0 / 11.0}, l)},
          {"p7", hom(l, {0.0, -34.0, 93.0}), Poly{{0.0, 0.0, 12.0}}, hom(l, {22.0, -120.0, 162.0}, l2)},
          {"p8", Poly{{0.0, -1.0}}, zero(), hom(l, {4.0, -6.0, 2.0}, l)},
          {"p9", hom(l, {0.0, -68.0, 198.0, -12.0}), Poly{{0.0, 0.0, 24.0}},
           hom(l, {44.0, -262.0, 411.0, -81.0}, l2)},
          {"p11", hom(l, {0.0, -68.0, 294.0, -300.0, -72.0}), Poly{{0.0, 0.0, 24.0}},
           hom(l, {44.0, -358.0, 963.0, -909.0, 162.0}, l2)},
      };
    default:
      return {
          {"p6", Poly{{0.0, -1.0}}, zero(), hom(l, {4.0, -4.0}, l)},
          {"p8", Poly{{0.0, -5.0 / 6.0}}, zero(), hom(l, {10.0 / 9.0 * (s2 - 1.0), (2.0 - 3.0 * s2) / 3.0}, l)},
          {"p10", Poly{{0.0, -30.0, 9.0 * l}}, zero(),
           hom(l, {40.0 * (s2 - 1.0), -6.0 * (8.0 * s2 - 6.0), 9.0 * (s2 - 1.0)}, l)},
          {"p11", hom(l, {0.0, -(216.0 + 144.0 * s2), 672.0 - 72.0 * s2, 54.0 * s2 - 144.0}), six_minus(l, 18.0),
           hom(l, {480.0 * (s2 - 1.0), 472.0 - 816.0 * s2, 456.0 * s2 - 24.0, 9.0 - 54.0 * s2}, l2)},
          {"p12", Poly{{0.0, -2.0}}, zero(), hom(l, {8.0, -12.0, 4.0}, l)},
          {"p14",
           hom(l, {0.0, -1152.0 * s6 - 1728.0 * s3 - 2304.0 * s2 - 3456.0,
                   -576.0 * s6 + 5952.0 * s3 - 1152.0 * s2 + 11760.0, 360.0 * s6 - 1824.0 * s3 + 720.0 * s2 - 3396.0,
                   -108.0 * s6 - 72.0 * s3 - 180.0 * s2 - 144.0}),
           six_minus(l, 144.0 * (s3 + 2.0)),
           hom(l, {3840.0 * s6 - 3840.0 * s3 + 7680.0 * s2 - 7680.0, 4192.0 - 6528.0 * s6 + 1856.0 * s3 - 13056.0 * s2,
                   11056.0 + 3424.0 * s6 + 6368.0 * s3 + 6864.0 * s2, -(9348.0 + 336.0 * s6 + 5400.0 * s3 + 624.0 * s2),
                   1440.0 - 180.0 * s6 + 828.0 * s3 - 324.0 * s2},
               l2)},
          {"p16",
           hom(l, {0.0, -576.0 * s2 - 864.0, -288.0 * s2 + 2976.0, 144.0 * s2 - 744.0, -36.0 * (s2 + 2.0)}),
           six_minus(l, 72.0),
           hom(l, {1920.0 * (s2 - 1.0), -3264.0 * s2 + 928.0, 1632.0 * s2 + 3104.0, -24.0 * s2 - 2412.0,
                   -144.0 * s2 + 216.0, 27.0},
               l2)},
          {"p21",
           hom(l, {0.0, -14400.0 * s2 - 25056.0, -130464.0 * s2 + 300768.0, 75024.0 * s2 - 175272.0,
                   -468.0 * s2 - 2664.0, -1152.0 * s2 + 2928.0}),
           six_minus(l, -1728.0 * s2 + 4392.0),
           hom(l, {1920.0 * (85.0 * s2 - 109.0), -417216.0 * s2 + 464416.0, 158880.0 * s2 + 38048.0,
                   89448.0 * s2 - 353228.0, -25248.0 * s2 + 95000.0, 7707.0},
               l2)},
      };
  }
}

namespace {

MinorTable table_with_factors(int d, double kappa, double alpha, double ell) {
  require(kappa != 0.0 && std::isfinite(kappa), "kappa must be nonzero");
  require(alpha >= 0.0, "alpha must be non-negative");
  MinorTable t;
  t.d = d;
  t.kappa = kappa;
  t.alpha = alpha;
  t.ell = ell;
  for (const auto& f : minor_factors(d, ell)) t.factors.emplace_back(f.name, f(kappa, alpha));
  t.delta.assign(minor_count(d), 0.0);
  return t;
}

}  // namespace

MinorTable minors_1d(double kappa, double alpha, double ell) {
  MinorTable t = table_with_factors(1, kappa, alpha, ell);
  const double la = ell * alpha;
  auto& d = t.delta;
  d[0] = 2.0;
  d[1] = 4.0 * find(t.factors, "q2");
  d[2] = alpha * find(t.factors, "q3");
  d[3] = 2.0 * la * d[2];
  d[4] = 4.0 * la * la * d[2];
  return t;
}

MinorTable minors_2d(double kappa, double alpha, double ell) {
  MinorTable t = table_with_factors(2, kappa, alpha, ell);
  const double l = ell, a = alpha;
  const double a4 = std::pow(a, 4);
  const double p5 = find(t.factors, "p5"), p6 = find(t.factors, "p6"), p7 = find(t.factors, "p7"),
               p8 = find(t.factors, "p8"), p9 = find(t.factors, "p9"), p11 = find(t.factors, "p11");
  auto& d = t.delta;
  d[0] = 2.0 * l * a;
  d[1] = 4.0 * std::pow(l * a, 2);
  d[2] = 8.0 * std::pow(l * a, 3);
  d[3] = 44.0 * std::pow(l * a, 4);
  d[4] = 22.0 * std::pow(l, 3) * a4 * p5;
  d[5] = d[4] * p6 / l;
  d[6] = 4.0 * l * a4 * p5 * p7;
  d[7] = 8.0 * l * a4 * p7 * p8;
  d[8] = 8.0 * l * a4 * p8 * p9;
  d[9] = 2.0 * d[8];
  d[10] = 32.0 * l * a4 * p8 * p11;
  return t;
}

MinorTable minors_3d(double kappa, double alpha, double ell) {
  MinorTable t = table_with_factors(3, kappa, alpha, ell);
  const double l = ell, a = alpha, la = l * a;
  const double a5 = std::pow(a, 5), r = s2 - 1.0;
  const double p6 = find(t.factors, "p6"), p8 = find(t.factors, "p8"), p10 = find(t.factors, "p10"),
               p11 = find(t.factors, "p11"), p12 = find(t.factors, "p12"), p14 = find(t.factors, "p14"),
               p16 = find(t.factors, "p16"), p21 = find(t.factors, "p21");
  const double q = (1.0 + s3) * (1.0 + s3);
  auto& d = t.delta;
  d[0] = 2.0 * la;
  d[1] = 4.0 * r * std::pow(la, 2);
  d[2] = 8.0 * r * std::pow(la, 3);
  d[3] = 16.0 * r * std::pow(la, 4);
  d[4] = 80.0 / 3.0 * r * std::pow(la, 5);
  d[5] = 40.0 / 3.0 * r * std::pow(l, 4) * a5 * p6;
  d[6] = 20.0 / 3.0 * r * std::pow(l, 3) * a5 * p6 * p6;
  d[7] = 12.0 * l * l * a5 * p6 * p6 * p8;
  d[8] = 2.0 * d[7];
  d[9] = 4.0 / 3.0 * l * l * a5 * p6 * p6 * p10;
  d[10] = 2.0 / 9.0 * l * a5 * p6 * p6 * p11;
  d[11] = 2.0 / 9.0 * l * a5 * p6 * p11 * p12;
  d[12] = 2.0 / 9.0 * l * a5 * p11 * p12 * p12;
  d[13] = l * a5 * p12 * p12 * p14 / (9.0 * q);
  d[14] = 2.0 * d[13];
  d[15] = 8.0 / 9.0 * (2.0 + s3) / q * l * a5 * p12 * p12 * p16;
  for (int j = 17; j <= 20; ++j) d[j - 1] = std::ldexp(d[15], j - 16);
  d[20] = 256.0 * (s3 + 2.0) * (24.0 * s2 + 61.0) / (23121.0 * q) * l * a5 * p12 * p12 * p21;
  return t;
}

MinorTable minors(int d, double kappa, double alpha, double ell) {
  require_dim(d);
  switch (d) {
    case 1: return minors_1d(kappa, alpha, ell);
    case 2: return minors_2d(kappa, alpha, ell);
    default: return minors_3d(kappa, alpha, ell);
  }
}

namespace {

// Upper-triangle entry c0 + cl * ell alpha + i ck alpha / kappa.
struct DEntry {
  int i, j;
  double c0, cl, ck;
};

const std::vector<DEntry>& d_entries(int d) {
  static const std::vector<DEntry> one = {
      {0, 0, 0, 2, 0}, {1, 1, 0, 2, 0}, {2, 2, 0, 2, 0}, {2, 3, 0, 0, -s3},
      {2, 4, 0, 2 * s3, 0}, {3, 3, 2, -6, 0}, {4, 4, 2, 0, 0},
  };
  static const std::vector<DEntry> two = [] {
    std::vector<DEntry> e = {
        {0, 0, 0, 2, 0},  {0, 3, 0, 1, 0},   {0, 5, 0, -1, 0},       {1, 1, 0, 2, 0},        {1, 5, 0, 0, -2},
        {1, 8, 0, -s2, 0}, {2, 2, 0, 2, 0},  {2, 4, 0, 0, -1},       {2, 7, 0, s2, 0},       {3, 3, 0, 6, 0},
        {3, 5, 0, 1, 0},  {3, 6, 0, 0, -s6}, {3, 10, 0, 2 * s6, 0},  {4, 4, 2, -2, 0},       {5, 5, 2, -4, 0},
        {6, 6, 2, -6, 0}, {6, 8, 0, -s3, 0},
    };
    for (int k = 7; k <= 10; ++k) e.push_back({k, k, 2, 0, 0});
    return e;
  }();
  static const std::vector<DEntry> three = [] {
    std::vector<DEntry> e = {
        {0, 0, 0, 2, 0},
        {0, 4, 0, s6 / 3, 0},
        {0, 7, 0, (s6 - 3 * s3) / 3, 0},
        {0, 9, 0, s6 / 3, 0},
        {1, 1, 0, 2 * s2 - 2, 0},
        {1, 7, 0, 0, -s3},
        {1, 10, 0, (3 * s3 - s6) / 3, 0},
        {1, 13, 0, -(1 + s3) / 2, 0},
        {1, 15, 0, (s3 - 1) / 2, 0},
        {2, 2, 0, 2, 0},
        {2, 5, 0, 0, -1},
        {2, 11, 0, s2, 0},
        {3, 3, 0, 2, 0},
        {3, 6, 0, 0, -1},
        {3, 12, 0, s2, 0},
        {4, 4, 0, 2, 0},
        {4, 7, 0, 1 - s2, 0},
        {4, 9, 0, 1, 0},
        {4, 10, 0, 0, -1},
        {4, 20, 0, 2, 0},
        {5, 5, 2, -2, 0},
        {6, 6, 2, -2, 0},
        {7, 7, 2, -2 * s2, 0},
        {7, 9, 0, -s2, 0},
        {8, 8, 2, 0, 0},
        {9, 9, 2, 0, 0},
        {10, 10, 2, -2, 0},
        {10, 13, 0, -1 / s3, 0},
        {10, 15, 0, -1 / s3, 0},
    };
    for (int k = 11; k <= 20; ++k) e.push_back({k, k, 2, 0, 0});
    return e;
  }();
  switch (d) {
    case 1: return one;
    case 2: return two;
    default: return three;
  }
}

}  // namespace

CMatrix assemble_D_block(int d, double kappa, double alpha, double ell) {
  require_dim(d);
  require(kappa != 0.0, "kappa must be nonzero");
  const int J = minor_count(d);
  CMatrix D = CMatrix::Zero(J, J);
  for (const auto& e : d_entries(d)) {
    const cdouble v(e.c0 + e.cl * ell * alpha, e.ck * alpha / kappa);
    D(e.i, e.j) = v;
    if (e.i != e.j) D(e.j, e.i) = std::conj(v);
  }
  return D;
}

CMatrix D_block_from_operators(int d, double kappa, double alpha, double ell, int N) {
  require_dim(d);
  const int J = minor_count(d);
  if (N == 0) N = J + 10;
  require(N >= J, "truncation smaller than the D block");
  const Variant variant = d == 1 ? Variant::tensor : Variant::energy;
  const OperatorPair pair = OperatorPair::bgk(d, variant, N, 2.0 * std::numbers::pi / ell);
  const CMatrix C = modal_generator(pair, kappa).C;
  const CMatrix P = bgk_P(d, kappa, alpha, N);
  const CMatrix D = C.adjoint() * P + P * C;
  return D.topLeftCorner(J, J);
}

std::vector<double> principal_minors(const CMatrix& D, bool trailing) {
  require(D.rows() == D.cols(), "square matrix expected");
  const Eigen::Index n = D.rows();
  std::vector<double> out;
  for (Eigen::Index j = 1; j <= n; ++j) {
    const CMatrix B = trailing ? CMatrix(D.bottomRightCorner(j, j)) : CMatrix(D.topLeftCorner(j, j));
    out.push_back(Eigen::PartialPivLU<CMatrix>(B).determinant().real());
  }
  return out;
}

double alpha3_1d(double L) {
  require(L > 0.0 && std::isfinite(L), "L must be positive");
  const double l = 2.0 * std::numbers::pi / L;
  // Rationalised form of (1 + 8l^2 - sqrt(1 + 16l^2)) / (24 l^3), free of
  // cancellation for small l.
  return 8.0 * l / (3.0 * (1.0 + 8.0 * l * l + std::sqrt(1.0 + 16.0 * l * l)));
}

bool rational_monotone_check(const Poly& p0, const Poly& p1, const Poly& p2, double abar) {
  (void)p2;  // the kappa-independent part cannot affect the comparison
  require(abar >= 0.0, "abar must be non-negative");
  const Poly q = p0 + p1 * 2.0;
  std::vector<double> pts;
  constexpr int grid = 2000;
  for (int i = 0; i <= grid; ++i) pts.push_back(abar * i / grid);
  for (const Poly* p : {&p1, &q})
    for (double r : p->derivative().real_roots())
      if (r > 0.0 && r < abar) pts.push_back(r);
  auto scale = [&](const Poly& p) {
    double s = 0.0;
    for (std::size_t k = 0; k < p.c.size(); ++k) s = std::max(s, std::abs(p.c[k]) * std::pow(std::max(abar, 1.0), k));
    return std::max(s, 1e-300);
  };
  const double t1 = 1e-13 * scale(p1), tq = 1e-13 * scale(q);
  for (double a : pts)
    if (p1(a) < -t1 || q(a) > tq) return false;
  return true;
}

double p_spread(int d) {
  require_dim(d);
  switch (d) {
    case 1: return std::sqrt(3.0 + s6);
    case 2: return s6;
    default: return 2.0;
  }
}

double certificate_objective(int d, double ell, double alpha) {
  const MinorTable t = minors(d, 1.0, alpha, ell);
  const double th = p_spread(d);
  switch (d) {
    case 1: return t.delta[2] / (8.0 * std::pow(1.0 - ell * alpha, 2) * (1.0 + alpha * th));
    case 2: return std::pow(10.0 / 14.0, 10) * t.delta[10] / (2.0 * (1.0 + th * alpha));
    default: return std::pow(20.0 / 32.0, 20) * t.delta[20] / (2.0 * (1.0 + th * alpha));
  }
}

namespace {

// First alpha in (0, cap] where pred turns true; cap if it never does. The
// scan grid is geometric near 0 and uniform further out so that thresholds
// of size O(1/ell) are not skipped for large ell.
double first_crossing(const std::function<double(double)>& g, double cap) {
  std::vector<double> xs;
  constexpr int n = 2000;
  for (int i = 0; i <= n; ++i) xs.push_back(cap * std::pow(10.0, -14.0 + 14.0 * i / n));
  for (int i = 1; i <= n; ++i) xs.push_back(cap * i / n);
  std::sort(xs.begin(), xs.end());
  // g > 0 means "still admissible".
  double prev = xs.front();
  if (!(g(prev) > 0.0)) return 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (g(xs[i]) > 0.0) {
      prev = xs[i];
      continue;
    }
    double lo = prev, hi = xs[i];
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return lo;
  }
  return cap;
}

}  // namespace

AlphaPlus alpha_plus(int d, double ell) {
  require_dim(d);
  const double cap = 1.0 / p_spread(d);
  AlphaPlus out;
  out.thresholds.push_back({"P", "cap", cap});
  for (const auto& f : minor_factors(d, ell)) {
    out.thresholds.push_back({f.name, "root", first_crossing([&](double a) { return f(1.0, a); }, cap)});
    out.thresholds.push_back({f.name, "p1<0", first_crossing([&](double a) { return f.p1(a) + 1e-300; }, cap)});
    out.thresholds.push_back(
        {f.name, "p0+2p1>0", first_crossing([&](double a) { return -(f.p0(a) + 2.0 * f.p1(a)) + 1e-300; }, cap)});
  }
  out.value = cap;
  for (const auto& t : out.thresholds) out.value = std::min(out.value, t.alpha);
  return out;
}

DecayCertificate certify(int d, double L, int verify_moduli) {
  require_dim(d);
  require(L > 0.0 && std::isfinite(L), "L must be positive");
  require(verify_moduli >= 0, "verify_moduli must be non-negative");
  DecayCertificate c;
  c.d = d;
  c.L = L;
  c.ell = 2.0 * std::numbers::pi / L;
  const AlphaPlus ap = alpha_plus(d, c.ell);
  c.alpha_plus = ap.value;
  c.thresholds = ap.thresholds;

  auto mu = [&](double a) { return certificate_objective(d, c.ell, a); };
  constexpr int scan = 400;
  int best = 1;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < scan; ++i) {
    const double v = mu(c.alpha_plus * i / scan);
    if (v > best_val) best_val = v, best = i;
  }
  double lo = c.alpha_plus * (best - 1) / scan, hi = c.alpha_plus * (best + 1) / scan;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = mu(x1), f2 = mu(x2);
  const double tol = std::min(1e-12, 1e-10 * c.alpha_plus);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1, x1 = x2, f1 = f2;
      x2 = lo + phi * (hi - lo), f2 = mu(x2);
    } else {
      hi = x2, x2 = x1, f2 = f1;
      x1 = hi - phi * (hi - lo), f1 = mu(x1);
    }
  }
  c.alpha_star = 0.5 * (lo + hi);
  c.mu = mu(c.alpha_star);
  c.lambda = 2.0 * std::min(1.0, c.mu);
  const double th = p_spread(d);
  c.c_d = 1.0 / (1.0 + th * c.alpha_star);
  c.C_d = 1.0 / (1.0 - th * c.alpha_star);

  std::vector<double> kappas;
  if (d == 1) {
    for (int k = 1; k <= verify_moduli; ++k) kappas.push_back(k);
  } else if (verify_moduli > 0) {
    kappas = first_moduli(d, verify_moduli);
  }
  const int N = minor_count(d) + 10;
  const Variant variant = d == 1 ? Variant::tensor : Variant::energy;
  const OperatorPair pair = OperatorPair::bgk(d, variant, N, L);
  c.verified.resize(kappas.size());
  detail::parallel_for(kappas.size(), [&](std::size_t i) {
    const CMatrix C = modal_generator(pair, kappas[i]).C;
    const CMatrix P = bgk_P(d, kappas[i], c.alpha_star, N);
    c.verified[i] = {kappas[i], lyapunov_margin(C, P, c.mu)};
  });
  c.valid = c.mu > 0.0;
  for (const auto& v : c.verified)
    if (v.min_eig < -1e-9) {
      c.valid = false;
      c.offending_kappa = v.kappa;
      break;
    }
  return c;
}

MuLimits1D mu_limits_1d(double L_probe) {
  const double r13 = std::sqrt(13.0);
  MuLimits1D m;
  m.mu_limit = 3.0 * (4.0 - r13) * std::pow(3.0 - r13, 2) / std::pow(1.0 - r13, 2);
  m.alpha_ratio = (4.0 - r13) / (6.0 * std::numbers::pi);
  m.L_probe = L_probe;
  const DecayCertificate c = certify(1, L_probe, 0);
  m.mu_probe = c.mu;
  m.alpha_ratio_probe = c.alpha_star / L_probe;
  return m;
}

nlohmann::json to_json(const DecayCertificate& c) {
  nlohmann::json verified = nlohmann::json::array();
  for (const auto& v : c.verified) verified.push_back({{"kappa", v.kappa}, {"min_eig", v.min_eig}});
  nlohmann::json th = nlohmann::json::array();
  for (const auto& t : c.thresholds) th.push_back({{"factor", t.factor}, {"kind", t.kind}, {"alpha", t.alpha}});
  nlohmann::json j = {{"d", c.d},
                      {"L", c.L},
                      {"ell", c.ell},
                      {"alpha_plus", c.alpha_plus},
                      {"alpha_star", c.alpha_star},
                      {"mu", c.mu},
                      {"lambda", c.lambda},
                      {"c_d", c.c_d},
                      {"C_d", c.C_d},
                      {"valid", c.valid},
                      {"thresholds", th},
                      {"verified", verified}};
  if (!c.valid) j["offending_kappa"] = c.offending_kappa;
  return j;
}

nlohmann::json to_json(const MinorTable& t) {
  nlohmann::json f = nlohmann::json::object();
  for (const auto& [n, v] : t.factors) f[n] = v;
  return {{"d", t.d}, {"kappa", t.kappa}, {"alpha", t.alpha}, {"ell", t.ell}, {"delta", t.delta}, {"factors", f}};
}

}  // namespace hypocert
