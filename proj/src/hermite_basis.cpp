#include "hypocert/hermite_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace hypocert {

Variant variant_from_string(const std::string& s) {
  if (s == "tensor") return Variant::tensor;
  if (s == "energy") return Variant::energy;
  throw UsageError("unknown basis variant '" + s + "' (expected tensor or energy)");
}

RecurrenceCoeffs recurrence_coeffs(int m) {
  require(m >= 0, "Hermite degree must be non-negative");
  return {std::sqrt(m + 1.0), std::sqrt(static_cast<double>(m))};
}

int min_block_size(int d) {
  require_dim(d);
  static constexpr int sizes[] = {5, 11, 21};
  return sizes[d - 1];
}

int kernel_dim(int d) {
  require_dim(d);
  return d + 2;
}

int rotation_extent(int d) {
  require_dim(d);
  static constexpr int ext[] = {3, 6, 10};
  return ext[d - 1];
}

std::size_t degree_count(int deg, int d) {
  if (deg < 0) return 0;
  const std::size_t n = deg;
  switch (d) {
    case 1: return 1;
    case 2: return n + 1;
    case 3: return (n + 1) * (n + 2) / 2;
    default: throw UsageError("dimension must be 1, 2 or 3");
  }
}

std::size_t lex_index(const MultiIndex& m) {
  const int d = static_cast<int>(m.size());
  require_dim(d);
  std::size_t n = 0;
  for (int mi : m) {
    require(mi >= 0, "multi-index entries must be non-negative");
    n += mi;
  }
  switch (d) {
    case 1: return n;
    case 2: return n * (n + 1) / 2 + m[1];
    default: {
      // Within degree n the entries with first component m_1 = n - a come
      // after all entries with a larger m_1; there are a(a+1)/2 of those.
      const std::size_t a = n - m[0];
      return n * (n + 1) * (n + 2) / 6 + a * (a + 1) / 2 + (a - m[1]);
    }
  }
}

MultiIndex multi_index(std::size_t idx, int d) {
  require_dim(d);
  if (d == 1) return {static_cast<int>(idx)};
  int deg = 0;
  std::size_t offset = 0;
  while (offset + degree_count(deg, d) <= idx) offset += degree_count(deg++, d);
  std::size_t r = idx - offset;
  if (d == 2) return {deg - static_cast<int>(r), static_cast<int>(r)};
  int a = 0;
  while (static_cast<std::size_t>(a + 1) <= r) r -= ++a;
  const int m1 = deg - a;
  const int m2 = a - static_cast<int>(r);
  return {m1, m2, deg - m1 - m2};
}

BasisSpec::BasisSpec(int d, Variant variant, int N) : d_(d), variant_(variant), N_(N) {
  require_dim(d);
  require(N >= 1, "truncation N must be positive");
  if (variant == Variant::energy && d > 1)
    require(N >= rotation_extent(d), "truncation too small for the energy basis");
  table_.reserve(N);
  for (int n = 0; n < N; ++n) table_.push_back(multi_index(n, d));
}

double maxwellian(const Vector& v) {
  const double d = static_cast<double>(v.size());
  return std::pow(2.0 * std::numbers::pi, -d / 2.0) * std::exp(-0.5 * v.squaredNorm());
}

Vector hermite_polynomials_normalized(int mmax, double v) {
  Vector h(mmax + 1);
  h(0) = 1.0;
  if (mmax >= 1) h(1) = v;
  for (int m = 1; m < mmax; ++m) h(m + 1) = (v * h(m) - std::sqrt(m) * h(m - 1)) / std::sqrt(m + 1.0);
  return h;
}

Vector hermite_functions(int mmax, double v) {
  require(mmax >= 0, "Hermite degree must be non-negative");
  // Start from g_0 = M_1 so that the Gaussian never multiplies a huge
  // polynomial value; the recurrence is then stable for large m and |v|.
  Vector g(mmax + 1);
  g(0) = std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi);
  if (mmax >= 1) g(1) = v * g(0);
  for (int m = 1; m < mmax; ++m) g(m + 1) = (v * g(m) - std::sqrt(m) * g(m - 1)) / std::sqrt(m + 1.0);
  return g;
}

namespace {

double tensor_value(const MultiIndex& m, const Vector& v) {
  double out = 1.0;
  for (std::size_t i = 0; i < m.size(); ++i) out *= hermite_functions(m[i], v(i))(m[i]);
  return out;
}

}  // namespace

double eval_basis(const MultiIndex& m, const Vector& v, Variant variant) {
  const int d = static_cast<int>(m.size());
  require_dim(d);
  require(v.size() == d, "velocity dimension does not match the multi-index");
  const std::size_t j = lex_index(m);
  const bool rotated = variant == Variant::energy && d > 1 && j < static_cast<std::size_t>(rotation_extent(d)) &&
                       j >= degree_count(0, d) + degree_count(1, d);
  if (!rotated) return tensor_value(m, v);
  const Matrix S = basis_change_matrix(d, rotation_extent(d));
  double out = 0.0;
  for (int i = 0; i < S.rows(); ++i)
    if (S(i, j) != 0.0) out += S(i, j) * tensor_value(multi_index(i, d), v);
  return out;
}

Matrix basis_change_matrix(int d, int N) {
  require(d == 2 || d == 3, "basis change is defined for d = 2 and d = 3");
  require(N >= rotation_extent(d), "truncation smaller than the rotated block");
  Matrix S = Matrix::Identity(N, N);
  if (d == 2) {
    const double s = 1.0 / std::sqrt(2.0);
    S.block<3, 3>(3, 3) << s, 0, s, 0, 1, 0, s, 0, -s;
  } else {
    const double r = 1.0 / std::sqrt(3.0);
    const double a = -(1.0 + r) / 2.0;
    const double b = (1.0 - r) / 2.0;
    S.block<6, 6>(4, 4) << r, 0, 0, r, 0, r,
                           0, 1, 0, 0, 0, 0,
                           0, 0, 1, 0, 0, 0,
                           r, 0, 0, a, 0, b,
                           0, 0, 0, 0, 1, 0,
                           r, 0, 0, b, 0, a;
  }
  return S;
}

Quadrature gauss_hermite(int n) {
  require(n >= 1, "quadrature order must be positive");
  // Jacobi matrix of the probabilists' Hermite polynomials.
  Matrix J = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(static_cast<double>(i));
  Eigen::SelfAdjointEigenSolver<Matrix> es(J);
  Quadrature q;
  q.nodes = es.eigenvalues();
  const double mass = std::sqrt(2.0 * std::numbers::pi);
  // Christoffel weights 1 / sum_k h_k(x)^2 keep full relative accuracy at the
  // outer nodes, where squared eigenvector entries underflow into noise.
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) q.weights(i) = mass / hermite_polynomials_normalized(n - 1, q.nodes(i)).squaredNorm();
  // Symmetrize: the rule is exact for odd functions only if nodes pair up.
  for (int i = 0; i < n / 2; ++i) {
    const int k = n - 1 - i;
    q.symmetry_error = std::max(q.symmetry_error, std::abs(q.nodes(k) + q.nodes(i)));
    const double x = 0.5 * (q.nodes(k) - q.nodes(i));
    const double w = 0.5 * (q.weights(i) + q.weights(k));
    q.nodes(i) = -x;
    q.nodes(k) = x;
    q.weights(i) = q.weights(k) = w;
  }
  if (n % 2 == 1) {
    q.symmetry_error = std::max(q.symmetry_error, std::abs(q.nodes(n / 2)));
    q.nodes(n / 2) = 0.0;
  }
  return q;
}

}  // namespace hypocert
