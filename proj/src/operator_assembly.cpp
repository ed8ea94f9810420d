#include "hypocert/operator_assembly.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "hypocert/hermite_basis.hpp"

namespace hypocert {

namespace {

constexpr int kMaxN = 2000;

void check_size(int d, int N, bool needs_rotation) {
  require_dim(d);
  require(N >= 1 && N <= kMaxN, "truncation N must lie in [1, 2000]");
  if (needs_rotation) require(N >= rotation_extent(d), "truncation smaller than the conserved-moment block");
}

Matrix tensor_L1(int d, int N) {
  Matrix L1 = Matrix::Zero(N, N);
  for (int j = 0; j < N; ++j) {
    MultiIndex up = multi_index(j, d);
    const int m1 = up[0];
    up[0] += 1;
    const std::size_t i = lex_index(up);
    if (i < static_cast<std::size_t>(N)) L1(i, j) = L1(j, i) = recurrence_coeffs(m1).up;
  }
  return L1;
}

}  // namespace

Matrix build_L1(int d, Variant variant, int N) {
  const bool rotate = variant == Variant::energy && d > 1;
  check_size(d, N, rotate);
  Matrix L1 = tensor_L1(d, N);
  if (!rotate) return L1;
  const Matrix S = basis_change_matrix(d, N);
  Matrix out = S * L1 * S;
  return 0.5 * (out + out.transpose());
}

Matrix build_L2(int d, Variant variant, int N) {
  check_size(d, N, true);
  const int k = kernel_dim(d);
  if (variant == Variant::energy || d == 1) {
    Matrix L2 = Matrix::Identity(N, N);
    L2.topLeftCorner(k, k).setZero();
    return L2;
  }
  // Tensor basis: the conserved directions are mass, momentum and the
  // energy vector sum_i g_{2 e_i}/sqrt(d).
  Matrix Q = Matrix::Zero(N, k);
  for (int i = 0; i <= d; ++i) Q(i, i) = 1.0;
  for (int i = 0; i < d; ++i) {
    MultiIndex m(d, 0);
    m[i] = 2;
    Q(lex_index(m), d + 1) = 1.0 / std::sqrt(static_cast<double>(d));
  }
  return Matrix::Identity(N, N) - Q * Q.transpose();
}

double OperatorPair::ell() const { return 2.0 * std::numbers::pi / L; }

OperatorPair OperatorPair::bgk(int d, Variant variant, int N, double L) {
  require(L > 0.0 && std::isfinite(L), "torus length L must be positive");
  OperatorPair p;
  p.L1 = build_L1(d, variant, N);
  p.L2 = build_L2(d, variant, N);
  p.d = d;
  p.variant = variant;
  p.N = N;
  p.L = L;
  return p;
}

ModalGenerator modal_generator(const OperatorPair& pair, double kappa) {
  ModalGenerator g;
  g.kappa = kappa;
  g.C = pair.L2.cast<cdouble>();
  if (kappa != 0.0) g.C += cdouble(0.0, pair.ell() * kappa) * pair.L1.cast<cdouble>();
  return g;
}

std::vector<ModeModulus> mode_moduli(int d, int kmax) {
  require_dim(d);
  require(kmax >= 1, "kmax must be at least 1");
  std::map<long long, int> count;
  const int side = 2 * kmax + 1;
  long long total = 1;
  for (int i = 0; i < d; ++i) total *= side;
  for (long long code = 0; code < total; ++code) {
    long long c = code, n2 = 0;
    for (int i = 0; i < d; ++i) {
      const long long k = c % side - kmax;
      c /= side;
      n2 += k * k;
    }
    if (n2 > 0) ++count[n2];
  }
  std::vector<ModeModulus> out;
  out.reserve(count.size());
  for (const auto& [n2, mult] : count) out.push_back({std::sqrt(static_cast<double>(n2)), n2, mult});
  return out;
}

std::vector<double> first_moduli(int d, int count) {
  require_dim(d);
  require(count >= 1, "count must be positive");
  // Lattice points with |k| <= R all lie in the box |k|_inf <= R, so the
  // moduli up to R found in that box are complete.
  for (int R = 2;; R *= 2) {
    auto all = mode_moduli(d, R);
    std::vector<double> out;
    for (const auto& m : all)
      if (m.norm2 <= static_cast<long long>(R) * R) out.push_back(m.kappa);
    if (static_cast<int>(out.size()) >= count) {
      out.resize(count);
      return out;
    }
  }
}

}  // namespace hypocert
