#include "hypocert/lyapunov_ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "hypocert/hermite_basis.hpp"
#include "hypocert/hypo_index.hpp"

namespace hypocert {

namespace {

const cdouble I1(0.0, 1.0);

void check_pair(const CMatrix& C1, const CMatrix& C2) {
  require(C1.rows() == C1.cols() && C2.rows() == C2.cols() && C1.rows() == C2.rows(),
          "C1 and C2 must be square matrices of equal size");
}

struct KernelFrame {
  CMatrix T;  // unitary; the first k columns span ker C2
  int k = 0;
};

// For diagonal C2 the frame is a permutation (zeros first, order kept), so
// the tabulated index patterns refer to the caller's coordinates.
KernelFrame kernel_frame(const CMatrix& C2, double tol) {
  const Eigen::Index n = C2.rows();
  const double scale = std::max(C2.cwiseAbs().maxCoeff(), 1e-300);
  KernelFrame f;
  CMatrix offdiag = C2;
  offdiag.diagonal().setZero();
  if (offdiag.norm() <= tol * scale) {
    std::vector<Eigen::Index> zero, pos;
    for (Eigen::Index i = 0; i < n; ++i) (std::abs(C2(i, i)) <= tol * scale ? zero : pos).push_back(i);
    f.T = CMatrix::Zero(n, n);
    Eigen::Index c = 0;
    for (auto i : zero) f.T(i, c++) = 1.0;
    for (auto i : pos) f.T(i, c++) = 1.0;
    f.k = static_cast<int>(zero.size());
    return f;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (C2 + C2.adjoint()));
  f.T = es.eigenvectors();
  f.k = static_cast<int>((es.eigenvalues().array() <= tol * scale).count());
  return f;
}

void swap_cols(CMatrix& T, Eigen::Index a, Eigen::Index b) {
  if (a != b) T.col(a).swap(T.col(b));
}

// Largest r in (0, 1] (halving, then bisection towards larger r) for which
// P = I + r A is positive definite and C^*P + PC is positive definite.
std::optional<double> certify_r(const CMatrix& C, const CMatrix& A) {
  const Eigen::Index n = C.rows();
  auto ok = [&](double r) {
    const CMatrix P = CMatrix::Identity(n, n) + r * A;
    return min_hermitian_eig(P) > 0.0 && lyapunov_margin(C, P) > 0.0;
  };
  double r = 1.0;
  int it = 0;
  while (!ok(r)) {
    if (++it >= 40) return std::nullopt;
    r *= 0.5;
  }
  if (it > 0) {
    double lo = r, hi = 2.0 * r;
    for (int k = 0; k < 30; ++k) {
      const double mid = 0.5 * (lo + hi);
      (ok(mid) ? lo : hi) = mid;
    }
    r = lo;
  }
  return r;
}

void finish(PAnsatz& out, const CMatrix& C1, const CMatrix& C2, double tol, const char* what) {
  const Eigen::Index n = C1.rows();
  const CMatrix C = I1 * C1 + C2;
  out.A = 0.5 * (out.A + out.A.adjoint());
  out.kato = kato_slopes(C1, C2, out.A, tol);
  const auto r = certify_r(C, out.A);
  if (!r) throw AnsatzError("r-shrink", std::string(what) + ": no r in (0,1] gives a positive definite C^*P + PC");
  out.r = *r;
  out.P = CMatrix::Identity(n, n) + out.r * out.A;
  out.lyapunov_min_eig = lyapunov_margin(C, out.P);
}

// A' in frame coordinates -> A = T A' T^*.
CMatrix to_original(const CMatrix& T, const CMatrix& Ap) { return T * Ap * T.adjoint(); }

void scale_lambdas(std::vector<cdouble>& lam, double target_sq) {
  double s = 0.0;
  for (auto l : lam) s += std::norm(l);
  if (s == 0.0) return;
  const double f = std::sqrt(target_sq / s);
  for (auto& l : lam) l *= f;
}

bool positive_definite(const CMatrix& M) { return min_hermitian_eig(M) > 0.0; }

}  // namespace

const char* to_string(Pattern p) {
  switch (p) {
    case Pattern::dimker1: return "dimker1";
    case Pattern::case2A: return "2A";
    case Pattern::case2B1: return "2B1";
    case Pattern::case2B2: return "2B2";
    case Pattern::chain3: return "chain3";
    case Pattern::bgk1d: return "bgk1d";
    case Pattern::bgk2d: return "bgk2d";
    case Pattern::bgk3d: return "bgk3d";
  }
  return "?";
}

BgkParams BgkParams::fixed_ratio(int d, double a) {
  require_dim(d);
  switch (d) {
    case 1: return {a, std::sqrt(2.0) * a, std::sqrt(3.0) * a, 0.0, 0.0};
    case 2: return {a, 2.0 * a, a, std::sqrt(6.0) * a, 0.0};
    default: return {a, std::sqrt(3.0) * a, a, a, a};
  }
}

double min_hermitian_eig(const CMatrix& M) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (M + M.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double lyapunov_margin(const CMatrix& C, const CMatrix& P, double mu) {
  return min_hermitian_eig(C.adjoint() * P + P * C - 2.0 * mu * P);
}

CMatrix optimal_P(const CMatrix& C, const Vector& weights) {
  require(C.rows() == C.cols(), "C must be square");
  const Eigen::Index n = C.rows();
  require(weights.size() == 0 || weights.size() == n, "one weight per eigenvalue");
  Vector b = weights.size() == 0 ? Vector::Ones(n) : weights;
  require((b.array() > 0.0).all(), "weights must be positive");
  Eigen::ComplexEigenSolver<CMatrix> es(C);
  require(es.info() == Eigen::Success, "eigen-decomposition failed");
  const CMatrix& V = es.eigenvectors();
  Eigen::JacobiSVD<CMatrix> svd(V);
  const Vector& s = svd.singularValues();
  const double cond = s(n - 1) > 0.0 ? s(0) / s(n - 1) : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e8))
    throw DefectiveError("eigenvector matrix condition number exceeds 1e8; C is treated as defective "
                         "(the polynomially weighted estimate for defective spectra is not implemented)",
                         cond);
  CMatrix W = V.inverse();  // rows are left eigenvectors
  for (Eigen::Index j = 0; j < n; ++j) W.row(j).normalize();
  CMatrix P = W.adjoint() * b.cast<cdouble>().asDiagonal() * W;
  return 0.5 * (P + P.adjoint());
}

CMatrix kato_matrix(const CMatrix& C1, const CMatrix& C2, const CMatrix& A, const CMatrix& R) {
  const CMatrix C = I1 * C1 + C2;
  const CMatrix M = R.adjoint() * (C.adjoint() * A + A * C) * R;
  return 0.5 * (M + M.adjoint());
}

std::vector<double> kato_slopes(const CMatrix& C1, const CMatrix& C2, const CMatrix& A, double tol) {
  check_pair(C1, C2);
  require(A.rows() == C1.rows() && A.cols() == C1.cols(), "A has the wrong size");
  const CMatrix R = kernel_basis(hermitian_sqrt(C2, tol), tol);
  if (R.cols() == 0) return {};
  Eigen::SelfAdjointEigenSolver<CMatrix> es(kato_matrix(C1, C2, A, R), Eigen::EigenvaluesOnly);
  const Vector& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

PAnsatz ansatz_dimker1(const CMatrix& C1, const CMatrix& C2, double tol) {
  check_pair(C1, C2);
  const Eigen::Index n = C1.rows();
  KernelFrame f = kernel_frame(C2, tol);
  if (f.k != 1) throw AnsatzError("dim ker C2", "ansatz_dimker1 needs dim ker C2 = 1, found " + std::to_string(f.k));
  CMatrix Cp = f.T.adjoint() * C1 * f.T;
  const double scale = std::max(C1.norm(), 1e-300);
  Eigen::Index j0 = -1;
  double best = tol * scale;
  for (Eigen::Index j = 1; j < n; ++j)
    if (std::abs(Cp(j, 0)) > best) best = std::abs(Cp(j, 0)), j0 = j;
  if (j0 < 0) throw AnsatzError("B3", "kernel of C2 is invariant under C1: not hypocoercive in this pattern");
  swap_cols(f.T, 1, j0);
  Cp = f.T.adjoint() * C1 * f.T;
  const cdouble c12 = Cp(0, 1);
  // Im(conj(lambda) c12) > 0 with |lambda| = 1/2.
  const cdouble lambda = -I1 * 0.5 * c12 / std::abs(c12);
  PAnsatz out;
  out.pattern = Pattern::dimker1;
  out.lambdas = {lambda};
  out.U = f.T;
  CMatrix Ap = CMatrix::Zero(n, n);
  Ap(0, 1) = lambda;
  Ap(1, 0) = std::conj(lambda);
  out.A = to_original(f.T, Ap);
  finish(out, C1, C2, tol, "dimker1");
  return out;
}

namespace {

PAnsatz case_2A(const CMatrix& C1, const CMatrix& C2, KernelFrame f, double tol) {
  const Eigen::Index n = C1.rows();
  CMatrix Cp = f.T.adjoint() * C1 * f.T;
  // Pick the range pair (p, q) with the best-conditioned 2x2 coupling and
  // orient it so that |c14 c23| >= |c13 c24| (1-based, p -> 3, q -> 4).
  Eigen::Index bp = -1, bq = -1;
  double best = -1.0;
  for (Eigen::Index p = 2; p < n; ++p)
    for (Eigen::Index q = 2; q < n; ++q) {
      if (p == q) continue;
      const double det = std::abs(Cp(0, q) * Cp(1, p) - Cp(0, p) * Cp(1, q));
      if (std::abs(Cp(0, q) * Cp(1, p)) < std::abs(Cp(0, p) * Cp(1, q))) continue;
      if (det > best) best = det, bp = p, bq = q;
    }
  // Move p to slot 2 and q to slot 3.
  swap_cols(f.T, 2, bp);
  if (bq == 2) bq = bp;
  swap_cols(f.T, 3, bq);
  Cp = f.T.adjoint() * C1 * f.T;
  const cdouble c13 = Cp(0, 2), c14 = Cp(0, 3), c23 = Cp(1, 2), c24 = Cp(1, 3);

  const CMatrix C2p = f.T.adjoint() * C2 * f.T;
  const CMatrix R = CMatrix::Identity(n, 2);
  auto build = [&](double l1, double l2) {
    CMatrix Ap = CMatrix::Zero(n, n);
    const cdouble lam1 = -I1 * l1 * c14, lam2 = -I1 * l2 * c23;
    Ap(0, 3) = lam1;
    Ap(3, 0) = std::conj(lam1);
    Ap(1, 2) = lam2;
    Ap(2, 1) = std::conj(lam2);
    return Ap;
  };
  auto reduced_pd = [&](double l1, double l2) { return positive_definite(kato_matrix(Cp, C2p, build(l1, l2), R)); };

  double l1 = std::abs(c13 * c23), l2 = std::abs(c14 * c24);
  if (!(l1 > 0.0 && l2 > 0.0 && reduced_pd(l1, l2))) {
    // Degenerate products (c13 c24 = 0): scan the ratio l2/l1 instead.
    double best_eig = -1.0, best_t = 1.0;
    for (int i = -60; i <= 60; ++i) {
      const double t = std::pow(10.0, i / 10.0);
      const double e = min_hermitian_eig(kato_matrix(Cp, C2p, build(1.0, t), R));
      if (e > best_eig) best_eig = e, best_t = t;
    }
    if (best_eig <= 0.0) throw AnsatzError("2A minors", "case 2A: no admissible (l1, l2) found");
    l1 = 1.0;
    l2 = best_t;
  }
  std::vector<cdouble> lam = {-I1 * l1 * c14, -I1 * l2 * c23};
  scale_lambdas(lam, 0.5);
  PAnsatz out;
  out.pattern = Pattern::case2A;
  out.lambdas = lam;
  out.U = f.T;
  CMatrix Ap = CMatrix::Zero(n, n);
  Ap(0, 3) = lam[0];
  Ap(3, 0) = std::conj(lam[0]);
  Ap(1, 2) = lam[1];
  Ap(2, 1) = std::conj(lam[1]);
  out.A = to_original(f.T, Ap);
  finish(out, C1, C2, tol, "case 2A");
  return out;
}

PAnsatz case_2B(const CMatrix& C1, const CMatrix& C2, KernelFrame f, double tol) {
  const Eigen::Index n = C1.rows();
  const double scale = std::max(C1.norm(), 1e-300);
  CMatrix Cp = f.T.adjoint() * C1 * f.T;
  // Rotate the range coordinates so that only slot 2 couples to the kernel.
  const CMatrix ur = Cp.block(0, 2, 2, n - 2);
  Eigen::JacobiSVD<CMatrix> svd(ur, Eigen::ComputeFullV);
  const CVector v = svd.matrixV().col(0);
  Eigen::HouseholderQR<CMatrix> qr(v);
  CMatrix W = qr.householderQ();
  f.T.rightCols(n - 2) = f.T.rightCols(n - 2) * W;
  Cp = f.T.adjoint() * C1 * f.T;
  if (std::abs(Cp(1, 2)) <= tol * scale) {
    swap_cols(f.T, 0, 1);
    Cp = f.T.adjoint() * C1 * f.T;
  }
  const cdouble cond = rank_one_condition(Cp);
  if (std::abs(cond) <= tol * scale * scale * scale)
    throw AnsatzError("2B hypocoercivity condition",
                      "c13 c23 (c11 - c22) - c13^2 c21 + c23^2 c12 = 0: the pair is not hypocoercive");

  const cdouble a = Cp(0, 2), b = Cp(1, 2);
  const bool rotated = std::abs(a) > tol * scale;
  CMatrix Uul = CMatrix::Identity(n, n);
  if (rotated) {
    const double s = std::sqrt(std::norm(a) + std::norm(b));
    Uul(0, 0) = std::conj(b) / s;
    Uul(0, 1) = a / s;
    Uul(1, 0) = -std::conj(a) / s;
    Uul(1, 1) = b / s;
  }
  const CMatrix Ct = Uul.adjoint() * Cp * Uul;
  const CMatrix C2t = Uul.adjoint() * (f.T.adjoint() * C2 * f.T) * Uul;
  const cdouble c12 = Ct(0, 1), c23 = Ct(1, 2);
  if (std::abs(c12) <= tol * scale || std::abs(c23) <= tol * scale)
    throw AnsatzError("2B hypocoercivity condition", "case 2B: vanishing chain coupling");

  const CMatrix R = CMatrix::Identity(n, 2);
  auto build = [&](cdouble l1, cdouble l2) {
    CMatrix Ap = CMatrix::Zero(n, n);
    Ap(0, 1) = l1;
    Ap(1, 0) = std::conj(l1);
    Ap(1, 2) = l2;
    Ap(2, 1) = std::conj(l2);
    return Ap;
  };
  // Im(c12 conj l1) = 1 and Im(c23 conj l2) = 2, then shrink l1 until the
  // second minor is positive.
  cdouble l1 = -I1 * c12 / std::norm(c12);
  const cdouble l2 = -I1 * 2.0 * c23 / std::norm(c23);
  int it = 0;
  while (!positive_definite(kato_matrix(Ct, C2t, build(l1, l2), R))) {
    if (++it > 40) throw AnsatzError("2B minors", "case 2B: second minor stays non-positive");
    l1 *= 0.5;
  }
  std::vector<cdouble> lam = {l1, l2};
  scale_lambdas(lam, 0.5);

  PAnsatz out;
  out.pattern = rotated ? Pattern::case2B2 : Pattern::case2B1;
  out.lambdas = lam;
  out.U = f.T * Uul;
  out.A = to_original(out.U, build(lam[0], lam[1]));
  finish(out, C1, C2, tol, "case 2B");
  return out;
}

}  // namespace

PAnsatz ansatz_dimker2(const CMatrix& C1, const CMatrix& C2, double tol) {
  check_pair(C1, C2);
  const Eigen::Index n = C1.rows();
  KernelFrame f = kernel_frame(C2, tol);
  if (f.k != 2) throw AnsatzError("dim ker C2", "ansatz_dimker2 needs dim ker C2 = 2, found " + std::to_string(f.k));
  require(n >= 3, "need at least a 3x3 system");
  const CMatrix Cp = f.T.adjoint() * C1 * f.T;
  const int rank = numerical_rank(Cp.block(0, 2, 2, n - 2), tol);
  if (rank == 0) throw AnsatzError("B3", "C1 leaves ker C2 invariant: not hypocoercive");
  return rank == 2 ? case_2A(C1, C2, f, tol) : case_2B(C1, C2, f, tol);
}

Chain3Check chain3_conditions(const CMatrix& C1, cdouble l1, cdouble l2, cdouble l3) {
  require(C1.rows() >= 4 && C1.cols() >= 4, "need at least a 4x4 matrix");
  const cdouble c12 = C1(0, 1), c23 = C1(1, 2), c34 = C1(2, 3);
  Chain3Check ch;
  ch.a1 = std::imag(c12 * std::conj(l1));
  ch.a2 = std::imag(c23 * std::conj(l2));
  ch.a3 = std::imag(c34 * std::conj(l3));
  ch.ordered = 0.0 < ch.a1 && ch.a1 < ch.a2 && ch.a2 < ch.a3;
  ch.det = 2.0 * (ch.a2 - ch.a1) * (4.0 * ch.a1 * (ch.a3 - ch.a2) - std::norm(c23 * l1 - c12 * l2));
  ch.det_positive = ch.det > 0.0;
  return ch;
}

PAnsatz ansatz_chain3(const CMatrix& C1, const CMatrix& C2, double tol) {
  check_pair(C1, C2);
  const Eigen::Index n = C1.rows();
  require(n >= 4, "the chain ansatz needs n >= 4");
  const double s1 = std::max(C1.norm(), 1e-300), s2 = std::max(C2.norm(), 1e-300);
  CMatrix off = C2;
  off.diagonal().setZero();
  bool ok = off.norm() <= tol * s2;
  for (int i = 0; i < 3; ++i) ok = ok && std::abs(C2(i, i)) <= tol * s2;
  for (Eigen::Index i = 3; i < n; ++i) ok = ok && C2(i, i).real() > tol * s2;
  if (!ok) throw AnsatzError("chain form", "C2 must be diag(0, 0, 0, c4, ...) with c_j > 0");
  const double zero = tol * s1;
  ok = std::abs(C1(0, 2)) <= zero;
  for (Eigen::Index j = 3; j < n; ++j) ok = ok && std::abs(C1(0, j)) <= zero && std::abs(C1(1, j)) <= zero;
  ok = ok && std::abs(C1(0, 1)) > zero && std::abs(C1(1, 2)) > zero && std::abs(C1(2, 3)) > zero;
  if (!ok) throw AnsatzError("chain form", "C1 does not have the consecutive chain structure");
  if (std::abs(C1(0, 0) - C1(1, 1)) > zero || std::abs(C1(1, 1) - C1(2, 2)) > zero)
    throw AnsatzError("chain form", "the chain ansatz assumes c11 = c22 = c33");

  const cdouble c12 = C1(0, 1), c23 = C1(1, 2), c34 = C1(2, 3);
  // arg(l_j) = arg(c_{j,j+1}) - pi/2 with Im(c conj l) = 1, 2, then grow
  // the third one until the determinant is positive.
  auto lam = [&](cdouble c, double a) { return -I1 * a * c / std::norm(c); };
  const cdouble l1 = lam(c12, 1.0), l2 = lam(c23, 2.0);
  double a3 = 3.0, step = 1.0;
  Chain3Check ch = chain3_conditions(C1, l1, l2, lam(c34, a3));
  for (int it = 0; !ch.passes(); ++it) {
    if (it > 200) throw AnsatzError("det-3D", "chain ansatz: determinant condition not reachable");
    step *= 2.0;
    a3 = 2.0 + step;
    ch = chain3_conditions(C1, l1, l2, lam(c34, a3));
  }
  std::vector<cdouble> ls = {l1, l2, lam(c34, a3)};
  scale_lambdas(ls, 0.5);
  PAnsatz out;
  out.pattern = Pattern::chain3;
  out.lambdas = ls;
  out.U = CMatrix::Identity(n, n);
  out.A = CMatrix::Zero(n, n);
  for (int j = 0; j < 3; ++j) {
    out.A(j, j + 1) = ls[j];
    out.A(j + 1, j) = std::conj(ls[j]);
  }
  finish(out, C1, C2, tol, "chain3");
  return out;
}

int bgk_P_extent(int d) {
  require_dim(d);
  static constexpr int ext[] = {4, 7, 11};
  return ext[d - 1];
}

CMatrix bgk_P(int d, double kappa, const BgkParams& p, int N) {
  require_dim(d);
  require(kappa != 0.0 && std::isfinite(kappa), "mode modulus must be nonzero");
  require(d == 1 || kappa > 0.0, "negative kappa is only meaningful in 1D");
  if (N == 0) N = min_block_size(d);
  require(N >= bgk_P_extent(d), "truncation smaller than the P block");
  struct Entry {
    int i, j;
    double theta;
  };
  std::vector<Entry> e;
  switch (d) {
    case 1: e = {{0, 1, p.alpha}, {1, 2, p.beta}, {2, 3, p.gamma}}; break;
    case 2: e = {{0, 1, p.alpha}, {1, 5, p.beta}, {2, 4, p.gamma}, {3, 6, p.omega}}; break;
    default: e = {{0, 1, p.alpha}, {1, 7, p.beta}, {2, 5, p.gamma}, {3, 6, p.omega}, {4, 10, p.eta}}; break;
  }
  CMatrix P = CMatrix::Identity(N, N);
  for (const auto& x : e) {
    P(x.i, x.j) = -I1 * x.theta / kappa;
    P(x.j, x.i) = I1 * x.theta / kappa;
  }
  return P;
}

CMatrix bgk_P(int d, double kappa, double alpha, int N) {
  require(alpha >= 0.0, "alpha must be non-negative");
  return bgk_P(d, kappa, BgkParams::fixed_ratio(d, alpha), N);
}

bool bgk_P_positive(int d, double kappa, double alpha) {
  return min_hermitian_eig(bgk_P(d, kappa, alpha)) > 0.0;
}

}  // namespace hypocert
