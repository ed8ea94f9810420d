#include "hypocert/hypo_index.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "hypocert/spectral_gap.hpp"

namespace hypocert {

namespace {

void check_pair(const CMatrix& C1, const CMatrix& C2) {
  require(C1.rows() == C1.cols() && C2.rows() == C2.cols() && C1.rows() == C2.rows(),
          "C1 and C2 must be square matrices of equal size");
  require(C1.rows() >= 1, "empty matrices");
  const double s1 = std::max(1.0, C1.norm()), s2 = std::max(1.0, C2.norm());
  require((C1 - C1.adjoint()).norm() <= 1e-12 * s1, "C1 must be Hermitian");
  require((C2 - C2.adjoint()).norm() <= 1e-12 * s2, "C2 must be Hermitian");
}

Vector singular_values(const CMatrix& A) {
  if (A.size() == 0) return Vector();
  Eigen::BDCSVD<CMatrix> svd(A);
  return svd.singularValues();
}

}  // namespace

int numerical_rank(const CMatrix& A, double tol) {
  const Vector s = singular_values(A);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<int>((s.array() > tol * s(0)).count());
}

CMatrix kernel_basis(const CMatrix& A, double tol) {
  const Eigen::Index n = A.cols();
  if (A.rows() == 0) return CMatrix::Identity(n, n);
  Eigen::BDCSVD<CMatrix> svd(A, Eigen::ComputeFullV);
  const Vector& s = svd.singularValues();
  int r = 0;
  if (s.size() > 0 && s(0) > 0.0) r = static_cast<int>((s.array() > tol * s(0)).count());
  return svd.matrixV().rightCols(n - r);
}

CMatrix hermitian_sqrt(const CMatrix& A, double tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(A);
  Vector ev = es.eigenvalues();
  const double top = std::max(ev.cwiseAbs().maxCoeff(), 0.0);
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) > tol * top ? std::sqrt(ev(i)) : 0.0;
  return es.eigenvectors() * ev.cast<cdouble>().asDiagonal() * es.eigenvectors().adjoint();
}

IndexReport hypocoercivity_index(const CMatrix& C1, const CMatrix& C2, double tol) {
  check_pair(C1, C2);
  const Eigen::Index n = C1.rows();
  IndexReport rep;
  rep.tol = tol;
  const CMatrix R = hermitian_sqrt(C2, tol);
  rep.kernel_dim = static_cast<int>(n) - numerical_rank(R, tol);

  // Rank accumulation: columns C1^j sqrt(C2) stacked side by side, and the
  // dual test with rows sqrt(C2) C1^j stacked on top of each other.
  CMatrix cols = R, rows = R, colblock = R, rowblock = R;
  std::optional<int> tau_rank, tau_kernel;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) {
      colblock = C1 * colblock;
      rowblock = rowblock * C1;
      cols.conservativeResize(Eigen::NoChange, cols.cols() + n);
      cols.rightCols(n) = colblock;
      rows.conservativeResize(rows.rows() + n, Eigen::NoChange);
      rows.bottomRows(n) = rowblock;
    }
    const int r = numerical_rank(cols, tol);
    const int k = numerical_rank(rows, tol);
    rep.rank_profile.push_back(r);
    rep.kernel_profile.push_back(k);
    if (!tau_rank && r == n) tau_rank = j;
    if (!tau_kernel && k == n) tau_kernel = j;
    const bool stalled = j > 0 && r == rep.rank_profile[j - 1] && k == rep.kernel_profile[j - 1];
    if ((tau_rank && tau_kernel) || stalled) break;
  }
  rep.criteria_agree = tau_rank == tau_kernel;
  rep.tau = tau_rank;
  if (rep.tau) {
    CMatrix sum = C2, pw = CMatrix::Identity(n, n);
    for (int j = 1; j <= *rep.tau; ++j) {
      pw = C1 * pw;
      sum += pw * C2 * pw.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (sum + sum.adjoint()), Eigen::EigenvaluesOnly);
    rep.coercivity_constant = es.eigenvalues()(0);
  }
  return rep;
}

bool is_hypocoercive_spectral(const CMatrix& C1, const CMatrix& C2, double tol) {
  check_pair(C1, C2);
  const CMatrix C = cdouble(0.0, 1.0) * C1 + C2;
  const EigenResult er = complex_eigenvalues(C);
  return er.values(0).real() > tol;
}

InvarianceReport check_invariance_conditions(const CMatrix& C1, const CMatrix& C2, double tol) {
  check_pair(C1, C2);
  const Eigen::Index n = C1.rows();
  InvarianceReport rep;
  const CMatrix R = hermitian_sqrt(C2, tol);
  const double scale = std::max({1.0, C1.norm(), C2.norm()});

  // B4: look for an eigenvector of C1 inside ker C2, eigenspace by
  // eigenspace so that degenerate eigenvalues are handled.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(C1);
  const Vector& ev = es.eigenvalues();
  bool eigvec_in_kernel = false;
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i + 1;
    while (j < n && std::abs(ev(j) - ev(i)) <= 1e3 * tol * scale) ++j;
    const CMatrix E = es.eigenvectors().middleCols(i, j - i);
    const CMatrix RE = R * E;
    const double top = RE.norm();
    int rank = 0;
    if (top > tol * scale) {
      Eigen::BDCSVD<CMatrix> svd(RE);
      rank = static_cast<int>((svd.singularValues().array() > tol * scale).count());
    }
    if (rank < j - i) eigvec_in_kernel = true;
    i = j;
  }
  rep.B4 = !eigvec_in_kernel;

  // B3: shrink W (orthonormal, inside ker C2) to {x in W : C1 x in W} until
  // it stops changing; what remains is the largest invariant subspace.
  CMatrix W = kernel_basis(R, tol);
  while (W.cols() > 0) {
    const CMatrix leak = C1 * W - W * (W.adjoint() * C1 * W);
    CMatrix Y;
    if (leak.norm() <= tol * scale) {
      Y = CMatrix::Identity(W.cols(), W.cols());
    } else {
      Eigen::BDCSVD<CMatrix> svd(leak, Eigen::ComputeFullV);
      const int r = static_cast<int>((svd.singularValues().array() > tol * scale).count());
      Y = svd.matrixV().rightCols(W.cols() - r);
    }
    if (Y.cols() == W.cols()) break;
    W = W * Y;
  }
  rep.invariant_dim = static_cast<int>(W.cols());
  rep.B3 = rep.invariant_dim == 0;
  return rep;
}

bool check_commutator_condition(const CMatrix& C1, const CMatrix& C2, const CMatrix& K, double tol) {
  check_pair(C1, C2);
  require(K.rows() == C1.rows() && K.cols() == C1.cols(), "K has the wrong size");
  require((K + K.adjoint()).norm() <= 1e-12 * std::max(1.0, K.norm()), "K must be skew-Hermitian");
  const CMatrix M = C2 + K * C1 - C1 * K;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (M + M.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) > tol;
}

cdouble rank_one_condition(const CMatrix& C1) {
  require(C1.rows() >= 3 && C1.cols() >= 3, "need at least a 3x3 matrix");
  const cdouble c11 = C1(0, 0), c22 = C1(1, 1), c12 = C1(0, 1), c21 = C1(1, 0), c13 = C1(0, 2), c23 = C1(1, 2);
  return c13 * c23 * (c11 - c22) - c13 * c13 * c21 + c23 * c23 * c12;
}

}  // namespace hypocert
