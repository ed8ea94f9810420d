#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hypocert/types.hpp"

namespace hypocert {

enum class Pattern { dimker1, case2A, case2B1, case2B2, chain3, bgk1d, bgk2d, bgk3d };
const char* to_string(Pattern p);

/// Real parameters of the BGK transformation matrices.
struct BgkParams {
  double alpha = 0.0, beta = 0.0, gamma = 0.0, omega = 0.0, eta = 0.0;

  /// The fixed multiples of alpha used by the certificates:
  /// d=1: (a, sqrt2 a, sqrt3 a); d=2: (a, 2a, a, sqrt6 a); d=3: (a, sqrt3 a, a, a, a).
  static BgkParams fixed_ratio(int d, double alpha);
};

/// Outcome of an ansatz construction. P = I + r A with A Hermitian.
struct PAnsatz {
  Pattern pattern = Pattern::dimker1;
  std::vector<cdouble> lambdas;  ///< ansatz parameters before the r-scaling
  BgkParams params;              ///< only for the BGK families
  CMatrix U;                     ///< basis in which A has the tabulated pattern
  CMatrix A;                     ///< perturbation, original coordinates
  double r = 0.0;                ///< certified scaling
  CMatrix P;
  double lyapunov_min_eig = 0.0;  ///< min eig of C^*P + P C at r
  std::vector<double> kato;       ///< slopes of R^*(C^*A + A C)R
  bool mode_scaled = false;
};

/// Ansatz construction failed; `condition` names what is violated.
class AnsatzError : public std::runtime_error {
 public:
  AnsatzError(const std::string& condition, const std::string& msg)
      : std::runtime_error(msg), condition(condition) {}
  std::string condition;
};

/// Eigenvector matrix too ill-conditioned for the diagonalisation formula.
class DefectiveError : public std::runtime_error {
 public:
  DefectiveError(const std::string& msg, double cond) : std::runtime_error(msg), condition_number(cond) {}
  double condition_number;
};

/// min eig of C^*P + P C - 2 mu P.
double lyapunov_margin(const CMatrix& C, const CMatrix& P, double mu = 0.0);

/// min eig of a Hermitian matrix (symmetrised first).
double min_hermitian_eig(const CMatrix& M);

/// P = sum_j b_j conj(w_j) w_j^T over unit left eigenvectors w_j of C.
/// Empty `weights` means b_j = 1. Throws DefectiveError when the eigenvector
/// matrix has condition number above 1e8.
CMatrix optimal_P(const CMatrix& C, const Vector& weights = Vector());

/// Eigenvalues (ascending) of R^*(C^*A + A C)R where C = i C1 + C2 and the
/// columns of R are an orthonormal basis of ker C2.
std::vector<double> kato_slopes(const CMatrix& C1, const CMatrix& C2, const CMatrix& A, double tol = 1e-10);

/// The k x k matrix behind kato_slopes, in the basis R.
CMatrix kato_matrix(const CMatrix& C1, const CMatrix& C2, const CMatrix& A, const CMatrix& R);

PAnsatz ansatz_dimker1(const CMatrix& C1, const CMatrix& C2, double tol = 1e-10);
PAnsatz ansatz_dimker2(const CMatrix& C1, const CMatrix& C2, double tol = 1e-10);
PAnsatz ansatz_chain3(const CMatrix& C1, const CMatrix& C2, double tol = 1e-10);

/// Conditions of the three-parameter chain ansatz for given lambdas.
struct Chain3Check {
  double a1 = 0, a2 = 0, a3 = 0;  ///< Im(c12 conj l1), Im(c23 conj l2), Im(c34 conj l3)
  bool ordered = false;           ///< 0 < a1 < a2 < a3
  double det = 0.0;               ///< determinant of the 3x3 reduced matrix
  bool det_positive = false;
  bool passes() const { return ordered && det_positive; }
};
Chain3Check chain3_conditions(const CMatrix& C1, cdouble l1, cdouble l2, cdouble l3);

/// Size of the block of P_kappa that differs from the identity (4, 7, 11).
int bgk_P_extent(int d);

/// BGK transformation matrix P_kappa (energy basis for d >= 2). kappa may
/// be negative in 1D, which yields conj(P_|kappa|). N = 0 picks the
/// minimum block size.
CMatrix bgk_P(int d, double kappa, double alpha, int N = 0);
CMatrix bgk_P(int d, double kappa, const BgkParams& params, int N = 0);

/// Whether P_kappa(alpha) is positive definite (min eigenvalue > 0).
bool bgk_P_positive(int d, double kappa, double alpha);

}  // namespace hypocert
