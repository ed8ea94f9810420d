#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hypocert/types.hpp"

namespace hypocert {

struct EigenResult {
  CVector values;              ///< sorted by real part, then imaginary part
  int iterations = 0;          ///< total QR sweeps
  double max_backward_error = 0.0;  ///< over the sampled residual checks
};

/// QR iteration exceeded its cap. `partial` holds the eigenvalues that had
/// deflated before the failure.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& msg, std::vector<cdouble> partial)
      : std::runtime_error(msg), partial(std::move(partial)) {}
  std::vector<cdouble> partial;
};

/// All eigenvalues of a dense complex matrix: balancing, Householder
/// reduction to Hessenberg form, then single-shift QR with Wilkinson
/// shifts (cap 40 n sweeps). Up to `residual_samples` eigenpairs are
/// re-checked by inverse iteration on the original matrix.
EigenResult complex_eigenvalues(const CMatrix& M, double tol = 1e-8, int residual_samples = 10);

/// Relative backward error |M x - lambda x| / |M|_F of an approximate
/// eigenvector obtained by two steps of inverse iteration.
double eigen_backward_error(const CMatrix& M, cdouble lambda);

struct GapEntry {
  double kappa;
  int N;
  double gap;
};

struct GapReport {
  int d = 1;
  double L = 0.0;
  std::vector<GapEntry> entries;
  double overall_gap = 0.0;
  double argmin_kappa = 0.0;
  double max_backward_error = 0.0;
};

/// min Re spec(C_kappa) per kappa at truncation N. kappa = 0 is reported
/// as gap 1: there the conserved components vanish and the rest decays
/// like exp(-t).
GapReport spectral_gap(int d, double L, const std::vector<double>& kappas, int N);

struct ConvergenceStudy {
  std::vector<GapEntry> entries;       ///< one per N, in the given order
  std::vector<double> cauchy_diffs;    ///< |gap(N_i) - gap(N_{i-1})|
  bool monotone_nondecreasing = true;  ///< observed, flagged if violated
};

ConvergenceStudy convergence_study(int d, double L, double kappa, const std::vector<int>& Ns);

nlohmann::json to_json(const GapReport& r);
std::string to_csv(const GapReport& r);

}  // namespace hypocert
