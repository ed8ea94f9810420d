#pragma once

#include <optional>
#include <vector>

#include "hypocert/types.hpp"

namespace hypocert {

struct IndexReport {
  std::optional<int> tau;         ///< empty when not hypocoercive
  std::vector<int> rank_profile;  ///< r_j = rank[sqrt C2, C1 sqrt C2, ..., C1^j sqrt C2]
  std::vector<int> kernel_profile;  ///< n - dim of the intersection of ker(sqrt C2 C1^i), i <= j
  int kernel_dim = 0;             ///< dim ker C2
  double tol = 0.0;
  double coercivity_constant = 0.0;  ///< min eig of sum_{j<=tau} C1^j C2 C1^j (0 if not hypocoercive)
  bool criteria_agree = true;     ///< rank and kernel-intersection tests gave the same tau

  bool hypocoercive() const { return tau.has_value(); }
};

/// Numerical rank: singular values above tol * sigma_max.
int numerical_rank(const CMatrix& A, double tol);

/// Orthonormal basis of ker A (columns) using the same relative tolerance.
CMatrix kernel_basis(const CMatrix& A, double tol);

/// Principal square root of a Hermitian PSD matrix; eigenvalues below
/// tol * lambda_max are clipped to zero.
CMatrix hermitian_sqrt(const CMatrix& A, double tol);

IndexReport hypocoercivity_index(const CMatrix& C1, const CMatrix& C2, double tol = 1e-10);

/// Spectral test: min Re spec(i C1 + C2) > tol. Throws ConvergenceError if
/// the eigensolver fails.
bool is_hypocoercive_spectral(const CMatrix& C1, const CMatrix& C2, double tol = 1e-10);

struct InvarianceReport {
  bool B3 = false;  ///< no nontrivial C1-invariant subspace inside ker C2
  bool B4 = false;  ///< no eigenvector of C1 lies in ker C2
  int invariant_dim = 0;  ///< dimension of the largest C1-invariant subspace of ker C2
};

InvarianceReport check_invariance_conditions(const CMatrix& C1, const CMatrix& C2, double tol = 1e-10);

/// Forward check of the commutator condition for a caller-supplied
/// skew-Hermitian K: C2 + [K, C1] > 0.
bool check_commutator_condition(const CMatrix& C1, const CMatrix& C2, const CMatrix& K, double tol = 1e-10);

/// Left-hand side of the rank-one hypocoercivity condition for two-dimensional
/// kernels, evaluated on the leading 3x3 entries of C1 (1-based c_{j,k} in
/// the usual notation): c13 c23 (c11 - c22) - c13^2 c21 + c23^2 c12.
cdouble rank_one_condition(const CMatrix& C1);

}  // namespace hypocert
