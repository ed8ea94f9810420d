#pragma once

#include <cstddef>
#include <vector>

#include "hypocert/types.hpp"

namespace hypocert {

/// Multi-index m in N_0^d. Its length is the dimension.
using MultiIndex = std::vector<int>;

struct RecurrenceCoeffs {
  double up;    ///< coefficient of g_{m+1}
  double down;  ///< coefficient of g_{m-1}
};

/// v g_m = up g_{m+1} + down g_{m-1}.
RecurrenceCoeffs recurrence_coeffs(int m);

/// Smallest truncation that contains the full leading block used by the
/// certificates (5, 11, 21 for d = 1, 2, 3).
int min_block_size(int d);

/// Number of leading zeros of the energy-basis L2 (3, 4, 5).
int kernel_dim(int d);

/// Last index touched by the energy rotation S, plus one (3 in 1D, 6, 10).
int rotation_extent(int d);

/// Graded ordering: total degree first; within a degree, decreasing m_1,
/// then decreasing m_2.
std::size_t lex_index(const MultiIndex& m);

/// Inverse of lex_index.
MultiIndex multi_index(std::size_t n, int d);

/// Number of multi-indices of total degree exactly `deg` in d variables.
std::size_t degree_count(int deg, int d);

/// Truncated basis description with a cached index table.
class BasisSpec {
 public:
  BasisSpec(int d, Variant variant, int N);

  int d() const { return d_; }
  Variant variant() const { return variant_; }
  int N() const { return N_; }
  const MultiIndex& index(int n) const { return table_.at(n); }
  const std::vector<MultiIndex>& table() const { return table_; }

 private:
  int d_;
  Variant variant_;
  int N_;
  std::vector<MultiIndex> table_;
};

/// Maxwellian M_1(v) = (2 pi)^{-d/2} exp(-|v|^2/2).
double maxwellian(const Vector& v);

/// g_0(v), ..., g_mmax(v) for a scalar v, by the three-term recurrence.
Vector hermite_functions(int mmax, double v);

/// Same without the Gaussian factor: He_m(v)/sqrt(m!). Useful for
/// quadrature against exp(-v^2/2).
Vector hermite_polynomials_normalized(int mmax, double v);

/// g_m(v) (tensor) or its energy-basis counterpart. For the energy variant
/// the multi-index names the slot, i.e. g~_m = sum_i S(i, lex(m)) g_i.
double eval_basis(const MultiIndex& m, const Vector& v, Variant variant);

/// Real symmetric involution S with g~ = S g on the second-degree block.
Matrix basis_change_matrix(int d, int N);

struct Quadrature {
  Vector nodes;
  Vector weights;  ///< for the weight exp(-v^2/2); they sum to sqrt(2 pi)
  double symmetry_error = 0.0;  ///< max |x_i + x_{n-1-i}| before symmetrizing
};

/// Gauss-Hermite rule for exp(-v^2/2) via Golub-Welsch.
Quadrature gauss_hermite(int n);

}  // namespace hypocert
