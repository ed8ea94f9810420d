#pragma once

#include <string>
#include <vector>

#include "hypocert/types.hpp"

namespace hypocert {

/// Transport part L1 (coefficient of g_m in v_1 g_m'), symmetric.
Matrix build_L1(int d, Variant variant, int N);

/// Relaxation part L2 = I - (projection onto the conserved moments).
Matrix build_L2(int d, Variant variant, int N);

struct OperatorPair {
  Matrix L1;
  Matrix L2;
  int d = 1;
  Variant variant = Variant::tensor;
  int N = 0;
  double L = 0.0;

  double ell() const;

  /// Linearised BGK operators on the torus of side L.
  static OperatorPair bgk(int d, Variant variant, int N, double L);
};

struct ModalGenerator {
  double kappa = 0.0;
  CMatrix C;  ///< i ell kappa L1 + L2
};

/// C_kappa for a mode of (signed, in 1D) wave number kappa.
ModalGenerator modal_generator(const OperatorPair& pair, double kappa);

struct ModeModulus {
  double kappa;
  long long norm2;   ///< kappa^2, exact
  int multiplicity;  ///< lattice points k with |k| = kappa and |k|_inf <= kmax
};

/// Distinct moduli of nonzero k in Z^d with |k|_inf <= kmax, ascending.
std::vector<ModeModulus> mode_moduli(int d, int kmax);

/// The first `count` distinct moduli in Z^d \ {0} (no box restriction).
std::vector<double> first_moduli(int d, int count);

}  // namespace hypocert
