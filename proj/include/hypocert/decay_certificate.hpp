#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hypocert/types.hpp"

namespace hypocert {

/// Dense real polynomial, coefficients in ascending order.
struct Poly {
  std::vector<double> c;

  double operator()(double x) const;
  Poly derivative() const;
  /// Real roots (imaginary part below 1e-9 relative) from the companion matrix.
  std::vector<double> real_roots() const;
  Poly operator+(const Poly& o) const;
  Poly operator*(double s) const;
};

/// p(kappa, alpha) = (p0(alpha) + p1(alpha)/kappa^2)/kappa^2 + p2(alpha).
/// Every factor of the closed-form minors has this shape.
struct RationalFactor {
  std::string name;
  Poly p0, p1, p2;
  double operator()(double kappa, double alpha) const;
};

/// The polynomial factors entering the minors at a given ell = 2 pi / L.
/// 1D: q2, q3. 2D: p5, p6, p7, p8, p9, p11. 3D: p6, p8, p10, p11, p12, p14,
/// p16, p21.
std::vector<RationalFactor> minor_factors(int d, double ell);

/// Number of minors in the chain (5, 11, 21).
int minor_count(int d);

/// 1D minors are taken from the lower-right corner, the others from the
/// upper-left one.
inline bool minors_trailing(int d) { return d == 1; }

struct MinorTable {
  int d = 1;
  double kappa = 1.0, alpha = 0.0, ell = 1.0;
  std::vector<double> delta;  ///< delta[j-1] = delta_j
  std::vector<std::pair<std::string, double>> factors;
};

MinorTable minors_1d(double kappa, double alpha, double ell);
MinorTable minors_2d(double kappa, double alpha, double ell);
MinorTable minors_3d(double kappa, double alpha, double ell);
MinorTable minors(int d, double kappa, double alpha, double ell);

/// The non-identity block of C_kappa^* P_kappa + P_kappa C_kappa written
/// out entry by entry (5x5, 11x11, 21x21; energy basis for d >= 2).
CMatrix assemble_D_block(int d, double kappa, double alpha, double ell);

/// Same block computed from the assembled operators and bgk_P.
CMatrix D_block_from_operators(int d, double kappa, double alpha, double ell, int N = 0);

/// Principal minors by LU, leading (or trailing) j x j for j = 1..n.
std::vector<double> principal_minors(const CMatrix& D, bool trailing);

/// Positivity threshold of the third 1D minor at kappa = 1.
double alpha3_1d(double L);

/// Sufficient test for p(1, alpha) <= p(kappa, alpha) for all kappa >= 1 on
/// [0, abar]: p1 >= 0 and p0 + 2 p1 <= 0 on a dense grid plus the interior
/// critical points of both.
bool rational_monotone_check(const Poly& p0, const Poly& p1, const Poly& p2, double abar);

/// Spread of P_kappa around the identity at kappa = 1: P lies between
/// (1 - theta alpha) I and (1 + theta alpha) I.
double p_spread(int d);

/// The maximised objective mu(alpha) at kappa = 1.
double certificate_objective(int d, double ell, double alpha);

struct Threshold {
  std::string factor;
  std::string kind;  ///< "root", "p1<0" or "p0+2p1>0", or "cap"
  double alpha;
};

/// alpha_+ and the individual thresholds it is the minimum of.
struct AlphaPlus {
  double value = 0.0;
  std::vector<Threshold> thresholds;
};
AlphaPlus alpha_plus(int d, double ell);

struct VerifiedMode {
  double kappa;
  double min_eig;  ///< of C^*P + PC - 2 mu P
};

struct DecayCertificate {
  int d = 1;
  double L = 0.0, ell = 0.0;
  double alpha_plus = 0.0, alpha_star = 0.0, mu = 0.0, lambda = 0.0;
  double c_d = 0.0, C_d = 0.0;
  std::vector<Threshold> thresholds;
  std::vector<VerifiedMode> verified;
  bool valid = false;
  double offending_kappa = 0.0;  ///< first failing modulus when !valid
};

/// Closed-form certificate for the d-dimensional BGK model on the torus of
/// side L, checked against the assembled generators for the first
/// `verify_moduli` mode moduli.
DecayCertificate certify(int d, double L, int verify_moduli = 50);

struct MuLimits1D {
  double mu_limit;          ///< closed form of mu_star as L -> 0
  double alpha_ratio;       ///< closed form of alpha_star / L as L -> 0
  double L_probe;
  double mu_probe;          ///< certify(1, L_probe).mu
  double alpha_ratio_probe; ///< certify(1, L_probe).alpha_star / L_probe
};
MuLimits1D mu_limits_1d(double L_probe = 1e-3);

nlohmann::json to_json(const DecayCertificate& c);
nlohmann::json to_json(const MinorTable& t);

}  // namespace hypocert
