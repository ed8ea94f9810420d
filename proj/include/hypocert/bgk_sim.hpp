#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hypocert/operator_assembly.hpp"
#include "hypocert/types.hpp"

namespace hypocert {

/// Hermite coefficients of one spatial mode. In 1D `kappa` is the signed
/// wave number k; in 2D/3D it is a modulus standing for `multiplicity`
/// lattice vectors.
struct Mode {
  double kappa = 0.0;
  int multiplicity = 1;
  CVector h;
};

struct ModalState {
  int d = 1;
  double L = 0.0;
  Variant basis = Variant::tensor;
  int N = 0;
  double t = 0.0;
  std::vector<Mode> modes;
  double tail_bound = 0.0;  ///< bound on the H-norm^2 dropped by the mode cut-off
};

struct ModeMoments {
  double kappa;
  cdouble sigma, mu, tau;  ///< density, first-velocity and temperature moments
};

/// Per-mode macroscopic moments. Energy basis for d >= 2, tensor basis for d = 1.
std::vector<ModeMoments> moments(const ModalState& s);

/// Caches exp(-C_kappa dt) per (kappa, dt). Thread-safe.
class Propagator {
 public:
  Propagator(int d, Variant basis, int N, double L);

  /// exp(-C_kappa dt). For kappa = 0 this is exp(-dt) I, valid on states
  /// whose conserved components vanish.
  const CMatrix& get(double kappa, double dt);

  /// Largest eigenvector condition number met so far (0 if none).
  double worst_condition() const { return worst_cond_; }
  /// Number of exponentials that needed the scaling-and-squaring fallback.
  int fallbacks() const { return fallbacks_; }

 private:
  OperatorPair pair_;
  std::map<std::pair<double, double>, CMatrix> cache_;
  std::mutex mutex_;
  double worst_cond_ = 0.0;
  int fallbacks_ = 0;
};

/// exp(-C dt) by diagonalisation; falls back to scaling and squaring when
/// the eigenvector matrix has an estimated 1-norm condition number above
/// 1e8. `cond` receives that estimate.
CMatrix propagator_matrix(const CMatrix& C, double dt, double* cond = nullptr, bool* fallback = nullptr);

ModalState evolve(const ModalState& s, double dt, Propagator& prop);
ModalState evolve(const ModalState& s, double dt);

/// sum over modes of multiplicity (1+kappa^2)^gamma <h, P_kappa h>, with P_0 = I.
double entropy(const ModalState& s, double alpha, double gamma = 0.0);

/// sqrt(sum over modes of multiplicity |h|^2).
double h_norm(const ModalState& s);

/// L1 norm of f - M_1 over the normalised torus and R: nx uniform points in
/// x and an nv-point Gauss-Hermite rule in v.
double l1_distance_1d(const ModalState& s, int nx, int nv);

/// Fourier coefficient of the raised-cosine bump of width eps (fraction of
/// the torus) with unit mean.
double bump_coefficient(double eps, int k);

/// f^I = chi_eps(x) M_1(v) with chi_eps the raised-cosine bump. Modes
/// |k| <= kmax are kept, the k = 0 perturbation is zero.
ModalState concentrated_initial_data(double eps, int kmax, int N, double L);

/// Seeded initial data for d = 2, 3: random coefficients on the moduli of
/// the box |k|_inf <= kmax, decaying like 1/(1 + kappa^2).
ModalState random_initial_data(int d, int kmax, int N, double L, unsigned seed);

/// min{2, sqrt(C E0) exp(-lambda t / 2)}.
double decay_envelope(double t, double C, double E0, double lambda);

/// (log C + log E0 - 2 log 2) / lambda.
double t_init(double C, double E0, double lambda);

struct SimConfig {
  int d = 1;
  double L = 0.0;
  double eps = 0.02;
  int kmax = 128;
  int N = 64;
  double tmax = 100.0;
  double dt = 2.0;
  double gamma = 0.0;
  int nx = 512;
  int nv = 80;
  unsigned seed = 0;
  double alpha = -1.0;  ///< negative: use the certificate's alpha_star
};

struct TrajectoryRow {
  double t, entropy, h_norm, l1, envelope;
};

struct Trajectory {
  SimConfig config;
  double alpha = 0.0, mu = 0.0, lambda = 0.0, C_d = 0.0;
  double E0 = 0.0, t_init = 0.0;
  double tail_bound = 0.0;
  std::vector<TrajectoryRow> rows;
};

Trajectory simulate(const SimConfig& cfg);

/// Columns t,entropy,h_norm,l1,envelope (l1 is empty for d >= 2).
std::string to_csv(const Trajectory& tr);
nlohmann::json manifest(const Trajectory& tr);

}  // namespace hypocert
