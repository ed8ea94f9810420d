#include "hypocert/bgk_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "hypocert/decay_certificate.hpp"
#include "hypocert/hermite_basis.hpp"
#include "hypocert/io.hpp"
#include "hypocert/lyapunov_ansatz.hpp"
#include "parallel.hpp"

namespace hypocert {

namespace {

void check_state(const ModalState& s) {
  require_dim(s.d);
  for (const auto& m : s.modes) require(m.h.size() == s.N, "mode coefficient vector has the wrong length");
}

}  // namespace

std::vector<ModeMoments> moments(const ModalState& s) {
  check_state(s);
  require(s.N >= rotation_extent(s.d), "truncation too small for the moments");
  std::vector<ModeMoments> out;
  out.reserve(s.modes.size());
  const bool energy = s.basis == Variant::energy;
  for (const auto& m : s.modes) {
    const cdouble sigma = m.h(0), mu = m.h(1);
    cdouble tau;
    // tau is the second moment of the perturbation, int |v|^2 h dv.
    switch (s.d) {
      case 1: tau = std::sqrt(2.0) * m.h(2) + sigma; break;
      case 2:
        tau = energy ? 2.0 * (m.h(3) + sigma) : std::sqrt(2.0) * (m.h(3) + m.h(5)) + 2.0 * sigma;
        break;
      default:
        tau = energy ? std::sqrt(6.0) * m.h(4) + 3.0 * sigma
                     : std::sqrt(2.0) * (m.h(4) + m.h(7) + m.h(9)) + 3.0 * sigma;
        break;
    }
    out.push_back({m.kappa, sigma, mu, tau});
  }
  return out;
}

CMatrix propagator_matrix(const CMatrix& C, double dt, double* cond, bool* fallback) {
  require(dt >= 0.0, "time step must be non-negative");
  const Eigen::Index n = C.rows();
  if (fallback) *fallback = false;
  if (dt == 0.0) {
    if (cond) *cond = 1.0;
    return CMatrix::Identity(n, n);
  }
  Eigen::ComplexEigenSolver<CMatrix> es(C);
  double c = std::numeric_limits<double>::infinity();
  Eigen::PartialPivLU<CMatrix> lu;
  if (es.info() == Eigen::Success) {
    lu.compute(es.eigenvectors());
    const double rc = lu.rcond();
    if (rc > 0.0) c = 1.0 / rc;
  }
  if (cond) *cond = c;
  if (c <= 1e8) {
    const CVector e = (-dt * es.eigenvalues()).array().exp();
    return es.eigenvectors() * e.asDiagonal() * lu.inverse();
  }
  if (fallback) *fallback = true;
  const CMatrix E = (-dt * C).exp();
  if (!E.allFinite())
    throw std::runtime_error("matrix exponential failed (eigenvector condition number " + std::to_string(c) + ")");
  return E;
}

Propagator::Propagator(int d, Variant basis, int N, double L) : pair_(OperatorPair::bgk(d, basis, N, L)) {}

const CMatrix& Propagator::get(double kappa, double dt) {
  const auto key = std::make_pair(kappa, dt);
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  CMatrix E;
  double cond = 1.0;
  bool fb = false;
  if (kappa == 0.0) {
    E = std::exp(-dt) * CMatrix::Identity(pair_.N, pair_.N);
  } else {
    E = propagator_matrix(modal_generator(pair_, kappa).C, dt, &cond, &fb);
  }
  std::lock_guard lock(mutex_);
  worst_cond_ = std::max(worst_cond_, kappa == 0.0 ? 0.0 : cond);
  if (fb) ++fallbacks_;
  // std::map never invalidates references, so returning into it is safe.
  return cache_.emplace(key, std::move(E)).first->second;
}

ModalState evolve(const ModalState& s, double dt, Propagator& prop) {
  check_state(s);
  require(dt >= 0.0, "time step must be non-negative");
  ModalState out = s;
  out.t = s.t + dt;
  if (dt == 0.0) return out;
  detail::parallel_for(s.modes.size(), [&](std::size_t i) { out.modes[i].h = prop.get(s.modes[i].kappa, dt) * s.modes[i].h; });
  return out;
}

ModalState evolve(const ModalState& s, double dt) {
  Propagator prop(s.d, s.basis, s.N, s.L);
  return evolve(s, dt, prop);
}

double entropy(const ModalState& s, double alpha, double gamma) {
  check_state(s);
  double E = 0.0;
  for (const auto& m : s.modes) {
    double q;
    if (m.kappa == 0.0) {
      q = m.h.squaredNorm();
    } else {
      const CMatrix P = bgk_P(s.d, m.kappa, alpha, s.N);
      q = m.h.dot(P * m.h).real();
    }
    E += m.multiplicity * std::pow(1.0 + m.kappa * m.kappa, gamma) * q;
  }
  return E;
}

double h_norm(const ModalState& s) {
  check_state(s);
  double sum = 0.0;
  for (const auto& m : s.modes) sum += m.multiplicity * m.h.squaredNorm();
  return std::sqrt(sum);
}

double l1_distance_1d(const ModalState& s, int nx, int nv) {
  check_state(s);
  require(s.d == 1, "the L1 distance is only reconstructed in 1D");
  require(nx >= 1 && nv >= 2, "quadrature resolutions must be positive");
  const Quadrature q = gauss_hermite(nv);
  const int N = s.N;
  // Velocity profiles He_m(v_j)/sqrt(m!) at the quadrature nodes.
  Matrix phi(nv, N);
  for (int j = 0; j < nv; ++j) phi.row(j) = hermite_polynomials_normalized(N - 1, q.nodes(j)).transpose();
  // Spatial profiles H(x_i, m) = sum_k h_{k,m} e^{2 pi i k x_i}.
  Matrix H = Matrix::Zero(nx, N);
  for (int i = 0; i < nx; ++i) {
    const double x = static_cast<double>(i) / nx;
    CVector acc = CVector::Zero(N);
    for (const auto& m : s.modes) acc += std::polar(1.0, 2.0 * std::numbers::pi * m.kappa * x) * m.h;
    H.row(i) = acc.real().transpose();
  }
  const Matrix vals = H * phi.transpose();  // nx x nv
  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return norm * (vals.cwiseAbs() * q.weights).sum() / nx;
}

double bump_coefficient(double eps, int k) {
  require(eps > 0.0 && eps <= 1.0, "eps must lie in (0, 1]");
  if (k == 0) return 1.0;
  const double pi = std::numbers::pi;
  const double a = pi * std::abs(k) * eps;
  if (std::abs(a - pi) < 1e-9) return 0.5;
  return std::sin(a) * pi * pi / (a * (pi * pi - a * a));
}

ModalState concentrated_initial_data(double eps, int kmax, int N, double L) {
  require(eps > 0.0 && eps <= 1.0, "eps must lie in (0, 1]");
  require(kmax >= 1, "kmax must be positive");
  require(N >= min_block_size(1), "truncation below the minimum block size");
  require(L > 0.0, "L must be positive");
  ModalState s;
  s.d = 1;
  s.L = L;
  s.basis = Variant::tensor;
  s.N = N;
  for (int k = -kmax; k <= kmax; ++k) {
    Mode m;
    m.kappa = k;
    m.h = CVector::Zero(N);
    // eps = 1 is the uniform profile: only the mean survives.
    if (k != 0 && eps < 1.0) m.h(0) = bump_coefficient(eps, k);
    s.modes.push_back(std::move(m));
  }
  if (eps < 1.0) {
    // |chi_k| <= pi^2 / (a (a^2 - pi^2)) with a = pi k eps once a > pi.
    const double pi = std::numbers::pi;
    auto bound = [&](double k) {
      const double a = pi * k * eps;
      return a > pi ? pi * pi / (a * (a * a - pi * pi)) : 1.0;
    };
    double tail = 0.0;
    const int K = kmax + 20000;
    for (int k = kmax + 1; k <= K; ++k) tail += 2.0 * std::pow(bound(k), 2);
    // Remainder beyond K: bound^2 <= c / k^6 with c = (pi^2/(pi eps)^3)^2 * 2 (a >= 2 pi).
    const double c = 2.0 * std::pow(pi * pi / std::pow(pi * eps, 3) * 4.0 / 3.0, 2);
    tail += c / (5.0 * std::pow(static_cast<double>(K), 5));
    s.tail_bound = tail;
  }
  return s;
}

ModalState random_initial_data(int d, int kmax, int N, double L, unsigned seed) {
  require(d == 2 || d == 3, "random_initial_data is for d = 2 or 3");
  require(kmax >= 1, "kmax must be positive");
  require(N >= min_block_size(d), "truncation below the minimum block size");
  ModalState s;
  s.d = d;
  s.L = L;
  s.basis = Variant::energy;
  s.N = N;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Mode zero;
  zero.kappa = 0.0;
  zero.h = CVector::Zero(N);
  for (int m = kernel_dim(d); m < N; ++m) zero.h(m) = cdouble(g(rng), 0.0) / 4.0;
  s.modes.push_back(std::move(zero));
  for (const auto& mm : mode_moduli(d, kmax)) {
    Mode m;
    m.kappa = mm.kappa;
    m.multiplicity = mm.multiplicity;
    m.h = CVector::Zero(N);
    for (int j = 0; j < N; ++j) m.h(j) = cdouble(g(rng), g(rng)) / ((1.0 + mm.kappa * mm.kappa) * (1.0 + j));
    s.modes.push_back(std::move(m));
  }
  return s;
}

double decay_envelope(double t, double C, double E0, double lambda) {
  require(C > 0.0 && E0 >= 0.0 && lambda > 0.0, "envelope needs C > 0, E0 >= 0, lambda > 0");
  return std::min(2.0, std::sqrt(C * E0) * std::exp(-0.5 * lambda * t));
}

double t_init(double C, double E0, double lambda) {
  require(C > 0.0 && E0 > 0.0 && lambda > 0.0, "t_init needs C, E0, lambda > 0");
  return (std::log(C) + std::log(E0) - 2.0 * std::log(2.0)) / lambda;
}

Trajectory simulate(const SimConfig& cfg) {
  require_dim(cfg.d);
  require(cfg.L > 0.0, "L must be positive");
  require(cfg.dt > 0.0 && cfg.tmax >= 0.0, "need dt > 0 and tmax >= 0");
  require(cfg.gamma >= 0.0, "gamma must be non-negative");
  Trajectory tr;
  tr.config = cfg;
  const DecayCertificate cert = certify(cfg.d, cfg.L, 0);
  tr.alpha = cfg.alpha >= 0.0 ? cfg.alpha : cert.alpha_star;
  require(tr.alpha < 1.0 / p_spread(cfg.d), "alpha outside the range where P is positive definite");
  tr.mu = cert.mu;
  tr.lambda = cert.lambda;
  tr.C_d = 1.0 / (1.0 - p_spread(cfg.d) * tr.alpha);

  ModalState s = cfg.d == 1 ? concentrated_initial_data(cfg.eps, cfg.kmax, cfg.N, cfg.L)
                            : random_initial_data(cfg.d, cfg.kmax, cfg.N, cfg.L, cfg.seed);
  tr.tail_bound = s.tail_bound;
  tr.E0 = entropy(s, tr.alpha, cfg.gamma);
  tr.t_init = tr.E0 > 0.0 ? t_init(tr.C_d, tr.E0, tr.lambda) : 0.0;
  Propagator prop(s.d, s.basis, s.N, s.L);
  const int steps = static_cast<int>(std::llround(cfg.tmax / cfg.dt));
  for (int i = 0; i <= steps; ++i) {
    if (i > 0) s = evolve(s, cfg.dt, prop);
    TrajectoryRow r;
    r.t = i * cfg.dt;
    r.entropy = entropy(s, tr.alpha, cfg.gamma);
    r.h_norm = h_norm(s);
    r.l1 = cfg.d == 1 ? l1_distance_1d(s, cfg.nx, cfg.nv) : std::numeric_limits<double>::quiet_NaN();
    r.envelope = tr.E0 > 0.0 ? decay_envelope(r.t, tr.C_d, tr.E0, tr.lambda) : 0.0;
    tr.rows.push_back(r);
  }
  return tr;
}

std::string to_csv(const Trajectory& tr) {
  std::ostringstream os;
  os << "t,entropy,h_norm,l1,envelope\n";
  for (const auto& r : tr.rows) {
    os << csv_number(r.t) << ',' << csv_number(r.entropy) << ',' << csv_number(r.h_norm) << ','
       << (std::isnan(r.l1) ? std::string() : csv_number(r.l1)) << ',' << csv_number(r.envelope) << '\n';
  }
  return os.str();
}

nlohmann::json manifest(const Trajectory& tr) {
  const auto& c = tr.config;
  return {{"config",
           {{"d", c.d},
            {"L", c.L},
            {"epsilon", c.eps},
            {"kmax", c.kmax},
            {"trunc", c.N},
            {"tmax", c.tmax},
            {"dt", c.dt},
            {"gamma", c.gamma},
            {"nx", c.nx},
            {"nv", c.nv},
            {"seed", c.seed}}},
          {"alpha", tr.alpha},
          {"mu", tr.mu},
          {"lambda", tr.lambda},
          {"C_d", tr.C_d},
          {"E0", tr.E0},
          {"t_init", tr.t_init},
          {"tail_bound", tr.tail_bound},
          {"samples", tr.rows.size()}};
}

}  // namespace hypocert
