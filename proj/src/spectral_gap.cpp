#include "hypocert/spectral_gap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>

#include "hypocert/hermite_basis.hpp"
#include "hypocert/io.hpp"
#include "hypocert/operator_assembly.hpp"
#include "parallel.hpp"

namespace hypocert {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Diagonal similarity D^{-1} A D with power-of-two entries, so that row and
// column norms become comparable. No permutations.
void balance(CMatrix& A) {
  const Eigen::Index n = A.rows();
  constexpr double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(A(j, i));
        r += std::abs(A(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        A.row(i) /= f;
        A.col(i) *= f;
      }
    }
  }
}

void hessenberg(CMatrix& H) {
  const Eigen::Index n = H.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    CVector x = H.block(k + 1, k, m, 1);
    const double xnorm = x.norm();
    if (xnorm == 0.0) continue;
    const cdouble phase = std::abs(x(0)) == 0.0 ? cdouble(1.0) : x(0) / std::abs(x(0));
    const cdouble alpha = -phase * xnorm;
    CVector v = x;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    // H <- Q H Q with Q = I - 2 v v^*.
    auto rows = H.bottomRows(m);
    Eigen::RowVectorXcd w = v.adjoint() * rows;
    rows.noalias() -= 2.0 * v * w;
    auto cols = H.rightCols(m);
    CVector u = cols * v;
    cols.noalias() -= 2.0 * u * v.adjoint();
    H.block(k + 2, k, m - 1, 1).setZero();
  }
}

struct Givens {
  double c;
  cdouble s;
};

// G = [[c, s], [-conj(s), c]] maps (a, b) to (r, 0).
Givens make_givens(cdouble a, cdouble b) {
  const double aa = std::abs(a), bb = std::abs(b);
  if (bb == 0.0) return {1.0, 0.0};
  if (aa == 0.0) return {0.0, 1.0};
  const double r = std::hypot(aa, bb);
  return {aa / r, (a / aa) * std::conj(b) / r};
}

cdouble wilkinson_shift(const CMatrix& H, Eigen::Index hi) {
  const cdouble a = H(hi - 1, hi - 1), b = H(hi - 1, hi), c = H(hi, hi - 1), d = H(hi, hi);
  const cdouble half = 0.5 * (a - d);
  const cdouble disc = std::sqrt(half * half + b * c);
  const cdouble m1 = 0.5 * (a + d) + disc, m2 = 0.5 * (a + d) - disc;
  return std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
}

}  // namespace

double eigen_backward_error(const CMatrix& M, cdouble lambda) {
  const Eigen::Index n = M.rows();
  const double norm = M.norm();
  if (norm == 0.0) return 0.0;
  CMatrix A = M - lambda * CMatrix::Identity(n, n);
  // A tiny diagonal nudge keeps the LU factorisation finite when lambda is
  // accurate to the last bit.
  A.diagonal().array() += cdouble(norm * 1e-14, 0.0);
  Eigen::PartialPivLU<CMatrix> lu(A);
  CVector x = CVector::Ones(n) / std::sqrt(static_cast<double>(n));
  for (int it = 0; it < 3; ++it) {
    x = lu.solve(x);
    const double xn = x.norm();
    if (!std::isfinite(xn) || xn == 0.0) return std::numeric_limits<double>::infinity();
    x /= xn;
  }
  return (M * x - lambda * x).norm() / norm;
}

EigenResult complex_eigenvalues(const CMatrix& M, double tol, int residual_samples) {
  require(M.rows() == M.cols(), "eigenvalues need a square matrix");
  const Eigen::Index n = M.rows();
  require(n <= 2000, "matrix too large for the dense eigensolver");
  require(M.allFinite(), "matrix has non-finite entries");
  EigenResult res;
  res.values.resize(n);
  if (n == 0) return res;

  CMatrix H = M;
  balance(H);
  hessenberg(H);

  const int cap = 40 * static_cast<int>(std::max<Eigen::Index>(n, 1));
  Eigen::Index hi = n - 1;
  int since_deflation = 0;
  std::vector<cdouble> found;
  std::vector<Givens> rot(n);
  while (hi >= 0) {
    if (hi == 0) {
      res.values(0) = H(0, 0);
      break;
    }
    Eigen::Index l = hi;
    for (; l > 0; --l) {
      double scale = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
      if (scale == 0.0) scale = H.block(0, 0, hi + 1, hi + 1).cwiseAbs().maxCoeff();
      if (std::abs(H(l, l - 1)) <= kEps * scale) {
        H(l, l - 1) = 0.0;
        break;
      }
    }
    if (l == hi) {
      res.values(hi) = H(hi, hi);
      found.push_back(H(hi, hi));
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++res.iterations > cap) {
      std::ostringstream os;
      os << "QR iteration did not converge after " << cap << " sweeps (" << found.size() << " of " << n
         << " eigenvalues found)";
      throw ConvergenceError(os.str(), found);
    }
    ++since_deflation;
    cdouble mu;
    if (since_deflation % 11 == 0)
      mu = H(hi, hi) + 0.75 * std::abs(H(hi, hi - 1));  // exceptional shift
    else
      mu = wilkinson_shift(H, hi);

    // Explicit shifted QR step on the active block H[l..hi, l..hi].
    for (Eigen::Index k = l; k <= hi; ++k) H(k, k) -= mu;
    for (Eigen::Index k = l; k < hi; ++k) {
      const Givens g = make_givens(H(k, k), H(k + 1, k));
      rot[k] = g;
      for (Eigen::Index j = k; j <= hi; ++j) {
        const cdouble a = H(k, j), b = H(k + 1, j);
        H(k, j) = g.c * a + g.s * b;
        H(k + 1, j) = -std::conj(g.s) * a + g.c * b;
      }
    }
    for (Eigen::Index k = l; k < hi; ++k) {
      const Givens& g = rot[k];
      const Eigen::Index top = std::min(k + 2, hi);
      for (Eigen::Index i = l; i <= top; ++i) {
        const cdouble a = H(i, k), b = H(i, k + 1);
        H(i, k) = g.c * a + std::conj(g.s) * b;
        H(i, k + 1) = -g.s * a + g.c * b;
      }
    }
    for (Eigen::Index k = l; k <= hi; ++k) H(k, k) += mu;
  }

  std::vector<cdouble> v(res.values.data(), res.values.data() + n);
  std::sort(v.begin(), v.end(), [](cdouble a, cdouble b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  for (Eigen::Index i = 0; i < n; ++i) res.values(i) = v[i];

  const int samples = static_cast<int>(std::min<Eigen::Index>(residual_samples, n));
  for (int s = 0; s < samples; ++s) {
    const Eigen::Index idx = samples == 1 ? 0 : (s * (n - 1)) / (samples - 1);
    res.max_backward_error = std::max(res.max_backward_error, eigen_backward_error(M, res.values(idx)));
  }
  if (res.max_backward_error > tol) {
    std::ostringstream os;
    os << "eigenvalue residual check failed: backward error " << res.max_backward_error << " > " << tol;
    throw ConvergenceError(os.str(), v);
  }
  return res;
}

GapReport spectral_gap(int d, double L, const std::vector<double>& kappas, int N) {
  require_dim(d);
  require(N >= min_block_size(d), "truncation below the minimum block size");
  const Variant variant = d == 1 ? Variant::tensor : Variant::energy;
  const OperatorPair pair = OperatorPair::bgk(d, variant, N, L);
  GapReport rep;
  rep.d = d;
  rep.L = L;
  rep.entries.resize(kappas.size());
  std::vector<double> backward(kappas.size(), 0.0);
  detail::parallel_for(kappas.size(), [&](std::size_t i) {
    const double kappa = kappas[i];
    require(kappa >= 0.0, "mode modulus must be non-negative");
    if (kappa == 0.0) {
      rep.entries[i] = {0.0, N, 1.0};
      return;
    }
    const EigenResult er = complex_eigenvalues(modal_generator(pair, kappa).C);
    rep.entries[i] = {kappa, N, er.values(0).real()};
    backward[i] = er.max_backward_error;
  });
  rep.overall_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    rep.max_backward_error = std::max(rep.max_backward_error, backward[i]);
    if (rep.entries[i].gap < rep.overall_gap) {
      rep.overall_gap = rep.entries[i].gap;
      rep.argmin_kappa = rep.entries[i].kappa;
    }
  }
  return rep;
}

ConvergenceStudy convergence_study(int d, double L, double kappa, const std::vector<int>& Ns) {
  ConvergenceStudy st;
  st.entries.resize(Ns.size());
  detail::parallel_for(Ns.size(), [&](std::size_t i) {
    st.entries[i] = spectral_gap(d, L, {kappa}, Ns[i]).entries.front();
  });
  for (std::size_t i = 1; i < st.entries.size(); ++i) {
    const double diff = st.entries[i].gap - st.entries[i - 1].gap;
    st.cauchy_diffs.push_back(std::abs(diff));
    if (diff < -1e-12) st.monotone_nondecreasing = false;
  }
  return st;
}

nlohmann::json to_json(const GapReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) entries.push_back({{"kappa", e.kappa}, {"N", e.N}, {"gap", e.gap}});
  return {{"d", r.d},
          {"L", r.L},
          {"entries", entries},
          {"overall_gap", r.overall_gap},
          {"argmin_kappa", r.argmin_kappa},
          {"max_backward_error", r.max_backward_error}};
}

std::string to_csv(const GapReport& r) {
  std::ostringstream os;
  os << "kappa,N,gap\n";
  for (const auto& e : r.entries) os << csv_number(e.kappa) << ',' << e.N << ',' << csv_number(e.gap) << '\n';
  return os.str();
}

}  // namespace hypocert
