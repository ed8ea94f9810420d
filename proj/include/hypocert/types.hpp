#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hypocert {

using cdouble = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;

/// Hermite basis flavour. `energy` replaces the second-degree block by the
/// S-rotated functions so that the local energy is a basis element.
enum class Variant { tensor, energy };

inline const char* to_string(Variant v) { return v == Variant::tensor ? "tensor" : "energy"; }
Variant variant_from_string(const std::string& s);

/// Raised for invalid arguments (bad dimension, truncation too small, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw UsageError(msg);
}

inline void require_dim(int d) { require(d >= 1 && d <= 3, "dimension must be 1, 2 or 3"); }

}  // namespace hypocert
