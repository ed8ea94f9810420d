#include "hypocert/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace hypocert {

nlohmann::json matrix_to_json(const CMatrix& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back({M(i, j).real(), M(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return {{"n", M.rows()}, {"m", M.cols()}, {"rows", std::move(rows)}};
}

CMatrix matrix_from_json(const nlohmann::json& j) {
  const auto& rows = j.at("rows");
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index m = n == 0 ? 0 : static_cast<Eigen::Index>(rows[0].size());
  CMatrix M(n, m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < m; ++k) M(i, k) = {rows[i][k][0].get<double>(), rows[i][k][1].get<double>()};
  return M;
}

std::string matrix_to_triplets(const CMatrix& M, double drop) {
  std::ostringstream os;
  os.precision(17);
  Eigen::Index nnz = 0;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) nnz += std::abs(M(i, j)) > drop;
  os << "%%MatrixMarket matrix coordinate complex general\n";
  os << M.rows() << ' ' << M.cols() << ' ' << nnz << '\n';
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (std::abs(M(i, j)) > drop) os << i + 1 << ' ' << j + 1 << ' ' << M(i, j).real() << ' ' << M(i, j).imag() << '\n';
  return os.str();
}

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

}  // namespace hypocert
