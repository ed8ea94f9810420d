#pragma once

#include <string>

#include <json.hpp>

#include "hypocert/types.hpp"

namespace hypocert {

/// {n, rows: [[[re, im], ...], ...]}
nlohmann::json matrix_to_json(const CMatrix& M);
CMatrix matrix_from_json(const nlohmann::json& j);

/// MatrixMarket-style coordinate listing ("i j re im", 1-based) of the
/// entries with modulus above `drop`.
std::string matrix_to_triplets(const CMatrix& M, double drop = 0.0);

/// Fixed 15-significant-digit formatting used for every CSV cell.
std::string csv_number(double x);

}  // namespace hypocert
