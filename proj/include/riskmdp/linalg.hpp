#pragma once

#include <vector>

namespace riskmdp::linalg {

using Dense = std::vector<std::vector<double>>;

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws std::runtime_error when a pivot falls below 1e-13 times the largest entry.
std::vector<double> solve(Dense A, std::vector<double> b);

/// Boolean primitivity test: some power of the support pattern is strictly
/// positive. Powers are formed by repeated squaring up to the Wielandt bound
/// (n-1)^2 + 1.
bool is_primitive(const Dense& P);

}  // namespace riskmdp::linalg
