#pragma once

#include <limits>
#include <span>
#include <vector>

#include "riskmdp/kernels.hpp"

namespace riskmdp {

/// max_x |v(x)| / w(x). Throws on length mismatch.
double weighted_norm(std::span<const double> v, std::span<const double> w);

/// max_{x != y} |v(x) - v(y)| / (w(x) + w(y)); 0 for a single state.
///
/// Exhaustive O(n^2) pair scan. This is the known hot spot of the solver
/// stopping rule and the certificate checks; the parallel kernel splits the
/// outer loop across threads.
double weighted_seminorm(std::span<const double> v, std::span<const double> w, Exec exec = Exec::parallel);

struct CenteringResult {
    double value = 0.0;
    double c_star = 0.0;
};

/// Minimizes c -> weighted_norm(v + c, w) by ternary search on
/// [-2 max|v|, 2 max|v|]. The minimum equals the weighted seminorm.
CenteringResult seminorm_via_centering(std::span<const double> v, std::span<const double> w, double tol);

/// States with w0[x] <= R (R may be +infinity).
std::vector<std::size_t> level_set(std::span<const double> w0, double R);

}  // namespace riskmdp
