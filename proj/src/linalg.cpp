#include "riskmdp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace riskmdp::linalg {

std::vector<double> solve(Dense A, std::vector<double> b) {
    const std::size_t n = A.size();
    if (b.size() != n) throw std::invalid_argument("linalg::solve: size mismatch");
    double scale = 0.0;
    for (const auto& row : A) {
        if (row.size() != n) throw std::invalid_argument("linalg::solve: matrix must be square");
        for (double v : row) scale = std::max(scale, std::abs(v));
    }
    if (scale == 0.0) throw std::runtime_error("linalg::solve: zero matrix");

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(A[i][k]) > std::abs(A[piv][k])) piv = i;
        if (std::abs(A[piv][k]) < 1e-13 * scale) throw std::runtime_error("linalg::solve: singular system");
        std::swap(A[k], A[piv]);
        std::swap(b[k], b[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = A[i][k] / A[k][k];
            if (f == 0.0) continue;
            for (std::size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t k = n; k-- > 0;) {
        double s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= A[k][j] * x[j];
        x[k] = s / A[k][k];
    }
    return x;
}

bool is_primitive(const Dense& P) {
    const std::size_t n = P.size();
    if (n == 0) return false;
    using Pattern = std::vector<std::vector<std::uint8_t>>;
    Pattern B(n, std::vector<std::uint8_t>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) B[i][j] = P[i][j] > 0.0;

    const std::uint64_t bound = static_cast<std::uint64_t>(n - 1) * (n - 1) + 1;
    std::uint64_t power = 1;
    auto positive = [&](const Pattern& M) {
        for (const auto& row : M)
            for (auto v : row)
                if (!v) return false;
        return true;
    };
    while (power < bound) {
        Pattern C(n, std::vector<std::uint8_t>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                if (!B[i][k]) continue;
                for (std::size_t j = 0; j < n; ++j) C[i][j] |= B[k][j];
            }
        B = std::move(C);
        power *= 2;
    }
    return positive(B);
}

}  // namespace riskmdp::linalg
