#include "riskmdp/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskmdp {

namespace {
void require_same_length(std::span<const double> v, std::span<const double> w, const char* who) {
    if (v.size() != w.size()) throw std::invalid_argument(std::string(who) + ": length mismatch");
}
}  // namespace

double weighted_norm(std::span<const double> v, std::span<const double> w) {
    require_same_length(v, w, "weighted_norm");
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v[i]) / w[i]);
    return best;
}

double weighted_seminorm(std::span<const double> v, std::span<const double> w, Exec exec) {
    require_same_length(v, w, "weighted_seminorm");
    return exec == Exec::serial ? kernels::seminorm_serial(v, w) : kernels::seminorm_parallel(v, w);
}

CenteringResult seminorm_via_centering(std::span<const double> v, std::span<const double> w, double tol) {
    require_same_length(v, w, "seminorm_via_centering");
    if (!(tol > 0.0)) throw std::invalid_argument("seminorm_via_centering: tol must be positive");
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    if (vmax == 0.0) return {0.0, 0.0};

    auto objective = [&](double c) {
        double best = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) best = std::max(best, std::abs(v[i] + c) / w[i]);
        return best;
    };
    double lo = -2.0 * vmax;
    double hi = 2.0 * vmax;
    // objective is convex and 1-Lipschitz in c (w >= 1), so bracket width bounds the value error
    for (int it = 0; it < 500 && hi - lo > tol; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (objective(m1) <= objective(m2))
            hi = m2;
        else
            lo = m1;
    }
    const double c = 0.5 * (lo + hi);
    return {objective(c), c};
}

std::vector<std::size_t> level_set(std::span<const double> w0, double R) {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < w0.size(); ++x)
        if (w0[x] <= R) out.push_back(x);
    return out;
}

}  // namespace riskmdp
