#include <cmath>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "duosim/trainer.hpp"

namespace duosim {

double bound_B(double a, double b) {
    if (!(a >= 0.0 && a < 1.0)) throw std::domain_error("bound_B: need 0 <= a < 1");
    if (!(b >= 1.0)) throw std::domain_error("bound_B: need b >= 1");
    const double c = 12.0 * (1.0 - a) / ((4.0 - a) * (4.0 - a));
    const double disc = 1.0 - c / b;
    if (disc < 0.0) throw std::domain_error("bound_B: negative discriminant");
    // 4 - (4-a)^2/(2(1-a)) (b - sqrt(b^2 - c b)) with the difference rationalised.
    return 4.0 - 6.0 / (1.0 + std::sqrt(disc));
}

double growth_cap(double rho, double b_search_max) {
    auto slack = [rho](double b) {
        return bound_B(rho, b) - rho - (4.0 - 5.0 * rho) * std::log10(b);
    };
    // Both sides vanish at b = 1; walk outward until the inequality breaks.
    const double step = 1e-4;
    double prev = 1.0;
    for (double b = 1.0 + step; b <= b_search_max; b += step) {
        const double s = slack(b);
        if (s < 0.0) {
            const double s_prev = slack(prev);
            if (s_prev <= 0.0) return prev;  // broken immediately above 1
            std::uintmax_t iters = 100;
            const auto r = boost::math::tools::toms748_solve(
                slack, prev, b, s_prev, s, boost::math::tools::eps_tolerance<double>(50), iters);
            return r.first;
        }
        prev = b;
    }
    return b_search_max;
}

TildeB compute_tilde_b(double rho_grid_step, double b_search_max) {
    if (!(rho_grid_step > 0.0 && rho_grid_step < 1.0)) {
        throw std::invalid_argument("compute_tilde_b: rho_grid_step must lie in (0,1)");
    }
    if (!(b_search_max > 1.0)) throw std::invalid_argument("compute_tilde_b: b_search_max > 1");

    TildeB best{b_search_max, 0.0};
    const auto n = static_cast<int>(std::floor((1.0 - 1e-12) / rho_grid_step));
    for (int i = 0; i <= n; ++i) {
        const double rho = i * rho_grid_step;
        if (rho >= 1.0) break;
        const double b = growth_cap(rho, b_search_max);
        if (b < best.tilde_b) best = {b, rho};
    }
    return best;
}

}  // namespace duosim
