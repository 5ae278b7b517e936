#include "duosim/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace duosim::numeric {
namespace {

double cubic_derivative(const std::array<double, 4>& c, double x) noexcept {
    return (3.0 * c[0] * x + 2.0 * c[1]) * x + c[2];
}

double polish(const std::array<double, 4>& c, double x) {
    for (int i = 0; i < 8; ++i) {
        const double fx = cubic_value(c, x);
        const double dfx = cubic_derivative(c, x);
        if (fx == 0.0 || dfx == 0.0) break;
        const double next = x - fx / dfx;
        if (!std::isfinite(next)) break;
        // Only accept the step if it improves the residual; near a double
        // root Newton can wander.
        if (std::abs(cubic_value(c, next)) >= std::abs(fx)) break;
        x = next;
    }
    return x;
}

std::vector<double> quadratic_roots(double a, double b, double c) {
    if (a == 0.0) {
        if (b == 0.0) return {};
        return {-c / b};
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return {};
    if (disc == 0.0) return {-b / (2.0 * a)};
    // Numerically stable pair.
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    std::vector<double> r{q / a, c / q};
    std::sort(r.begin(), r.end());
    return r;
}

}  // namespace

double cubic_value(const std::array<double, 4>& c, double x) noexcept {
    return ((c[0] * x + c[1]) * x + c[2]) * x + c[3];
}

std::vector<double> cubic_real_roots(const std::array<double, 4>& c) {
    const double scale = std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]), std::abs(c[3])});
    if (scale == 0.0) throw std::invalid_argument("cubic_real_roots: all coefficients are zero");
    if (std::abs(c[0]) <= 1e-14 * scale) return quadratic_roots(c[1], c[2], c[3]);

    // Depressed cubic t^3 + p t + q with x = t - b/3.
    const double b = c[1] / c[0];
    const double cc = c[2] / c[0];
    const double d = c[3] / c[0];
    const double shift = b / 3.0;
    const double p = cc - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
    const double disc = q * q / 4.0 + p * p * p / 27.0;

    std::vector<double> roots;
    if (std::abs(p) < 1e-300 && std::abs(q) < 1e-300) {
        roots.push_back(-shift);
    } else if (disc > 0.0) {
        const double s = std::sqrt(disc);
        roots.push_back(std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s) - shift);
    } else {
        // Three real roots (two may coincide).
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - shift);
        }
    }

    for (double& r : roots) r = polish(c, r);
    std::sort(roots.begin(), roots.end());
    const double merge = 1e-12 * std::max(1.0, std::abs(shift));
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [merge](double a, double bb) { return std::abs(a - bb) <= merge; }),
                roots.end());
    return roots;
}

ScalarMaximum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double tol) {
    if (hi < lo) throw std::invalid_argument("golden_section_max: empty interval");
    if (!(tol > 0.0)) throw std::invalid_argument("golden_section_max: tol must be positive");

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }

    ScalarMaximum best{0.5 * (a + b), f(0.5 * (a + b))};
    for (double x : {lo, hi}) {
        const double fx = f(x);
        if (fx > best.value) best = {x, fx};
    }
    return best;
}

}  // namespace duosim::numeric
