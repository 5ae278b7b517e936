#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

double low_revenue(double ql, double qh) {
    if (qh <= 0.0 || ql >= qh) return 0.0;
    const double pl = ql * (qh - ql) / (4.0 * qh - ql);
    return pl * qh / (4.0 * qh - ql);
}

double high_revenue(double ql, double qh) {
    if (qh <= 0.0 || ql >= qh) return 0.0;
    const double ph = 2.0 * qh * (qh - ql) / (4.0 * qh - ql);
    return ph * 2.0 * qh / (4.0 * qh - ql);
}

Split demand_by_choice(double ql, double qh, double pl, double ph) {
    // Payoffs are linear in theta, so the chosen option is constant between
    // the pairwise crossing points.
    std::vector<double> cuts{0.0, 1.0};
    auto add = [&](double t) {
        if (t > 0.0 && t < 1.0) cuts.push_back(t);
    };
    if (ql > 0.0) add(pl / ql);
    if (qh > 0.0) add(ph / qh);
    if (qh > ql) add((ph - pl) / (qh - ql));
    std::sort(cuts.begin(), cuts.end());

    Split d;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        const double width = cuts[i + 1] - cuts[i];
        const double vl = mid * ql - pl;
        const double vh = mid * qh - ph;
        if (vh >= vl && vh > 0.0) d.high += width;
        else if (vl > vh && vl > 0.0) d.low += width;
    }
    return d;
}

namespace {

double argmax_golden(const std::function<double(double)>& f, double lo, double hi) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
        const double x1 = b - r * (b - a), x2 = a + r * (b - a);
        if (f(x1) < f(x2)) a = x1;
        else b = x2;
    }
    return 0.5 * (a + b);
}

}  // namespace

Split prices_by_best_response(double ql, double qh) {
    Split p{0.0, 0.5 * qh};
    for (int it = 0; it < 500; ++it) {
        const double pl = argmax_golden(
            [&](double x) { return x * demand_by_choice(ql, qh, x, p.high).low; }, 0.0, ql);
        const double ph = argmax_golden(
            [&](double x) { return x * demand_by_choice(ql, qh, pl, x).high; }, 0.0, qh);
        const bool done = std::abs(pl - p.low) < 1e-13 && std::abs(ph - p.high) < 1e-13;
        p = {pl, ph};
        if (done) break;
    }
    return p;
}

double central_difference(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

double bound_literal(double a, double b) {
    const double k = (4.0 - a) * (4.0 - a);
    return 4.0 - k / (2.0 * (1.0 - a)) * (b - std::sqrt(b * b - 12.0 * (1.0 - a) / k * b));
}

double revenue_preserving_cap(double ql, double qh, double qh_new) {
    const double keep = high_revenue(ql, qh);
    double lo = 0.0, hi = qh_new;  // high_revenue decreases in q_l
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (high_revenue(mid, qh_new) >= keep ? lo : hi) = mid;
    }
    return lo;
}

double low_revenue_preserving_cap(double ql, double qh, double qh_new) {
    const double keep = low_revenue(ql, qh);
    double lo = 4.0 * qh_new / 7.0, hi = qh_new;  // decreasing past the peak at 4/7
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (low_revenue(mid, qh_new) >= keep ? lo : hi) = mid;
    }
    return lo;
}

NashPoint nash_scan(double ql0, double qh0, double H, double step) {
    const double ul0 = low_revenue(ql0, qh0);
    const double uh0 = high_revenue(ql0, qh0);
    NashPoint best{0.0, -1.0};
    const long n = static_cast<long>(H / step);
    for (long i = 0; i <= n + 1; ++i) {
        const double x = std::min(i * step, H);
        const double a = low_revenue(x, H) - ul0;
        const double b = high_revenue(x, H) - uh0;
        if (a < 0.0 || b < 0.0) continue;
        if (a * b > best.objective) best = {x, a * b};
    }
    return best;
}

double growth_cap_scan(double rho, double db, double b_max) {
    for (double b = 1.0 + db; b <= b_max; b += db) {
        if ((4.0 - 5.0 * rho) * std::log10(b) > bound_literal(rho, b) - rho) return b;
    }
    return b_max;
}

}  // namespace oracle
