#pragma once

#include <array>
#include <functional>
#include <vector>

namespace duosim::numeric {

/// Real roots of c[0] x^3 + c[1] x^2 + c[2] x + c[3] = 0 in ascending order.
///
/// Uses the trigonometric form when three real roots exist and Cardano's
/// formula otherwise, then polishes each root with a few Newton steps.
/// Falls back to the quadratic or linear case when leading coefficients
/// vanish. Repeated roots are reported once.
std::vector<double> cubic_real_roots(const std::array<double, 4>& c);

/// Horner evaluation of the cubic above.
double cubic_value(const std::array<double, 4>& c, double x) noexcept;

struct ScalarMaximum {
    double argmax = 0.0;
    double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
/// Stops once the bracket is narrower than tol. The endpoints are also
/// evaluated so boundary maxima are returned exactly.
ScalarMaximum golden_section_max(const std::function<double(double)>& f, double lo,
                                 double hi, double tol);

}  // namespace duosim::numeric
