#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "duosim/errors.hpp"
#include "duosim/losses.hpp"

namespace duosim {
namespace {

double quad_form(const Eigen::MatrixXd& a, const ModelParams& x, const ModelParams& c) {
    const ModelParams d = x - c;
    return 0.5 * d.dot(a * d);
}

double max_eigenvalue(const Eigen::MatrixXd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

}  // namespace

QuadraticPair::QuadraticPair(Eigen::MatrixXd a_low, ModelParams c_low, double m_low,
                             Eigen::MatrixXd a_high, ModelParams c_high, double m_high)
    : a_low_(std::move(a_low)),
      a_high_(std::move(a_high)),
      c_low_(std::move(c_low)),
      c_high_(std::move(c_high)),
      m_low_(m_low),
      m_high_(m_high) {
    const auto n = c_low_.size();
    if (n < 1 || c_high_.size() != n || a_low_.rows() != n || a_low_.cols() != n ||
        a_high_.rows() != n || a_high_.cols() != n) {
        throw std::invalid_argument("QuadraticPair: inconsistent dimensions");
    }
    const Eigen::MatrixXd sum = a_low_ + a_high_;
    Eigen::LLT<Eigen::MatrixXd> llt(sum);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("QuadraticPair: A_l + A_h must be positive definite");
    }
    optimum_ = llt.solve(a_low_ * c_low_ + a_high_ * c_high_);
    optimum_value_ = average(optimum_);
    smoothness_ = max_eigenvalue(0.5 * sum);
    smooth_low_ = max_eigenvalue(a_low_);
    smooth_high_ = max_eigenvalue(a_high_);
}

double QuadraticPair::value(const ModelParams& x, Owner owner) const {
    return owner == Owner::low ? quad_form(a_low_, x, c_low_) + m_low_
                               : quad_form(a_high_, x, c_high_) + m_high_;
}

ModelParams QuadraticPair::gradient(const ModelParams& x, Owner owner) const {
    return owner == Owner::low ? ModelParams(a_low_ * (x - c_low_))
                               : ModelParams(a_high_ * (x - c_high_));
}

std::shared_ptr<const QuadraticPair> make_complementary_quadratics(int dim, double target,
                                                                   double asymmetry,
                                                                   std::uint64_t seed,
                                                                   const QuadraticGenOptions& opts) {
    if (dim < 1) throw std::invalid_argument("make_complementary_quadratics: dim must be >= 1");
    if (!(target > 0.0 && target < 1.0)) {
        throw std::invalid_argument("make_complementary_quadratics: target must lie in (0,1)");
    }
    if (asymmetry < 0.0) {
        throw std::invalid_argument("make_complementary_quadratics: asymmetry must be >= 0");
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(dim);
    const Eigen::Index half = n / 2;

    Eigen::MatrixXd g(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
    const Eigen::MatrixXd rot = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();

    // Spectrum in rotated coordinates: strong block, optional middle, weak block.
    std::uniform_real_distribution<double> strong(opts.strong_min, opts.strong_max);
    std::uniform_real_distribution<double> weak(opts.weak_min, opts.weak_max);
    Eigen::VectorXd lam(n);
    for (Eigen::Index i = 0; i < half; ++i) lam(i) = strong(rng);
    if (n % 2) lam(half) = std::sqrt(opts.strong_min * opts.weak_max);
    for (Eigen::Index i = n - half; i < n; ++i) lam(i) = weak(rng);

    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) u(i) = normal(rng);
    u.head(half) *= opts.center_stretch;
    if (n % 2) u(half) = (n == 1) ? 1.0 : 0.0;

    // The high firm's problem is the low firm's seen through x -> -reverse(x)
    // in rotated coordinates.
    const Eigen::VectorXd lam_rev = lam.reverse();
    const Eigen::VectorXd u_mirror = -u.reverse();
    const Eigen::MatrixXd a_low0 = rot * lam.asDiagonal() * rot.transpose();
    const Eigen::MatrixXd a_high0 = rot * lam_rev.asDiagonal() * rot.transpose();
    const ModelParams c_low = rot * u;
    const ModelParams c_high = rot * u_mirror;

    const double cross_low = quad_form(a_low0, c_high, c_low);   // f(c_h; low) before scaling
    const double cross_high = quad_form(a_high0, c_low, c_high);  // f(c_l; high) before scaling
    const double ceiling = 1.0 - opts.cross_margin;

    // For a base offset mu, scale each curvature so the cross losses sit at
    // the ceiling, then report the average optimum minus its target.
    auto build = [&](double mu) {
        const double s_low = (ceiling - mu - asymmetry) / cross_low;
        const double s_high = (ceiling - mu) / cross_high;
        return std::make_shared<const QuadraticPair>(s_low * a_low0, c_low, mu + asymmetry,
                                                     s_high * a_high0, c_high, mu);
    };
    auto excess = [&](double mu) { return build(mu)->optimum_value() - (1.0 - target); };

    const double hi = (ceiling - asymmetry) * (1.0 - 1e-9);
    if (!(hi > 0.0) || !(cross_low > 0.0) || !(cross_high > 0.0)) {
        throw InvalidTarget("make_complementary_quadratics: asymmetry leaves no room below 1");
    }
    const double f_lo = excess(0.0);
    const double f_hi = excess(hi);
    if (f_lo > 0.0 || f_hi < 0.0) {
        std::ostringstream os;
        os << "make_complementary_quadratics: optimum 1 - " << target
           << " unreachable with losses in [0,1] (dim " << dim << ", asymmetry " << asymmetry
           << ", seed " << seed << ")";
        throw InvalidTarget(os.str());
    }
    double mu = 0.0;
    if (f_lo == 0.0) {
        mu = 0.0;
    } else if (f_hi == 0.0) {
        mu = hi;
    } else {
        std::uintmax_t iters = 200;
        const auto bracket = boost::math::tools::toms748_solve(
            excess, 0.0, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(52), iters);
        mu = 0.5 * (bracket.first + bracket.second);
    }

    auto model = build(mu);
    // Pin the optimum value exactly; the residual from root-finding is at
    // rounding level and moving it into both offsets leaves everything else intact.
    const double residual = model->optimum_value() - (1.0 - target);
    return std::make_shared<const QuadraticPair>(
        model->curvature(Owner::low), c_low, model->offset(Owner::low) - residual,
        model->curvature(Owner::high), c_high, model->offset(Owner::high) - residual);
}

}  // namespace duosim
