#include <algorithm>
#include <cmath>
#include <random>

#include "duosim/errors.hpp"
#include "duosim/losses.hpp"

namespace duosim {
namespace {

// log(1 + exp(-t)) without overflow.
double softplus_neg(double t) { return std::log1p(std::exp(-std::abs(t))) + std::max(-t, 0.0); }

// 1 / (1 + exp(t))
double sigmoid_neg(double t) {
    if (t >= 0.0) {
        const double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

double signed_label(double y) { return y > 0.5 ? 1.0 : -1.0; }

}  // namespace

LogisticPair::LogisticPair(Dataset low, Dataset high, double ridge, double normalizer)
    : low_(std::move(low)), high_(std::move(high)), ridge_(ridge) {
    for (const Dataset* d : {&low_, &high_}) {
        if (d->features.rows() < 1 || d->features.rows() != d->labels.size()) {
            throw std::invalid_argument("LogisticPair: empty dataset or label count mismatch");
        }
    }
    if (low_.features.cols() != high_.features.cols() || low_.features.cols() < 1) {
        throw std::invalid_argument("LogisticPair: datasets must share a positive dimension");
    }
    if (!(ridge > 0.0)) throw std::invalid_argument("LogisticPair: ridge must be positive");

    min_low_ = newton(true, false);
    min_high_ = newton(false, true);
    optimum_ = newton(true, true);

    if (normalizer > 0.0) {
        normalizer_ = normalizer;
    } else {
        double worst = std::log(2.0);
        for (const ModelParams* x : {&min_low_, &min_high_, &optimum_}) {
            worst = std::max({worst, raw_value(*x, low_), raw_value(*x, high_)});
        }
        normalizer_ = std::max(1.0, 1.25 * worst);
    }

    auto max_row_norm_sq = [](const Dataset& d) {
        return d.features.rowwise().squaredNorm().maxCoeff();
    };
    smooth_low_ = (max_row_norm_sq(low_) / 4.0 + ridge_) / normalizer_;
    smooth_high_ = (max_row_norm_sq(high_) / 4.0 + ridge_) / normalizer_;
    optimum_value_ = average(optimum_);
}

double LogisticPair::raw_value(const ModelParams& x, const Dataset& d) const {
    const Eigen::VectorXd margins = d.features * x;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
        sum += softplus_neg(signed_label(d.labels(i)) * margins(i));
    }
    return sum / static_cast<double>(margins.size()) + 0.5 * ridge_ * x.squaredNorm();
}

ModelParams LogisticPair::raw_gradient(const ModelParams& x, const Dataset& d) const {
    const Eigen::VectorXd margins = d.features * x;
    Eigen::VectorXd w(margins.size());
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
        const double s = signed_label(d.labels(i));
        w(i) = -s * sigmoid_neg(s * margins(i));
    }
    return d.features.transpose() * w / static_cast<double>(margins.size()) + ridge_ * x;
}

Eigen::MatrixXd LogisticPair::raw_hessian(const ModelParams& x, const Dataset& d) const {
    const Eigen::VectorXd margins = d.features * x;
    Eigen::VectorXd w(margins.size());
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
        const double p = sigmoid_neg(margins(i));
        w(i) = p * (1.0 - p);
    }
    const auto n = static_cast<double>(margins.size());
    Eigen::MatrixXd h = d.features.transpose() * w.asDiagonal() * d.features / n;
    h.diagonal().array() += ridge_;
    return h;
}

ModelParams LogisticPair::newton(bool use_low, bool use_high) const {
    const double k = (use_low && use_high) ? 0.5 : 1.0;
    auto f = [&](const ModelParams& x) {
        return k * ((use_low ? raw_value(x, low_) : 0.0) + (use_high ? raw_value(x, high_) : 0.0));
    };
    ModelParams x = ModelParams::Zero(low_.features.cols());
    for (int it = 0; it < 100; ++it) {
        ModelParams g = ModelParams::Zero(x.size());
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(x.size(), x.size());
        if (use_low) {
            g += raw_gradient(x, low_);
            h += raw_hessian(x, low_);
        }
        if (use_high) {
            g += raw_gradient(x, high_);
            h += raw_hessian(x, high_);
        }
        g *= k;
        h *= k;
        if (g.norm() < 1e-13) break;
        const ModelParams step = h.llt().solve(g);
        // Backtracking keeps the iteration monotone far from the optimum.
        double t = 1.0;
        const double fx = f(x);
        while (t > 1e-10 && f(x - t * step) > fx - 0.25 * t * g.dot(step)) t *= 0.5;
        x -= t * step;
    }
    return x;
}

double LogisticPair::value(const ModelParams& x, Owner owner) const {
    return raw_value(x, data(owner)) / normalizer_;
}

ModelParams LogisticPair::gradient(const ModelParams& x, Owner owner) const {
    return raw_gradient(x, data(owner)) / normalizer_;
}

std::shared_ptr<const LogisticPair> make_synthetic_logistic(int n_per_firm, int dim, double skew,
                                                            std::uint64_t seed, double ridge) {
    if (n_per_firm < 10) throw std::invalid_argument("make_synthetic_logistic: n_per_firm >= 10");
    if (dim < 1) throw std::invalid_argument("make_synthetic_logistic: dim must be >= 1");
    if (!(skew >= 0.0 && skew <= 1.0)) {
        throw std::invalid_argument("make_synthetic_logistic: skew must lie in [0,1]");
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd w(dim);
    for (int i = 0; i < dim; ++i) w(i) = normal(rng);
    w.normalize();
    const double separation = 1.0;

    auto draw = [&](double class0_fraction) {
        LogisticPair::Dataset d;
        d.features.resize(n_per_firm, dim);
        d.labels.resize(n_per_firm);
        const int n0 = static_cast<int>(std::lround(class0_fraction * n_per_firm));
        for (int i = 0; i < n_per_firm; ++i) {
            const double y = i < n0 ? 0.0 : 1.0;
            d.labels(i) = y;
            for (int j = 0; j < dim; ++j) {
                d.features(i, j) = (y > 0.5 ? 1.0 : -1.0) * separation * w(j) + normal(rng);
            }
        }
        return d;
    };
    LogisticPair::Dataset a = draw(skew);
    LogisticPair::Dataset b = draw(1.0 - skew);

    auto model = std::make_shared<const LogisticPair>(a, b, ridge);
    const double qa = model->quality(model->own_minimizer(Owner::low));
    const double qb = model->quality(model->own_minimizer(Owner::high));
    if (qa == qb) throw InvalidTarget("make_synthetic_logistic: firms tie in initial quality");
    if (qa > qb) model = std::make_shared<const LogisticPair>(b, a, ridge);
    return model;
}

}  // namespace duosim
