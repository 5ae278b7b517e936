#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <Eigen/Dense>

namespace duosim {

using ModelParams = Eigen::VectorXd;

enum class Owner { low, high };

/// Two convex, L-smooth per-firm losses f(x; low), f(x; high) over a shared
/// parameter space, plus the minimiser of their average.
///
/// Implementations are immutable after construction, so a model can be
/// shared across threads.
class LossModel {
public:
    virtual ~LossModel() = default;

    virtual std::string kind() const = 0;
    virtual int dim() const = 0;

    virtual double value(const ModelParams& x, Owner owner) const = 0;
    virtual ModelParams gradient(const ModelParams& x, Owner owner) const = 0;

    /// Lipschitz constant of the gradient of the average objective.
    virtual double smoothness() const = 0;
    /// Lipschitz constant of one owner's gradient.
    virtual double owner_smoothness(Owner owner) const = 0;

    virtual const ModelParams& optimum() const = 0;
    virtual double optimum_value() const = 0;
    virtual const ModelParams& own_minimizer(Owner owner) const = 0;

    double average(const ModelParams& x) const {
        return 0.5 * (value(x, Owner::low) + value(x, Owner::high));
    }
    ModelParams average_gradient(const ModelParams& x) const {
        return 0.5 * (gradient(x, Owner::low) + gradient(x, Owner::high));
    }
    double quality(const ModelParams& x) const { return 1.0 - average(x); }
};

struct LossAndGrad {
    double loss = 0.0;
    ModelParams grad;
};

LossAndGrad avg_loss_and_grad(const LossModel& m, const ModelParams& x);

/// f(x; i) = 1/2 (x - c_i)^T A_i (x - c_i) + m_i with A_i symmetric PSD and
/// A_l + A_h positive definite.
class QuadraticPair final : public LossModel {
public:
    QuadraticPair(Eigen::MatrixXd a_low, ModelParams c_low, double m_low, Eigen::MatrixXd a_high,
                  ModelParams c_high, double m_high);

    std::string kind() const override { return "quadratic"; }
    int dim() const override { return static_cast<int>(c_low_.size()); }
    double value(const ModelParams& x, Owner owner) const override;
    ModelParams gradient(const ModelParams& x, Owner owner) const override;
    double smoothness() const override { return smoothness_; }
    double owner_smoothness(Owner owner) const override {
        return owner == Owner::low ? smooth_low_ : smooth_high_;
    }
    const ModelParams& optimum() const override { return optimum_; }
    double optimum_value() const override { return optimum_value_; }
    const ModelParams& own_minimizer(Owner owner) const override {
        return owner == Owner::low ? c_low_ : c_high_;
    }

    const Eigen::MatrixXd& curvature(Owner owner) const {
        return owner == Owner::low ? a_low_ : a_high_;
    }
    double offset(Owner owner) const { return owner == Owner::low ? m_low_ : m_high_; }

private:
    Eigen::MatrixXd a_low_, a_high_;
    ModelParams c_low_, c_high_;
    double m_low_, m_high_;
    ModelParams optimum_;
    double optimum_value_;
    double smoothness_, smooth_low_, smooth_high_;
};

/// Binary logistic regression on two private datasets, with a small ridge
/// term so every minimiser exists, divided by a fixed normaliser.
class LogisticPair final : public LossModel {
public:
    struct Dataset {
        Eigen::MatrixXd features;  // n x dim
        Eigen::VectorXd labels;    // entries in {0, 1}
    };

    /// normalizer <= 0 picks one automatically so that per-owner losses at
    /// the own minimisers and the joint optimum stay well inside [0,1].
    LogisticPair(Dataset low, Dataset high, double ridge, double normalizer = 0.0);

    std::string kind() const override { return "logistic"; }
    int dim() const override { return static_cast<int>(low_.features.cols()); }
    double value(const ModelParams& x, Owner owner) const override;
    ModelParams gradient(const ModelParams& x, Owner owner) const override;
    double smoothness() const override { return 0.5 * (smooth_low_ + smooth_high_); }
    double owner_smoothness(Owner owner) const override {
        return owner == Owner::low ? smooth_low_ : smooth_high_;
    }
    const ModelParams& optimum() const override { return optimum_; }
    double optimum_value() const override { return optimum_value_; }
    const ModelParams& own_minimizer(Owner owner) const override {
        return owner == Owner::low ? min_low_ : min_high_;
    }

    double normalizer() const { return normalizer_; }
    double ridge() const { return ridge_; }

private:
    const Dataset& data(Owner owner) const { return owner == Owner::low ? low_ : high_; }
    double raw_value(const ModelParams& x, const Dataset& d) const;
    ModelParams raw_gradient(const ModelParams& x, const Dataset& d) const;
    Eigen::MatrixXd raw_hessian(const ModelParams& x, const Dataset& d) const;
    ModelParams newton(bool use_low, bool use_high) const;

    Dataset low_, high_;
    double ridge_;
    double normalizer_ = 1.0;
    ModelParams min_low_, min_high_, optimum_;
    double optimum_value_ = 0.0;
    double smooth_low_ = 0.0, smooth_high_ = 0.0;
};

/// Default spectral and placement parameters of the quadratic generator.
struct QuadraticGenOptions {
    double strong_min = 0.2, strong_max = 1.0;  // a firm's well-covered directions
    double weak_min = 1e-4, weak_max = 1e-3;    // directions its data barely sees
    double center_stretch = 2.0;                // centre spread along strong directions
    double cross_margin = 0.02;                 // cross losses at the centres are 1 - margin
};

/// Complementary quadratic pair: each firm's curvature is strong exactly
/// where the other's is weak, and the two problems mirror each other so
/// asymmetry = 0 gives f(x*; low) = f(x*; high). Offsets make the average
/// optimum equal 1 - target_q_h_max and the per-owner minima differ by
/// `asymmetry` (the low firm's is higher). Throws InvalidTarget when no
/// offsets keep every centre loss inside [0, 1].
std::shared_ptr<const QuadraticPair> make_complementary_quadratics(
    int dim, double target_q_h_max, double asymmetry, std::uint64_t seed,
    const QuadraticGenOptions& opts = {});

/// Gaussian two-cluster classification data. Firm low holds a fraction
/// `skew` of class 0, firm high the complement. The firm whose own model
/// scores the lower average quality is labelled low; an exact tie throws
/// InvalidTarget.
std::shared_ptr<const LogisticPair> make_synthetic_logistic(int n_per_firm, int dim, double skew,
                                                            std::uint64_t seed,
                                                            double ridge = 1e-2);

}  // namespace duosim
