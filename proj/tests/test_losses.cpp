#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "duosim/errors.hpp"
#include "duosim/losses.hpp"

using namespace duosim;

namespace {

ModelParams random_point(std::mt19937_64& rng, int dim, double scale) {
    std::normal_distribution<double> n(0.0, scale);
    ModelParams x(dim);
    for (int i = 0; i < dim; ++i) x(i) = n(rng);
    return x;
}

void expect_gradients_match(const LossModel& m, std::mt19937_64& rng, double scale, double tol) {
    const double h = 1e-5;
    for (int k = 0; k < 10; ++k) {
        const ModelParams x = random_point(rng, m.dim(), scale);
        for (Owner o : {Owner::low, Owner::high}) {
            const ModelParams g = m.gradient(x, o);
            for (int i = 0; i < m.dim(); ++i) {
                ModelParams a = x, b = x;
                a(i) += h;
                b(i) -= h;
                EXPECT_NEAR(g(i), (m.value(a, o) - m.value(b, o)) / (2 * h), tol);
            }
        }
    }
}

void expect_convex_and_smooth(const LossModel& m, std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const ModelParams x = random_point(rng, m.dim(), scale);
        const ModelParams y = random_point(rng, m.dim(), scale);
        const double t = u(rng);
        for (Owner o : {Owner::low, Owner::high}) {
            EXPECT_LE(m.value(t * x + (1 - t) * y, o), t * m.value(x, o) + (1 - t) * m.value(y, o) + 1e-9);
            EXPECT_LE((m.gradient(x, o) - m.gradient(y, o)).norm(),
                      m.owner_smoothness(o) * (x - y).norm() * (1 + 1e-9));
        }
        EXPECT_LE((m.average_gradient(x) - m.average_gradient(y)).norm(),
                  m.smoothness() * (x - y).norm() * (1 + 1e-9));
    }
}

}  // namespace

TEST(AvgLoss, HandComputedQuadratic) {
    Eigen::MatrixXd a = 0.1 * Eigen::MatrixXd::Identity(2, 2);
    QuadraticPair m(a, ModelParams::Unit(2, 0), 0.05, a, -ModelParams::Unit(2, 0), 0.05);
    EXPECT_NEAR(m.optimum().norm(), 0.0, 1e-15);
    EXPECT_NEAR(m.optimum_value(), 0.1, 1e-15);
    const auto lg = avg_loss_and_grad(m, m.optimum());
    EXPECT_NEAR(lg.loss, 0.1, 1e-15);
    EXPECT_NEAR(lg.grad.norm(), 0.0, 1e-15);
    EXPECT_NEAR(m.smoothness(), 0.1, 1e-15);
}

TEST(QuadraticPair, RejectsSingularSum) {
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(2, 2);
    EXPECT_THROW(QuadraticPair(z, ModelParams::Zero(2), 0, z, ModelParams::Zero(2), 0),
                 std::invalid_argument);
}

TEST(ComplementaryQuadratics, HitsTargetAndIsDeterministic) {
    for (int dim : {2, 3, 5, 10}) {
        const auto m = make_complementary_quadratics(dim, 0.75, 0.3, 5);
        EXPECT_NEAR(m->optimum_value(), 0.25, 1e-15);
        EXPECT_NEAR(m->offset(Owner::low) - m->offset(Owner::high), 0.3, 1e-12);
        EXPECT_NEAR(avg_loss_and_grad(*m, m->optimum()).grad.norm(), 0.0, 1e-12);
        // Losses at both centres stay in [0,1].
        for (Owner c : {Owner::low, Owner::high})
            for (Owner o : {Owner::low, Owner::high}) {
                const double v = m->value(m->own_minimizer(c), o);
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0);
            }
        const auto again = make_complementary_quadratics(dim, 0.75, 0.3, 5);
        EXPECT_EQ(m->curvature(Owner::low), again->curvature(Owner::low));
        EXPECT_EQ(m->own_minimizer(Owner::high), again->own_minimizer(Owner::high));
        const auto other = make_complementary_quadratics(dim, 0.75, 0.3, 6);
        EXPECT_NE(m->own_minimizer(Owner::low), other->own_minimizer(Owner::low));
    }
    EXPECT_NEAR(make_complementary_quadratics(4, 0.95, 0.0, 1)->optimum_value(), 0.05, 1e-15);
}

TEST(ComplementaryQuadratics, SymmetricWithoutAsymmetry) {
    const auto m = make_complementary_quadratics(6, 0.8, 0.0, 3);
    EXPECT_NEAR(m->value(m->optimum(), Owner::low), m->value(m->optimum(), Owner::high), 1e-12);
}

TEST(ComplementaryQuadratics, RejectsUnreachableTargets) {
    EXPECT_THROW(make_complementary_quadratics(4, 0.99, 0.9, 1), InvalidTarget);
    EXPECT_THROW(make_complementary_quadratics(0, 0.8, 0.1, 1), std::invalid_argument);
    EXPECT_THROW(make_complementary_quadratics(4, 1.0, 0.1, 1), std::invalid_argument);
}

TEST(ComplementaryQuadratics, GradientsConvexitySmoothness) {
    std::mt19937_64 rng(1);
    const auto m = make_complementary_quadratics(5, 0.75, 0.3, 9);
    expect_gradients_match(*m, rng, 2.0, 1e-6);
    expect_convex_and_smooth(*m, rng, 2.0);
}

TEST(SyntheticLogistic, BasicContract) {
    const auto m = make_synthetic_logistic(100, 3, 0.8, 4);
    const ModelParams zero = ModelParams::Zero(3);
    EXPECT_NEAR(m->value(zero, Owner::low), std::log(2.0) / m->normalizer(), 1e-15);
    EXPECT_NEAR(m->value(zero, Owner::high), std::log(2.0) / m->normalizer(), 1e-15);
    EXPECT_NEAR(m->average_gradient(m->optimum()).norm(), 0.0, 1e-10);
    EXPECT_NEAR(m->gradient(m->own_minimizer(Owner::low), Owner::low).norm(), 0.0, 1e-10);
    EXPECT_LT(m->quality(m->own_minimizer(Owner::low)), m->quality(m->own_minimizer(Owner::high)));
    for (const ModelParams* x : {&m->optimum(), &m->own_minimizer(Owner::low), &m->own_minimizer(Owner::high)})
        for (Owner o : {Owner::low, Owner::high}) {
            EXPECT_GE(m->value(*x, o), 0.0);
            EXPECT_LE(m->value(*x, o), 1.0);
        }
    std::mt19937_64 rng(3);
    expect_gradients_match(*m, rng, 1.0, 1e-5);
    expect_convex_and_smooth(*m, rng, 1.0);
    EXPECT_THROW(make_synthetic_logistic(5, 3, 0.8, 1), std::invalid_argument);
}

TEST(SyntheticLogistic, BalancedSkewGivesSimilarFirms) {
    const auto m = make_synthetic_logistic(2000, 2, 0.5, 8);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 10; ++k) {
        const ModelParams x = random_point(rng, 2, 0.5);
        EXPECT_NEAR(m->value(x, Owner::low), m->value(x, Owner::high), 0.05);
    }
}
