#include <gtest/gtest.h>

#include <cmath>

#include "duosim/market.hpp"
#include "support/oracles.hpp"

using namespace duosim;

TEST(QualityPair, RejectsBadOrdering) {
    EXPECT_THROW(QualityPair(0.6, 0.5), std::invalid_argument);
    EXPECT_THROW(QualityPair(-0.1, 0.5), std::invalid_argument);
    EXPECT_THROW(QualityPair(0.2, 1.1), std::invalid_argument);
    EXPECT_THROW(QualityPair(NAN, 0.5), std::invalid_argument);
    EXPECT_NO_THROW(QualityPair(0.5, 0.5));
    EXPECT_DOUBLE_EQ(QualityPair(0.3, 0.6).ratio(), 0.5);
    EXPECT_EQ(QualityPair(0.0, 0.0).ratio(), 0.0);
}

TEST(ConsumerUtility, Examples) {
    EXPECT_EQ(consumer_utility(0.0, 0.9, 0.0), 0.0);
    EXPECT_NEAR(consumer_utility(1.0, 1.0, 2.0 / 7.0), 5.0 / 7.0, 1e-15);
    EXPECT_NEAR(consumer_utility(0.5, 0.5, 1.0 / 14.0), 0.178571, 1e-6);
}

TEST(Demands, Examples) {
    const Market m;
    auto d = m.demands(QualityPair(0.5, 1.0), {1.0 / 14.0, 2.0 / 7.0});
    EXPECT_NEAR(d.low, 0.285714, 1e-6);
    EXPECT_NEAR(d.high, 0.571429, 1e-6);
    d = m.demands(QualityPair(0.5, 1.0), {0.0, 0.0});
    EXPECT_EQ(d.low, 0.0);
    EXPECT_EQ(d.high, 1.0);
    d = m.demands(QualityPair(0.25, 1.0), {0.05, 0.4});
    EXPECT_NEAR(d.low, 0.266667, 1e-6);
    EXPECT_NEAR(d.high, 0.533333, 1e-6);
}

TEST(Demands, DegenerateInputsThrow) {
    const Market m;
    EXPECT_THROW(m.demands(QualityPair(0.5, 0.5), {0.0, 0.0}), DegenerateQualities);
    EXPECT_THROW(m.demands(QualityPair(0.0, 0.5), {0.0, 0.1}), DegenerateQualities);
    EXPECT_THROW(m.demands(QualityPair(0.2, 0.5), {-0.1, 0.1}), std::invalid_argument);
}

TEST(Demands, AgreesWithConsumerChoiceOracle) {
    const Market m;
    for (double ql : {0.1, 0.3, 0.45}) {
        for (double qh : {0.5, 0.8, 1.0}) {
            for (double pl : {0.0, 0.02, 0.05, 0.2}) {
                for (double ph : {0.0, 0.1, 0.3, 0.6}) {
                    const auto d = m.demands(QualityPair(ql, qh), {pl, ph});
                    // The closed form describes the ordered-threshold regime
                    // 0 <= theta_l <= theta_h <= 1; outside it only the clamps apply.
                    const double th = (ph - pl) / (qh - ql);
                    if (pl / ql <= th && th <= 1.0) {
                        const auto o = oracle::demand_by_choice(ql, qh, pl, ph);
                        EXPECT_NEAR(d.high, o.high, 1e-12) << ql << ' ' << qh << ' ' << pl << ' ' << ph;
                        EXPECT_NEAR(d.low, o.low, 1e-12) << ql << ' ' << qh << ' ' << pl << ' ' << ph;
                    }
                    EXPECT_GE(d.low, 0.0);
                    EXPECT_GE(d.high, 0.0);
                    EXPECT_LE(d.low + d.high, 1.0 + 1e-15);
                }
            }
        }
    }
}

TEST(EquilibriumPrices, Examples) {
    const Market m;
    auto p = m.equilibrium_prices(QualityPair(0.5, 1.0));
    EXPECT_NEAR(p.low, 1.0 / 14.0, 1e-15);
    EXPECT_NEAR(p.high, 2.0 / 7.0, 1e-15);
    p = m.equilibrium_prices(QualityPair(0.7, 0.7));
    EXPECT_EQ(p.low, 0.0);
    EXPECT_EQ(p.high, 0.0);
    p = m.equilibrium_prices(QualityPair(0.25, 1.0));
    EXPECT_NEAR(p.low, 0.05, 1e-15);
    EXPECT_NEAR(p.high, 0.4, 1e-15);
}

TEST(EquilibriumPrices, MatchBestResponseOracle) {
    const Market m;
    for (auto [ql, qh] : {std::pair{0.5, 1.0}, {0.25, 1.0}, {0.3, 0.6}, {0.1, 0.9}}) {
        const auto p = m.equilibrium_prices(QualityPair(ql, qh));
        const auto o = oracle::prices_by_best_response(ql, qh);
        EXPECT_NEAR(p.low, o.low, 1e-7);
        EXPECT_NEAR(p.high, o.high, 1e-7);
    }
}

TEST(EquilibriumOutcome, Examples) {
    const Market m;
    auto o = m.equilibrium_outcome(QualityPair(0.5, 1.0));
    EXPECT_NEAR(o.utility_low, 1.0 / 49.0, 1e-15);
    EXPECT_NEAR(o.utility_high, 8.0 / 49.0, 1e-15);
    EXPECT_NEAR(o.demand_low, 2.0 / 7.0, 1e-15);
    EXPECT_NEAR(o.demand_high, 4.0 / 7.0, 1e-15);

    o = m.equilibrium_outcome(QualityPair(0.4, 0.4));
    EXPECT_EQ(o.utility_low, 0.0);
    EXPECT_EQ(o.utility_high, 0.0);
    EXPECT_EQ(o.demand_low, 0.0);
    EXPECT_EQ(o.demand_high, 1.0);

    o = m.equilibrium_outcome(QualityPair(0.0, 1.0));
    EXPECT_EQ(o.utility_low, 0.0);
    EXPECT_NEAR(o.utility_high, 0.25, 1e-15);
    EXPECT_NEAR(o.prices.high, 0.5, 1e-15);
    EXPECT_NEAR(o.demand_high, 0.5, 1e-15);
}

TEST(EquilibriumOutcome, Properties) {
    const Market m;
    for (int i = 1; i < 40; ++i) {
        for (int j = i + 1; j <= 40; ++j) {
            const double ql = i / 40.0, qh = j / 40.0;
            const auto o = m.equilibrium_outcome(QualityPair(ql, qh));
            EXPECT_NEAR(o.utility_low, o.prices.low * o.demand_low, 1e-15);
            EXPECT_NEAR(o.utility_high, o.prices.high * o.demand_high, 1e-15);
            EXPECT_NEAR(o.demand_low + o.demand_high, 3.0 * qh / (4.0 * qh - ql), 1e-14);
            EXPECT_LE(o.demand_low + o.demand_high, 1.0 + 1e-15);
            EXPECT_LE(o.prices.low, o.prices.high);
            EXPECT_NEAR(o.utility_low, oracle::low_revenue(ql, qh), 1e-15);
            EXPECT_NEAR(o.utility_high, oracle::high_revenue(ql, qh), 1e-15);
            // Degree-one homogeneity.
            const double c = 0.37;
            const auto s = m.equilibrium_outcome(QualityPair(c * ql, c * qh));
            EXPECT_NEAR(s.utility_low, c * o.utility_low, 1e-15);
            EXPECT_NEAR(s.utility_high, c * o.utility_high, 1e-15);
        }
    }
}

TEST(UtilityGradients, Examples) {
    const Market m;
    auto g = m.utility_gradients(QualityPair(0.5, 1.0));
    EXPECT_NEAR(g.high_wrt_high, 0.279883, 1e-6);
    EXPECT_NEAR(g.low_wrt_high, 0.014577, 1e-6);
    EXPECT_NEAR(g.low_wrt_low, 0.011662, 1e-6);
    EXPECT_NEAR(g.high_wrt_low, -0.233236, 1e-6);
    EXPECT_NEAR(m.utility_gradients(QualityPair(4.0 / 7.0, 1.0)).low_wrt_low, 0.0, 1e-15);
    EXPECT_NEAR(m.utility_gradients(QualityPair(0.3, 0.6)).high_wrt_low, -0.233236, 1e-6);
    EXPECT_THROW(m.utility_gradients(QualityPair(0.0, 0.0)), DegenerateQualities);
}

TEST(UtilityGradients, MatchFiniteDifferences) {
    const Market m;
    const double h = 1e-6;
    for (int i = 1; i < 20; ++i) {
        for (int j = i + 1; j < 20; ++j) {
            const double ql = i / 20.0, qh = j / 20.0;
            const auto g = m.utility_gradients(QualityPair(ql, qh));
            using oracle::central_difference;
            EXPECT_NEAR(g.low_wrt_low, central_difference([&](double x) { return oracle::low_revenue(x, qh); }, ql, h), 1e-7);
            EXPECT_NEAR(g.high_wrt_low, central_difference([&](double x) { return oracle::high_revenue(x, qh); }, ql, h), 1e-7);
            EXPECT_NEAR(g.low_wrt_high, central_difference([&](double x) { return oracle::low_revenue(ql, x); }, qh, h), 1e-7);
            EXPECT_NEAR(g.high_wrt_high, central_difference([&](double x) { return oracle::high_revenue(ql, x); }, qh, h), 1e-7);
        }
    }
}
