#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>

using namespace freshopt;
using namespace freshopt::testing;

namespace {

bool has_violation(const FeasibilityReport& r, const std::string& tag) {
    return std::any_of(r.violations.begin(), r.violations.end(),
                       [&](const std::string& v) { return v.rfind(tag, 0) == 0; });
}

}  // namespace

TEST(Feasibility, BaselineIsFeasible) {
    const auto r = check_feasibility(baseline_market(), baseline_contract(), {1.0});
    EXPECT_TRUE(r.ok()) << r.summary();
    EXPECT_DOUBLE_EQ(total_fractile(baseline_market(), baseline_contract()), 0.8);
    EXPECT_NEAR(spot_fractile(baseline_market(), baseline_contract()), 15.0 / 35.0, 1e-15);
}

TEST(Feasibility, AssumptionFourViolation) {
    auto m = baseline_market();
    m.w0 = 45.0;
    const auto r = check_feasibility(m, baseline_contract(), {1.0});
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(has_violation(r, "assumption-4"));
}

TEST(Feasibility, TotalFractileOutOfRange) {
    const auto r = check_feasibility(baseline_market(), {30.0, 35.0}, {1.0});
    EXPECT_TRUE(has_violation(r, "fractile-range-total"));
}

TEST(Feasibility, NegativeOptionQuantityAndKDomain) {
    // Spot fractile (20+35-25)/35 = 0.857 exceeds total fractile 5/25 = 0.2.
    const auto r = check_feasibility(baseline_market(), {20.0, 35.0}, {1.0});
    EXPECT_TRUE(has_violation(r, "negative-option-quantity"));
    EXPECT_TRUE(has_violation(check_feasibility(baseline_market(), baseline_contract(), {-1.0}), "k-domain"));
    EXPECT_THROW(optimal_plan(baseline_demand(), baseline_market(), {20.0, 35.0}, {1.0}), Infeasible);
}

TEST(OptimalPlan, Baseline) {
    const auto plan = optimal_plan(baseline_demand(), baseline_market(), baseline_contract(), {1.0});
    EXPECT_NEAR(plan.q_total(), 640.0 / 9.0, 1e-12);
    EXPECT_NEAR(plan.q_spot(), 800.0 / 21.0, 1e-12);
    EXPECT_NEAR(plan.q_option(), 640.0 / 9.0 - 800.0 / 21.0, 1e-12);
    EXPECT_EQ(plan.q_total(), plan.q_spot() + plan.q_option());
    EXPECT_EQ(plan, rational_plan(baseline_demand(), baseline_market(), baseline_contract()));
}

TEST(OptimalPlan, LinearInK) {
    const auto base = optimal_plan(baseline_demand(), baseline_market(), baseline_contract(), {1.0});
    const auto biased = optimal_plan(baseline_demand(), baseline_market(), baseline_contract(), {1.2});
    EXPECT_NEAR(biased.q_total(), 1.2 * base.q_total(), 1e-12);
    EXPECT_NEAR(biased.q_spot(), 1.2 * base.q_spot(), 1e-12);
}

TEST(OptimalPlan, ScalingExactForAllFamilies) {
    RandomStream rng(21);
    for (std::size_t i = 0; i < 30; ++i) {
        const auto c = random_feasible_case(rng, family_for(i));
        const auto base = optimal_plan(c.demand, c.market, c.contract, {1.0});
        for (double k : {0.5, 0.8, 1.2, 2.0}) {
            const auto plan = optimal_plan(c.demand, c.market, c.contract, {k});
            EXPECT_NEAR(plan.q_total() / base.q_total(), k, 1e-12);
            EXPECT_NEAR(plan.q_spot() / base.q_spot(), k, 1e-12);
        }
    }
}

TEST(OptimalPlan, FirstOrderConditionsHold) {
    RandomStream rng(22);
    for (std::size_t i = 0; i < 30; ++i) {
        const auto c = random_feasible_case(rng, family_for(i));
        const auto plan = optimal_plan(c.demand, c.market, c.contract, c.k);
        const auto g = retailer_profit_gradient(c.demand, c.market, c.contract, c.k, plan);
        EXPECT_NEAR(g.d_spot, 0.0, 1e-8) << to_string(c.demand.family());
        EXPECT_NEAR(g.d_option, 0.0, 1e-8) << to_string(c.demand.family());
    }
}

TEST(Centralized, BaselineOptimum) {
    // Fractile (54-15)/54 = 13/18, quantile 72.222..., times 0.8/0.9.
    EXPECT_NEAR(optimal_centralized(baseline_demand(), baseline_market()), 5200.0 / 81.0, 1e-12);
    EXPECT_NEAR(optimal_centralized(baseline_demand(), baseline_market()), 64.2, 0.05);
}

TEST(Centralized, FreeProductionClampsToSupportTop) {
    auto m = baseline_market();
    m.c = 0.0;
    const auto report = check_centralized(m);
    EXPECT_TRUE(report.ok());
    EXPECT_EQ(report.warnings.size(), 1u);
    EXPECT_NEAR(optimal_centralized(baseline_demand(), m), 0.8 / 0.9 * 100.0, 1e-8);
}

TEST(Centralized, UnprofitableProductionIsInfeasible) {
    auto m = baseline_market();
    m.c = 24.0;
    m.w0 = 24.5;
    m.p = 25.0;
    m.g = 1.0;  // (p+g)(1-beta) = 23.4 < c
    EXPECT_THROW(optimal_centralized(baseline_demand(), m), Infeasible);
}

TEST(Centralized, IndependentOfKAndContract) {
    const double base = optimal_centralized(baseline_demand(), baseline_market());
    RandomStream rng(23);
    for (int i = 0; i < 10; ++i) {
        const double k = uniform_in(rng, 0.5, 2.0);
        const auto r = coordinating_premium(baseline_demand(), baseline_market(), 35.0, {k});
        EXPECT_EQ(optimal_centralized(baseline_demand(), baseline_market()), base);
        (void)r;
    }
}

TEST(Centralized, MatchesGridSearchOverChainProfit) {
    const auto d = baseline_demand();
    const auto m = baseline_market();
    double best_q = 0.0;
    double best = -1e300;
    for (int i = 0; i <= 2000; ++i) {
        const double q = 0.05 * i;
        const double v = chain_expected_profit(d, m, q);
        if (v > best) {
            best = v;
            best_q = q;
        }
    }
    EXPECT_NEAR(best_q, optimal_centralized(d, m), 0.05);
}

TEST(CoordinatingPremium, BaselineValues) {
    const auto at_one = coordinating_premium(baseline_demand(), baseline_market(), 35.0, {1.0});
    EXPECT_NEAR(at_one.price, 25.0 * (1.0 - 13.0 / 18.0), 1e-12);
    EXPECT_NEAR(at_one.price, 6.944444, 1e-6);
    EXPECT_TRUE(at_one.feasibility.ok());
    const auto at_125 = coordinating_premium(baseline_demand(), baseline_market(), 35.0, {1.25});
    EXPECT_NEAR(at_125.price, 25.0 - 325.0 / (18.0 * 1.25), 1e-12);
    EXPECT_NEAR(at_125.price, 10.5556, 1e-4);
}

TEST(CoordinatingPremium, IncreasingInKForUniformDemand) {
    double previous = -1.0;
    for (double k = 0.75; k <= 1.5 + 1e-12; k += 0.01) {
        const double c0 = coordinating_premium(baseline_demand(), baseline_market(), 35.0, {k}).price;
        EXPECT_GT(c0, previous);
        previous = c0;
    }
}

TEST(CoordinatingPremium, IdentityHoldsForAllFamilies) {
    RandomStream rng(24);
    int checked = 0;
    for (std::size_t i = 0; i < 60; ++i) {
        const auto c = random_feasible_case(rng, family_for(i));
        const auto r = coordinating_premium(c.demand, c.market, c.contract.ce, c.k);
        if (!r.feasibility.ok()) {
            continue;
        }
        ++checked;
        const auto plan = optimal_plan(c.demand, c.market, {r.price, c.contract.ce}, c.k);
        const double target = optimal_centralized(c.demand, c.market);
        EXPECT_LE(std::abs(plan.q_total() - target) / target, 1e-9) << to_string(c.demand.family());
        EXPECT_LE(r.identity_residual, 1e-9);
        EXPECT_GT(r.price, 0.0);
    }
    EXPECT_GT(checked, 10);
}

TEST(CoordinatingPremium, ReportsNonCoordinableContract) {
    // At k = 1.5 the coordinating premium pushes the spot fractile above the total fractile.
    const auto r = coordinating_premium(baseline_demand(), baseline_market(), 35.0, {1.5});
    EXPECT_FALSE(r.feasibility.ok());
    EXPECT_TRUE(has_violation(r.feasibility, "negative-option-quantity"));
    EXPECT_THROW(r.require(), NonCoordinable);
    EXPECT_NEAR(r.price, 25.0 - 325.0 / 27.0, 1e-12);
    EXPECT_THROW(coordinating_premium(baseline_demand(), baseline_market(), 35.0, {0.0}), Infeasible);
}

TEST(CoordinatingExercisePrice, BaselineValues) {
    const auto at_one = coordinating_exercise_price(baseline_demand(), baseline_market(), 5.0, {1.0});
    EXPECT_NEAR(at_one.price, 42.0, 1e-6);
    const auto at_12 = coordinating_exercise_price(baseline_demand(), baseline_market(), 5.0, {1.2});
    EXPECT_NEAR(at_12.price, 408.0 / 8.6, 1e-6);
    EXPECT_TRUE(at_12.feasibility.ok());
}

TEST(CoordinatingExercisePrice, MatchesUniformClosedForm) {
    // Uniform closed form: ce = p+g - c0 / (1 - q**/k) with q** = 13/18.
    for (double k = 0.79; k <= 1.5 + 1e-12; k += 0.01) {
        const double expected = 60.0 - 5.0 / (1.0 - 13.0 / (18.0 * k));
        const auto r = coordinating_exercise_price(baseline_demand(), baseline_market(), 5.0, {k});
        EXPECT_NEAR(r.price, expected, 1e-6) << "k=" << k;
    }
}

TEST(CoordinatingExercisePrice, NoRootBelowKDomain) {
    EXPECT_THROW(coordinating_exercise_price(baseline_demand(), baseline_market(), 5.0, {0.72}), NoRoot);
    // The printed formula is still defined here but negative.
    EXPECT_THROW(coordinating_exercise_price(baseline_demand(), baseline_market(), 5.0, {0.75}), NoRoot);
    EXPECT_THROW(coordinating_exercise_price(baseline_demand(), baseline_market(), 70.0, {1.0}), OutOfRange);
}

TEST(CoordinatingExercisePrice, IdentityForOtherFamilies) {
    for (const auto& d : {DemandDistribution::exponential(0.02), DemandDistribution::truncated_normal(50.0, 15.0)}) {
        const auto r = coordinating_exercise_price(d, baseline_market(), 5.0, {1.1});
        const auto plan = optimal_plan(d, baseline_market(), {5.0, r.price}, {1.1});
        const double target = optimal_centralized(d, baseline_market());
        EXPECT_LE(std::abs(plan.q_total() - target) / target, 1e-9) << to_string(d.family());
    }
}

TEST(Coordination, ChainDominatesDecentralizedOrder) {
    const auto d = baseline_demand();
    const auto m = baseline_market();
    const double best = chain_expected_profit(d, m, optimal_centralized(d, m));
    for (double k = 0.5; k <= 2.0; k += 0.05) {
        const auto plan = optimal_plan(d, m, baseline_contract(), {k});
        EXPECT_GE(best, chain_expected_profit(d, m, plan.q_total()));
    }
}

TEST(SupplierGap, ValuesAtBaseline) {
    const auto d = baseline_demand();
    const auto m = baseline_market();
    const auto o = baseline_contract();
    EXPECT_EQ(supplier_profit_gap(d, m, o, {1.0}), 0.0);
    // Frozen from term-by-term evaluation of the supplier's expected profit at
    // the rational and biased plans (true demand measure):
    //   S(1) = 340.190476, S(0.8) = 374.369524, S(1.2) = 254.902857.
    EXPECT_NEAR(supplier_profit_gap(d, m, o, {0.8}), 340.190476190476 - 374.369523809524, 1e-6);
    EXPECT_NEAR(supplier_profit_gap(d, m, o, {1.2}), 340.190476190476 - 254.902857142858, 1e-6);
}

TEST(SupplierGap, FactoredFormHoldsOnlyUnderBelievedMeasure) {
    // Evaluating the supplier's integrals with theta*k instead of theta makes
    // every term degree-1 homogeneous, so the gap collapses to (1-k) * S(1).
    const auto d = baseline_demand();
    const auto m = baseline_market();
    const auto o = baseline_contract();
    const auto believed_supplier = [&](double k) {
        const auto plan = optimal_plan(d, m, o, {k});
        const double y = m.yield();
        const double scale = m.theta * k;
        return m.w0 * plan.q_spot() * y + (o.c0 + o.ce) * plan.q_option() * y -
               o.ce * scale * cdf_integral(d, plan.q_total() * y / scale) +
               o.ce * scale * cdf_integral(d, plan.q_spot() * y / scale) - m.c * plan.q_total();
    };
    for (double k : {0.8, 1.2}) {
        EXPECT_NEAR(believed_supplier(1.0) - believed_supplier(k), (1.0 - k) * believed_supplier(1.0), 1e-9);
    }
}
