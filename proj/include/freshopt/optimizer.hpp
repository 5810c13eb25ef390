/**
 * @file optimizer.hpp
 * @brief Closed-form optimal orders, feasibility screening and coordinating contracts
 *
 * The retailer's optimum sits at two critical fractiles of the demand law:
 *   total:  (p+g-ce-c0)/(p+g-ce)
 *   spot:   (c0+ce-w0)/ce
 * each mapped through F^-1 and scaled by k*theta/(1-beta). The centralized
 * chain uses ((p+g)(1-beta)-c)/((p+g)(1-beta)) with scale theta/(1-beta).
 */

#pragma once

#include "freshopt/demand.hpp"
#include "freshopt/errors.hpp"
#include "freshopt/market.hpp"
#include "freshopt/profit.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace freshopt {

/// Fractiles exactly 0 or 1 are pulled inside by this margin before inversion.
inline constexpr double kFractileClamp = 1e-12;

/// Outcome of screening a (market, contract, k) triple. Never thrown.
struct FeasibilityReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }

    [[nodiscard]] std::string summary() const {
        std::string out;
        for (const auto& v : violations) {
            if (!out.empty()) {
                out += "; ";
            }
            out += v;
        }
        return out;
    }
};

inline double total_fractile(const MarketParams& m, const OptionContract& o) {
    return (m.p + m.g - o.ce - o.c0) / (m.p + m.g - o.ce);
}

inline double spot_fractile(const MarketParams& m, const OptionContract& o) {
    return (o.c0 + o.ce - m.w0) / o.ce;
}

/// Unclamped centralized fractile ((p+g)(1-beta)-c)/((p+g)(1-beta)).
inline double centralized_fractile(const MarketParams& m) {
    const double margin = (m.p + m.g) * m.yield();
    return (margin - m.c) / margin;
}

/// Screens the assumptions behind the retailer's closed-form optimum.
///
/// Violation tags: market, contract-sign, assumption-4, fractile-range-total,
/// fractile-range-spot, negative-option-quantity, k-domain.
inline FeasibilityReport check_feasibility(const MarketParams& m, const OptionContract& o, Overconfidence k) {
    FeasibilityReport report;
    for (const auto& v : m.violations()) {
        report.violations.push_back("market: " + v);
    }
    if (!(o.c0 > 0.0 && o.ce > 0.0)) {
        report.violations.emplace_back("contract-sign: c0 and ce must be > 0");
    }
    if (!(m.w0 < o.c0 + o.ce)) {
        report.violations.emplace_back("assumption-4: w0 >= c0 + ce");
    }
    const double q_total = total_fractile(m, o);
    const double q_spot = spot_fractile(m, o);
    const bool total_ok = q_total > 0.0 && q_total < 1.0;
    const bool spot_ok = q_spot > 0.0 && q_spot < 1.0;
    if (!total_ok) {
        report.violations.emplace_back("fractile-range-total: (p+g-ce-c0)/(p+g-ce) = " + std::to_string(q_total) +
                                       " not in (0,1)");
    }
    if (!spot_ok) {
        report.violations.emplace_back("fractile-range-spot: (c0+ce-w0)/ce = " + std::to_string(q_spot) +
                                       " not in (0,1)");
    }
    // F^-1 is increasing, so Q_q* >= 0 exactly when the total fractile dominates.
    if (total_ok && spot_ok && q_total < q_spot) {
        report.violations.emplace_back("negative-option-quantity: spot fractile " + std::to_string(q_spot) +
                                       " exceeds total fractile " + std::to_string(q_total));
    }
    if (!(k.k > 0.0 && std::isfinite(k.k))) {
        report.violations.emplace_back("k-domain: k must be > 0");
    }
    return report;
}

/// Retailer's optimal (spot, option) plan under believed demand k*theta*x.
inline OrderPlan optimal_plan(const DemandDistribution& d, const MarketParams& m, const OptionContract& o,
                              Overconfidence k) {
    const auto report = check_feasibility(m, o, k);
    if (!report.ok()) {
        throw Infeasible("no interior optimum: " + report.summary(), report.violations);
    }
    const double scale = k.k * m.theta / m.yield();
    const double q_total = scale * quantile(d, total_fractile(m, o));
    const double q_spot = scale * quantile(d, spot_fractile(m, o));
    return {q_spot, q_total - q_spot};
}

/// Benchmark plan of a retailer who reads demand correctly (k = 1).
inline OrderPlan rational_plan(const DemandDistribution& d, const MarketParams& m, const OptionContract& o) {
    return optimal_plan(d, m, o, Overconfidence{1.0});
}

/// Screening for the centralized problem; warns when the fractile is clamped.
inline FeasibilityReport check_centralized(const MarketParams& m) {
    FeasibilityReport report;
    for (const auto& v : m.violations()) {
        report.violations.push_back("market: " + v);
    }
    const double q = centralized_fractile(m);
    if (!(q > 0.0)) {
        report.violations.emplace_back("fractile-range-centralized: c >= (p+g)(1-beta)");
    } else if (q >= 1.0 - kFractileClamp) {
        report.warnings.emplace_back("centralized fractile clamped to 1-1e-12");
    }
    return report;
}

namespace detail {

inline double clamped_centralized_fractile(const MarketParams& m) {
    const auto report = check_centralized(m);
    if (!report.ok()) {
        throw Infeasible("centralized optimum undefined: " + report.summary(), report.violations);
    }
    return std::clamp(centralized_fractile(m), kFractileClamp, 1.0 - kFractileClamp);
}

}  // namespace detail

/// Chain-optimal production Q**. Independent of k and of the contract.
inline double optimal_centralized(const DemandDistribution& d, const MarketParams& m) {
    return m.theta / m.yield() * quantile(d, detail::clamped_centralized_fractile(m));
}

/// A coordinating contract term and the screening of the contract it completes.
struct CoordinationResult {
    double price = 0.0;
    FeasibilityReport feasibility;
    /// |Q* - Q**| / Q** under the completed contract; NaN when it is infeasible.
    double identity_residual = std::numeric_limits<double>::quiet_NaN();

    /// Throws NonCoordinable if the completed contract is infeasible.
    const CoordinationResult& require() const {
        if (!feasibility.ok()) {
            throw NonCoordinable("coordinating contract infeasible: " + feasibility.summary(),
                                 feasibility.violations);
        }
        return *this;
    }
};

namespace detail {

inline CoordinationResult complete_coordination(const DemandDistribution& d, const MarketParams& m,
                                                const OptionContract& o, Overconfidence k, double price) {
    CoordinationResult out;
    out.price = price;
    out.feasibility = check_feasibility(m, o, k);
    if (out.feasibility.ok()) {
        const double target = optimal_centralized(d, m);
        out.identity_residual = std::abs(optimal_plan(d, m, o, k).q_total() - target) / target;
    }
    return out;
}

inline void require_positive_k(Overconfidence k) {
    if (!(k.k > 0.0 && std::isfinite(k.k))) {
        throw Infeasible("k-domain: k must be > 0", {"k-domain: k must be > 0"});
    }
}

}  // namespace detail

/// Option premium c0 that aligns the biased retailer's total order with Q**,
/// given the exercise price: c0 = (p+g-ce) * [1 - F(F^-1(q**) / k)].
inline CoordinationResult coordinating_premium(const DemandDistribution& d, const MarketParams& m, double ce,
                                               Overconfidence k) {
    detail::require_positive_k(k);
    const double target_demand = quantile(d, detail::clamped_centralized_fractile(m));
    const double c0 = (m.p + m.g - ce) * (1.0 - cdf(d, target_demand / k.k));
    return detail::complete_coordination(d, m, OptionContract{c0, ce}, k, c0);
}

/// Exercise price ce that coordinates the chain at a fixed premium c0.
///
/// Solved by bracketed root-finding on Q*(ce) - Q** over (0, p+g-c0); the
/// total order falls monotonically in ce. Throws NoRoot when no positive
/// exercise price coordinates, which happens for k below the threshold
/// F^-1(q**) / F^-1(1 - c0/(p+g)).
inline CoordinationResult coordinating_exercise_price(const DemandDistribution& d, const MarketParams& m, double c0,
                                                      Overconfidence k) {
    detail::require_positive_k(k);
    if (!(c0 > 0.0 && c0 < m.p + m.g)) {
        throw OutOfRange("premium c0 must lie in (0, p+g)");
    }
    const double target = optimal_centralized(d, m);
    const double scale = k.k * m.theta / m.yield();
    const auto residual = [&](double ce) {
        const double fractile = 1.0 - c0 / (m.p + m.g - ce);
        return scale * quantile(d, fractile) - target;
    };

    const double lo = 0.0;
    const double hi = m.p + m.g - c0 / (1.0 - kFractileClamp);
    const double at_lo = residual(lo);
    if (!(at_lo > 0.0)) {
        const double k_min = quantile(d, detail::clamped_centralized_fractile(m)) / quantile(d, 1.0 - c0 / (m.p + m.g));
        throw NoRoot("no positive exercise price coordinates at k = " + std::to_string(k.k) +
                     "; k-domain requires k > " + std::to_string(k_min));
    }
    if (!(residual(hi) < 0.0)) {
        throw NoRoot("coordination residual has no sign change on (0, p+g-c0)");
    }

    std::uintmax_t max_iter = 300;
    const auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, at_lo, residual(hi),
                                                         boost::math::tools::eps_tolerance<double>(52), max_iter);
    const double ce = std::abs(residual(a)) <= std::abs(residual(b)) ? a : b;
    if (!(std::abs(residual(ce)) <= 1e-9 * std::max(1.0, target))) {
        throw NoRoot("exercise-price solve did not reach residual tolerance");
    }
    return detail::complete_coordination(d, m, OptionContract{c0, ce}, k, ce);
}

/// Supplier's expected profit when facing a rational retailer minus when
/// facing a retailer with bias k. Both plans evaluated under true demand.
inline double supplier_profit_gap(const DemandDistribution& d, const MarketParams& m, const OptionContract& o,
                                  Overconfidence k) {
    const auto rational = rational_plan(d, m, o);
    const auto biased = optimal_plan(d, m, o, k);
    return supplier_expected_profit(d, m, o, rational) - supplier_expected_profit(d, m, o, biased);
}

}  // namespace freshopt
