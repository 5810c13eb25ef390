/**
 * @file market.hpp
 * @brief Economic constants, option contract, overconfidence and order plans
 */

#pragma once

#include "freshopt/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace freshopt {

/// Economic constants of the single-period chain.
struct MarketParams {
    double p;      ///< retail sale price per unit
    double g;      ///< stockout penalty per unit of unmet demand
    double w0;     ///< spot (wholesale) price per unit
    double c;      ///< supplier production cost per unit
    double beta;   ///< fraction of ordered units lost in transport/unloading, in (0, 1)
    double theta;  ///< freshness factor scaling effective demand, in (0, 1]

    /// Effective fraction of an order that reaches the shelf.
    [[nodiscard]] double yield() const noexcept { return 1.0 - beta; }

    /// Violations of p > w0 > c >= 0, g >= 0, 0 < beta < 1, 0 < theta <= 1.
    [[nodiscard]] std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (!(std::isfinite(p) && std::isfinite(w0) && p > w0)) {
            out.emplace_back("p must exceed w0");
        }
        if (!(std::isfinite(c) && w0 > c)) {
            out.emplace_back("w0 must exceed c");
        }
        if (!(c >= 0.0)) {
            out.emplace_back("c must be >= 0");
        }
        if (!(std::isfinite(g) && g >= 0.0)) {
            out.emplace_back("g must be >= 0");
        }
        if (!(beta > 0.0 && beta < 1.0)) {
            out.emplace_back("beta must lie in (0, 1)");
        }
        if (!(theta > 0.0 && theta <= 1.0)) {
            out.emplace_back("theta must lie in (0, 1]");
        }
        return out;
    }

    void validate() const {
        if (auto v = violations(); !v.empty()) {
            std::string msg = "invalid market parameters:";
            for (const auto& item : v) {
                msg += " " + item + ";";
            }
            throw OutOfRange(msg);
        }
    }
};

/// Per-unit option terms: premium paid up front, exercise price paid on call.
struct OptionContract {
    double c0;
    double ce;
};

/// Retailer's demand-belief multiplier: believed demand is k * theta * x.
struct Overconfidence {
    double k = 1.0;
};

/// Spot and option order quantities. The total is always the exact sum.
class OrderPlan {
public:
    OrderPlan() = default;

    OrderPlan(double q_spot, double q_option) : q_spot_(q_spot), q_option_(q_option), q_total_(q_spot + q_option) {
        if (!(q_spot >= 0.0 && q_option >= 0.0) || !std::isfinite(q_total_)) {
            throw OutOfRange("order quantities must be finite and nonnegative");
        }
    }

    [[nodiscard]] double q_spot() const noexcept { return q_spot_; }
    [[nodiscard]] double q_option() const noexcept { return q_option_; }
    [[nodiscard]] double q_total() const noexcept { return q_total_; }

    [[nodiscard]] OrderPlan scaled(double factor) const { return {factor * q_spot_, factor * q_option_}; }

    friend bool operator==(const OrderPlan&, const OrderPlan&) = default;

private:
    double q_spot_ = 0.0;
    double q_option_ = 0.0;
    double q_total_ = 0.0;
};

/// Contract invariants that every profit evaluation relies on.
inline std::vector<std::string> contract_violations(const MarketParams& m, const OptionContract& o) {
    std::vector<std::string> out;
    if (!(o.c0 > 0.0)) {
        out.emplace_back("c0 must be > 0");
    }
    if (!(o.ce > 0.0)) {
        out.emplace_back("ce must be > 0");
    }
    if (!(m.w0 < o.c0 + o.ce)) {
        out.emplace_back("assumption-4: w0 must be below c0 + ce");
    }
    if (!(o.c0 + o.ce < m.p + m.g)) {
        out.emplace_back("c0 + ce must be below p + g");
    }
    return out;
}

inline void require_contract(const MarketParams& m, const OptionContract& o) {
    if (auto v = contract_violations(m, o); !v.empty()) {
        std::string msg = "infeasible option contract:";
        for (const auto& item : v) {
            msg += " " + item + ";";
        }
        throw InfeasibleContract(msg);
    }
}

}  // namespace freshopt
