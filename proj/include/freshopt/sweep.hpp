/**
 * @file sweep.hpp
 * @brief Sensitivity of contracts, orders and profits to the overconfidence coefficient
 */

#pragma once

#include "freshopt/demand.hpp"
#include "freshopt/errors.hpp"
#include "freshopt/market.hpp"
#include "freshopt/optimizer.hpp"
#include "freshopt/oracle.hpp"
#include "freshopt/profit.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace freshopt {

/// How the contract is chosen at each k.
enum class SweepMode {
    fixed_exercise_price,  ///< ce fixed, c0 coordinates
    fixed_premium,         ///< c0 fixed, ce coordinates
    fixed_contract,        ///< (c0, ce) fixed, no coordination
};

inline std::string_view to_string(SweepMode mode) {
    switch (mode) {
        case SweepMode::fixed_exercise_price: return "fixed-exercise-price";
        case SweepMode::fixed_premium: return "fixed-premium";
        case SweepMode::fixed_contract: return "fixed-contract";
    }
    return "unknown";
}

inline std::optional<SweepMode> parse_sweep_mode(std::string_view text) {
    for (auto mode : {SweepMode::fixed_exercise_price, SweepMode::fixed_premium, SweepMode::fixed_contract}) {
        if (text == to_string(mode)) {
            return mode;
        }
    }
    return std::nullopt;
}

/// n points lo, lo+step, ..., computed by index to avoid drift.
inline std::vector<double> make_k_grid(double lo, double hi, double step) {
    if (!(lo > 0.0 && hi >= lo && step > 0.0)) {
        throw OutOfRange("k grid requires 0 < lo <= hi and step > 0");
    }
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = lo + static_cast<double>(i) * step;
    }
    return grid;
}

struct SweepScenario {
    SweepMode mode = SweepMode::fixed_exercise_price;
    double fixed_value = 0.0;  ///< ce in fixed-exercise-price mode, c0 in fixed-premium mode
    std::vector<double> k_grid;
    DemandDistribution demand = DemandDistribution::uniform(0.0, 100.0);
    MarketParams market{};
    std::optional<OptionContract> contract;  ///< required in fixed-contract mode

    void validate() const {
        if (k_grid.empty()) {
            throw OutOfRange("sweep k grid is empty");
        }
        for (std::size_t i = 0; i < k_grid.size(); ++i) {
            if (!(k_grid[i] > 0.0) || (i > 0 && !(k_grid[i] > k_grid[i - 1]))) {
                throw OutOfRange("sweep k grid must be positive and strictly increasing");
            }
        }
        if (mode == SweepMode::fixed_contract && !contract) {
            throw OutOfRange("fixed-contract sweep needs a contract");
        }
        if (mode != SweepMode::fixed_contract && !(fixed_value > 0.0)) {
            throw OutOfRange("sweep fixed value must be > 0");
        }
        market.validate();
    }
};

/// One k of a sweep. Numeric fields stay empty when they could not be computed.
struct SweepRow {
    double k = 0.0;
    std::optional<double> c0;
    std::optional<double> ce;
    std::optional<double> q_total;
    std::optional<double> q_spot;
    std::optional<double> q_option;
    std::optional<double> retailer_profit_believed;
    std::optional<double> retailer_profit_true;
    std::optional<double> supplier_profit;
    std::optional<double> chain_profit;
    bool feasible = false;
    std::string note;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

namespace detail {

inline SweepRow sweep_row(const SweepScenario& s, double k_value) {
    SweepRow row;
    row.k = k_value;
    const Overconfidence k{k_value};
    OptionContract contract{};
    try {
        switch (s.mode) {
            case SweepMode::fixed_exercise_price: {
                const auto r = coordinating_premium(s.demand, s.market, s.fixed_value, k);
                contract = {r.price, s.fixed_value};
                break;
            }
            case SweepMode::fixed_premium: {
                const auto r = coordinating_exercise_price(s.demand, s.market, s.fixed_value, k);
                contract = {s.fixed_value, r.price};
                break;
            }
            case SweepMode::fixed_contract: contract = *s.contract; break;
        }
    } catch (const NoRoot& e) {
        row.note = std::string("no-root: ") + e.what();
        if (s.mode == SweepMode::fixed_premium) {
            row.c0 = s.fixed_value;
        }
        return row;
    } catch (const Error& e) {
        row.note = e.what();
        return row;
    }
    row.c0 = contract.c0;
    row.ce = contract.ce;

    const auto report = check_feasibility(s.market, contract, k);
    if (!report.ok()) {
        row.note = report.summary();
        return row;
    }
    const auto plan = optimal_plan(s.demand, s.market, contract, k);
    row.q_total = plan.q_total();
    row.q_spot = plan.q_spot();
    row.q_option = plan.q_option();
    row.retailer_profit_believed = retailer_expected_profit(s.demand, s.market, contract, k, plan).total;
    row.retailer_profit_true = retailer_expected_profit(s.demand, s.market, contract, Overconfidence{1.0}, plan).total;
    row.supplier_profit = supplier_expected_profit(s.demand, s.market, contract, plan);
    row.chain_profit = chain_expected_profit(s.demand, s.market, plan.q_total());
    row.feasible = true;
    return row;
}

}  // namespace detail

/// Evaluates every k of the scenario. Infeasible k values produce flagged rows.
inline std::vector<SweepRow> run_sweep(const SweepScenario& s) {
    s.validate();
    std::vector<SweepRow> rows(s.k_grid.size());
    detail::parallel_for(rows.size(), [&](std::size_t i) { rows[i] = detail::sweep_row(s, s.k_grid[i]); });
    return rows;
}

enum class Trend { strictly_increasing, strictly_decreasing, non_monotone };

inline std::string_view to_string(Trend trend) {
    switch (trend) {
        case Trend::strictly_increasing: return "strictly-increasing";
        case Trend::strictly_decreasing: return "strictly-decreasing";
        case Trend::non_monotone: return "non-monotone";
    }
    return "unknown";
}

struct ColumnTrend {
    std::string column;
    Trend trend = Trend::non_monotone;
    /// k values of the first adjacent pair breaking the initial direction.
    std::optional<std::pair<double, double>> first_violation;
};

struct MonotonicityReport {
    std::vector<ColumnTrend> columns;

    [[nodiscard]] const ColumnTrend& at(std::string_view name) const {
        for (const auto& c : columns) {
            if (c.column == name) {
                return c;
            }
        }
        throw OutOfRange("no column named " + std::string(name));
    }
};

using SweepColumn = std::pair<std::string_view, std::optional<double> SweepRow::*>;

inline constexpr std::array<SweepColumn, 9> kSweepNumericColumns{{
    {"c0", &SweepRow::c0},
    {"ce", &SweepRow::ce},
    {"q_total", &SweepRow::q_total},
    {"q_spot", &SweepRow::q_spot},
    {"q_option", &SweepRow::q_option},
    {"retailer_profit_believed", &SweepRow::retailer_profit_believed},
    {"retailer_profit_true", &SweepRow::retailer_profit_true},
    {"supplier_profit", &SweepRow::supplier_profit},
    {"chain_profit", &SweepRow::chain_profit},
}};

/// Classifies each numeric column over the feasible rows, in k order.
inline MonotonicityReport monotonicity_report(const std::vector<SweepRow>& rows) {
    std::vector<const SweepRow*> feasible;
    for (const auto& row : rows) {
        if (row.feasible) {
            feasible.push_back(&row);
        }
    }
    if (feasible.size() < 3) {
        throw TooFewRows("monotonicity report needs at least 3 feasible rows, got " +
                         std::to_string(feasible.size()));
    }

    MonotonicityReport report;
    for (const auto& [name, member] : kSweepNumericColumns) {
        ColumnTrend trend{std::string(name), Trend::non_monotone, std::nullopt};
        const auto value = [member = member](const SweepRow* r) { return *(r->*member); };
        const double first = value(feasible[1]) - value(feasible[0]);
        const int direction = first > 0.0 ? 1 : (first < 0.0 ? -1 : 0);
        for (std::size_t i = 1; i < feasible.size(); ++i) {
            const double diff = value(feasible[i]) - value(feasible[i - 1]);
            const int sign = diff > 0.0 ? 1 : (diff < 0.0 ? -1 : 0);
            if (direction == 0 || sign != direction) {
                trend.first_violation = std::pair{feasible[i - 1]->k, feasible[i]->k};
                break;
            }
        }
        if (!trend.first_violation) {
            trend.trend = direction > 0 ? Trend::strictly_increasing : Trend::strictly_decreasing;
        }
        report.columns.push_back(std::move(trend));
    }
    return report;
}

}  // namespace freshopt
