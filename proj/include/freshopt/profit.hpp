/**
 * @file profit.hpp
 * @brief Expected and realized profits for retailer, supplier and the integrated chain
 *
 * Two demand measures coexist. Retailer quantities are taken under the
 * believed demand k*theta*x; supplier and chain quantities use the true
 * demand theta*x. Realized-profit functions take the demand scale
 * explicitly so simulation can check either measure.
 */

#pragma once

#include "freshopt/demand.hpp"
#include "freshopt/market.hpp"

#include <algorithm>
#include <array>
#include <string_view>
#include <utility>

namespace freshopt {

/// Retailer expected profit split into additive parts. Costs are negative.
struct ProfitBreakdown {
    double total = 0.0;
    double revenue = 0.0;
    double premium_cost = 0.0;
    double exercise_cost = 0.0;
    double wholesale_cost = 0.0;
    double shortage_cost = 0.0;

    [[nodiscard]] std::array<std::pair<std::string_view, double>, 5> terms() const {
        return {{{"revenue", revenue},
                 {"premium_cost", premium_cost},
                 {"exercise_cost", exercise_cost},
                 {"wholesale_cost", wholesale_cost},
                 {"shortage_cost", shortage_cost}}};
    }

    [[nodiscard]] double sum_of_terms() const {
        return revenue + premium_cost + exercise_cost + wholesale_cost + shortage_cost;
    }
};

/// Partial derivatives of the retailer's expected profit.
struct RetailerGradient {
    double d_spot = 0.0;
    double d_option = 0.0;
};

namespace detail {

/// Closed integral form of the retailer's expected profit; no validation.
inline double retailer_profit_total(const DemandDistribution& d, const MarketParams& m, const OptionContract& o,
                                    double k, double q_spot, double q_option) {
    const double y = m.yield();
    const double scale = m.theta * k;
    const double stock = (q_spot + q_option) * y;
    const double spot_stock = q_spot * y;
    return (m.p + m.g) * stock - (m.p + m.g - o.ce) * scale * cdf_integral(d, stock / scale) -
           (o.c0 + o.ce) * q_option * y - o.ce * scale * cdf_integral(d, spot_stock / scale) - m.w0 * spot_stock -
           m.g * scale * mean(d);
}

inline void require_k(Overconfidence k) {
    if (!(k.k > 0.0 && std::isfinite(k.k))) {
        throw OutOfRange("overconfidence k must be > 0");
    }
}

}  // namespace detail

/// Retailer's expected profit under the believed demand k*theta*x.
inline ProfitBreakdown retailer_expected_profit(const DemandDistribution& d, const MarketParams& m,
                                                const OptionContract& o, Overconfidence k, const OrderPlan& plan) {
    m.validate();
    detail::require_k(k);
    require_contract(m, o);

    const double y = m.yield();
    const double scale = m.theta * k.k;
    const double stock = plan.q_total() * y;
    const double spot_stock = plan.q_spot() * y;
    const double option_stock = plan.q_option() * y;
    const double stock_integral = scale * cdf_integral(d, stock / scale);
    const double spot_integral = scale * cdf_integral(d, spot_stock / scale);
    // E[min(D, a)] = a - scale * int_0^{a/scale} F.
    const double expected_sales = stock - stock_integral;
    const double expected_spot_sales = spot_stock - spot_integral;

    ProfitBreakdown out;
    out.revenue = m.p * expected_sales;
    out.premium_cost = -o.c0 * option_stock;
    out.exercise_cost = -o.ce * (expected_sales - expected_spot_sales);
    out.wholesale_cost = -m.w0 * spot_stock;
    out.shortage_cost = -m.g * (scale * mean(d) - expected_sales);
    out.total = detail::retailer_profit_total(d, m, o, k.k, plan.q_spot(), plan.q_option());
    return out;
}

/// Analytic partials of retailer_expected_profit.
inline RetailerGradient retailer_profit_gradient(const DemandDistribution& d, const MarketParams& m,
                                                 const OptionContract& o, Overconfidence k, const OrderPlan& plan) {
    m.validate();
    detail::require_k(k);
    require_contract(m, o);

    const double y = m.yield();
    const double scale = m.theta * k.k;
    const double total_term = (m.p + m.g) * y - (m.p + m.g - o.ce) * y * cdf(d, plan.q_total() * y / scale);
    return {.d_spot = total_term - o.ce * y * cdf(d, plan.q_spot() * y / scale) - m.w0 * y,
            .d_option = total_term - (o.c0 + o.ce) * y};
}

/// Supplier's expected profit; exercise follows the true demand theta*x.
inline double supplier_expected_profit(const DemandDistribution& d, const MarketParams& m, const OptionContract& o,
                                       const OrderPlan& plan) {
    m.validate();
    require_contract(m, o);

    const double y = m.yield();
    return m.w0 * plan.q_spot() * y + (o.c0 + o.ce) * plan.q_option() * y -
           o.ce * m.theta * cdf_integral(d, plan.q_total() * y / m.theta) +
           o.ce * m.theta * cdf_integral(d, plan.q_spot() * y / m.theta) - m.c * plan.q_total();
}

/// Integrated chain's expected profit at total production q_total.
inline double chain_expected_profit(const DemandDistribution& d, const MarketParams& m, double q_total) {
    m.validate();
    if (!(q_total >= 0.0)) {
        throw OutOfRange("q_total must be >= 0");
    }
    const double y = m.yield();
    return (m.p + m.g) * q_total * y - (m.p + m.g) * m.theta * cdf_integral(d, q_total * y / m.theta) -
           m.c * q_total - m.g * m.theta * mean(d);
}

/// Retailer profit for one demand outcome x with believed demand demand_scale * x.
inline double realized_retailer_profit(double x, double demand_scale, const MarketParams& m, const OptionContract& o,
                                       const OrderPlan& plan) {
    const double y = m.yield();
    const double demand = demand_scale * x;
    const double stock = plan.q_total() * y;
    const double spot_stock = plan.q_spot() * y;
    const double option_stock = plan.q_option() * y;
    const double exercised = std::min(std::max(demand - spot_stock, 0.0), option_stock);
    const double sales = std::min(demand, stock);
    const double shortage = std::max(demand - stock, 0.0);
    return m.p * sales - o.c0 * option_stock - o.ce * exercised - m.w0 * spot_stock - m.g * shortage;
}

/// Supplier profit for one outcome; options are called against true demand theta*x.
inline double realized_supplier_profit(double x, const MarketParams& m, const OptionContract& o,
                                       const OrderPlan& plan) {
    const double y = m.yield();
    const double spot_stock = plan.q_spot() * y;
    const double option_stock = plan.q_option() * y;
    const double exercised = std::min(std::max(m.theta * x - spot_stock, 0.0), option_stock);
    return m.w0 * spot_stock + o.c0 * option_stock + o.ce * exercised - m.c * plan.q_total();
}

inline double realized_chain_profit(double x, const MarketParams& m, double q_total) {
    const double demand = m.theta * x;
    const double stock = q_total * m.yield();
    return m.p * std::min(demand, stock) - m.c * q_total - m.g * std::max(demand - stock, 0.0);
}

}  // namespace freshopt
