/**
 * @file oracle.hpp
 * @brief Independent checks for the closed forms: Monte-Carlo and exhaustive grid search
 *
 * Simulation draws demand by inverse transform and averages the per-outcome
 * profit functions, so it never touches cdf_integral. Grid search maximizes
 * the retailer's expected profit by brute force over a box.
 */

#pragma once

#include "freshopt/demand.hpp"
#include "freshopt/market.hpp"
#include "freshopt/profit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <thread>
#include <vector>

namespace freshopt {

enum class ProfitKind { retailer, supplier, chain };

inline std::string_view to_string(ProfitKind kind) {
    switch (kind) {
        case ProfitKind::retailer: return "retailer";
        case ProfitKind::supplier: return "supplier";
        case ProfitKind::chain: return "chain";
    }
    return "unknown";
}

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;

    /// |mean - reference| in units of the standard error.
    [[nodiscard]] double sigma_distance(double reference) const {
        if (std_error == 0.0) {
            return mean == reference ? 0.0 : std::numeric_limits<double>::infinity();
        }
        return std::abs(mean - reference) / std_error;
    }

    friend bool operator==(const McEstimate&, const McEstimate&) = default;
};

/// Samples per independent sub-stream. Fixed so results do not depend on thread count.
inline constexpr std::uint64_t kMcBlockSize = std::uint64_t{1} << 16;

namespace detail {

inline unsigned worker_count(std::size_t jobs) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(jobs, 1)));
}

/// Runs body(i) for i in [0, count) across threads; body must write only slot i.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    const unsigned workers = worker_count(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                body(i);
            }
        });
    }
}

/// Running (count, mean, M2) with Chan's pairwise merge.
struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const Moments& other) {
        if (other.count == 0) {
            return;
        }
        if (count == 0) {
            *this = other;
            return;
        }
        const double na = static_cast<double>(count);
        const double nb = static_cast<double>(other.count);
        const double n = na + nb;
        const double delta = other.mean - mean;
        mean += delta * nb / n;
        m2 += other.m2 + delta * delta * na * nb / n;
        count += other.count;
    }
};

inline RandomStream block_stream(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    return RandomStream(seq);
}

}  // namespace detail

/// Realized profit of the given party at demand outcome x.
inline double realized_profit(ProfitKind kind, double x, const MarketParams& m, const OptionContract& o,
                              Overconfidence k, const OrderPlan& plan) {
    switch (kind) {
        case ProfitKind::retailer: return realized_retailer_profit(x, m.theta * k.k, m, o, plan);
        case ProfitKind::supplier: return realized_supplier_profit(x, m, o, plan);
        case ProfitKind::chain: return realized_chain_profit(x, m, plan.q_total());
    }
    return 0.0;
}

/// Closed-form counterpart of mc_expected.
inline double analytic_expected(ProfitKind kind, const DemandDistribution& d, const MarketParams& m,
                                const OptionContract& o, Overconfidence k, const OrderPlan& plan) {
    switch (kind) {
        case ProfitKind::retailer: return retailer_expected_profit(d, m, o, k, plan).total;
        case ProfitKind::supplier: return supplier_expected_profit(d, m, o, plan);
        case ProfitKind::chain: return chain_expected_profit(d, m, plan.q_total());
    }
    return 0.0;
}

/// Monte-Carlo mean of the realized profit over n i.i.d. demand draws.
///
/// Draws are split into fixed blocks of kMcBlockSize, block b using its own
/// stream seeded from (seed, b); block moments are merged in block order,
/// so the estimate is bit-identical for any number of worker threads.
inline McEstimate mc_expected(ProfitKind kind, const DemandDistribution& d, const MarketParams& m,
                              const OptionContract& o, Overconfidence k, const OrderPlan& plan, std::uint64_t n,
                              std::uint64_t seed) {
    if (n == 0) {
        throw OutOfRange("mc_expected requires n >= 1");
    }
    m.validate();
    if (kind != ProfitKind::chain) {
        require_contract(m, o);
    }
    const std::uint64_t blocks = (n + kMcBlockSize - 1) / kMcBlockSize;
    std::vector<detail::Moments> partial(blocks);
    detail::parallel_for(blocks, [&](std::size_t b) {
        auto stream = detail::block_stream(seed, b);
        const std::uint64_t begin = b * kMcBlockSize;
        const std::uint64_t end = std::min(n, begin + kMcBlockSize);
        detail::Moments acc;
        for (std::uint64_t i = begin; i < end; ++i) {
            acc.add(realized_profit(kind, sample(d, stream), m, o, k, plan));
        }
        partial[b] = acc;
    });

    detail::Moments total;
    for (const auto& part : partial) {
        total.merge(part);
    }
    McEstimate out;
    out.mean = total.mean;
    out.n = n;
    out.seed = seed;
    out.std_error = n > 1 ? std::sqrt(total.m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    return out;
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Box of (spot, option) quantities searched on a uniform lattice.
struct GridSpec {
    Interval q1_range;
    Interval qq_range;
    double step = 0.05;

    void validate() const {
        const auto bad = [](const Interval& r) { return !(r.lo >= 0.0 && r.lo <= r.hi && std::isfinite(r.hi)); };
        if (bad(q1_range) || bad(qq_range) || !(step > 0.0)) {
            throw OutOfRange("grid spec requires 0 <= lo <= hi and step > 0");
        }
    }

    [[nodiscard]] std::size_t points(const Interval& r) const {
        return static_cast<std::size_t>(std::floor((r.hi - r.lo) / step + 1e-9)) + 1;
    }
};

/// Box [0, k*theta/(1-beta) * F^-1(0.9999)]^2, which contains the optimum for valid fractiles.
inline GridSpec default_grid(const DemandDistribution& d, const MarketParams& m, Overconfidence k, double step) {
    const double hi = k.k * m.theta / m.yield() * quantile(d, 0.9999);
    return GridSpec{{0.0, hi}, {0.0, hi}, step};
}

struct GridSearchResult {
    OrderPlan plan;
    double profit = 0.0;
};

/// Exhaustive maximization of the retailer's expected profit over the lattice.
///
/// Ties go to the smaller spot quantity, then the smaller option quantity.
/// The contract is not screened, so degenerate contracts can be probed.
inline GridSearchResult grid_search_plan(const DemandDistribution& d, const MarketParams& m, const OptionContract& o,
                                         Overconfidence k, const GridSpec& spec) {
    spec.validate();
    const std::size_t rows = spec.points(spec.q1_range);
    const std::size_t cols = spec.points(spec.qq_range);

    struct RowBest {
        std::size_t col = 0;
        double profit = -std::numeric_limits<double>::infinity();
    };
    std::vector<RowBest> best(rows);
    detail::parallel_for(rows, [&](std::size_t i) {
        const double q1 = spec.q1_range.lo + static_cast<double>(i) * spec.step;
        RowBest row;
        for (std::size_t j = 0; j < cols; ++j) {
            const double qq = spec.qq_range.lo + static_cast<double>(j) * spec.step;
            const double value = detail::retailer_profit_total(d, m, o, k.k, q1, qq);
            if (value > row.profit) {
                row = {j, value};
            }
        }
        best[i] = row;
    });

    std::size_t arg = 0;
    for (std::size_t i = 1; i < rows; ++i) {
        if (best[i].profit > best[arg].profit) {
            arg = i;
        }
    }
    return {OrderPlan(spec.q1_range.lo + static_cast<double>(arg) * spec.step,
                      spec.qq_range.lo + static_cast<double>(best[arg].col) * spec.step),
            best[arg].profit};
}

}  // namespace freshopt
