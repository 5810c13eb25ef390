/**
 * @file cli.hpp
 * @brief Command-line driver: optimize, evaluate, coordinate, simulate, sweep
 *
 * Exit codes: 0 success, 1 infeasible problem, 2 configuration or usage error.
 * Flags override config values, which override built-in defaults.
 */

#pragma once

#include "freshopt/config.hpp"
#include "freshopt/errors.hpp"
#include "freshopt/optimizer.hpp"
#include "freshopt/oracle.hpp"
#include "freshopt/profit.hpp"
#include "freshopt/sweep.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace freshopt {

enum ExitCode : int { kExitOk = 0, kExitInfeasible = 1, kExitConfig = 2 };

/// Fixed six-decimal rendering; negative zero prints as zero.
inline std::string fmt6(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6f", value);
    std::string out(buffer);
    if (out == "-0.000000") {
        out.erase(0, 1);
    }
    return out;
}

namespace detail {

inline std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    out += '"';
    return out;
}

inline std::string csv_number(const std::optional<double>& value) { return value ? fmt6(*value) : std::string(); }

}  // namespace detail

inline constexpr const char* kSweepCsvHeader =
    "k,c0,ce,q_total,q_spot,q_option,retailer_profit_believed,retailer_profit_true,supplier_profit,chain_profit,"
    "feasible,note";

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << kSweepCsvHeader << '\n';
    for (const auto& row : rows) {
        out << fmt6(row.k);
        for (const auto& [name, member] : kSweepNumericColumns) {
            out << ',' << detail::csv_number(row.*member);
        }
        out << ',' << (row.feasible ? "true" : "false") << ',' << detail::csv_field(row.note) << '\n';
    }
}

inline void write_monotonicity(const MonotonicityReport& report, std::ostream& out) {
    for (const auto& column : report.columns) {
        out << column.column << ": " << to_string(column.trend);
        if (column.first_violation) {
            out << " (first break between k=" << fmt6(column.first_violation->first)
                << " and k=" << fmt6(column.first_violation->second) << ")";
        }
        out << '\n';
    }
}

namespace detail {

struct CommonFlags {
    std::string config_path;
    std::optional<double> k;
    std::optional<double> c0;
    std::optional<double> ce;
    std::string out_path;
};

inline void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "scenario config (JSON)")->required();
    cmd->add_option("--k", flags.k, "overconfidence coefficient (overrides config)");
    cmd->add_option("--c0", flags.c0, "option premium (overrides config)");
    cmd->add_option("--ce", flags.ce, "exercise price (overrides config)");
    cmd->add_option("--out", flags.out_path, "write output to this file instead of stdout");
}

struct Resolved {
    ScenarioConfig config;
    Overconfidence k;
};

inline Resolved resolve(const CommonFlags& flags) {
    Resolved r{load_config(flags.config_path), {}};
    r.k = Overconfidence{flags.k.value_or(r.config.overconfidence.k)};
    if (flags.c0 || flags.ce) {
        const auto base = r.config.contract.value_or(OptionContract{0.0, 0.0});
        r.config.contract = OptionContract{flags.c0.value_or(base.c0), flags.ce.value_or(base.ce)};
    }
    return r;
}

inline OptionContract require_contract_terms(const ScenarioConfig& cfg) {
    if (!cfg.contract || !(cfg.contract->c0 > 0.0) || !(cfg.contract->ce > 0.0)) {
        throw ConfigValidationError({"contract: c0 and ce required (config or --c0/--ce)"});
    }
    return *cfg.contract;
}

/// Writes to --out when given, else to the command's stdout stream.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw ConfigError("cannot open output file: " + path);
            }
        }
        stream_ = path.empty() ? &fallback : &file_;
    }

    std::ostream& stream() { return *stream_; }
    [[nodiscard]] bool to_file() const { return stream_ == &file_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

inline void print_kv(std::ostream& out, std::string_view key, double value) { out << key << '=' << fmt6(value) << '\n'; }

inline void print_profits(std::ostream& out, const ScenarioConfig& cfg, const OptionContract& o, Overconfidence k,
                          const OrderPlan& plan) {
    const auto believed = retailer_expected_profit(cfg.demand, cfg.market, o, k, plan);
    print_kv(out, "Q", plan.q_total());
    print_kv(out, "Q1", plan.q_spot());
    print_kv(out, "Qq", plan.q_option());
    print_kv(out, "retailer_profit", believed.total);
    for (const auto& [name, value] : believed.terms()) {
        print_kv(out, name, value);
    }
    print_kv(out, "retailer_profit_true",
             retailer_expected_profit(cfg.demand, cfg.market, o, Overconfidence{1.0}, plan).total);
    print_kv(out, "supplier_profit", supplier_expected_profit(cfg.demand, cfg.market, o, plan));
    print_kv(out, "chain_profit", chain_expected_profit(cfg.demand, cfg.market, plan.q_total()));
}

}  // namespace detail

/// Runs the CLI with the given arguments (program name excluded).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Option and spot ordering for fresh products under retailer overconfidence", "freshopt"};
    app.require_subcommand(1);

    detail::CommonFlags common;

    auto* optimize = app.add_subcommand("optimize", "optimal spot/option order plan and its profits");
    detail::add_common(optimize, common);

    double q1 = 0.0;
    double qq = 0.0;
    auto* evaluate = app.add_subcommand("evaluate", "expected profits at a given plan");
    detail::add_common(evaluate, common);
    evaluate->add_option("--q1", q1, "spot order quantity")->required();
    evaluate->add_option("--qq", qq, "option order quantity")->required();

    bool solve_exercise = false;
    auto* coordinate = app.add_subcommand("coordinate", "coordinating premium (or exercise price)");
    detail::add_common(coordinate, common);
    coordinate->add_flag("--solve-exercise", solve_exercise, "hold c0 fixed and solve for ce");

    std::string kind_text = "retailer";
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<double> sim_q1;
    std::optional<double> sim_qq;
    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo check of an expected-profit formula");
    detail::add_common(simulate, common);
    simulate->add_option("--kind", kind_text, "retailer | supplier | chain")
        ->check(CLI::IsMember({"retailer", "supplier", "chain"}));
    simulate->add_option("--n", samples, "number of demand draws");
    simulate->add_option("--seed", seed, "random seed");
    simulate->add_option("--q1", sim_q1, "spot quantity (default: optimal plan)");
    simulate->add_option("--qq", sim_qq, "option quantity (default: optimal plan)");

    std::optional<std::string> mode_text;
    std::optional<double> fixed_value;
    std::optional<double> k_min;
    std::optional<double> k_max;
    std::optional<double> k_step;
    auto* sweep = app.add_subcommand("sweep", "sensitivity over k, written as CSV");
    detail::add_common(sweep, common);
    sweep->add_option("--mode", mode_text, "fixed-exercise-price | fixed-premium | fixed-contract")
        ->check(CLI::IsMember({"fixed-exercise-price", "fixed-premium", "fixed-contract"}));
    sweep->add_option("--fixed", fixed_value, "fixed ce (or c0) of the sweep");
    sweep->add_option("--k-min", k_min, "first k");
    sweep->add_option("--k-max", k_max, "last k");
    sweep->add_option("--k-step", k_step, "k increment");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        auto resolved = detail::resolve(common);
        auto& cfg = resolved.config;
        const auto k = resolved.k;
        detail::Output sink(common.out_path, out);
        auto& os = sink.stream();

        if (*optimize) {
            const auto o = detail::require_contract_terms(cfg);
            const auto plan = optimal_plan(cfg.demand, cfg.market, o, k);
            detail::print_profits(os, cfg, o, k, plan);
        } else if (*evaluate) {
            const auto o = detail::require_contract_terms(cfg);
            detail::print_profits(os, cfg, o, k, OrderPlan(q1, qq));
        } else if (*coordinate) {
            CoordinationResult result;
            OptionContract contract{};
            if (solve_exercise) {
                const double c0 = common.c0 ? *common.c0 : detail::require_contract_terms(cfg).c0;
                result = coordinating_exercise_price(cfg.demand, cfg.market, c0, k);
                contract = {c0, result.price};
            } else {
                const double ce = common.ce ? *common.ce : detail::require_contract_terms(cfg).ce;
                result = coordinating_premium(cfg.demand, cfg.market, ce, k);
                contract = {result.price, ce};
            }
            detail::print_kv(os, "c0", contract.c0);
            detail::print_kv(os, "ce", contract.ce);
            detail::print_kv(os, "k", k.k);
            detail::print_kv(os, "Q_centralized", optimal_centralized(cfg.demand, cfg.market));
            os << "feasible=" << (result.feasibility.ok() ? "true" : "false") << '\n';
            if (!result.feasibility.ok()) {
                err << "error: coordinating contract is not feasible: " << result.feasibility.summary() << '\n';
                return kExitInfeasible;
            }
            detail::print_kv(os, "Q", optimal_plan(cfg.demand, cfg.market, contract, k).q_total());
        } else if (*simulate) {
            const auto o = detail::require_contract_terms(cfg);
            const auto kind = kind_text == "supplier" ? ProfitKind::supplier
                              : kind_text == "chain"  ? ProfitKind::chain
                                                      : ProfitKind::retailer;
            OrderPlan plan;
            if (sim_q1 || sim_qq) {
                plan = OrderPlan(sim_q1.value_or(0.0), sim_qq.value_or(0.0));
            } else {
                plan = optimal_plan(cfg.demand, cfg.market, o, k);
            }
            const auto n = samples.value_or(cfg.oracle.samples);
            const auto s = seed.value_or(cfg.oracle.seed);
            const double analytic = analytic_expected(kind, cfg.demand, cfg.market, o, k, plan);
            const auto estimate = mc_expected(kind, cfg.demand, cfg.market, o, k, plan, n, s);
            const double distance = estimate.sigma_distance(analytic);
            os << "kind=" << to_string(kind) << '\n';
            os << "n=" << n << '\n';
            os << "seed=" << s << '\n';
            detail::print_kv(os, "analytic", analytic);
            detail::print_kv(os, "mc_mean", estimate.mean);
            detail::print_kv(os, "stderr", estimate.std_error);
            detail::print_kv(os, "sigma_distance", distance);
            os << "within_3_sigma=" << (distance < 3.0 ? "true" : "false") << '\n';
        } else if (*sweep) {
            auto settings = cfg.sweep.value_or(SweepSettings{});
            if (mode_text) {
                settings.mode = *parse_sweep_mode(*mode_text);
            }
            if (fixed_value) {
                settings.fixed_value = *fixed_value;
            } else if (!cfg.sweep || (mode_text && settings.mode != cfg.sweep->mode)) {
                // Default fixed value comes from the contract term that the mode holds fixed.
                if (settings.mode == SweepMode::fixed_exercise_price && cfg.contract) {
                    settings.fixed_value = cfg.contract->ce;
                } else if (settings.mode == SweepMode::fixed_premium && cfg.contract) {
                    settings.fixed_value = cfg.contract->c0;
                }
            }
            settings.k_min = k_min.value_or(settings.k_min);
            settings.k_max = k_max.value_or(settings.k_max);
            settings.k_step = k_step.value_or(settings.k_step);

            SweepScenario scenario;
            scenario.mode = settings.mode;
            scenario.fixed_value = settings.fixed_value;
            scenario.demand = cfg.demand;
            scenario.market = cfg.market;
            scenario.contract = cfg.contract;
            try {
                scenario.k_grid = make_k_grid(settings.k_min, settings.k_max, settings.k_step);
                scenario.validate();
            } catch (const OutOfRange& e) {
                throw ConfigValidationError({std::string("sweep: ") + e.what()});
            }
            const auto rows = run_sweep(scenario);
            write_sweep_csv(rows, os);
            std::ostream& report_stream = sink.to_file() ? out : err;
            try {
                write_monotonicity(monotonicity_report(rows), report_stream);
            } catch (const TooFewRows& e) {
                report_stream << "monotonicity: " << e.what() << '\n';
            }
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const OutOfRange& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInfeasible;
    }
}

}  // namespace freshopt
