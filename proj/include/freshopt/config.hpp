/**
 * @file config.hpp
 * @brief Scenario configuration: JSON schema 1, strict validation
 *
 * Layout:
 *   {
 *     "schema": 1,
 *     "comment": "free text",                                  (optional)
 *     "demand": {"family": "uniform", "params": {"lo": 0, "hi": 100}},
 *     "market": {"p": 50, "g": 10, "w0": 25, "c": 15, "beta": 0.1, "theta": 0.8},
 *     "contract": {"c0": 5, "ce": 35},                         (optional)
 *     "overconfidence": 1.0,                                   (default 1.0)
 *     "oracle": {"samples": 1000000, "seed": 42, "grid_step": 0.05},
 *     "sweep": {"mode": "fixed-exercise-price", "fixed_value": 35,
 *               "k_min": 0.75, "k_max": 1.5, "k_step": 0.01}   (optional)
 *   }
 * Demand params: uniform {lo, hi}; exponential {rate};
 * truncated-normal {location, scale}. Unknown keys are rejected.
 */

#pragma once

#include "freshopt/demand.hpp"
#include "freshopt/errors.hpp"
#include "freshopt/market.hpp"
#include "freshopt/sweep.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace freshopt {

struct OracleSettings {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 42;
    double grid_step = 0.05;
};

struct SweepSettings {
    SweepMode mode = SweepMode::fixed_exercise_price;
    double fixed_value = 0.0;
    double k_min = 0.75;
    double k_max = 1.5;
    double k_step = 0.01;
};

struct ScenarioConfig {
    DemandDistribution demand = DemandDistribution::uniform(0.0, 100.0);
    MarketParams market{};
    std::optional<OptionContract> contract;
    Overconfidence overconfidence{1.0};
    OracleSettings oracle;
    std::optional<SweepSettings> sweep;
    std::string comment;
};

namespace detail {

using nlohmann::json;

class ConfigReader {
public:
    std::vector<std::string> problems;

    void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
        for (const auto& item : obj.items()) {
            bool known = false;
            for (auto key : allowed) {
                known = known || item.key() == key;
            }
            if (!known) {
                problems.push_back(join(path, item.key()) + ": unknown key");
            }
        }
    }

    const json* object(const json& parent, const std::string& path, std::string_view key, bool required) {
        const auto it = parent.find(key);
        if (it == parent.end()) {
            if (required) {
                problems.push_back(join(path, key) + ": missing");
            }
            return nullptr;
        }
        if (!it->is_object()) {
            problems.push_back(join(path, key) + ": expected an object");
            return nullptr;
        }
        return &*it;
    }

    std::optional<double> number(const json& parent, const std::string& path, std::string_view key, bool required) {
        const auto it = parent.find(key);
        if (it == parent.end()) {
            if (required) {
                problems.push_back(join(path, key) + ": missing");
            }
            return std::nullopt;
        }
        if (!it->is_number()) {
            problems.push_back(join(path, key) + ": expected a number");
            return std::nullopt;
        }
        return it->get<double>();
    }

    std::optional<std::uint64_t> count(const json& parent, const std::string& path, std::string_view key) {
        const auto it = parent.find(key);
        if (it == parent.end()) {
            return std::nullopt;
        }
        if (!it->is_number_unsigned()) {
            problems.push_back(join(path, key) + ": expected a nonnegative integer");
            return std::nullopt;
        }
        return it->get<std::uint64_t>();
    }

    std::optional<std::string> text(const json& parent, const std::string& path, std::string_view key, bool required) {
        const auto it = parent.find(key);
        if (it == parent.end()) {
            if (required) {
                problems.push_back(join(path, key) + ": missing");
            }
            return std::nullopt;
        }
        if (!it->is_string()) {
            problems.push_back(join(path, key) + ": expected a string");
            return std::nullopt;
        }
        return it->get<std::string>();
    }

    void check(bool condition, const std::string& path, std::string_view message) {
        if (!condition) {
            problems.push_back(path + ": " + std::string(message));
        }
    }

    static std::string join(const std::string& path, std::string_view key) {
        return path.empty() ? std::string(key) : path + "." + std::string(key);
    }
};

inline std::optional<DemandDistribution> read_demand(ConfigReader& r, const json& node) {
    r.reject_unknown(node, "demand", {"family", "params"});
    const auto family = r.text(node, "demand", "family", true);
    const auto* params = r.object(node, "demand", "params", true);
    if (!family || !params) {
        return std::nullopt;
    }
    const std::string path = "demand.params";
    if (*family == "uniform") {
        r.reject_unknown(*params, path, {"lo", "hi"});
        const auto lo = r.number(*params, path, "lo", true);
        const auto hi = r.number(*params, path, "hi", true);
        if (lo && hi) {
            r.check(*lo >= 0.0, path + ".lo", "must be >= 0");
            r.check(*hi > *lo, path + ".hi", "must exceed lo");
            if (*lo >= 0.0 && *hi > *lo) {
                return DemandDistribution::uniform(*lo, *hi);
            }
        }
    } else if (*family == "exponential") {
        r.reject_unknown(*params, path, {"rate"});
        const auto rate = r.number(*params, path, "rate", true);
        if (rate) {
            r.check(*rate > 0.0, path + ".rate", "must be > 0");
            if (*rate > 0.0) {
                return DemandDistribution::exponential(*rate);
            }
        }
    } else if (*family == "truncated-normal") {
        r.reject_unknown(*params, path, {"location", "scale"});
        const auto location = r.number(*params, path, "location", true);
        const auto scale = r.number(*params, path, "scale", true);
        if (location && scale) {
            r.check(*scale > 0.0, path + ".scale", "must be > 0");
            if (*scale > 0.0) {
                return DemandDistribution::truncated_normal(*location, *scale);
            }
        }
    } else {
        r.problems.push_back("demand.family: unknown family '" + *family +
                             "' (expected uniform, exponential or truncated-normal)");
    }
    return std::nullopt;
}

inline std::optional<MarketParams> read_market(ConfigReader& r, const json& node) {
    r.reject_unknown(node, "market", {"p", "g", "w0", "c", "beta", "theta"});
    const auto p = r.number(node, "market", "p", true);
    const auto g = r.number(node, "market", "g", true);
    const auto w0 = r.number(node, "market", "w0", true);
    const auto c = r.number(node, "market", "c", true);
    const auto beta = r.number(node, "market", "beta", true);
    const auto theta = r.number(node, "market", "theta", true);
    if (!(p && g && w0 && c && beta && theta)) {
        return std::nullopt;
    }
    r.check(*p > *w0, "market.p", "must exceed w0");
    r.check(*w0 > *c, "market.w0", "must exceed c");
    r.check(*c >= 0.0, "market.c", "must be >= 0");
    r.check(*g >= 0.0, "market.g", "must be >= 0");
    r.check(*beta > 0.0 && *beta < 1.0, "market.beta", "must lie in (0, 1); 1 - beta divides every quantity");
    r.check(*theta > 0.0 && *theta <= 1.0, "market.theta", "must lie in (0, 1]");
    return MarketParams{*p, *g, *w0, *c, *beta, *theta};
}

inline std::optional<SweepSettings> read_sweep(ConfigReader& r, const json& node) {
    r.reject_unknown(node, "sweep", {"mode", "fixed_value", "k_min", "k_max", "k_step"});
    SweepSettings s;
    if (const auto mode = r.text(node, "sweep", "mode", true)) {
        if (const auto parsed = parse_sweep_mode(*mode)) {
            s.mode = *parsed;
        } else {
            r.problems.push_back("sweep.mode: unknown mode '" + *mode + "'");
        }
    }
    const bool needs_value = s.mode != SweepMode::fixed_contract;
    if (const auto v = r.number(node, "sweep", "fixed_value", needs_value)) {
        s.fixed_value = *v;
        r.check(*v > 0.0, "sweep.fixed_value", "must be > 0");
    }
    s.k_min = r.number(node, "sweep", "k_min", false).value_or(s.k_min);
    s.k_max = r.number(node, "sweep", "k_max", false).value_or(s.k_max);
    s.k_step = r.number(node, "sweep", "k_step", false).value_or(s.k_step);
    r.check(s.k_min > 0.0, "sweep.k_min", "must be > 0");
    r.check(s.k_max >= s.k_min, "sweep.k_max", "must be >= k_min");
    r.check(s.k_step > 0.0, "sweep.k_step", "must be > 0");
    return s;
}

inline std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

}  // namespace detail

/// Parses and validates a configuration document. Reports every problem at once.
inline ScenarioConfig parse_config(const std::string& text) {
    using detail::json;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, column] = detail::line_and_column(text, e.byte);
        throw ConfigParseError("config parse error at line " + std::to_string(line) + ", column " +
                                   std::to_string(column) + ": " + e.what(),
                               line, column);
    }
    if (!root.is_object()) {
        throw ConfigValidationError({"<root>: expected an object"});
    }

    detail::ConfigReader r;
    ScenarioConfig cfg;
    r.reject_unknown(root, "",
                     {"schema", "comment", "demand", "market", "contract", "overconfidence", "oracle", "sweep"});

    const auto schema = root.find("schema");
    if (schema == root.end()) {
        r.problems.emplace_back("schema: missing");
    } else if (!(schema->is_number_integer() && schema->get<long long>() == 1)) {
        r.problems.emplace_back("schema: unsupported version (expected 1)");
    }
    cfg.comment = r.text(root, "", "comment", false).value_or("");

    if (const auto* node = r.object(root, "", "demand", true)) {
        if (auto d = detail::read_demand(r, *node)) {
            cfg.demand = *d;
        }
    }
    if (const auto* node = r.object(root, "", "market", true)) {
        if (auto m = detail::read_market(r, *node)) {
            cfg.market = *m;
        }
    }
    if (const auto* node = r.object(root, "", "contract", false)) {
        r.reject_unknown(*node, "contract", {"c0", "ce"});
        const auto c0 = r.number(*node, "contract", "c0", true);
        const auto ce = r.number(*node, "contract", "ce", true);
        if (c0 && ce) {
            r.check(*c0 > 0.0, "contract.c0", "must be > 0");
            r.check(*ce > 0.0, "contract.ce", "must be > 0");
            cfg.contract = OptionContract{*c0, *ce};
        }
    }
    if (const auto k = r.number(root, "", "overconfidence", false)) {
        r.check(*k > 0.0, "overconfidence", "must be > 0");
        cfg.overconfidence.k = *k;
    }
    if (const auto* node = r.object(root, "", "oracle", false)) {
        r.reject_unknown(*node, "oracle", {"samples", "seed", "grid_step"});
        cfg.oracle.samples = r.count(*node, "oracle", "samples").value_or(cfg.oracle.samples);
        cfg.oracle.seed = r.count(*node, "oracle", "seed").value_or(cfg.oracle.seed);
        cfg.oracle.grid_step = r.number(*node, "oracle", "grid_step", false).value_or(cfg.oracle.grid_step);
        r.check(cfg.oracle.samples >= 1, "oracle.samples", "must be >= 1");
        r.check(cfg.oracle.grid_step > 0.0, "oracle.grid_step", "must be > 0");
    }
    if (const auto* node = r.object(root, "", "sweep", false)) {
        cfg.sweep = detail::read_sweep(r, *node);
    }

    if (!r.problems.empty()) {
        throw ConfigValidationError(std::move(r.problems));
    }
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigNotFound("config file not found: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace freshopt
