/**
 * @file demand.hpp
 * @brief Market-demand laws: CDF, quantile, mean, partial CDF integral, sampling
 *
 * Every profit formula in the library reaches the demand law only through
 * this header, so all downstream code is distribution-generic. Supported
 * families are uniform, exponential and a normal truncated at zero.
 */

#pragma once

#include "freshopt/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <variant>

namespace freshopt {

/// Per-caller random stream. Never share one between threads.
using RandomStream = std::mt19937_64;

/// Uniform draw in the open interval (0, 1) with 53 random bits.
///
/// Built from raw engine output so the sequence is identical on every
/// standard library (std::uniform_real_distribution is not portable).
inline double unit_uniform(RandomStream& stream) {
    for (;;) {
        const double u = static_cast<double>(stream() >> 11) * 0x1.0p-53;
        if (u > 0.0) {
            return u;
        }
    }
}

namespace detail {

inline double std_normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

/// Upper tail 1 - Phi(z), accurate for large z.
inline double std_normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

/// Antiderivative of Phi: d/dz [z Phi(z) + phi(z)] = Phi(z).
inline double std_normal_cdf_antiderivative(double z) {
    return z * std_normal_cdf(z) + std_normal_pdf(z);
}

}  // namespace detail

struct UniformDemand {
    double lo;
    double hi;
};

struct ExponentialDemand {
    double rate;
};

/// Normal(location, scale) conditioned on x >= 0.
struct TruncatedNormalDemand {
    double location;
    double scale;
};

enum class DemandFamily { uniform, exponential, truncated_normal };

inline std::string_view to_string(DemandFamily family) {
    switch (family) {
        case DemandFamily::uniform: return "uniform";
        case DemandFamily::exponential: return "exponential";
        case DemandFamily::truncated_normal: return "truncated-normal";
    }
    return "unknown";
}

/// Immutable demand law with support inside [0, inf).
class DemandDistribution {
public:
    using Law = std::variant<UniformDemand, ExponentialDemand, TruncatedNormalDemand>;

    static DemandDistribution uniform(double lo, double hi) {
        if (!(std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && lo < hi)) {
            throw OutOfRange("uniform demand requires 0 <= lo < hi");
        }
        return DemandDistribution(UniformDemand{lo, hi});
    }

    static DemandDistribution exponential(double rate) {
        if (!(std::isfinite(rate) && rate > 0.0)) {
            throw OutOfRange("exponential demand requires rate > 0");
        }
        return DemandDistribution(ExponentialDemand{rate});
    }

    static DemandDistribution truncated_normal(double location, double scale) {
        if (!(std::isfinite(location) && std::isfinite(scale) && scale > 0.0)) {
            throw OutOfRange("truncated-normal demand requires finite location and scale > 0");
        }
        return DemandDistribution(TruncatedNormalDemand{location, scale});
    }

    [[nodiscard]] DemandFamily family() const noexcept {
        return static_cast<DemandFamily>(law_.index());
    }

    [[nodiscard]] const Law& law() const noexcept { return law_; }

private:
    explicit DemandDistribution(Law law) : law_(law) {}

    Law law_;
};

namespace detail {

// Truncation constants: z0 = -location/scale, mass = 1 - Phi(z0).
struct TruncationTerms {
    double z0;
    double mass;
};

inline TruncationTerms truncation(const TruncatedNormalDemand& law) {
    const double z0 = -law.location / law.scale;
    return {z0, std_normal_sf(z0)};
}

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace detail

/// Density f(x).
inline double pdf(const DemandDistribution& d, double x) {
    return std::visit(
        detail::overloaded{
            [x](const UniformDemand& u) { return (x >= u.lo && x <= u.hi) ? 1.0 / (u.hi - u.lo) : 0.0; },
            [x](const ExponentialDemand& e) { return x < 0.0 ? 0.0 : e.rate * std::exp(-e.rate * x); },
            [x](const TruncatedNormalDemand& n) {
                if (x < 0.0) {
                    return 0.0;
                }
                const auto t = detail::truncation(n);
                return detail::std_normal_pdf((x - n.location) / n.scale) / (n.scale * t.mass);
            }},
        d.law());
}

/// F(x). Zero at or below the infimum of the support.
inline double cdf(const DemandDistribution& d, double x) {
    return std::visit(
        detail::overloaded{
            [x](const UniformDemand& u) {
                if (x <= u.lo) {
                    return 0.0;
                }
                if (x >= u.hi) {
                    return 1.0;
                }
                return (x - u.lo) / (u.hi - u.lo);
            },
            [x](const ExponentialDemand& e) { return x <= 0.0 ? 0.0 : -std::expm1(-e.rate * x); },
            [x](const TruncatedNormalDemand& n) {
                if (x <= 0.0) {
                    return 0.0;
                }
                const auto t = detail::truncation(n);
                const double z = (x - n.location) / n.scale;
                // Upper-tail form keeps precision as F -> 1.
                if (z > 0.0) {
                    return 1.0 - detail::std_normal_sf(z) / t.mass;
                }
                return (detail::std_normal_cdf(z) - detail::std_normal_cdf(t.z0)) / t.mass;
            }},
        d.law());
}

/// Smallest x with F(x) >= q, for 0 < q < 1.
///
/// The truncated normal is inverted by bracketed root-finding on cdf; the
/// bracket is tightened until the probability residual is below 1e-10.
inline double quantile(const DemandDistribution& d, double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw OutOfRange("quantile requires 0 < q < 1, got " + std::to_string(q));
    }
    return std::visit(
        detail::overloaded{
            [q](const UniformDemand& u) { return u.lo + q * (u.hi - u.lo); },
            [q](const ExponentialDemand& e) { return -std::log1p(-q) / e.rate; },
            [&d, q](const TruncatedNormalDemand& n) {
                double lo = 0.0;
                double hi = std::max(n.location, 0.0) + n.scale;
                while (cdf(d, hi) < q) {
                    lo = hi;
                    hi = 2.0 * hi + n.scale;
                }
                const auto residual = [&d, q](double x) { return cdf(d, x) - q; };
                std::uintmax_t max_iter = 200;
                const auto [a, b] = boost::math::tools::toms748_solve(
                    residual, lo, hi, boost::math::tools::eps_tolerance<double>(52), max_iter);
                // Report the bracket end satisfying F(x) >= q.
                return residual(a) >= 0.0 ? a : b;
            }},
        d.law());
}

/// E[x].
inline double mean(const DemandDistribution& d) {
    return std::visit(
        detail::overloaded{
            [](const UniformDemand& u) { return 0.5 * (u.lo + u.hi); },
            [](const ExponentialDemand& e) { return 1.0 / e.rate; },
            [](const TruncatedNormalDemand& n) {
                const auto t = detail::truncation(n);
                return n.location + n.scale * detail::std_normal_pdf(t.z0) / t.mass;
            }},
        d.law());
}

/// Integral of F over [0, a] by adaptive Gauss-Kronrod (absolute tolerance 1e-9).
///
/// Works for any family; the closed forms in cdf_integral are checked against it.
inline double cdf_integral_quadrature(const DemandDistribution& d, double a) {
    if (a <= 0.0) {
        return 0.0;
    }
    const auto integrand = [&d](double x) { return cdf(d, x); };
    double lower = 0.0;
    double acc = 0.0;
    // Split at support kinks so the integrand is smooth on each panel.
    if (const auto* u = std::get_if<UniformDemand>(&d.law())) {
        lower = std::min(a, u->lo);
        if (a > u->hi) {
            acc += a - u->hi;
            a = u->hi;
        }
    }
    if (a > lower) {
        double error = 0.0;
        acc += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lower, a, 30, 1e-14,
                                                                               &error);
    }
    return acc;
}

/// Integral of F over [0, a]; zero for a <= 0. Nondecreasing and convex in a.
inline double cdf_integral(const DemandDistribution& d, double a) {
    if (a <= 0.0) {
        return 0.0;
    }
    return std::visit(
        detail::overloaded{
            [a](const UniformDemand& u) {
                const double width = u.hi - u.lo;
                if (a <= u.lo) {
                    return 0.0;
                }
                if (a <= u.hi) {
                    const double s = a - u.lo;
                    return s * s / (2.0 * width);
                }
                return 0.5 * width + (a - u.hi);
            },
            [a](const ExponentialDemand& e) { return a + std::expm1(-e.rate * a) / e.rate; },
            [a](const TruncatedNormalDemand& n) {
                const auto t = detail::truncation(n);
                const double za = (a - n.location) / n.scale;
                const double below = detail::std_normal_cdf(t.z0);
                const double raw = n.scale * (detail::std_normal_cdf_antiderivative(za) -
                                              detail::std_normal_cdf_antiderivative(t.z0));
                return (raw - a * below) / t.mass;
            }},
        d.law());
}

/// Inverse-transform sample at a given uniform u in (0, 1).
inline double sample_at(const DemandDistribution& d, double u) { return quantile(d, u); }

/// Inverse-transform draw; advances the stream by exactly one 64-bit word
/// except in the (probability 2^-53) event of a zero draw.
inline double sample(const DemandDistribution& d, RandomStream& stream) {
    return sample_at(d, unit_uniform(stream));
}

}  // namespace freshopt
