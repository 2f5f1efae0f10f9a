#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"

namespace mixlaw {

/// Open interval (lo, hi); either end may be infinite.
struct Interval
{
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const noexcept { return x > lo && x < hi; }
    bool bounded() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }

    static Interval positive() noexcept
    {
        return {0.0, std::numeric_limits<double>::infinity()};
    }
    static Interval real_line() noexcept { return {}; }
};

namespace detail {

/*!
 * Finite window used to sample a possibly unbounded domain: an infinite end
 * is replaced by the finite end +- 10 (or +-10 around zero when both ends
 * are infinite).
 */
inline Interval sampling_window(Interval d)
{
    constexpr double reach = 10.0;
    const bool lo_inf = !std::isfinite(d.lo);
    const bool hi_inf = !std::isfinite(d.hi);
    if (lo_inf && hi_inf)
        return {-reach, reach};
    if (lo_inf)
        return {d.hi - reach, d.hi};
    if (hi_inf)
        return {d.lo, d.lo + reach};
    return d;
}

/// `count` points evenly spaced strictly inside the window (cell midpoints).
inline std::vector<double> interior_grid(Interval window, int count)
{
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(count));
    const double width = window.hi - window.lo;
    for (int i = 0; i < count; ++i)
        xs.push_back(window.lo + width * (i + 0.5) / count);
    return xs;
}

} // namespace detail

/*!
 * \brief Generating function f of a quasi-arithmetic mixing law
 *        f(σ) = Σ a_k f(σ_k), together with its inverse.
 *
 * Three kinds exist: a·ln x + b, a·x^p + b (both on x > 0) and a custom
 * callable pair on a declared domain. Custom generators are checked at
 * construction on a 32-point grid of the domain: f must be strictly monotone
 * there and f_inv(f(x)) must return x to 1e-9 relative. Custom callables must
 * be re-entrant if the generator is shared between threads.
 */
class Generator
{
public:
    struct AffineLog
    {
        double a = 1.0;
        double b = 0.0;
    };
    struct AffinePower
    {
        double a = 1.0;
        double b = 0.0;
        double p = 1.0;
    };
    struct Custom
    {
        std::function<double(double)> f;
        std::function<double(double)> f_inv;
        Interval domain;
        std::string name;
    };
    using Kind = std::variant<AffineLog, AffinePower, Custom>;

    static constexpr int validation_points = 32;
    static constexpr double roundtrip_tolerance = 1e-9;

    static Generator affine_log(double a = 1.0, double b = 0.0)
    {
        if (!(std::isfinite(a) && std::isfinite(b)) || a == 0.0)
            detail::raise(Errc::InvalidGenerator, "affine-log generator needs finite a != 0 and b");
        return Generator(AffineLog{a, b});
    }

    static Generator affine_power(double a, double b, double p)
    {
        if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(p)) || a == 0.0 || p == 0.0)
            detail::raise(Errc::InvalidGenerator,
                          "affine-power generator needs finite a != 0, b and p != 0");
        return Generator(AffinePower{a, b, p});
    }

    /// x^p, the canonical power-mean generator.
    static Generator power(double p) { return affine_power(1.0, 0.0, p); }

    static Generator custom(std::function<double(double)> f, std::function<double(double)> f_inv,
                            Interval domain, std::string name = "custom")
    {
        if (!f || !f_inv)
            detail::raise(Errc::InvalidGenerator, "custom generator needs f and f_inv");
        if (!(domain.lo < domain.hi))
            detail::raise(Errc::InvalidGenerator, "custom generator domain is empty");
        Generator g(Custom{std::move(f), std::move(f_inv), domain, std::move(name)});
        g.validate_custom_();
        return g;
    }

    const Kind& kind() const noexcept { return kind_; }

    Interval domain() const
    {
        if (const auto* c = std::get_if<Custom>(&kind_))
            return c->domain;
        return Interval::positive();
    }

    double operator()(double x) const
    {
        return std::visit(
            [x](const auto& g) -> double {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, AffineLog>)
                    return g.a * std::log(x) + g.b;
                else if constexpr (std::is_same_v<G, AffinePower>)
                    return g.a * std::pow(x, g.p) + g.b;
                else
                    return g.f(x);
            },
            kind_);
    }

    /// f⁻¹(y); NaN when y is outside the range of f.
    double inverse(double y) const
    {
        return std::visit(
            [y](const auto& g) -> double {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, AffineLog>) {
                    return std::exp((y - g.b) / g.a);
                } else if constexpr (std::is_same_v<G, AffinePower>) {
                    const double base = (y - g.b) / g.a;
                    if (base < 0.0)
                        return std::numeric_limits<double>::quiet_NaN();
                    return std::pow(base, 1.0 / g.p);
                } else {
                    return g.f_inv(y);
                }
            },
            kind_);
    }

    std::string describe() const
    {
        return std::visit(
            [](const auto& g) -> std::string {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, AffineLog>)
                    return "affine-log(a=" + std::to_string(g.a) + ", b=" + std::to_string(g.b) + ")";
                else if constexpr (std::is_same_v<G, AffinePower>)
                    return "affine-power(a=" + std::to_string(g.a) + ", b=" + std::to_string(g.b) +
                           ", p=" + std::to_string(g.p) + ")";
                else
                    return g.name;
            },
            kind_);
    }

private:
    explicit Generator(Kind kind)
        : kind_(std::move(kind))
    {}

    void validate_custom_() const
    {
        const auto& c = std::get<Custom>(kind_);
        const Interval window = detail::sampling_window(c.domain);
        const auto xs = detail::interior_grid(window, validation_points);
        const double floor = 1e-3 * (window.hi - window.lo);

        std::vector<double> ys;
        ys.reserve(xs.size());
        for (double x : xs) {
            const double y = c.f(x);
            const double back = c.f_inv(y);
            if (!std::isfinite(y) || !std::isfinite(back) ||
                std::abs(back - x) > roundtrip_tolerance * std::max(std::abs(x), floor))
                detail::raise(Errc::InvalidGenerator,
                              c.name + ": f_inv(f(x)) != x at x = " + std::to_string(x));
            ys.push_back(y);
        }
        const bool increasing = std::is_sorted(ys.begin(), ys.end(), std::less_equal<>{});
        const bool decreasing = std::is_sorted(ys.begin(), ys.end(), std::greater_equal<>{});
        if (!increasing && !decreasing)
            detail::raise(Errc::InvalidGenerator, c.name + ": f is not strictly monotone on its domain");
    }

    Kind kind_;
};

} // namespace mixlaw
