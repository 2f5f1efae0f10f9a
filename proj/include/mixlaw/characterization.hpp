#pragma once

/*!
 * \file
 * \brief Numerical witnesses for the functional equations behind
 *        scale-independent mixing laws.
 *
 * - scale independence: t·M(σ) = M(t·σ) for every t > 0
 * - translation independence: t + M(X) = M(X + t), the log-domain image of
 *   scale independence under F = f∘exp
 * - affine equivalence of generators: g = c·f + d gives the same mixing law
 * - Vincze decomposition: f(x + t) = c(t)·f(x) + d(t)
 *
 * A finite grid can only witness these identities; the CONFORMS/VIOLATES
 * thresholds separate rounding noise from structural violation.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "generator.hpp"
#include "mean.hpp"
#include "types.hpp"

namespace mixlaw {

enum class Verdict { Conforms, Violates, Inconclusive };

constexpr std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::Conforms: return "CONFORMS";
    case Verdict::Violates: return "VIOLATES";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "UNKNOWN";
}

inline constexpr double conforms_threshold = 1e-10;
inline constexpr double violates_threshold = 1e-6;

inline Verdict classify_residual(double max_residual) noexcept
{
    if (max_residual <= conforms_threshold)
        return Verdict::Conforms;
    if (max_residual >= violates_threshold)
        return Verdict::Violates;
    return Verdict::Inconclusive;
}

struct GridPoint
{
    double t = 1.0;
    std::vector<double> comp;
    std::vector<double> vals;
};

struct ResidualReport
{
    double max_abs_residual = 0.0;
    GridPoint argmax_point;
    std::size_t grid_size = 0;
    Verdict verdict = Verdict::Conforms;
};

/// Cartesian grid of scale factors, compositions and value vectors.
struct ScaleGrid
{
    std::vector<double> t_values;
    std::vector<Composition> comps;
    std::vector<std::vector<double>> value_sets;

    /*!
     * Five t values log-spaced over [1/s, s], three compositions and five
     * value pairs. For a bounded domain the usable part is shrunk by 10% of
     * its width at each end, s = min(10, R^{1/3}) with R its max/min ratio,
     * and values are confined so that t·σ never leaves it. Unbounded domains
     * use s = 10 and values in [0.2, 5].
     */
    static ScaleGrid default_for(const Interval& domain)
    {
        double v_lo = 0.2, v_hi = 5.0, s = 10.0;
        if (domain.bounded()) {
            const double margin = 0.1 * (domain.hi - domain.lo);
            const double lo = domain.lo + margin;
            const double hi = domain.hi - margin;
            if (!(lo > 0.0))
                detail::raise(Errc::DomainError, "scale checks need a positive domain");
            s = std::min(10.0, std::cbrt(hi / lo));
            v_lo = lo * s;
            v_hi = hi / s;
        } else if (std::isfinite(domain.lo) && domain.lo > 0.0) {
            // keep t·σ >= lo for t >= 0.1
            v_lo = 10.0 * domain.lo;
            v_hi = 250.0 * domain.lo;
        }

        ScaleGrid grid;
        for (int i = 0; i < 5; ++i)
            grid.t_values.push_back(std::pow(s, (i - 2) / 2.0));
        grid.comps = {Composition{0.5, 0.5}, Composition{0.2, 0.8}, Composition{0.9, 0.1}};
        const auto at = [&](double u) { return v_lo * std::pow(v_hi / v_lo, u); };
        const std::pair<double, double> positions[] = {
            {0.1, 0.9}, {0.3, 0.7}, {0.0, 1.0}, {0.45, 0.55}, {0.8, 0.2}};
        for (const auto& [u1, u2] : positions)
            grid.value_sets.push_back({at(u1), at(u2)});
        return grid;
    }
};

/// |t·M(σ) - M(t·σ)| / |t·M(σ)| for the generator's mixing law M.
inline double scale_independence_residual(const Generator& g, double t, const Composition& comp,
                                          std::span<const double> vals)
{
    if (!(t > 0.0) || !std::isfinite(t))
        detail::raise(Errc::InvalidArgument, "scale factor must be positive and finite");
    std::vector<double> scaled(vals.begin(), vals.end());
    for (double& v : scaled)
        v *= t;
    const double lhs = t * quasi_arithmetic_mean(g, comp, vals).value;
    const double rhs = quasi_arithmetic_mean(g, comp, scaled).value;
    return std::abs(lhs - rhs) / std::abs(lhs);
}

inline ResidualReport check_scale_independence(const Generator& g, const ScaleGrid& grid)
{
    ResidualReport report;
    for (double t : grid.t_values) {
        for (const auto& comp : grid.comps) {
            for (const auto& vals : grid.value_sets) {
                const double r = scale_independence_residual(g, t, comp, vals);
                ++report.grid_size;
                // NaN compares false; treat it as the worst possible residual
                if (report.grid_size == 1 || r > report.max_abs_residual || std::isnan(r)) {
                    report.max_abs_residual = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
                    report.argmax_point = {t, std::vector<double>(comp.fractions().begin(), comp.fractions().end()), vals};
                }
            }
        }
    }
    report.verdict = classify_residual(report.max_abs_residual);
    return report;
}

inline ResidualReport check_scale_independence(const Generator& g)
{
    return check_scale_independence(g, ScaleGrid::default_for(g.domain()));
}

/// |t + M(X) - M(X + t)| (absolute) for a generator on the real line.
inline double translation_independence_residual(const Generator& F, double t, const Composition& comp,
                                                std::span<const double> xs)
{
    if (!std::isfinite(t))
        detail::raise(Errc::InvalidArgument, "translation must be finite");
    std::vector<double> shifted(xs.begin(), xs.end());
    for (double& x : shifted)
        x += t;
    const double lhs = t + quasi_arithmetic_mean(F, comp, xs).value;
    const double rhs = quasi_arithmetic_mean(F, comp, shifted).value;
    return std::abs(lhs - rhs);
}

/// F = g∘exp on `log_domain`, with F⁻¹ = ln∘g⁻¹.
inline Generator log_domain_bridge(const Generator& g, Interval log_domain)
{
    return Generator::custom([g](double x) { return g(std::exp(x)); },
                             [g](double y) { return std::log(g.inverse(y)); }, log_domain,
                             g.describe() + " o exp");
}

namespace detail {

struct AffineFit
{
    double c = 0.0;
    double d = 0.0;
    double max_residual = 0.0;
};

/// Least-squares v ≈ c·u + d with the max absolute deviation.
inline AffineFit fit_affine(std::span<const double> u, std::span<const double> v)
{
    const double n = static_cast<double>(u.size());
    double mu = 0.0, mv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        mu += u[i];
        mv += v[i];
    }
    mu /= n;
    mv /= n;
    double suu = 0.0, suv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        suu += (u[i] - mu) * (u[i] - mu);
        suv += (u[i] - mu) * (v[i] - mv);
    }
    if (suu == 0.0)
        raise(Errc::DegenerateGrid, "reference generator is constant on the grid");
    AffineFit fit;
    fit.c = suv / suu;
    fit.d = mv - fit.c * mu;
    for (std::size_t i = 0; i < u.size(); ++i)
        fit.max_residual = std::max(fit.max_residual, std::abs(v[i] - fit.c * u[i] - fit.d));
    return fit;
}

inline void check_grid(std::span<const double> grid)
{
    std::vector<double> distinct(grid.begin(), grid.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3)
        raise(Errc::DegenerateGrid, "need at least 3 distinct grid points");
}

} // namespace detail

struct Equivalence
{
    bool equivalent = false;
    double c = 0.0;
    double d = 0.0;
    double residual = 0.0;
    /// Max relative difference of the two mixing laws on 10 seeded random instances.
    double mean_discrepancy = 0.0;
};

/*!
 * \brief Tests whether g2 = c·g1 + d on the grid.
 *
 * Equivalent iff the least-squares fit leaves a max residual of at most
 * 1e-9 times the range of g2 on the grid and c != 0.
 */
inline Equivalence generators_equivalent(const Generator& g1, const Generator& g2,
                                         std::span<const double> grid)
{
    detail::check_grid(grid);
    std::vector<double> u, v;
    for (double x : grid) {
        if (!g1.domain().contains(x) || !g2.domain().contains(x))
            detail::raise(Errc::DomainError, "grid point " + std::to_string(x) + " outside a generator domain");
        u.push_back(g1(x));
        v.push_back(g2(x));
    }
    const auto fit = detail::fit_affine(u, v);
    const auto [vmin, vmax] = std::minmax_element(v.begin(), v.end());

    Equivalence out;
    out.c = fit.c;
    out.d = fit.d;
    out.residual = fit.max_residual;
    out.equivalent = fit.c != 0.0 && fit.max_residual <= 1e-9 * (*vmax - *vmin);

    const auto [gmin, gmax] = std::minmax_element(grid.begin(), grid.end());
    std::mt19937_64 rng(20240229);
    std::uniform_real_distribution<double> value(*gmin, *gmax);
    std::uniform_real_distribution<double> share(0.05, 1.0);
    for (int i = 0; i < 10; ++i) {
        std::vector<double> props{share(rng), share(rng), share(rng)};
        const auto comp = Composition::normalized(props);
        const std::vector<double> vals{value(rng), value(rng), value(rng)};
        const double m1 = quasi_arithmetic_mean(g1, comp, vals).value;
        const double m2 = quasi_arithmetic_mean(g2, comp, vals).value;
        out.mean_discrepancy = std::max(out.mean_discrepancy, std::abs(m1 - m2) / std::abs(m1));
    }
    return out;
}

struct VinczeFit
{
    double t = 0.0;
    double c_of_t = 0.0;
    double d_of_t = 0.0;
    double residual = 0.0;
};

/// Least-squares c(t), d(t) in f(x + t) ≈ c(t)·f(x) + d(t) over the grid.
inline VinczeFit vincze_decomposition(const Generator& f, double t, std::span<const double> grid)
{
    detail::check_grid(grid);
    const Interval domain = f.domain();
    std::vector<double> u, v;
    for (double x : grid) {
        if (!domain.contains(x) || !domain.contains(x + t))
            detail::raise(Errc::DomainError, "grid point " + std::to_string(x) + " or its shift leaves the domain");
        u.push_back(f(x));
        v.push_back(f(x + t));
    }
    const auto fit = detail::fit_affine(u, v);
    return {t, fit.c, fit.d, fit.max_residual};
}

/// Monotone generators that are not scale-independent.
namespace witness {

/// f(x) = x + x³ on x > 0.
inline Generator cubic_plus_linear()
{
    const auto inverse = [](double y) {
        // real root of x³ + x - y via Cardano: x = q^(1/3) - 1/(3 q^(1/3))
        const double ay = std::abs(y);
        const double q = ay / 2.0 + std::sqrt(ay * ay / 4.0 + 1.0 / 27.0);
        const double r = std::cbrt(q);
        double x = r - 1.0 / (3.0 * r);
        x -= (x * x * x + x - ay) / (3.0 * x * x + 1.0);
        return std::copysign(x, y);
    };
    return Generator::custom([](double x) { return x + x * x * x; }, inverse, Interval::positive(),
                             "witness:cubic-plus-linear");
}

/// f(x) = exp(x) on (0.5, 4).
inline Generator exponential()
{
    return Generator::custom([](double x) { return std::exp(x); }, [](double y) { return std::log(y); },
                             Interval{0.5, 4.0}, "witness:exp");
}

} // namespace witness

} // namespace mixlaw
