#pragma once

/*!
 * \file
 * \brief Closed-form inverse problems on the power-mean law: an unknown phase
 *        value, an unknown two-phase fraction, and Archie water saturation.
 *
 * Inconsistent measurements raise typed errors; nothing is clamped except the
 * documented 1e-9 saturation overshoot.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "error.hpp"
#include "mean.hpp"
#include "types.hpp"

namespace mixlaw {

namespace detail {

inline void check_hole(const Composition& comp, std::span<const double> known, std::size_t hole,
                       double target)
{
    check_lengths(comp, known.size());
    if (hole >= known.size())
        raise(Errc::InvalidArgument, "unknown phase index out of range");
    if (!comp.contributes(hole))
        raise(Errc::ZeroFraction, "unknown phase has zero fraction");
    if (!(target > 0.0) || !std::isfinite(target))
        raise(Errc::DomainError, "target must be positive and finite");
}

} // namespace detail

/*!
 * \brief Solves the power-mean law for the value of one phase.
 *
 * `known[hole]` is ignored. Returns σ_j with
 * σ_j^p = (target^p - Σ_{k≠j} a_k σ_k^p) / a_j, evaluated on values
 * divided by the target. When the deficit is within rounding of zero the
 * phase barely influences the mixture: the result is 0 for p > 0 and a large
 * finite value for p < 0, either of which reproduces the target.
 */
inline double solve_phase_value(double p, const Composition& comp, std::span<const double> known,
                                std::size_t hole, double target)
{
    if (!std::isfinite(p) || p == 0.0)
        detail::raise(Errc::InvalidArgument, "finite exponent must be a nonzero real");
    detail::check_hole(comp, known, hole, target);

    const double total = comp.sum();
    double rest = 0.0;
    for (std::size_t k = 0; k < known.size(); ++k) {
        if (k == hole || !comp.contributes(k))
            continue;
        const double v = known[k];
        if (!std::isfinite(v) || v < 0.0)
            detail::raise(Errc::NegativeValue, "known phase values must be finite and nonnegative");
        if (p < 0.0 && v == 0.0)
            detail::raise(Errc::NonPositiveValue, "known phase values must be positive for p < 0");
        rest += comp[k] / total * std::pow(v / target, p);
    }
    // a deficit within rounding of zero means the phase is unresolvable, not infeasible
    const double rounding = 4.0 * static_cast<double>(known.size()) * std::numeric_limits<double>::epsilon() *
                            std::max(1.0, rest);
    double deficit = 1.0 - rest;
    if (deficit < -rounding)
        detail::raise(Errc::Infeasible, "no nonnegative phase value reproduces the target");
    if (p > 0.0)
        deficit = std::max(deficit, 0.0);
    else
        deficit = std::max(deficit, rounding);
    return target * std::pow(deficit / (comp[hole] / total), 1.0 / p);
}

/// Geometric-mean counterpart of solve_phase_value.
inline double solve_phase_value_geometric(const Composition& comp, std::span<const double> known,
                                          std::size_t hole, double target)
{
    detail::check_hole(comp, known, hole, target);
    const double total = comp.sum();
    double rest = 0.0;
    for (std::size_t k = 0; k < known.size(); ++k) {
        if (k == hole || !comp.contributes(k))
            continue;
        if (!(known[k] > 0.0) || !std::isfinite(known[k]))
            detail::raise(Errc::NonPositiveValue, "known phase values must be positive");
        rest += comp[k] / total * std::log(known[k] / target);
    }
    return target * std::exp(-rest / (comp[hole] / total));
}

/*!
 * \brief Fraction a1 of phase 1 in a two-phase mixture that reproduces target.
 *
 * Finite p: a1 = (t^p - σ2^p)/(σ1^p - σ2^p); Zero: a1 = ln(t/σ2)/ln(σ1/σ2).
 * Infinite exponents do not identify a fraction and are rejected.
 */
inline double solve_fraction_two_phase(Exponent p, double sigma1, double sigma2, double target)
{
    for (double v : {sigma1, sigma2, target}) {
        if (!std::isfinite(v))
            detail::raise(Errc::DomainError, "values must be finite");
        if (v < 0.0)
            detail::raise(Errc::NegativeValue, "values must be nonnegative");
    }
    if (!p.is_finite() && p.kind() != Exponent::Kind::Zero)
        detail::raise(Errc::DomainError, "an infinite exponent does not determine a fraction");
    if (sigma1 == sigma2)
        detail::raise(Errc::DegenerateEqualPhases, "both phases have the same value");
    if (target < std::min(sigma1, sigma2) || target > std::max(sigma1, sigma2))
        detail::raise(Errc::OutOfRange, "target lies outside the range spanned by the phases");

    const bool needs_positive = p.kind() == Exponent::Kind::Zero || p.value() < 0.0;
    if (needs_positive && (sigma1 == 0.0 || sigma2 == 0.0))
        detail::raise(Errc::NonPositiveValue, "zero phase value with p <= 0 has no unique fraction");

    double a1;
    if (p.kind() == Exponent::Kind::Zero) {
        a1 = std::log(target / sigma2) / std::log(sigma1 / sigma2);
    } else {
        const double m = std::max(sigma1, sigma2);
        const double q = p.value();
        const double t_p = std::pow(target / m, q);
        const double s1_p = std::pow(sigma1 / m, q);
        const double s2_p = std::pow(sigma2 / m, q);
        a1 = (t_p - s2_p) / (s1_p - s2_p);
    }
    return std::clamp(a1, 0.0, 1.0);
}

/// Archie inputs with the saturation exponent equal to the cementation exponent m.
class ArchieParams
{
public:
    ArchieParams(double sigma_w, double phi, double s_w, double m)
        : sigma_w_(sigma_w)
        , phi_(phi)
        , s_w_(s_w)
        , m_(m)
    {
        if (!(sigma_w > 0.0) || !std::isfinite(sigma_w))
            detail::raise(Errc::InvalidArgument, "brine conductivity must be positive");
        if (!(phi >= 0.0 && phi <= 1.0))
            detail::raise(Errc::InvalidArgument, "porosity must lie in [0, 1]");
        if (!(s_w >= 0.0 && s_w <= 1.0))
            detail::raise(Errc::InvalidArgument, "water saturation must lie in [0, 1]");
        if (!(m > 0.0) || !std::isfinite(m))
            detail::raise(Errc::InvalidArgument, "Archie exponent must be positive");
    }

    double sigma_w() const noexcept { return sigma_w_; }
    double phi() const noexcept { return phi_; }
    double s_w() const noexcept { return s_w_; }
    double m() const noexcept { return m_; }

private:
    double sigma_w_;
    double phi_;
    double s_w_;
    double m_;
};

/*!
 * \brief Rock conductivity σ = σ_w·(φ·S_w)^m.
 *
 * Equal to the power mean at p = 1/m of brine (fraction φ·S_w, value σ_w)
 * and a nonconducting remainder (fraction 1 - φ·S_w, value 0).
 */
inline double archie_conductivity(const ArchieParams& params)
{
    return params.sigma_w() * std::pow(params.phi() * params.s_w(), params.m());
}

/// Water saturation S_w = (σ/σ_w)^{1/m}/φ; an overshoot of at most 1e-9 is clamped to 1.
inline double archie_saturation(double sigma, double sigma_w, double phi, double m)
{
    constexpr double overshoot = 1e-9;
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        detail::raise(Errc::DomainError, "rock conductivity must be nonnegative and finite");
    if (!(sigma_w > 0.0) || !std::isfinite(sigma_w))
        detail::raise(Errc::InvalidArgument, "brine conductivity must be positive");
    if (!(phi > 0.0 && phi <= 1.0))
        detail::raise(Errc::InvalidArgument, "porosity must lie in (0, 1]");
    if (!(m > 0.0) || !std::isfinite(m))
        detail::raise(Errc::InvalidArgument, "Archie exponent must be positive");

    const double s_w = std::pow(sigma / sigma_w, 1.0 / m) / phi;
    if (s_w > 1.0 + overshoot)
        detail::raise(Errc::SaturationOutOfRange,
                      "computed saturation " + std::to_string(s_w) + " exceeds 1");
    return std::min(s_w, 1.0);
}

} // namespace mixlaw
