#pragma once

/*!
 * \file
 * \brief Quasi-arithmetic and power-mean mixing laws.
 *
 * All evaluations factor out a reference phase value before powering so
 * that results scale exactly with the inputs over the whole double range.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "generator.hpp"
#include "types.hpp"

namespace mixlaw {

/// Largest |p| accepted on the complex path.
inline constexpr double complex_exponent_limit = 4.0;

namespace detail {

inline void check_lengths(const Composition& comp, std::size_t n)
{
    if (comp.size() != n)
        raise(Errc::LengthMismatch, "composition has " + std::to_string(comp.size()) +
                                        " phases but " + std::to_string(n) + " values were given");
}

inline void check_nonnegative(std::span<const double> vals)
{
    for (double v : vals) {
        if (std::isnan(v) || std::isinf(v))
            raise(Errc::DomainError, "phase values must be finite");
        if (v < 0.0)
            raise(Errc::NegativeValue, "phase value " + std::to_string(v) + " is negative");
    }
}

inline void check_positive(std::span<const double> vals)
{
    for (double v : vals) {
        if (!std::isfinite(v))
            raise(Errc::DomainError, "phase values must be finite");
        if (!(v > 0.0))
            raise(Errc::NonPositiveValue, "phase value " + std::to_string(v) + " is not positive");
    }
}

/// Weights and values of the phases with a nonzero fraction.
struct Contributing
{
    std::vector<double> w;
    std::vector<double> x;
};

inline Contributing contributing(const Composition& comp, std::span<const double> vals)
{
    Contributing out;
    const double total = comp.sum();
    for (std::size_t k = 0; k < comp.size(); ++k) {
        if (!comp.contributes(k))
            continue;
        out.w.push_back(comp[k] / total);
        out.x.push_back(vals[k]);
    }
    return out;
}

/*!
 * Power mean of strictly positive values for finite p != 0, computed as
 * m·exp(log(Σ w (x/m)^p) / p) with m the largest value when p > 0 and the
 * smallest when p < 0. Every ratio power then lies in (0, 1], so the sum
 * cannot overflow and the expm1/log1p route keeps full relative accuracy as
 * p approaches zero.
 */
inline double scaled_power_mean(double p, std::span<const double> w, std::span<const double> x,
                                double& reference)
{
    reference = p > 0 ? *std::max_element(x.begin(), x.end())
                      : *std::min_element(x.begin(), x.end());
    double shifted = 0.0; // Σ w ((x/m)^p - 1), in [-1, 0]
    for (std::size_t k = 0; k < x.size(); ++k)
        shifted += w[k] * std::expm1(p * std::log(x[k] / reference));

    double log_sum;
    if (shifted > -0.5) {
        log_sum = std::log1p(shifted);
    } else {
        double direct = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k)
            direct += w[k] * std::pow(x[k] / reference, p);
        log_sum = std::log(direct);
    }
    return reference * std::exp(log_sum / p);
}

} // namespace detail

/*!
 * \brief Weighted geometric mean Π σ_k^{a_k}, evaluated in the log domain.
 *
 * Returns 0 when a contributing phase is 0.
 */
inline MixResult<double> geometric_mean(const Composition& comp, std::span<const double> vals)
{
    detail::check_lengths(comp, vals.size());
    detail::check_nonnegative(vals);
    const auto c = detail::contributing(comp, vals);

    MixResult<double> r;
    r.flags.set(MixFlag::GeometricLimitUsed);
    const double m = *std::max_element(c.x.begin(), c.x.end());
    if (*std::min_element(c.x.begin(), c.x.end()) == 0.0) {
        r.flags.set(MixFlag::ZeroPhaseShortCircuit);
        return r;
    }
    double log_ratio = 0.0;
    for (std::size_t k = 0; k < c.x.size(); ++k)
        log_ratio += c.w[k] * std::log(c.x[k] / m);
    r.value = m * std::exp(log_ratio);
    if (m != 1.0)
        r.flags.set(MixFlag::RescaledForStability);
    return r;
}

/*!
 * \brief Power mean (Σ a_k σ_k^p)^{1/p} over the extended exponent range.
 *
 * Zero gives the geometric mean, +-inf the max/min over phases with a
 * nonzero fraction. A zero-valued contributing phase forces the result to 0
 * for p <= 0 and is included normally for p > 0.
 */
inline MixResult<double> power_mean(Exponent p, const Composition& comp,
                                    std::span<const double> vals)
{
    detail::check_lengths(comp, vals.size());
    detail::check_nonnegative(vals);
    if (p.kind() == Exponent::Kind::Zero)
        return geometric_mean(comp, vals);

    const auto c = detail::contributing(comp, vals);
    const auto [lo, hi] = std::minmax_element(c.x.begin(), c.x.end());

    MixResult<double> r;
    const bool nonpositive = p.kind() == Exponent::Kind::MinusInfinity ||
                             (p.is_finite() && p.value() < 0.0);
    if (nonpositive && *lo == 0.0) {
        r.flags.set(MixFlag::ZeroPhaseShortCircuit);
        return r;
    }
    switch (p.kind()) {
    case Exponent::Kind::PlusInfinity: r.value = *hi; return r;
    case Exponent::Kind::MinusInfinity: r.value = *lo; return r;
    default: break;
    }
    if (*hi == 0.0)
        return r;

    // zero phases (p > 0 only) enter through expm1(-inf) = -1
    double reference = 1.0;
    r.value = detail::scaled_power_mean(p.value(), c.w, c.x, reference);
    if (reference != 1.0)
        r.flags.set(MixFlag::RescaledForStability);
    return r;
}

inline MixResult<double> power_mean(double p, const Composition& comp, std::span<const double> vals)
{
    return power_mean(Exponent::from_double(p), comp, vals);
}

/*!
 * \brief General mixing law f⁻¹(Σ a_k f(σ_k)) for an invertible generator.
 *
 * Evaluated literally through the generator and its inverse. Every value must
 * lie strictly inside the generator's domain.
 */
inline MixResult<double> quasi_arithmetic_mean(const Generator& g, const Composition& comp,
                                               std::span<const double> vals)
{
    detail::check_lengths(comp, vals.size());
    const Interval domain = g.domain();
    for (double v : vals) {
        if (!domain.contains(v))
            detail::raise(Errc::DomainError,
                          "value " + std::to_string(v) + " outside the domain of " + g.describe());
    }
    const auto c = detail::contributing(comp, vals);
    MixResult<double> r;
    if (std::holds_alternative<Generator::AffineLog>(g.kind()))
        r.flags.set(MixFlag::GeometricLimitUsed);
    if (std::ranges::all_of(c.x, [&](double x) { return x == c.x.front(); })) {
        // f⁻¹(f(x)) = x for every generator; skip the rounding of the round trip
        r.value = c.x.front();
        return r;
    }
    double y = 0.0;
    for (std::size_t k = 0; k < c.x.size(); ++k)
        y += c.w[k] * g(c.x[k]);

    r.value = g.inverse(y);
    if (!(r.value >= domain.lo && r.value <= domain.hi))
        detail::raise(Errc::NonInvertible, "weighted generator value outside the range of " + g.describe());
    return r;
}

/*!
 * \brief Power mean of complex phase values, e.g. complex conductivities.
 *
 * Nonzero values must have a strictly positive real part and |p| <= 4.
 * σ^p uses the principal logarithm. The p-th root of the weighted sum takes
 * the branch whose argument is nearest p·Σ a_k arg σ_k, which coincides with
 * the principal branch for |p| <= 1 and keeps the law idempotent for larger
 * |p|. Values are divided by the largest modulus before powering.
 */
inline MixResult<std::complex<double>> power_mean_complex(double p, const Composition& comp,
                                                          std::span<const std::complex<double>> vals)
{
    using cplx = std::complex<double>;
    detail::check_lengths(comp, vals.size());
    if (!std::isfinite(p) || p == 0.0 || std::abs(p) > complex_exponent_limit)
        detail::raise(Errc::DomainError, "complex power mean needs finite p != 0 with |p| <= 4");

    bool has_zero = false;
    double m = 0.0;
    for (std::size_t k = 0; k < vals.size(); ++k) {
        const cplx z = vals[k];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            detail::raise(Errc::DomainError, "phase values must be finite");
        if (z == cplx{})
            continue;
        if (!(z.real() > 0.0))
            detail::raise(Errc::BranchDomainError, "nonzero value with nonpositive real part");
    }
    const double total = comp.sum();
    for (std::size_t k = 0; k < vals.size(); ++k) {
        if (!comp.contributes(k))
            continue;
        if (vals[k] == cplx{})
            has_zero = true;
        m = std::max(m, std::abs(vals[k]));
    }

    MixResult<cplx> r;
    if (has_zero && p < 0.0)
        detail::raise(Errc::ZeroWithNonpositiveP, "zero phase value with p <= 0");
    if (m == 0.0)
        return r;

    cplx sum{};
    double mean_arg = 0.0;
    for (std::size_t k = 0; k < vals.size(); ++k) {
        if (!comp.contributes(k) || vals[k] == cplx{})
            continue;
        const double w = comp[k] / total;
        const cplx log_z = std::log(vals[k] / m);
        sum += w * std::exp(p * log_z);
        mean_arg += w * log_z.imag();
    }
    if (sum == cplx{})
        detail::raise(Errc::NonInvertible, "weighted sum of powers vanished");

    const double target_arg = p * mean_arg;
    const double arg = std::arg(sum * std::polar(1.0, -target_arg)) + target_arg;
    const cplx log_sum{std::log(std::abs(sum)), arg};
    r.value = m * std::exp(log_sum / p);
    if (m != 1.0)
        r.flags.set(MixFlag::RescaledForStability);
    return r;
}

/*!
 * \brief Derivative dM/dp of the power mean M(p) = (Σ a_k σ_k^p)^{1/p}.
 *
 * With ℓ = ln σ, dM/dp = M·d/dp[(1/p)·ln E_a(e^{pℓ})]. Near p = 0 this uses
 * the cumulant expansion κ2/2 + κ3·p/3 + κ4·p²/8 (at p = 0 exactly
 * G·Var_a(ln σ)/2); for |p| < 1 the mean-centred form; beyond that the form
 * shifted by the extreme log-value. The result is never negative.
 */
inline double power_mean_dp(double p, const Composition& comp, std::span<const double> vals)
{
    detail::check_lengths(comp, vals.size());
    detail::check_positive(vals);
    if (!std::isfinite(p))
        detail::raise(Errc::DomainError, "derivative needs a finite exponent");
    const auto c = detail::contributing(comp, vals);
    const std::size_t n = c.x.size();

    std::vector<double> ell(n);
    double mu = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        ell[k] = std::log(c.x[k]);
        mu += c.w[k] * ell[k];
    }
    std::vector<double> centred(n);
    double residual_mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        centred[k] = ell[k] - mu;
        residual_mean += c.w[k] * centred[k];
    }
    bool spread = false;
    for (double& l : centred) {
        l -= residual_mean;
        spread = spread || l != 0.0;
    }
    if (!spread)
        return 0.0;

    const double mean = power_mean(Exponent::from_double(p), comp, vals).value;
    double d;
    if (std::abs(p) < 1e-5) {
        double k2 = 0.0, k3 = 0.0, m4 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double l2 = centred[k] * centred[k];
            k2 += c.w[k] * l2;
            k3 += c.w[k] * l2 * centred[k];
            m4 += c.w[k] * l2 * l2;
        }
        const double k4 = m4 - 3.0 * k2 * k2;
        d = k2 / 2.0 + k3 * p / 3.0 + k4 * p * p / 8.0;
    } else if (std::abs(p) < 1.0) {
        double e = 0.0, num = 0.0, first = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double em1 = std::expm1(p * centred[k]);
            e += c.w[k] * em1;
            num += c.w[k] * em1 * centred[k];
            first += c.w[k] * centred[k];
        }
        const double tilted_mean = (num + first) / (1.0 + e);
        d = tilted_mean / p - std::log1p(e) / (p * p);
    } else {
        const double shift = p > 0 ? *std::max_element(ell.begin(), ell.end())
                                   : *std::min_element(ell.begin(), ell.end());
        double s = 0.0, num = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double e = std::exp(p * (ell[k] - shift));
            s += c.w[k] * e;
            num += c.w[k] * e * (ell[k] - shift);
        }
        d = num / s / p - std::log(s) / (p * p);
    }
    return std::max(0.0, mean * d);
}

} // namespace mixlaw
