#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace mixlaw {

/*!
 * \brief Volume fractions a_1..a_n of the phases in a mixture.
 *
 * Fractions are nonnegative and sum to one within 1e-9. The checked
 * constructor rejects anything else; use normalized() to rescale raw
 * proportions explicitly. Phases with a zero fraction are carried along
 * but never influence a mixing law.
 */
class Composition
{
public:
    static constexpr double sum_tolerance = 1e-9;

    explicit Composition(std::vector<double> fractions)
        : fractions_(std::move(fractions))
    {
        validate_entries_();
        const double total = sum();
        if (std::abs(total - 1.0) > sum_tolerance)
            detail::raise(Errc::InvalidComposition,
                          "fractions sum to " + std::to_string(total) + ", expected 1");
    }

    Composition(std::initializer_list<double> fractions)
        : Composition(std::vector<double>(fractions))
    {}

    /// Rescales arbitrary nonnegative proportions so they sum to one.
    static Composition normalized(std::vector<double> proportions)
    {
        Composition probe(Unchecked{}, std::move(proportions));
        probe.validate_entries_();
        const double total = probe.sum();
        if (!(total > 0.0))
            detail::raise(Errc::InvalidComposition, "proportions sum to zero");
        for (double& a : probe.fractions_)
            a /= total;
        return probe;
    }

    std::size_t size() const noexcept { return fractions_.size(); }
    double operator[](std::size_t k) const { return fractions_[k]; }
    std::span<const double> fractions() const noexcept { return fractions_; }

    double sum() const noexcept
    {
        return std::accumulate(fractions_.begin(), fractions_.end(), 0.0);
    }

    /// Fraction renormalized by the stored total, so weights sum to one to rounding.
    double weight(std::size_t k) const { return fractions_[k] / sum(); }

    std::vector<double> weights() const
    {
        const double total = sum();
        std::vector<double> w(fractions_);
        for (double& a : w)
            a /= total;
        return w;
    }

    bool contributes(std::size_t k) const { return fractions_[k] > 0.0; }

private:
    struct Unchecked {};
    Composition(Unchecked, std::vector<double> fractions)
        : fractions_(std::move(fractions))
    {}

    void validate_entries_() const
    {
        if (fractions_.empty())
            detail::raise(Errc::InvalidComposition, "composition needs at least one phase");
        for (double a : fractions_) {
            if (!std::isfinite(a) || a < 0.0)
                detail::raise(Errc::InvalidComposition, "fractions must be finite and nonnegative");
        }
    }

    std::vector<double> fractions_;
};

/*!
 * \brief Power-mean exponent on the extended real line.
 *
 * The geometric limit is its own variant. A finite exponent is never zero,
 * and no small finite value is silently promoted to the geometric case.
 */
class Exponent
{
public:
    enum class Kind { Finite, Zero, PlusInfinity, MinusInfinity };

    static Exponent finite(double p)
    {
        if (!std::isfinite(p) || p == 0.0)
            detail::raise(Errc::InvalidArgument, "finite exponent must be a nonzero real");
        return Exponent(Kind::Finite, p);
    }
    static constexpr Exponent zero() noexcept { return Exponent(Kind::Zero, 0.0); }
    static constexpr Exponent plus_infinity() noexcept
    {
        return Exponent(Kind::PlusInfinity, std::numeric_limits<double>::infinity());
    }
    static constexpr Exponent minus_infinity() noexcept
    {
        return Exponent(Kind::MinusInfinity, -std::numeric_limits<double>::infinity());
    }

    /// Maps 0 to Zero and +-inf to the infinite variants; NaN is rejected.
    static Exponent from_double(double p)
    {
        if (std::isnan(p))
            detail::raise(Errc::InvalidArgument, "exponent is NaN");
        if (p == 0.0)
            return zero();
        if (std::isinf(p))
            return p > 0 ? plus_infinity() : minus_infinity();
        return finite(p);
    }

    constexpr Kind kind() const noexcept { return kind_; }
    constexpr bool is_finite() const noexcept { return kind_ == Kind::Finite; }
    /// Exponent as a double: 0 for Zero, +-inf for the limits.
    constexpr double value() const noexcept { return p_; }

    friend constexpr bool operator==(const Exponent&, const Exponent&) = default;

private:
    constexpr Exponent(Kind kind, double p) noexcept
        : kind_(kind)
        , p_(p)
    {}

    Kind kind_;
    double p_;
};

enum class MixFlag : std::uint8_t {
    GeometricLimitUsed = 1u << 0,
    ZeroPhaseShortCircuit = 1u << 1,
    RescaledForStability = 1u << 2,
    MaxExponent = 1u << 3,
};

class MixFlags
{
public:
    constexpr MixFlags() noexcept = default;

    constexpr void set(MixFlag f) noexcept { bits_ |= static_cast<std::uint8_t>(f); }
    constexpr bool has(MixFlag f) const noexcept
    {
        return (bits_ & static_cast<std::uint8_t>(f)) != 0;
    }
    constexpr bool empty() const noexcept { return bits_ == 0; }

    /// Names of the set flags joined by `sep`, in declaration order.
    std::string to_string(const char* sep = "|") const
    {
        static constexpr std::pair<MixFlag, const char*> names[] = {
            {MixFlag::GeometricLimitUsed, "GeometricLimitUsed"},
            {MixFlag::ZeroPhaseShortCircuit, "ZeroPhaseShortCircuit"},
            {MixFlag::RescaledForStability, "RescaledForStability"},
            {MixFlag::MaxExponent, "MaxExponent"},
        };
        std::string out;
        for (const auto& [flag, name] : names) {
            if (!has(flag))
                continue;
            if (!out.empty())
                out += sep;
            out += name;
        }
        return out;
    }

    friend constexpr bool operator==(const MixFlags&, const MixFlags&) = default;

private:
    std::uint8_t bits_ = 0;
};

/// Mixture value together with the evaluation path that produced it.
template <class T>
struct MixResult
{
    T value{};
    MixFlags flags{};
};

} // namespace mixlaw
