#pragma once

/*!
 * \file
 * \brief Estimation of the power-mean exponent from measured mixture values.
 *
 * Per-sample estimates invert the strictly increasing map p -> M_p by
 * bisection. The global estimate minimizes the squared error in the measured
 * (linear) domain over all samples.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "mean.hpp"
#include "types.hpp"

namespace mixlaw {

/// Beyond this |p| the power mean is reported as a limit hint instead.
inline constexpr double max_fit_exponent = 64.0;

/// One observation: phase fractions and values with the measured mixture value.
class Sample
{
public:
    Sample(Composition comp, std::vector<double> vals, double measured)
        : comp_(std::move(comp))
        , vals_(std::move(vals))
        , measured_(measured)
    {
        detail::check_lengths(comp_, vals_.size());
        detail::check_positive(vals_);
        if (!(measured_ > 0.0) || !std::isfinite(measured_))
            detail::raise(Errc::NonPositiveValue, "measured value must be positive and finite");
    }

    const Composition& comp() const noexcept { return comp_; }
    std::span<const double> vals() const noexcept { return vals_; }
    double measured() const noexcept { return measured_; }

    double model(Exponent p) const { return power_mean(p, comp_, vals_).value; }
    double model(double p) const { return model(Exponent::from_double(p)); }

private:
    Composition comp_;
    std::vector<double> vals_;
    double measured_;
};

using Dataset = std::vector<Sample>;

struct Bracket
{
    double lo = -max_fit_exponent;
    double hi = max_fit_exponent;
};

/// Root of M_p = measured; `capped` marks a root beyond |p| = 64 reported at the cap.
struct PSolution
{
    double p = 0.0;
    bool capped = false;
    MixFlags flags{};
};

enum class SampleStatus { Solved, Degenerate, Unsolvable };

struct SampleOutcome
{
    std::size_t index = 0;
    SampleStatus status = SampleStatus::Solved;
    PSolution solution{};
    /// +inf or -inf for Unsolvable: the limit exponent that would be needed.
    double limit_hint = 0.0;
};

struct FitReport
{
    double p_hat = 0.0;
    double rss = 0.0;
    std::size_t iterations = 0;
    std::optional<std::vector<SampleOutcome>> per_sample_p;
};

namespace detail {

inline std::pair<double, double> contributing_range(const Sample& s)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t k = 0; k < s.comp().size(); ++k) {
        if (!s.comp().contributes(k))
            continue;
        lo = std::min(lo, s.vals()[k]);
        hi = std::max(hi, s.vals()[k]);
    }
    return {lo, hi};
}

inline SampleOutcome solve_p_outcome(const Sample& s, Bracket bracket, std::size_t index = 0)
{
    SampleOutcome out;
    out.index = index;
    const auto [vmin, vmax] = contributing_range(s);
    const double target = s.measured();
    if (vmin == vmax) {
        out.status = SampleStatus::Degenerate;
        return out;
    }
    if (target >= vmax || target <= vmin) {
        out.status = SampleStatus::Unsolvable;
        out.limit_hint = target >= vmax ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity();
        return out;
    }

    const double geometric = s.model(Exponent::zero());
    if (std::abs(target - geometric) <= 4.0 * std::numeric_limits<double>::epsilon() * geometric)
        return out;

    auto excess = [&](double p) { return s.model(p) - target; };

    double lo = std::clamp(std::min(bracket.lo, bracket.hi), -max_fit_exponent, max_fit_exponent);
    double hi = std::clamp(std::max(bracket.lo, bracket.hi), -max_fit_exponent, max_fit_exponent);
    if (lo == hi) {
        lo -= 1.0;
        hi += 1.0;
    }
    // widen geometrically until the bracket straddles the root or hits the cap
    while (true) {
        const bool lo_ok = excess(lo) <= 0.0;
        const bool hi_ok = excess(hi) >= 0.0;
        if (lo_ok && hi_ok)
            break;
        const double width = hi - lo;
        if (!lo_ok) {
            if (lo == -max_fit_exponent) {
                out.solution = {-max_fit_exponent, true, {}};
                out.solution.flags.set(MixFlag::MaxExponent);
                return out;
            }
            hi = lo;
            lo = std::max(-max_fit_exponent, lo - 2.0 * width);
        } else {
            if (hi == max_fit_exponent) {
                out.solution = {max_fit_exponent, true, {}};
                out.solution.flags.set(MixFlag::MaxExponent);
                return out;
            }
            lo = hi;
            hi = std::min(max_fit_exponent, hi + 2.0 * width);
        }
    }

    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi || hi - lo <= 1e-15)
            break;
        if (excess(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    out.solution.p = std::abs(excess(lo)) <= std::abs(excess(hi)) ? lo : hi;
    return out;
}

} // namespace detail

/*!
 * \brief Exponent p at which the sample's power mean equals its measurement.
 *
 * Throws Degenerate when all contributing values are equal and Unsolvable
 * when the measurement is not strictly between their min and max. Returns 0
 * when the measurement is the geometric mean.
 */
inline PSolution solve_p_single(const Sample& sample, Bracket bracket = {})
{
    const auto out = detail::solve_p_outcome(sample, bracket);
    switch (out.status) {
    case SampleStatus::Degenerate:
        detail::raise(Errc::Degenerate, "all contributing phase values are equal; every p fits");
    case SampleStatus::Unsolvable:
        detail::raise(Errc::Unsolvable, std::string("measurement outside the open phase range; limit p = ") +
                                            (out.limit_hint > 0 ? "+inf" : "-inf"));
    case SampleStatus::Solved: break;
    }
    return out.solution;
}

/// solve_p_single on every sample; individual failures are recorded, not thrown.
inline std::vector<SampleOutcome> per_sample_p(const Dataset& data, Bracket bracket = {})
{
    if (data.empty())
        detail::raise(Errc::EmptyDataset, "dataset has no samples");
    std::vector<SampleOutcome> out;
    out.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        out.push_back(detail::solve_p_outcome(data[i], bracket, i));
    return out;
}

/// Residual sum of squares Σ (M_p - measured)² in measured units².
inline double residual_sum_of_squares(double p, const Dataset& data)
{
    double rss = 0.0;
    for (const auto& s : data) {
        const double r = s.model(p) - s.measured();
        rss += r * r;
    }
    return rss;
}

/// d RSS / dp using the analytic power-mean derivative.
inline double residual_sum_of_squares_dp(double p, const Dataset& data)
{
    double d = 0.0;
    for (const auto& s : data)
        d += 2.0 * (s.model(p) - s.measured()) * power_mean_dp(p, s.comp(), s.vals());
    return d;
}

/*!
 * \brief Least-squares exponent over a dataset.
 *
 * A 161-point scan of the bracket picks the best cell; inside it the sign of
 * dRSS/dp is bisected, with golden-section search as the fallback when the
 * derivative does not change sign across the cell. Stops when the interval is
 * narrower than 1e-10 or |dRSS/dp| < 1e-14·RSS.
 */
inline FitReport fit_p_global(const Dataset& data, Bracket bracket = {}, bool with_per_sample = false)
{
    if (data.empty())
        detail::raise(Errc::EmptyDataset, "dataset has no samples");
    const bool all_degenerate = std::all_of(data.begin(), data.end(), [](const Sample& s) {
        const auto [lo, hi] = detail::contributing_range(s);
        return lo == hi;
    });
    if (all_degenerate)
        detail::raise(Errc::AllDegenerate, "every sample has equal phase values");

    const double lo = std::min(bracket.lo, bracket.hi);
    const double hi = std::max(bracket.lo, bracket.hi);
    if (!(std::isfinite(lo) && std::isfinite(hi)) || lo == hi)
        detail::raise(Errc::InvalidArgument, "fit bracket must be a finite nonempty interval");

    constexpr int scan_points = 161;
    const auto grid_point = [&](int i) { return lo + (hi - lo) * i / (scan_points - 1); };
    int best = 0;
    double best_rss = std::numeric_limits<double>::infinity();
    for (int i = 0; i < scan_points; ++i) {
        const double r = residual_sum_of_squares(grid_point(i), data);
        if (r < best_rss) {
            best_rss = r;
            best = i;
        }
    }

    double a = grid_point(std::max(best - 1, 0));
    double b = grid_point(std::min(best + 1, scan_points - 1));
    constexpr double width_tol = 1e-10;
    std::size_t iterations = 0;
    double p_refined;

    const double da = residual_sum_of_squares_dp(a, data);
    const double db = residual_sum_of_squares_dp(b, data);
    if (da < 0.0 && db > 0.0) {
        while (b - a >= width_tol) {
            ++iterations;
            const double mid = 0.5 * (a + b);
            const double dm = residual_sum_of_squares_dp(mid, data);
            if (std::abs(dm) < 1e-14 * residual_sum_of_squares(mid, data) || dm == 0.0) {
                a = b = mid;
                break;
            }
            (dm < 0.0 ? a : b) = mid;
        }
        p_refined = 0.5 * (a + b);
    } else {
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = b - inv_phi * (b - a);
        double x2 = a + inv_phi * (b - a);
        double f1 = residual_sum_of_squares(x1, data);
        double f2 = residual_sum_of_squares(x2, data);
        while (b - a >= width_tol) {
            ++iterations;
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = residual_sum_of_squares(x1, data);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = residual_sum_of_squares(x2, data);
            }
        }
        p_refined = 0.5 * (a + b);
    }

    FitReport report;
    report.iterations = iterations;
    const double refined_rss = residual_sum_of_squares(p_refined, data);
    if (refined_rss <= best_rss) {
        report.p_hat = p_refined;
        report.rss = refined_rss;
    } else {
        report.p_hat = grid_point(best);
        report.rss = best_rss;
    }
    if (with_per_sample)
        report.per_sample_p = per_sample_p(data);
    return report;
}

/*!
 * \brief Seeded synthetic dataset generated at exponent p.
 *
 * Fractions are uniform in [0.05, 1] before normalization, values uniform in
 * [value_lo, value_hi], and each measurement is multiplied by a factor drawn
 * uniformly from [1 - noise, 1 + noise].
 */
struct SyntheticSpec
{
    double p = 1.0;
    std::size_t samples = 20;
    std::size_t phases = 2;
    double value_lo = 0.1;
    double value_hi = 10.0;
    double noise = 0.0;
    std::uint64_t seed = 1;
};

inline Dataset synthetic_dataset(const SyntheticSpec& spec)
{
    if (spec.samples == 0 || spec.phases == 0)
        detail::raise(Errc::InvalidArgument, "synthetic dataset needs samples and phases");
    if (!(spec.value_lo > 0.0 && spec.value_lo < spec.value_hi) || !(spec.noise >= 0.0 && spec.noise < 1.0))
        detail::raise(Errc::InvalidArgument, "invalid synthetic value range or noise level");
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> share(0.05, 1.0);
    std::uniform_real_distribution<double> value(spec.value_lo, spec.value_hi);
    std::uniform_real_distribution<double> factor(1.0 - spec.noise, 1.0 + spec.noise);
    const auto p = Exponent::from_double(spec.p);
    Dataset data;
    data.reserve(spec.samples);
    for (std::size_t i = 0; i < spec.samples; ++i) {
        std::vector<double> props(spec.phases), vals(spec.phases);
        for (double& a : props)
            a = share(rng);
        for (double& v : vals)
            v = value(rng);
        auto comp = Composition::normalized(props);
        double measured = power_mean(p, comp, vals).value;
        if (spec.noise > 0.0)
            measured *= factor(rng);
        data.emplace_back(std::move(comp), std::move(vals), measured);
    }
    return data;
}

} // namespace mixlaw
