#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include <mixlaw/mean.hpp>

#include "expect_error.hpp"
#include "test_support.hpp"

using namespace mixlaw;
using mixlaw::test::error_code;
using mixlaw::test::rel_diff;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

} // namespace

TEST(Composition, RejectsBadSums)
{
    EXPECT_NO_THROW((Composition{0.5, 0.5}));
    EXPECT_NO_THROW((Composition{0.5, 0.5 + 5e-10}));
    EXPECT_EQ(error_code([] { Composition{0.5, 0.6}; }), Errc::InvalidComposition);
    EXPECT_EQ(error_code([] { Composition{1.5, -0.5}; }), Errc::InvalidComposition);
    EXPECT_EQ(error_code([] { Composition(std::vector<double>{}); }), Errc::InvalidComposition);
}

TEST(Composition, NormalizedRescales)
{
    const auto c = Composition::normalized({1.0, 3.0});
    EXPECT_DOUBLE_EQ(c[0], 0.25);
    EXPECT_DOUBLE_EQ(c[1], 0.75);
    EXPECT_EQ(error_code([] { Composition::normalized({0.0, 0.0}); }), Errc::InvalidComposition);
}

TEST(Exponent, Variants)
{
    EXPECT_EQ(Exponent::from_double(0.0).kind(), Exponent::Kind::Zero);
    EXPECT_EQ(Exponent::from_double(inf).kind(), Exponent::Kind::PlusInfinity);
    EXPECT_EQ(Exponent::from_double(-inf).kind(), Exponent::Kind::MinusInfinity);
    EXPECT_EQ(Exponent::from_double(1e-13).kind(), Exponent::Kind::Finite);
    EXPECT_EQ(error_code([] { Exponent::finite(0.0); }), Errc::InvalidArgument);
}

TEST(Generator, CustomValidation)
{
    EXPECT_NO_THROW(Generator::custom([](double x) { return 3 * x + 4; },
                                      [](double y) { return (y - 4) / 3; }, Interval::real_line()));
    // wrong inverse
    EXPECT_EQ(error_code([] {
                  Generator::custom([](double x) { return 3 * x + 4; }, [](double y) { return y; },
                                    Interval::real_line());
              }),
              Errc::InvalidGenerator);
    // not monotone on the domain
    EXPECT_EQ(error_code([] {
                  Generator::custom([](double x) { return x * x; },
                                    [](double y) { return std::sqrt(y); }, Interval{-1.0, 1.0});
              }),
              Errc::InvalidGenerator);
    EXPECT_EQ(error_code([] { Generator::affine_log(0.0, 1.0); }), Errc::InvalidGenerator);
    EXPECT_EQ(error_code([] { Generator::affine_power(1.0, 0.0, 0.0); }), Errc::InvalidGenerator);
}

TEST(QuasiArithmeticMean, Examples)
{
    const std::vector<double> v28{2, 8};
    // oracle: exp(0.5 ln 2 + 0.5 ln 8) = 4 (mpmath, tests/oracles)
    EXPECT_LE(rel_diff(quasi_arithmetic_mean(Generator::affine_log(), {0.5, 0.5}, v28).value, 4.0), 1e-15);
    EXPECT_LE(rel_diff(quasi_arithmetic_mean(Generator::affine_log(-2, 5), {0.5, 0.5}, v28).value, 4.0), 1e-15);

    const std::vector<double> v48{4, 8};
    EXPECT_LE(rel_diff(quasi_arithmetic_mean(Generator::affine_power(3, -7, 1), {0.25, 0.75}, v48).value, 7.0),
              1e-15);
}

TEST(QuasiArithmeticMean, Errors)
{
    const std::vector<double> bad{-1, 2};
    EXPECT_EQ(error_code([&] { quasi_arithmetic_mean(Generator::affine_log(), {0.5, 0.5}, bad); }),
              Errc::DomainError);
    const std::vector<double> three{1, 2, 3};
    EXPECT_EQ(error_code([&] { quasi_arithmetic_mean(Generator::affine_log(), {0.5, 0.5}, three); }),
              Errc::LengthMismatch);

    // inverse that is undefined on a band the 32-point validation grid misses
    const auto g = Generator::custom(
        [](double x) { return x; },
        [](double y) { return std::abs(y - 0.5) < 1e-6 ? std::numeric_limits<double>::quiet_NaN() : y; },
        Interval{0.0, 1.0});
    const std::vector<double> v{0.25, 0.75};
    EXPECT_EQ(error_code([&] { quasi_arithmetic_mean(g, {0.5, 0.5}, v); }), Errc::NonInvertible);
    const std::vector<double> w{0.25, 0.5};
    EXPECT_NO_THROW(quasi_arithmetic_mean(g, {0.5, 0.5}, w));
}

TEST(PowerMean, Examples)
{
    const std::vector<double> v17{1, 7};
    EXPECT_LE(rel_diff(power_mean(2.0, {0.5, 0.5}, v17).value, 5.0), 1e-15);
    const std::vector<double> v26{2, 6};
    EXPECT_LE(rel_diff(power_mean(-1.0, {0.5, 0.5}, v26).value, 3.0), 1e-15);
    const std::vector<double> v10_2{10, 2};
    EXPECT_EQ(power_mean(Exponent::plus_infinity(), {0.3, 0.7}, v10_2).value, 10.0);
    EXPECT_EQ(power_mean(Exponent::minus_infinity(), {0.3, 0.7}, v10_2).value, 2.0);
    const std::vector<double> inert{1e9, 4};
    EXPECT_EQ(power_mean(1.0, {0.0, 1.0}, inert).value, 4.0);
    EXPECT_EQ(power_mean(Exponent::plus_infinity(), {0.0, 1.0}, inert).value, 4.0);
    const std::vector<double> single{42};
    EXPECT_EQ(power_mean(0.5, {1.0}, single).value, 42.0);
}

TEST(PowerMean, ZeroPhase)
{
    const std::vector<double> v{0, 9};
    for (double p : {-1.0, -0.5, -inf}) {
        const auto r = power_mean(Exponent::from_double(p), {0.5, 0.5}, v);
        EXPECT_EQ(r.value, 0.0);
        EXPECT_TRUE(r.flags.has(MixFlag::ZeroPhaseShortCircuit));
    }
    const auto g = power_mean(Exponent::zero(), {0.5, 0.5}, v);
    EXPECT_EQ(g.value, 0.0);
    EXPECT_TRUE(g.flags.has(MixFlag::ZeroPhaseShortCircuit));

    // p > 0 includes the zero phase normally: (0.5·9²)^(1/2)
    EXPECT_LE(rel_diff(power_mean(2.0, {0.5, 0.5}, v).value, std::sqrt(40.5)), 1e-15);
    EXPECT_LE(rel_diff(power_mean(1.0, {0.5, 0.5}, v).value, 4.5), 1e-15);
    // zero phase with zero fraction is inert even for p < 0
    EXPECT_EQ(power_mean(-1.0, {0.0, 1.0}, v).value, 9.0);
    // all zero
    const std::vector<double> z{0, 0};
    EXPECT_EQ(power_mean(2.0, {0.5, 0.5}, z).value, 0.0);
}

TEST(PowerMean, Errors)
{
    const std::vector<double> neg{-1, 2};
    EXPECT_EQ(error_code([&] { power_mean(2.0, {0.5, 0.5}, neg); }), Errc::NegativeValue);
    EXPECT_EQ(error_code([&] { geometric_mean({0.5, 0.5}, neg); }), Errc::NegativeValue);
    const std::vector<double> one{1};
    EXPECT_EQ(error_code([&] { power_mean(2.0, {0.5, 0.5}, one); }), Errc::LengthMismatch);
}

TEST(GeometricMean, Examples)
{
    const std::vector<double> v28{2, 8};
    const auto r = geometric_mean({0.5, 0.5}, v28);
    EXPECT_LE(rel_diff(r.value, 4.0), 1e-15);
    EXPECT_TRUE(r.flags.has(MixFlag::GeometricLimitUsed));
    const std::vector<double> v09{0, 9};
    EXPECT_EQ(geometric_mean({0.5, 0.5}, v09).value, 0.0);
}

TEST(PowerMean, IdempotentWithinHalfUlp)
{
    mixlaw::test::InstanceGenerator gen(11);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = gen.pick({1, 2, 3, 5});
        const double c = gen.log_uniform(1e-200, 1e200);
        const auto comp = gen.composition(n);
        const std::vector<double> vals(n, c);
        for (double p : {-50.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 50.0, inf, -inf})
            EXPECT_LE(rel_diff(power_mean(Exponent::from_double(p), comp, vals).value, c), 1e-15) << p;
        EXPECT_LE(rel_diff(quasi_arithmetic_mean(Generator::affine_log(), comp, vals).value, c), 1e-15);
    }
}

TEST(PowerMean, MatchesDirectLongDoubleEvaluation)
{
    mixlaw::test::InstanceGenerator gen(12);
    for (int i = 0; i < 500; ++i) {
        const auto inst = gen.log_uniform_instance(gen.pick({2, 3, 5}), 1e-3, 1e3);
        for (double p : {-3.0, -1.0, -0.5, 1e-9, 0.0, -1e-9, 0.5, 1.0, 2.0, 7.5}) {
            const double got = power_mean(Exponent::from_double(p), inst.comp, inst.vals).value;
            const auto want = static_cast<double>(
                mixlaw::test::direct_power_mean(p, inst.comp.fractions(), inst.vals));
            // long double loses ~|1/p|·1e-19 near zero; p = ±1e-9 still resolves 1e-10
            const double tol = std::abs(p) < 1e-6 ? 1e-9 : 1e-13;
            EXPECT_LE(rel_diff(got, want), tol) << "p=" << p;
        }
    }
}

TEST(PowerMean, FlagsRecordRescaling)
{
    const std::vector<double> unit{1, 0.5};
    EXPECT_FALSE(power_mean(2.0, {0.5, 0.5}, unit).flags.has(MixFlag::RescaledForStability));
    const std::vector<double> big{1e200, 3e200};
    const auto r = power_mean(2.0, {0.5, 0.5}, big);
    EXPECT_TRUE(r.flags.has(MixFlag::RescaledForStability));
    EXPECT_LE(rel_diff(r.value, 1e200 * std::sqrt(5.0)), 1e-15);
}

TEST(PowerMeanComplex, Examples)
{
    using cplx = std::complex<double>;
    const std::vector<cplx> a{{1, 1}, {3, 1}};
    const auto r1 = power_mean_complex(1.0, {0.5, 0.5}, a).value;
    EXPECT_NEAR(r1.real(), 2.0, 1e-15);
    EXPECT_NEAR(r1.imag(), 1.0, 1e-15);

    const cplx z{2, 0.5};
    const std::vector<cplx> zz{z, z};
    const auto r2 = power_mean_complex(2.0, {0.5, 0.5}, zz).value;
    EXPECT_LE(std::abs(r2 - z) / std::abs(z), 1e-15);

    // oracle: (0.4·√(80+10i) + 0.6·√(3+0.2i))², mpmath at 50 digits
    const std::vector<cplx> crim{{80, 10}, {3, 0.2}};
    const auto r3 = power_mean_complex(0.5, {0.4, 0.6}, crim).value;
    const cplx want{21.319261540781779121, 2.384328766901118899};
    EXPECT_LE(std::abs(r3 - want) / std::abs(want), 1e-14);
    // defining identity √σ = Σ a_k √σ_k
    const cplx rhs = 0.4 * std::sqrt(crim[0]) + 0.6 * std::sqrt(crim[1]);
    EXPECT_LE(std::abs(std::sqrt(r3) - rhs) / std::abs(rhs), 1e-14);
}

TEST(PowerMeanComplex, IdempotentAcrossBranchRange)
{
    using cplx = std::complex<double>;
    for (double p : {-4.0, -3.0, -1.5, 0.5, 1.5, 2.5, 4.0}) {
        const cplx z{1.0, 2.0};
        const std::vector<cplx> zz{z, z, z};
        const auto r = power_mean_complex(p, Composition::normalized({1, 2, 3}), zz).value;
        EXPECT_LE(std::abs(r - z) / std::abs(z), 1e-14) << p;
    }
}

TEST(PowerMeanComplex, RealInputsMatchRealPath)
{
    using cplx = std::complex<double>;
    const std::vector<double> re{0.3, 2.0, 17.0};
    const std::vector<cplx> cz(re.begin(), re.end());
    const Composition comp{0.2, 0.3, 0.5};
    for (double p : {-4.0, -1.0, 0.5, 2.0, 4.0}) {
        const auto c = power_mean_complex(p, comp, cz).value;
        EXPECT_LE(rel_diff(c.real(), power_mean(p, comp, re).value), 1e-14);
        EXPECT_LE(std::abs(c.imag()), 1e-14 * c.real());
    }
}

TEST(PowerMeanComplex, Errors)
{
    using cplx = std::complex<double>;
    const std::vector<cplx> left{{-1, 1}, {2, 0}};
    EXPECT_EQ(error_code([&] { power_mean_complex(0.5, {0.5, 0.5}, left); }), Errc::BranchDomainError);
    const std::vector<cplx> imag_axis{{0, 1}, {2, 0}};
    EXPECT_EQ(error_code([&] { power_mean_complex(0.5, {0.5, 0.5}, imag_axis); }), Errc::BranchDomainError);
    const std::vector<cplx> zero{{0, 0}, {2, 1}};
    EXPECT_EQ(error_code([&] { power_mean_complex(-1.0, {0.5, 0.5}, zero); }), Errc::ZeroWithNonpositiveP);
    EXPECT_NO_THROW(power_mean_complex(1.0, {0.5, 0.5}, zero));
    const std::vector<cplx> ok{{1, 0}, {2, 1}};
    EXPECT_EQ(error_code([&] { power_mean_complex(4.5, {0.5, 0.5}, ok); }), Errc::DomainError);
}

TEST(PowerMeanDp, Examples)
{
    const std::vector<double> same{3, 3};
    EXPECT_EQ(power_mean_dp(1.0, {0.5, 0.5}, same), 0.0);
    EXPECT_EQ(power_mean_dp(0.0, {0.5, 0.5}, same), 0.0);

    // mpmath derivative at p = 1 for (1, 4)
    const std::vector<double> v14{1, 4};
    EXPECT_LE(rel_diff(power_mean_dp(1.0, {0.5, 0.5}, v14), 0.48186189255439357471), 1e-13);

    // p = 0: G·Var/2 = 4·(ln 2)²/2
    const std::vector<double> v28{2, 8};
    const double ln2 = std::log(2.0);
    EXPECT_LE(rel_diff(power_mean_dp(0.0, {0.5, 0.5}, v28), 2.0 * ln2 * ln2), 1e-15);
    EXPECT_LE(rel_diff(power_mean_dp(0.0, {0.5, 0.5}, v28), 0.96090602783640284933), 1e-15);

    const std::vector<double> zero{0, 1};
    EXPECT_EQ(error_code([&] { power_mean_dp(1.0, {0.5, 0.5}, zero); }), Errc::NonPositiveValue);
}

TEST(PowerMeanDp, ContinuousAcrossBranchThresholds)
{
    const std::vector<double> v{0.2, 3.0, 9.0};
    const Composition comp{0.3, 0.3, 0.4};
    for (double p : {1e-5, 1.0, -1e-5, -1.0}) {
        const double below = power_mean_dp(std::nextafter(p, 0.0), comp, v);
        const double above = power_mean_dp(p, comp, v);
        EXPECT_LE(rel_diff(below, above), 1e-9) << p;
    }
}
