#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "rbibo/quadrature.hpp"

using namespace rbibo;

TEST(Quadrature, PolynomialExact)
{
    const auto r = quad::integrate([](double x) { return 3 * x * x - 2 * x + 1; }, -1.0, 2.0);
    EXPECT_NEAR(r.value, 9.0 - 3.0 + 3.0, 1e-13);
    EXPECT_TRUE(r.converged);
}

TEST(Quadrature, ReversedBoundsFlipSign)
{
    auto f = [](double x) { return std::exp(x); };
    const auto a = quad::integrate(f, 0.0, 1.0);
    const auto b = quad::integrate(f, 1.0, 0.0);
    EXPECT_NEAR(a.value, std::numbers::e - 1.0, 1e-13);
    EXPECT_DOUBLE_EQ(a.value, -b.value);
}

TEST(Quadrature, KinkWithBreakpoint)
{
    const double bp[] = {0.3};
    const auto r = quad::integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, bp);
    EXPECT_NEAR(r.value, 0.5 * (0.09 + 0.49), 1e-14);
}

TEST(Quadrature, JumpWithoutBreakpointStillConverges)
{
    quad::Options o;
    o.abs_tol = 1e-9;
    const auto r = quad::integrate([](double x) { return x < 1.0 / 3.0 ? 1.0 : 0.0; }, 0.0, 1.0, {}, o);
    EXPECT_NEAR(r.value, 1.0 / 3.0, 1e-8);
}

TEST(Quadrature, ErrorEstimateIsHonest)
{
    const auto r = quad::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0);
    EXPECT_LE(std::abs(r.value - 2.0 / 3.0), std::max(r.abs_error, 1e-14) * 10);
}

TEST(Filon, MatchesClosedForm)
{
    // int_0^1 x e^{-i w x} dx
    for (double w : {0.5, 20.0, 1000.0}) {
        const auto r = quad::filon([](double x) { return x; }, 0.0, 1.0, w);
        const std::complex<double> i(0, 1);
        const auto e = std::exp(-i * w);
        const auto exact = (e - 1.0) / (w * w) + i * e / w;
        EXPECT_NEAR(r.value.real(), exact.real(), 1e-10) << w;
        EXPECT_NEAR(r.value.imag(), exact.imag(), 1e-10) << w;
    }
}

TEST(Filon, SmallThetaSeriesIsSmooth)
{
    // w -> 0 reduces to the plain integral.
    const auto r = quad::filon([](double x) { return std::cos(x); }, 0.0, 2.0, 1e-9);
    EXPECT_NEAR(r.value.real(), std::sin(2.0), 1e-10);
}
