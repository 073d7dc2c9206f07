#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "bounds.hpp"
#include "rbibo/dsl.hpp"
#include "rbibo/dual_norm.hpp"
#include "rbibo/spectrum.hpp"

using namespace rbibo;

namespace {

constexpr int kCases = 40;

double norm(const RadonMeasure& h) { return m_norm(h).value; }

} // namespace

TEST(NormProperties, TriangleInequality)
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < kCases; ++i) {
        const auto a = dsl::compile(bounds::random_filter(rng)), b = dsl::compile(bounds::random_filter(rng));
        EXPECT_LE(norm(a + b), norm(a) + norm(b) + 1e-9);
        EXPECT_GE(norm(a + b), std::abs(norm(a) - norm(b)) - 1e-9);
    }
}

TEST(NormProperties, Homogeneity)
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < kCases; ++i) {
        const auto src = bounds::random_filter(rng);
        const auto h = dsl::compile(src);
        const double c = bounds::uniform(rng, -5, 5);
        EXPECT_NEAR(norm(h.scaled(c)), std::abs(c) * norm(h), 1e-9 * (1 + norm(h))) << src;
    }
    EXPECT_EQ(norm(RadonMeasure{}), 0.0);
}

TEST(NormProperties, ShiftAndReflectionInvariance)
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < kCases; ++i) {
        const auto src = bounds::random_filter(rng);
        const auto h = dsl::compile(src);
        EXPECT_NEAR(norm(h.shifted(bounds::uniform(rng, -10, 10))), norm(h), 1e-9) << src;
        EXPECT_NEAR(norm(time_reverse(h)), norm(h), 1e-9) << src;
    }
}

TEST(NormProperties, JordanAdditivity)
{
    std::mt19937_64 rng(4);
    for (int i = 0; i < kCases; ++i) {
        const auto src = bounds::random_filter(rng);
        const auto h = dsl::compile(src);
        const auto p = positive_part(h), n = negative_part(h);
        EXPECT_NEAR(norm(p) + norm(n), norm(h), 1e-9) << src;
        for (double t : {-1.3, -0.2, 0.4, 1.7, 5.0}) EXPECT_NEAR(p.density(t) - n.density(t), h.density(t), 1e-12);
        for (double t : {-1.3, 0.4, 5.0}) {
            EXPECT_GE(p.density(t), 0.0);
            EXPECT_GE(n.density(t), 0.0);
        }
    }
}

TEST(NormProperties, L1AgreesOnDensities)
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < kCases; ++i) {
        const auto src = bounds::random_filter(rng, false);
        const auto h = dsl::compile(src);
        EXPECT_NEAR(l1_norm(h).value, norm(h), 1e-8) << src;
    }
}

TEST(DualEstimate, BelowNormAndMonotone)
{
    std::mt19937_64 rng(6);
    for (int i = 0; i < 15; ++i) {
        const auto src = bounds::random_filter(rng);
        const auto h = dsl::compile(src);
        const double m = norm(h);
        double prev = -1.0;
        for (int r : {1, 4, 12, kMaxDualRefinement}) {
            const double d = dual_m_norm_estimate(h, r);
            EXPECT_LE(d, m + 1e-9) << src;
            EXPECT_GE(d, prev - 1e-9) << src << " r=" << r;
            prev = d;
        }
        EXPECT_GE(prev, 0.98 * m - 1e-9) << src;
    }
}

TEST(ConvolutionBounds, RandomTriples)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < kCases; ++i) {
        const auto src = bounds::random_filter(rng);
        const auto h = dsl::compile(src);
        const auto in = bounds::random_input(rng);
        const double t = bounds::uniform(rng, -3, 3);
        const auto s = bounds::slacks(h, in.f, t);
        EXPECT_GE(s.min(), -1e-6) << src << " / " << in.description << " t=" << t;
    }
}

TEST(ConvolutionBounds, LinearInInput)
{
    std::mt19937_64 rng(8);
    for (int i = 0; i < kCases; ++i) {
        const auto h = dsl::compile(bounds::random_filter(rng));
        const auto f = bounds::random_input(rng).f, g = bounds::random_input(rng).f;
        const double a = bounds::uniform(rng, -2, 2);
        const auto sum = BoundedSignal(
            [&](double x) { return f(x) + a * g(x); }, f.sup_bound() + std::abs(a) * g.sup_bound(), std::nullopt,
            Continuity::PiecewiseContinuous, [&](double lo, double hi) {
                auto j = f.jumps_in(lo, hi), k = g.jumps_in(lo, hi);
                for (const auto* s : {&f, &g})
                    if (s->support()) {
                        j.push_back(s->support()->lower);
                        j.push_back(s->support()->upper);
                    }
                j.insert(j.end(), k.begin(), k.end());
                std::erase_if(j, [&](double x) { return x < lo || x > hi; });
                std::sort(j.begin(), j.end());
                return j;
            });
        const double t = bounds::uniform(rng, -2, 2);
        EXPECT_NEAR(convolve_at(h, sum, t), convolve_at(h, f, t) + a * convolve_at(h, g, t), 1e-8);
    }
}

TEST(Adjoint, RandomTriples)
{
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
        const auto src = bounds::random_filter(rng);
        const auto h = dsl::compile(src);
        const auto f = bounds::random_input(rng), g = bounds::random_input(rng);
        EXPECT_LE(adjoint_identity_residual(h, f.f, g.f), 1e-6) << src << " / " << f.description << " / " << g.description;
    }
}

TEST(Spectrum, BoundedByNorm)
{
    std::mt19937_64 rng(10);
    std::vector<double> grid;
    for (int k = 0; k < 200; ++k) grid.push_back(-60 + 0.6 * k);
    for (int i = 0; i < 20; ++i) {
        const auto src = bounds::random_filter(rng);
        const auto r = spectrum_sup_check(dsl::compile(src), grid);
        EXPECT_TRUE(r.satisfied) << src << " " << r.max_modulus << " > " << r.m_norm;
    }
}
