#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "rbibo/convolution.hpp"
#include "rbibo/dsl.hpp"

using namespace rbibo;

namespace {

double triangle(double t) { return std::max(0.0, 1.0 - std::abs(t - 1.0)); }

} // namespace

TEST(ConvolveAt, Identity)
{
    const auto f = sine_signal(1.0, 0.7, 0.2);
    EXPECT_EQ(convolve_at(RadonMeasure::dirac(0), f, 3.0), f(3.0));
}

TEST(ConvolveAt, RectRectPeak)
{
    EXPECT_NEAR(convolve_at(dsl::compile("rect(0,1)"), rect_signal(0, 1), 1.0), 1.0, 1e-12);
}

TEST(ConvolveAt, ExponentialAgainstConstant)
{
    const auto h = dsl::compile("expstep(-1)");
    for (double t : {-5.0, 0.0, 2.5}) EXPECT_NEAR(convolve_at(h, constant_signal(1.0), t), 1.0, 1e-10);
}

TEST(ConvolveAt, UnstableFilterAgainstCompactInput)
{
    // (e^t 1_+ * 1_[0,1))(t) = e^t - e^{t-1} for t >= 1.
    const auto h = dsl::compile("expstep(1)");
    EXPECT_NEAR(convolve_at(h, rect_signal(0, 1), 3.0), std::exp(3.0) - std::exp(2.0), 1e-9);
}

TEST(ConvolveAt, IllPosed)
{
    try {
        convolve_at(dsl::compile("expstep(1)"), step_signal(0.0), 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::IllPosedConvolution);
        EXPECT_NE(std::string(e.what()).find("compact"), std::string::npos);
    }
}

TEST(ConvolveGrid, AtomShiftIsExact)
{
    const auto out = convolve_grid(RadonMeasure::dirac(1.0), rect_signal(0, 1), SamplingGrid{0, 3, 0.01});
    for (std::size_t i = 0; i < out.t.size(); ++i) {
        const double t = out.t[i];
        EXPECT_EQ(out.value[i], (t - 1.0 >= 0.0 && t - 1.0 < 1.0) ? 1.0 : 0.0) << t;
    }
}

TEST(ConvolveGrid, FlagsAtomsOnJumps)
{
    const auto out = convolve_grid(RadonMeasure::dirac(0.0), rect_signal(0, 1), SamplingGrid{-0.5, 1.5, 0.5});
    // t = 0 and t = 1 hit the jumps of the rect.
    ASSERT_EQ(out.flagged.size(), 2u);
    EXPECT_EQ(out.t[out.flagged[0]], 0.0);
    EXPECT_EQ(out.t[out.flagged[1]], 1.0);
}

TEST(ConvolveGrid, TriangleAgreesWithPointwise)
{
    const auto h = dsl::compile("rect(0,1)");
    const auto f = rect_signal(0, 1);
    const SamplingGrid grid{-1, 3, 1e-3};
    const auto out = convolve_grid(h, f, grid);
    for (double t : {0.25, 0.5, 1.0, 1.5}) {
        const auto i = static_cast<std::size_t>(std::llround((t - grid.start) / grid.step));
        EXPECT_NEAR(out.value[i], convolve_at(h, f, t), 5e-3) << t;
        EXPECT_NEAR(convolve_at(h, f, t), triangle(t), 1e-12) << t;
    }
}

TEST(ConvolveGrid, ZeroInput)
{
    const auto out = convolve_grid(dsl::compile("expstep(-1)"), constant_signal(0.0), SamplingGrid{0, 1, 0.1});
    for (double v : out.value) EXPECT_EQ(v, 0.0);
}

TEST(ConvolveGrid, JumpsOfInputSplitTheRule)
{
    // rect * step is the clamped ramp; linear between jumps, so the split
    // trapezoid is exact, including the closing sample of the half-open rect.
    const auto out = convolve_grid(dsl::compile("rect(0,1)"), step_signal(0), SamplingGrid{-1, 2, 0.25});
    for (std::size_t i = 0; i < out.t.size(); ++i)
        EXPECT_NEAR(out.value[i], std::clamp(out.t[i], 0.0, 1.0), 1e-15) << out.t[i];
}

TEST(ConvolveGrid, OracleConvergesOnSmoothCorpus)
{
    const auto f = rect_signal(-0.5, 0.75);
    for (const auto& c : atom_free_corpus()) {
        const auto h = dsl::compile(c.source);
        const auto out = convolve_grid(h, f, SamplingGrid{-2, 3, 0.125});
        for (std::size_t i = 0; i < out.t.size(); i += 4) {
            const double exact = convolve_at(h, f, out.t[i]);
            // first-order in the step, times the local variation of h
            EXPECT_NEAR(out.value[i], exact, 10 * 0.125 * std::max(1.0, c.norm) * 0.5) << c.source << " t=" << out.t[i];
        }
    }
}

TEST(Adjoint, Examples)
{
    const auto f = rect_signal(0, 1);
    EXPECT_LT(adjoint_identity_residual(RadonMeasure::dirac(1.0), f, f), 1e-8);
    EXPECT_LT(adjoint_identity_residual(dsl::compile("rect(0,1)"), f, f), 1e-6);
    EXPECT_EQ(adjoint_identity_residual(RadonMeasure{}, f, f), 0.0);
    const auto chk = adjoint_identity_check(dsl::compile("expstep(-1,2) + 0.5*delta(0.3)"), f,
                                            rect_signal(-1, 2, 0.5));
    EXPECT_LT(chk.residual, 1e-7);
    EXPECT_GT(std::abs(chk.lhs), 1e-3);
}

TEST(Adjoint, NeedsCompactSignals)
{
    EXPECT_THROW(adjoint_identity_residual(RadonMeasure::dirac(0), constant_signal(1), rect_signal(0, 1)), Error);
}

TEST(Continuity, DensitySmooths)
{
    const auto r = continuity_probe(dsl::compile("rect(0,1)"), rect_signal(0, 1), 1.0);
    EXPECT_EQ(r.verdict, ContinuityVerdict::ContinuousAt);
    EXPECT_NEAR(r.value, 1.0, 1e-12);
}

TEST(Continuity, DiracKeepsJump)
{
    const auto r = continuity_probe(RadonMeasure::dirac(0), rect_signal(0, 1), 0.0);
    EXPECT_EQ(r.verdict, ContinuityVerdict::DiscontinuityDetected);
    EXPECT_TRUE(r.atoms_flagged);
}

TEST(Continuity, UnstableFilterStillContinuous)
{
    const auto r = continuity_probe(dsl::compile("expstep(1)"), rect_signal(0, 1), 0.5);
    EXPECT_EQ(r.verdict, ContinuityVerdict::ContinuousAt);
}

TEST(Continuity, ToleranceFollowsOutputScale)
{
    // Output near t0 is of order e^4; the absolute modulus at d = 1e-8 is
    // far above 1e-6 although the output is smooth there.
    const auto h = dsl::compile("expstep(1,2)");
    const auto f = truncate(sign_pattern_signal(1, 3), 2);
    const auto r = continuity_probe(h, f, 2.5);
    EXPECT_GT(std::abs(r.value), 10.0);
    EXPECT_EQ(r.verdict, ContinuityVerdict::ContinuousAt);
    EXPECT_EQ(continuity_probe(RadonMeasure::dirac(0, 1e3), step_signal(0), 0.0).verdict,
              ContinuityVerdict::DiscontinuityDetected);
}

TEST(Continuity, ModuliShrink)
{
    const auto r = continuity_probe(dsl::compile("expstep(-1)"), rect_signal(0, 1), 1.0);
    for (std::size_t i = 1; i < r.moduli.size(); ++i) EXPECT_LE(r.moduli[i].modulus, r.moduli[i - 1].modulus + 1e-12);
}

TEST(Continuity, BadDeltas)
{
    const auto h = RadonMeasure::dirac(0);
    EXPECT_THROW(continuity_probe(h, rect_signal(0, 1), 0.0, {}), Error);
    EXPECT_THROW(continuity_probe(h, rect_signal(0, 1), 0.0, {0.1, 0.2}), Error);
}

TEST(Commutativity, DensityAgainstCompactDensity)
{
    // h * g = g * h with g = 1_[0,1) used both as a signal and as a density.
    const auto g = dsl::compile("rect(0,1)");
    const auto g_sig = density_signal(g, 1.0);
    for (const auto& c : atom_free_corpus()) {
        const auto h = dsl::compile(c.source);
        // h restricted to a window, as a compact signal.
        const double bound = [&] {
            double b = 0.0;
            for (double t = -8; t <= 8; t += 1e-3) b = std::max(b, std::abs(h.density(t)));
            return b * 1.01 + 1e-12;
        }();
        const auto hr = [&] {
            std::vector<DensitySegment> segs;
            for (const auto& s : h.segments()) {
                const double lo = std::max(s.lower, -8.0), hi = std::min(s.upper, 8.0);
                if (hi > lo) segs.push_back({lo, hi, s.terms});
            }
            return make_measure({}, segs);
        }();
        const auto hr_sig = density_signal(hr, bound);
        for (double t : {-0.5, 0.3, 1.7}) {
            EXPECT_NEAR(convolve_at(hr, g_sig, t), convolve_at(g, hr_sig, t), 1e-9) << c.source << " t=" << t;
        }
    }
}
