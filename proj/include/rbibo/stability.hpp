#pragma once

// BIBO verdicts from the total-variation norm, operator-norm sharpness probes
// with truncated worst-case inputs, and instability witnesses.

#include <cmath>
#include <optional>
#include <vector>

#include "rbibo/convolution.hpp"
#include "rbibo/measure.hpp"
#include "rbibo/signal.hpp"

namespace rbibo {

enum class Verdict { Stable, Unstable, Indeterminate };
enum class OutputRegularity { ContinuousOutput, MeasurableOutput };

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::Indeterminate: return "Indeterminate";
    }
    return "?";
}

inline const char* to_string(OutputRegularity r)
{
    return r == OutputRegularity::ContinuousOutput ? "ContinuousOutput" : "MeasurableOutput";
}

struct Sharpness {
    double lower_bound = 0.0; // best |(h * f0_T)(0)| / ||f0_T||_sup over probes
    double upper_bound = 0.0; // ||h||_M
    double gap = 0.0;
};

struct StabilityReport {
    Verdict verdict = Verdict::Indeterminate;
    NormResult m_norm;
    std::optional<Sharpness> sharpness;
    std::optional<GrowthCurve> witness;
    OutputRegularity output_regularity = OutputRegularity::MeasurableOutput;
};

inline std::vector<double> geometric_schedule(double first, double last, int count)
{
    if (!(first > 0.0) || !(last > first) || count < 2)
        throw Error(Errc::InvalidArgument, "geometric schedule needs 0 < first < last and count >= 2");
    std::vector<double> s;
    const double ratio = std::pow(last / first, 1.0 / double(count - 1));
    for (int i = 0; i < count; ++i) s.push_back(i == count - 1 ? last : first * std::pow(ratio, double(i)));
    return s;
}

struct StabilityOptions {
    NormOptions norm;
    double t_max = 100.0;
    int refinement = 8;
    std::vector<double> witness_schedule = {1, 2, 4, 8, 16, 32, 64, 128};
    double tol = 1e-10;
};

/// Lower bound on ||T_h||_{L_inf -> L_inf} from f0 truncated at
/// T = t_max * j / refinement, j = 1..refinement; the upper bound is ||h||_M.
inline Sharpness probe_operator_norm(const RadonMeasure& h, double t_max, int refinement,
                                     const StabilityOptions& opt = {})
{
    if (!(t_max > 0.0) || refinement < 1)
        throw Error(Errc::InvalidArgument, "probe needs t_max > 0 and refinement >= 1");
    const auto norm = m_norm(h, opt.norm);
    if (!norm.finite()) throw Error(Errc::DivergentMeasure, "operator norm probe needs ||h||_M < inf");
    Sharpness s;
    s.upper_bound = norm.value;
    if (h.empty()) return s;
    const auto f0 = worst_case_signal(h);
    const ConvolveOptions co{opt.tol};
    for (int j = 1; j <= refinement; ++j) {
        const double T = t_max * double(j) / double(refinement);
        const auto f = truncate(f0, T);
        const double v = std::abs(convolve_at(h, f, 0.0, co));
        if (f.sup_bound() > 0.0) s.lower_bound = std::max(s.lower_bound, v / f.sup_bound());
    }
    s.gap = s.upper_bound - s.lower_bound;
    return s;
}

/// Points (T, (h * f0_T)(0)). Each value equals |mu_h|([-T, T]).
inline GrowthCurve instability_witness(const RadonMeasure& h, const std::vector<double>& schedule,
                                       const StabilityOptions& opt = {})
{
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] > schedule[i - 1])))
            throw Error(Errc::InvalidArgument, "witness schedule must be positive and strictly increasing");
    }
    std::vector<GrowthPoint> pts;
    if (h.empty()) {
        for (double T : schedule) pts.push_back({T, 0.0});
        return GrowthCurve(std::move(pts));
    }
    const auto f0 = worst_case_signal(h);
    const ConvolveOptions co{opt.tol};
    for (double T : schedule) {
        const double v = convolve_at(h, truncate(f0, T), 0.0, co);
        if (!std::isfinite(v)) break;
        pts.push_back({T, v});
    }
    return GrowthCurve(std::move(pts));
}

inline StabilityReport classify(const RadonMeasure& h, const StabilityOptions& opt = {})
{
    StabilityReport rep;
    rep.m_norm = m_norm(h, opt.norm);
    switch (rep.m_norm.kind) {
    case NormKind::Finite:
        rep.verdict = Verdict::Stable;
        rep.sharpness = probe_operator_norm(h, opt.t_max, opt.refinement, opt);
        break;
    case NormKind::Divergent:
        rep.verdict = Verdict::Unstable;
        rep.witness = instability_witness(h, opt.witness_schedule, opt);
        break;
    case NormKind::Indeterminate:
        rep.verdict = Verdict::Indeterminate;
        rep.witness = instability_witness(h, opt.witness_schedule, opt);
        break;
    }
    rep.output_regularity = (!h.has_atoms() && rep.verdict == Verdict::Stable) ? OutputRegularity::ContinuousOutput
                                                                              : OutputRegularity::MeasurableOutput;
    return rep;
}

} // namespace rbibo
