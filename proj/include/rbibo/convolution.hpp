#pragma once

// (h * f)(t) = sum_k a_k f(t - t_k) + int f(t - tau) density(tau) dtau, with a
// trapezoidal grid oracle, the adjoint (Fubini) identity check and a
// continuity probe for compactly supported inputs.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rbibo/measure.hpp"
#include "rbibo/signal.hpp"

namespace rbibo {

struct ConvolveOptions {
    double tol = 1e-10;
};

struct Evaluation {
    double value = 0.0;
    double abs_error = 0.0;
};

namespace detail {

/// Every infinite side of every segment has a certified integrable tail.
inline bool certified_bounded(const RadonMeasure& h)
{
    for (const auto& s : h.segments()) {
        if (s.bounded()) continue;
        if (diverges_upper(s) || diverges_lower(s)) return false;
        if (!integrable_window(s, 1e-13)) return false;
    }
    return true;
}

inline void require_well_posed(const RadonMeasure& h, const BoundedSignal& f)
{
    if (f.compact() || certified_bounded(h)) return;
    throw Error(Errc::IllPosedConvolution,
                "input is not compactly supported and the impulse response has no certified finite "
                "total variation; need ||h||_M < inf, or a compact input with a locally integrable h");
}

} // namespace detail

inline Evaluation convolve_at_detailed(const RadonMeasure& h, const BoundedSignal& f, double t,
                                       const ConvolveOptions& opt = {})
{
    detail::require_well_posed(h, f);
    Evaluation out;
    for (const auto& a : h.atoms()) out.value += a.weight * f(t - a.location);
    double lo = -kInf, hi = kInf;
    if (f.support()) {
        lo = t - f.support()->upper;
        hi = t - f.support()->lower;
    }
    detail::BreakpointFn bps = [&f, t](double a, double b) {
        std::vector<double> out;
        for (double j : f.jumps_in(t - b, t - a)) out.push_back(t - j);
        if (f.support()) {
            out.push_back(t - f.support()->upper);
            out.push_back(t - f.support()->lower);
        }
        return out;
    };
    auto g = [&f, t](double tau) { return f(t - tau); };
    for (const auto& s : h.segments()) {
        const auto r = detail::integrate_against(s, g, f.sup_bound(), lo, hi, bps, opt.tol);
        out.value += r.value;
        out.abs_error += r.abs_error;
    }
    return out;
}

inline double convolve_at(const RadonMeasure& h, const BoundedSignal& f, double t, const ConvolveOptions& opt = {})
{
    return convolve_at_detailed(h, f, t, opt).value;
}

struct SampledSignal {
    std::vector<double> t;
    std::vector<double> value;
    /// Indices where some atom lands exactly on a declared jump of f; the
    /// sample there depends on the representative f takes at the jump.
    std::vector<std::size_t> flagged;
};

/// Grid oracle: exact atom terms plus a trapezoidal rule in tau with step no
/// larger than the grid step, split at the declared jumps of f.
inline SampledSignal convolve_grid(const RadonMeasure& h, const BoundedSignal& f, const SamplingGrid& grid)
{
    detail::require_well_posed(h, f);
    const std::size_t n = grid.size();
    SampledSignal out;
    out.t.reserve(n);
    out.value.reserve(n);

    // Integration windows for segments when f has unbounded support.
    std::vector<detail::Window> windows;
    for (const auto& s : h.segments()) {
        if (f.compact() || s.bounded()) {
            windows.push_back({s.lower, s.upper, 0.0});
        } else {
            windows.push_back(*detail::integrable_window(s, 1e-12));
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const double t = grid.at(i);
        double v = 0.0;
        bool flag = false;
        for (const auto& a : h.atoms()) {
            const double x = t - a.location;
            v += a.weight * f(x);
            if (!f.jumps_in(x, x).empty()) flag = true;
        }
        for (std::size_t k = 0; k < h.segments().size(); ++k) {
            const auto& s = h.segments()[k];
            double lo = windows[k].lo, hi = windows[k].hi;
            if (f.support()) {
                lo = std::max(lo, t - f.support()->upper);
                hi = std::min(hi, t - f.support()->lower);
            }
            if (!(hi > lo)) continue;
            // Pieces between jumps of f; end nodes take one-sided limits from
            // inside each piece, so half-open supports keep their samples.
            std::vector<double> cuts{lo};
            for (double j : f.jumps_in(t - hi, t - lo)) {
                const double tau = t - j;
                if (tau > lo && tau < hi) cuts.push_back(tau);
            }
            cuts.push_back(hi);
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
                const double a = cuts[p], b = cuts[p + 1];
                if (!(b > a)) continue;
                const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / grid.step - 1e-9)));
                const double dt = (b - a) / double(m);
                const double x_a = std::nextafter(t - a, -kInf), x_b = std::nextafter(t - b, kInf);
                double acc = 0.5 * (s(std::nextafter(a, b)) * f(x_a) + s(std::nextafter(b, a)) * f(x_b));
                for (std::size_t j = 1; j < m; ++j) {
                    const double tau = a + dt * double(j);
                    acc += s(tau) * f(t - tau);
                }
                v += acc * dt;
            }
        }
        out.t.push_back(t);
        out.value.push_back(v);
        if (flag) out.flagged.push_back(i);
    }
    return out;
}

struct AdjointCheck {
    double lhs = 0.0; // <h^v * f, g>
    double rhs = 0.0; // <f, h * g>
    double lhs_error = 0.0;
    double rhs_error = 0.0;
    double residual = 0.0;
};

struct AdjointOptions {
    double outer_tol = 1e-9;
    double inner_tol = 1e-11;
};

namespace detail {

/// Points where t -> (h * f)(t) can jump or kink: jumps and support ends of
/// f shifted by atom locations and finite segment endpoints of h.
inline std::vector<double> output_breakpoints(const RadonMeasure& h, const BoundedSignal& f)
{
    std::vector<double> fj = f.jumps_in(f.support()->lower, f.support()->upper);
    fj.push_back(f.support()->lower);
    fj.push_back(f.support()->upper);
    std::vector<double> hp;
    for (const auto& a : h.atoms()) hp.push_back(a.location);
    for (const auto& s : h.segments()) {
        if (std::isfinite(s.lower)) hp.push_back(s.lower);
        if (std::isfinite(s.upper)) hp.push_back(s.upper);
    }
    std::vector<double> out;
    for (double j : fj)
        for (double e : hp) out.push_back(j + e);
    return out;
}

inline Evaluation pairing(const RadonMeasure& h, const BoundedSignal& inner, const BoundedSignal& outer,
                          const AdjointOptions& opt)
{
    auto bps = output_breakpoints(h, inner);
    auto ob = outer.jumps_in(outer.support()->lower, outer.support()->upper);
    bps.insert(bps.end(), ob.begin(), ob.end());
    double inner_err = 0.0;
    ConvolveOptions co{opt.inner_tol};
    quad::Options qo;
    qo.abs_tol = opt.outer_tol;
    qo.max_subdivisions = 4000;
    const auto r = quad::integrate(
        [&](double t) {
            const double w = outer(t);
            if (w == 0.0) return 0.0;
            const auto e = convolve_at_detailed(h, inner, t, co);
            inner_err = std::max(inner_err, e.abs_error);
            return w * e.value;
        },
        outer.support()->lower, outer.support()->upper, bps, qo);
    const double width = outer.support()->upper - outer.support()->lower;
    return {r.value, r.abs_error + inner_err * outer.sup_bound() * width};
}

} // namespace detail

/// |<h^v * f, g> - <f, h * g>| by nested quadrature; both sides carry their
/// own error budget.
inline AdjointCheck adjoint_identity_check(const RadonMeasure& h, const BoundedSignal& f, const BoundedSignal& g,
                                           const AdjointOptions& opt = {})
{
    if (!f.compact() || !g.compact())
        throw Error(Errc::IllPosedConvolution, "adjoint identity needs compactly supported f and g");
    if (!detail::certified_bounded(h))
        throw Error(Errc::IllPosedConvolution, "adjoint identity needs a bounded impulse response");
    AdjointCheck out;
    if (h.empty()) return out;
    const auto l = detail::pairing(time_reverse(h), f, g, opt);
    const auto r = detail::pairing(h, g, f, opt);
    out.lhs = l.value;
    out.rhs = r.value;
    out.lhs_error = l.abs_error;
    out.rhs_error = r.abs_error;
    out.residual = std::abs(l.value - r.value);
    return out;
}

inline double adjoint_identity_residual(const RadonMeasure& h, const BoundedSignal& f, const BoundedSignal& g,
                                        const AdjointOptions& opt = {})
{
    return adjoint_identity_check(h, f, g, opt).residual;
}

enum class ContinuityVerdict { ContinuousAt, DiscontinuityDetected, Inconclusive };

inline const char* to_string(ContinuityVerdict v)
{
    switch (v) {
    case ContinuityVerdict::ContinuousAt: return "ContinuousAt";
    case ContinuityVerdict::DiscontinuityDetected: return "DiscontinuityDetected";
    case ContinuityVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct ModulusSample {
    double delta = 0.0;
    double modulus = 0.0;
};

struct ContinuityReport {
    double value = 0.0; // (h * f)(t0)
    std::vector<ModulusSample> moduli;
    ContinuityVerdict verdict = ContinuityVerdict::Inconclusive;
    bool atoms_flagged = false; // atoms present: output may inherit jumps of f
};

struct ContinuityOptions {
    double tol = 1e-6;
    double quad_tol = 1e-12;
};

inline std::vector<double> default_probe_deltas()
{
    std::vector<double> d;
    for (int k = 1; k <= 8; ++k) d.push_back(std::pow(10.0, -k));
    return d;
}

/// max(|v(t0 + d) - v(t0)|, |v(t0 - d) - v(t0)|) along shrinking d.
/// Tolerances are relative to max(1, largest |v| seen): ContinuousAt when the
/// last modulus is below tol, DiscontinuityDetected when the last three stay
/// above 10 tol.
inline ContinuityReport continuity_probe(const RadonMeasure& h, const BoundedSignal& f, double t0,
                                         const std::vector<double>& deltas = default_probe_deltas(),
                                         const ContinuityOptions& opt = {})
{
    if (deltas.empty()) throw Error(Errc::InvalidArgument, "continuity probe needs at least one delta");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] < deltas[i - 1])))
            throw Error(Errc::InvalidArgument, "deltas must be positive and strictly decreasing");
    }
    ContinuityReport rep;
    rep.atoms_flagged = h.has_atoms();
    const ConvolveOptions co{opt.quad_tol};
    rep.value = convolve_at(h, f, t0, co);
    double scale = std::max(1.0, std::abs(rep.value));
    for (double d : deltas) {
        const double vp = convolve_at(h, f, t0 + d, co), vm = convolve_at(h, f, t0 - d, co);
        scale = std::max({scale, std::abs(vp), std::abs(vm)});
        rep.moduli.push_back({d, std::max(std::abs(vp - rep.value), std::abs(vm - rep.value))});
    }
    const double tol = opt.tol * scale;
    const std::size_t n = rep.moduli.size();
    const std::size_t k = std::min<std::size_t>(3, n);
    bool stuck = true;
    for (std::size_t i = n - k; i < n; ++i) stuck = stuck && rep.moduli[i].modulus > 10.0 * tol;
    if (stuck)
        rep.verdict = ContinuityVerdict::DiscontinuityDetected;
    else if (rep.moduli.back().modulus < tol)
        rep.verdict = ContinuityVerdict::ContinuousAt;
    return rep;
}

} // namespace rbibo
