#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "rbibo/bounded_signal.hpp"
#include "rbibo/measure.hpp"

namespace rbibo {

/// Uniform samples start, start + step, ... up to stop (inclusive, within
/// roundoff).
struct SamplingGrid {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    std::size_t size() const
    {
        if (!(step > 0.0) || !std::isfinite(step) || !(stop >= start))
            throw Error(Errc::InvalidArgument, "sampling grid needs step > 0 and stop >= start");
        return static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    }

    double at(std::size_t i) const { return start + step * double(i); }
};

/// f0(t) = sign(h(-t)), with the atom's sign at reflected atom locations.
/// Range is {-1, 0, 1}; jumps sit at reflected sign changes, segment
/// endpoints and atoms.
inline BoundedSignal worst_case_signal(const RadonMeasure& h)
{
    if (h.empty()) throw Error(Errc::ZeroMeasure, "worst-case signal of the zero measure");
    auto m = std::make_shared<const RadonMeasure>(h);
    auto eval = [m](double t) {
        const double tau = -t;
        const auto& atoms = m->atoms();
        auto it = std::lower_bound(atoms.begin(), atoms.end(), tau,
                                   [](const DiracAtom& a, double v) { return a.location < v; });
        if (it != atoms.end() && it->location == tau) return detail::sgn(it->weight);
        return detail::sgn(m->density(tau));
    };
    auto jumps = [m](double lo, double hi) {
        std::vector<double> out;
        const double rlo = -hi, rhi = -lo;
        for (const auto& a : m->atoms())
            if (a.location >= rlo && a.location <= rhi) out.push_back(-a.location);
        for (const auto& s : m->segments()) {
            if (s.lower >= rlo && s.lower <= rhi) out.push_back(-s.lower);
            if (s.upper >= rlo && s.upper <= rhi) out.push_back(-s.upper);
            const double a = std::max(s.lower, rlo), b = std::min(s.upper, rhi);
            for (double r : detail::sign_changes(s, a, b)) out.push_back(-r);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    std::optional<Interval> support;
    if (auto hull = h.hull(); hull && std::isfinite(hull->lower) && std::isfinite(hull->upper))
        support = Interval{-hull->upper, -hull->lower};
    return BoundedSignal(eval, 1.0, support, Continuity::PiecewiseContinuous, jumps, "worst-case");
}

/// f * 1_[-T, T]
inline BoundedSignal truncate(const BoundedSignal& f, double T)
{
    if (!(T > 0.0) || !std::isfinite(T)) throw Error(Errc::InvalidArgument, "truncation horizon must be positive");
    Interval support{-T, T};
    if (f.support()) {
        const Interval s{std::max(-T, f.support()->lower), std::min(T, f.support()->upper)};
        if (s.lower <= s.upper) support = s;
    }
    auto ev = f.shared_evaluator();
    auto locator = f.jump_locator();
    auto jumps = [locator, T](double lo, double hi) {
        std::vector<double> out;
        if (locator) out = locator(std::max(lo, -T), std::min(hi, T));
        if (-T >= lo && -T <= hi) out.push_back(-T);
        if (T >= lo && T <= hi) out.push_back(T);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    const auto continuity =
        f.continuity() == Continuity::Measurable ? Continuity::Measurable : Continuity::PiecewiseContinuous;
    return BoundedSignal([ev, T](double t) { return (t >= -T && t <= T) ? (*ev)(t) : 0.0; }, f.sup_bound(),
                         support, continuity, jumps, f.description() + "|trunc");
}

/// Max |f| over the grid and the declared jumps inside it; a lower bound
/// on the sup-norm.
inline double sup_norm_estimate(const BoundedSignal& f, const SamplingGrid& grid)
{
    const std::size_t n = grid.size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::abs(f(grid.at(i))));
    for (double j : f.jumps_in(grid.start, grid.stop)) {
        best = std::max(best, std::abs(f(j)));
        best = std::max(best, std::abs(f(std::nextafter(j, -kInf))));
        best = std::max(best, std::abs(f(std::nextafter(j, kInf))));
    }
    return best;
}

// Built-in signal families.

inline BoundedSignal rect_signal(double lower, double upper, double amplitude = 1.0)
{
    if (!(lower < upper)) throw Error(Errc::InvalidSignal, "rect needs lower < upper");
    return BoundedSignal([=](double t) { return (t >= lower && t < upper) ? amplitude : 0.0; },
                         std::abs(amplitude), Interval{lower, upper}, Continuity::PiecewiseContinuous,
                         jumps_from_list({lower, upper}), "rect");
}

inline BoundedSignal step_signal(double at = 0.0, double amplitude = 1.0)
{
    return BoundedSignal([=](double t) { return t >= at ? amplitude : 0.0; }, std::abs(amplitude), std::nullopt,
                         Continuity::PiecewiseContinuous, jumps_from_list({at}), "step");
}

inline BoundedSignal constant_signal(double value)
{
    return BoundedSignal([=](double) { return value; }, std::abs(value), std::nullopt, Continuity::Continuous, {},
                         "constant");
}

inline BoundedSignal sine_signal(double amplitude, double omega, double phase = 0.0)
{
    return BoundedSignal([=](double t) { return amplitude * std::sin(omega * t + phase); }, std::abs(amplitude),
                         std::nullopt, Continuity::Continuous, {}, "sine");
}

/// amplitude * sign(sin(omega t + phase)).
inline BoundedSignal sign_pattern_signal(double amplitude, double omega, double phase = 0.0)
{
    if (!(omega > 0.0)) throw Error(Errc::InvalidSignal, "sign pattern needs omega > 0");
    auto jumps = [=](double lo, double hi) {
        std::vector<double> out;
        const double period = std::numbers::pi / omega;
        double k = std::ceil((omega * lo + phase) / std::numbers::pi);
        for (double t = (k * std::numbers::pi - phase) / omega; t <= hi; t += period) {
            if (t >= lo) out.push_back(t);
            if (out.size() > (1u << 20)) break;
        }
        return out;
    };
    return BoundedSignal([=](double t) { return amplitude * detail::sgn(std::sin(omega * t + phase)); },
                         std::abs(amplitude), std::nullopt, Continuity::PiecewiseContinuous, jumps, "sign-pattern");
}

/// The density of an atom-free measure viewed as an input signal. The sup
/// bound is the caller's claim (audited like any other signal).
inline BoundedSignal density_signal(const RadonMeasure& h, double sup_bound)
{
    if (h.has_atoms()) throw Error(Errc::HasAtomicPart, "density_signal needs an atom-free measure");
    auto m = std::make_shared<const RadonMeasure>(h);
    std::vector<double> ends;
    for (const auto& s : h.segments()) {
        if (std::isfinite(s.lower)) ends.push_back(s.lower);
        if (std::isfinite(s.upper)) ends.push_back(s.upper);
    }
    std::optional<Interval> support;
    if (auto hull = h.hull(); hull && std::isfinite(hull->lower) && std::isfinite(hull->upper)) support = *hull;
    if (h.empty()) support = Interval{0.0, 0.0};
    return BoundedSignal([m](double t) { return m->density(t); }, sup_bound, support, Continuity::PiecewiseContinuous,
                         jumps_from_list(ends), "density");
}

} // namespace rbibo
