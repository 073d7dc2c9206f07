#pragma once

// Lower bound on the total-variation norm from its dual definition: pair the
// measure with a smoothed sign pattern of itself, |phi| <= 1.

#include <algorithm>
#include <cmath>
#include <vector>

#include "rbibo/measure.hpp"

namespace rbibo {

inline constexpr int kMaxDualRefinement = 24;

namespace detail {

struct SignPiece {
    double lo = 0.0;
    double hi = 0.0;
    double sign = 0.0;
    bool left_atom = false;
    bool right_atom = false;
};

struct Transition {
    double a = 0.0;
    double b = 0.0;
    double delta = 0.0; // sign after minus sign before
};

/// Maximal runs of constant sign of h, atoms included, ordered along the line.
inline std::vector<SignPiece> sign_pieces(const RadonMeasure& h)
{
    std::vector<SignPiece> raw;
    for (const auto& s : h.segments()) {
        auto w = integrable_window(s, 1e-14);
        if (!w) continue;
        auto roots = sign_changes(s, w->lo, w->hi);
        std::vector<double> pts{w->lo};
        pts.insert(pts.end(), roots.begin(), roots.end());
        pts.push_back(w->hi);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const double sg = sgn(s(0.5 * (pts[i] + pts[i + 1])));
            if (sg != 0.0) raw.push_back({pts[i], pts[i + 1], sg, false, false});
        }
    }
    // Split density pieces that contain an atom.
    for (const auto& a : h.atoms()) {
        for (std::size_t i = 0; i < raw.size(); ++i) {
            auto& p = raw[i];
            if (!p.left_atom && p.lo < a.location && a.location < p.hi) {
                SignPiece right{a.location, p.hi, p.sign, false, false};
                p.hi = a.location;
                raw.push_back(right);
                break;
            }
        }
        raw.push_back({a.location, a.location, sgn(a.weight), true, true});
    }
    std::sort(raw.begin(), raw.end(), [](const SignPiece& x, const SignPiece& y) {
        if (x.lo != y.lo) return x.lo < y.lo;
        return x.hi < y.hi;
    });
    std::vector<SignPiece> merged;
    for (const auto& p : raw) {
        if (!merged.empty() && merged.back().sign == p.sign) {
            if (p.hi >= merged.back().hi) {
                merged.back().right_atom = p.right_atom;
                merged.back().hi = p.hi;
            }
        } else {
            merged.push_back(p);
        }
    }
    return merged;
}

inline std::vector<Transition> transitions(const std::vector<SignPiece>& pieces, double width)
{
    std::vector<Transition> out;
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        const auto& l = pieces[i];
        const auto& r = pieces[i + 1];
        const double y = l.hi, x = std::max(r.lo, l.hi);
        const double mid = 0.5 * (x + y);
        Transition t{mid - 0.5 * width, mid + 0.5 * width, r.sign - l.sign};
        if (x - y < width) {
            if (l.right_atom && r.left_atom) {
                t.a = y;
                t.b = x;
            } else if (l.right_atom) {
                t.a = y;
                t.b = y + width;
            } else if (r.left_atom) {
                t.a = x - width;
                t.b = x;
            }
        }
        out.push_back(t);
    }
    return out;
}

inline double smoothstep(double x)
{
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * (3.0 - 2.0 * x);
}

} // namespace detail

/// Smooth test function tracking sign(h) with transitions of the given width.
struct MollifiedSign {
    double initial = 0.0;
    std::vector<detail::Transition> steps;

    double operator()(double t) const
    {
        double v = initial;
        for (const auto& s : steps) {
            if (t <= s.a) break;
            v += s.b > s.a ? s.delta * detail::smoothstep((t - s.a) / (s.b - s.a)) : s.delta;
        }
        return std::clamp(v, -1.0, 1.0);
    }

    std::vector<double> breakpoints(double lo, double hi) const
    {
        std::vector<double> out;
        for (const auto& s : steps) {
            if (s.a >= lo && s.a <= hi) out.push_back(s.a);
            if (s.b >= lo && s.b <= hi) out.push_back(s.b);
        }
        return out;
    }
};

inline MollifiedSign mollified_sign(const RadonMeasure& h, double width)
{
    const auto pieces = detail::sign_pieces(h);
    MollifiedSign phi;
    if (pieces.empty()) return phi;
    phi.initial = pieces.front().sign;
    phi.steps = detail::transitions(pieces, width);
    std::sort(phi.steps.begin(), phi.steps.end(),
              [](const detail::Transition& x, const detail::Transition& y) { return x.a < y.a; });
    return phi;
}

/// <h, phi> for the mollified sign pattern phi.
inline double pair_with(const RadonMeasure& h, const MollifiedSign& phi, double tol = 1e-12)
{
    double total = 0.0;
    for (const auto& a : h.atoms()) total += a.weight * phi(a.location);
    detail::BreakpointFn bps = [&phi](double lo, double hi) { return phi.breakpoints(lo, hi); };
    for (const auto& s : h.segments())
        total += detail::integrate_against(s, phi, 1.0, -kInf, kInf, bps, tol).value;
    return total;
}

/// Lower bound on ||h||_M from test functions with transition width
/// 2^-k, k = 1..refinement; the running maximum makes it nondecreasing in
/// refinement.
inline double dual_m_norm_estimate(const RadonMeasure& h, int refinement, const NormOptions& opt = {})
{
    if (refinement < 1 || refinement > kMaxDualRefinement)
        throw Error(Errc::InvalidArgument, "refinement must lie in [1, " + std::to_string(kMaxDualRefinement) + "]");
    const auto norm = m_norm(h, opt);
    if (!norm.finite()) throw Error(Errc::DivergentMeasure, "dual estimate needs a bounded measure");
    const auto pieces = detail::sign_pieces(h);
    if (pieces.empty()) return 0.0;
    double best = 0.0;
    for (int k = 1; k <= refinement; ++k) {
        MollifiedSign phi;
        phi.initial = pieces.front().sign;
        phi.steps = detail::transitions(pieces, std::ldexp(1.0, -k));
        std::sort(phi.steps.begin(), phi.steps.end(),
                  [](const detail::Transition& x, const detail::Transition& y) { return x.a < y.a; });
        best = std::max(best, pair_with(h, phi));
    }
    return best;
}

} // namespace rbibo
