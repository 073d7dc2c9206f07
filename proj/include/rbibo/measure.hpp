#pragma once

// Impulse responses as Radon measures: weighted Dirac atoms plus a piecewise
// locally integrable density. Houses the total-variation (M-) norm, the L1 and
// Lp norms of the density, the Jordan decomposition and the action on test
// signals.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "rbibo/bounded_signal.hpp"
#include "rbibo/density.hpp"
#include "rbibo/error.hpp"
#include "rbibo/quadrature.hpp"

namespace rbibo {

struct DiracAtom {
    double location = 0.0;
    double weight = 0.0;
    bool operator==(const DiracAtom&) const = default;
};

/// Terms summed over the half-open interval [lower, upper).
struct DensitySegment {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<DensityTerm> terms;

    bool operator==(const DensitySegment&) const = default;

    static DensitySegment of(double lower, double upper, DensityTerm term)
    {
        return {lower, upper, {std::move(term)}};
    }

    double operator()(double t) const
    {
        double v = 0.0;
        for (const auto& term : terms) v += detail::value(term, t);
        return v;
    }

    bool bounded() const { return std::isfinite(lower) && std::isfinite(upper); }

    bool closed_form() const
    {
        return std::none_of(terms.begin(), terms.end(),
                            [](const DensityTerm& t) { return std::holds_alternative<Callable>(t); });
    }
};

struct GrowthPoint {
    double horizon = 0.0;
    double value = 0.0;
    bool operator==(const GrowthPoint&) const = default;
};

/// Samples (T, value) with T strictly increasing and value nondecreasing.
class GrowthCurve {
public:
    GrowthCurve() = default;

    explicit GrowthCurve(std::vector<GrowthPoint> points) : points_(std::move(points))
    {
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const auto& p = points_[i];
            if (!(p.horizon > 0.0) || !(p.value >= 0.0))
                throw Error(Errc::InvalidArgument, "growth curve needs positive horizons and non-negative values");
            if (i > 0) {
                const auto& q = points_[i - 1];
                if (!(p.horizon > q.horizon))
                    throw Error(Errc::InvalidArgument, "growth curve horizons must increase strictly");
                if (p.value < q.value - 1e-9 * (1.0 + q.value))
                    throw Error(Errc::InvalidArgument, "growth curve values must be nondecreasing");
            }
        }
    }

    const std::vector<GrowthPoint>& points() const { return points_; }
    bool empty() const { return points_.empty(); }
    const GrowthPoint& back() const { return points_.back(); }

private:
    std::vector<GrowthPoint> points_;
};

enum class NormKind { Finite, Divergent, Indeterminate };

inline const char* to_string(NormKind k)
{
    switch (k) {
    case NormKind::Finite: return "finite";
    case NormKind::Divergent: return "divergent";
    case NormKind::Indeterminate: return "indeterminate";
    }
    return "?";
}

struct NormResult {
    NormKind kind = NormKind::Finite;
    double value = 0.0; // +inf unless Finite
    double abs_error = 0.0;
    GrowthCurve evidence;

    bool finite() const { return kind == NormKind::Finite; }

    static NormResult finite_value(double v, double err) { return {NormKind::Finite, v, err, {}}; }
    static NormResult divergent(GrowthCurve curve) { return {NormKind::Divergent, kInf, 0.0, std::move(curve)}; }
    static NormResult indeterminate(GrowthCurve curve)
    {
        return {NormKind::Indeterminate, kInf, 0.0, std::move(curve)};
    }
};

struct NormOptions {
    double tol = 1e-11;             // absolute, per segment
    double divergence_cap = 1e12;   // growth value treated as unbounded
    int evidence_doublings = 10;    // growth curve T = 1, 2, ..., 2^k
    int search_doublings = 20;      // budget for callables without analytic tails
};

namespace detail {

inline bool term_key_less(const DensityTerm& a, const DensityTerm& b)
{
    if (a.index() != b.index()) return a.index() < b.index();
    if (const auto* ea = std::get_if<ExpPoly>(&a)) {
        const auto& eb = std::get<ExpPoly>(b);
        return std::tie(ea->rate, ea->frequency, ea->origin, ea->cos_coeffs, ea->sin_coeffs) <
               std::tie(eb.rate, eb.frequency, eb.origin, eb.cos_coeffs, eb.sin_coeffs);
    }
    if (const auto* ga = std::get_if<Gaussian>(&a)) {
        const auto& gb = std::get<Gaussian>(b);
        return std::tie(ga->scale, ga->center, ga->weight) < std::tie(gb.scale, gb.center, gb.weight);
    }
    return false;
}

inline void add_coeffs(std::vector<double>& into, const std::vector<double>& from)
{
    if (into.size() < from.size()) into.resize(from.size(), 0.0);
    for (std::size_t k = 0; k < from.size(); ++k) into[k] += from[k];
}

/// Combines like terms, drops zero terms and sorts into canonical order.
inline std::vector<DensityTerm> canonical_terms(const std::vector<DensityTerm>& terms)
{
    double constant = 0.0;
    bool has_constant = false;
    std::vector<ExpPoly> exps;
    std::vector<Gaussian> gauss;
    std::vector<DensityTerm> callables;
    for (const auto& t : terms) {
        if (const auto* c = std::get_if<Constant>(&t)) {
            constant += c->value;
            has_constant = true;
        } else if (const auto* e = std::get_if<ExpPoly>(&t)) {
            auto it = std::find_if(exps.begin(), exps.end(), [&](const ExpPoly& x) {
                return x.rate == e->rate && x.frequency == e->frequency && x.origin == e->origin;
            });
            if (it == exps.end()) {
                exps.push_back(*e);
            } else {
                add_coeffs(it->cos_coeffs, e->cos_coeffs);
                add_coeffs(it->sin_coeffs, e->sin_coeffs);
            }
        } else if (const auto* g = std::get_if<Gaussian>(&t)) {
            auto it = std::find_if(gauss.begin(), gauss.end(), [&](const Gaussian& x) {
                return x.scale == g->scale && x.center == g->center;
            });
            if (it == gauss.end())
                gauss.push_back(*g);
            else
                it->weight += g->weight;
        } else {
            callables.push_back(t);
        }
    }
    std::vector<DensityTerm> out;
    if (has_constant && constant != 0.0) out.emplace_back(Constant{constant});
    for (auto& e : exps) {
        trim(e.cos_coeffs);
        trim(e.sin_coeffs);
        if (e.frequency == 0.0) e.sin_coeffs.clear();
        if (!e.cos_coeffs.empty() || !e.sin_coeffs.empty()) out.emplace_back(e);
    }
    for (auto& g : gauss)
        if (g.weight != 0.0) out.emplace_back(g);
    std::stable_sort(out.begin(), out.end(), term_key_less);
    out.insert(out.end(), callables.begin(), callables.end());
    return out;
}

inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// Sign changes of the segment's density strictly inside (x, y), found by a
/// scan on a grid finer than every term's oscillation scale and refined by
/// bisection. Close pairs of roots inside one scan cell can be missed.
inline std::vector<double> sign_changes(const DensitySegment& seg, double x, double y)
{
    std::vector<double> roots;
    if (!(y > x) || !std::isfinite(x) || !std::isfinite(y)) return roots;
    const double len = y - x;
    double h = len / 64.0;
    bool has_callable = false;
    int degree = 0;
    for (const auto& term : seg.terms) {
        h = std::min(h, oscillation_scale(term));
        if (std::holds_alternative<Callable>(term)) has_callable = true;
        if (const auto* e = std::get_if<ExpPoly>(&term)) degree = std::max(degree, e->degree());
    }
    if (has_callable) h = std::min(h, len / 1024.0);
    if (degree > 0) h = std::min(h, len / (64.0 + 32.0 * degree));
    const long n = std::clamp(static_cast<long>(std::ceil(len / h)), 1L, 1L << 20);
    const double dx = len / double(n);
    double prev_t = x;
    double prev_v = seg(x);
    for (long i = 1; i <= n; ++i) {
        const double t = (i == n) ? y : x + dx * double(i);
        const double v = seg(t);
        if (v == 0.0 && i < n) {
            roots.push_back(t);
        } else if (sgn(v) * sgn(prev_v) < 0.0) {
            double a = prev_t, b = t, fa = prev_v;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                if (!(m > a && m < b)) break;
                const double fm = seg(m);
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if (sgn(fm) == sgn(fa)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_t = t;
        prev_v = v;
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    roots.erase(std::remove_if(roots.begin(), roots.end(), [&](double r) { return !(r > x && r < y); }),
                roots.end());
    return roots;
}

inline RealAnti segment_antiderivative(const DensitySegment& seg, double t)
{
    RealAnti total;
    for (const auto& term : seg.terms) {
        const auto a = antiderivative(term, t);
        if (!a.ok) return {0.0, 0.0, false};
        total.value += a.value;
        total.error += a.error;
    }
    return total;
}

struct Integral {
    double value = 0.0;
    double abs_error = 0.0;
};

/// int_x^y |density| over a finite range inside the segment. Closed-form
/// antiderivatives between consecutive sign changes, falling back to
/// adaptive quadrature wherever the antiderivative is ill-conditioned or the
/// segment holds a callable.
inline Integral abs_integral(const DensitySegment& seg, double x, double y, double tol)
{
    Integral out;
    if (!(y > x)) return out;
    const auto roots = sign_changes(seg, x, y);
    std::vector<double> pts{x};
    pts.insert(pts.end(), roots.begin(), roots.end());
    pts.push_back(y);
    auto abs_fn = [&seg](double t) { return std::abs(seg(t)); };
    if (!seg.closed_form()) {
        quad::Options opt;
        opt.abs_tol = tol;
        opt.max_subdivisions = 20000;
        const auto r = quad::integrate(abs_fn, x, y, roots, opt);
        return {r.value, r.abs_error};
    }
    RealAnti left = segment_antiderivative(seg, x);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const RealAnti right = segment_antiderivative(seg, pts[i + 1]);
        const double piece = std::abs(right.value - left.value);
        const double err = left.error + right.error;
        if (left.ok && right.ok && std::isfinite(piece) && err <= 1e-13 + 1e-13 * piece) {
            out.value += piece;
            out.abs_error += err;
        } else if (!std::isfinite(piece) && left.ok && right.ok) {
            out.value = kInf;
            return out;
        } else {
            quad::Options opt;
            opt.abs_tol = std::min(tol, 1e-12);
            opt.rel_tol = 1e-14;
            const auto r = quad::integrate(abs_fn, pts[i], pts[i + 1], {}, opt);
            out.value += r.value;
            out.abs_error += r.abs_error;
        }
        left = right;
    }
    return out;
}

/// Smallest horizon S (from a doubling schedule) with int_S^inf |density| <= tol.
/// With unit_envelope, also |density| <= 1 on [S, inf).
inline std::optional<double> upper_horizon(const DensitySegment& seg, double tol, int max_doublings = 60,
                                           bool unit_envelope = false)
{
    double start = std::isfinite(seg.lower) ? seg.lower : 0.0;
    double scale = 1.0;
    for (const auto& term : seg.terms) {
        start = std::max(start, upper_tail_start(term));
        scale = std::max(scale, decay_scale(term));
    }
    for (int k = 0; k <= max_doublings; ++k) {
        const double S = start + scale * std::ldexp(1.0, k);
        double tail = 0.0, env = 0.0;
        for (const auto& term : seg.terms) {
            tail += upper_tail_bound(term, S);
            if (unit_envelope && !std::holds_alternative<Callable>(term)) env += upper_envelope(term, S);
        }
        if (tail <= tol && (!unit_envelope || env <= 1.0)) return S;
    }
    return std::nullopt;
}

inline DensitySegment reflect(const DensitySegment& seg)
{
    DensitySegment r{-seg.upper, -seg.lower, {}};
    for (const auto& t : seg.terms) r.terms.push_back(reflect(t));
    return r;
}

inline std::optional<double> lower_horizon(const DensitySegment& seg, double tol, int max_doublings = 60,
                                           bool unit_envelope = false)
{
    auto h = upper_horizon(reflect(seg), tol, max_doublings, unit_envelope);
    if (!h) return std::nullopt;
    return -*h;
}

inline double upper_tail(const DensitySegment& seg, double S)
{
    double tail = 0.0;
    for (const auto& term : seg.terms) tail += upper_tail_bound(term, S);
    return tail;
}

inline double lower_tail(const DensitySegment& seg, double S)
{
    double tail = 0.0;
    for (const auto& term : seg.terms) tail += lower_tail_bound(term, S);
    return tail;
}

inline bool diverges_upper(const DensitySegment& seg)
{
    return !std::isfinite(seg.upper) &&
           std::any_of(seg.terms.begin(), seg.terms.end(), [](const auto& t) { return diverges_upper(t); });
}

inline bool diverges_lower(const DensitySegment& seg)
{
    return !std::isfinite(seg.lower) &&
           std::any_of(seg.terms.begin(), seg.terms.end(), [](const auto& t) { return diverges_lower(t); });
}

/// Finite integration window [lo, hi] for a segment whose infinite sides
/// have certified tails, plus the neglected tail mass.
struct Window {
    double lo = 0.0;
    double hi = 0.0;
    double tail = 0.0;
};

inline std::optional<Window> integrable_window(const DensitySegment& seg, double tol, bool unit_envelope = false)
{
    Window w{seg.lower, seg.upper, 0.0};
    if (!std::isfinite(seg.upper)) {
        auto S = upper_horizon(seg, tol, 60, unit_envelope);
        if (!S) return std::nullopt;
        w.hi = *S;
        w.tail += upper_tail(seg, *S);
    }
    if (!std::isfinite(seg.lower)) {
        auto S = lower_horizon(seg, tol, 60, unit_envelope);
        if (!S) return std::nullopt;
        w.lo = *S;
        w.tail += lower_tail(seg, *S);
    }
    if (w.hi < w.lo) w.hi = w.lo;
    return w;
}

} // namespace detail

class RadonMeasure {
public:
    RadonMeasure() = default;

    /// Validating constructor: rejects overlapping segments, then merges
    /// atoms, drops zero atoms and sorts segments.
    static RadonMeasure make(std::vector<DiracAtom> atoms, std::vector<DensitySegment> segments)
    {
        validate(atoms, segments);
        auto sorted = segments;
        std::sort(sorted.begin(), sorted.end(),
                  [](const DensitySegment& a, const DensitySegment& b) { return a.lower < b.lower; });
        for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
            if (sorted[i].upper > sorted[i + 1].lower)
                throw Error(Errc::OverlappingSegments,
                            "segments [" + std::to_string(sorted[i].lower) + ", " + std::to_string(sorted[i].upper) +
                                ") and [" + std::to_string(sorted[i + 1].lower) + ", " +
                                std::to_string(sorted[i + 1].upper) + ") overlap");
        }
        return normalized(std::move(atoms), std::move(segments));
    }

    /// Sum of the given pieces; overlapping segments add up.
    static RadonMeasure sum_of(std::vector<DiracAtom> atoms, std::vector<DensitySegment> segments)
    {
        validate(atoms, segments);
        return normalized(std::move(atoms), std::move(segments));
    }

    static RadonMeasure dirac(double location = 0.0, double weight = 1.0)
    {
        return make({{location, weight}}, {});
    }

    const std::vector<DiracAtom>& atoms() const { return atoms_; }
    const std::vector<DensitySegment>& segments() const { return segments_; }
    bool empty() const { return atoms_.empty() && segments_.empty(); }
    bool has_atoms() const { return !atoms_.empty(); }
    bool has_density() const { return !segments_.empty(); }

    bool operator==(const RadonMeasure&) const = default;

    const DensitySegment* segment_at(double t) const
    {
        auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                                   [](double v, const DensitySegment& s) { return v < s.lower; });
        if (it == segments_.begin()) return nullptr;
        --it;
        return t < it->upper ? &*it : nullptr;
    }

    /// Density value at t (atoms excluded).
    double density(double t) const
    {
        const auto* s = segment_at(t);
        return s ? (*s)(t) : 0.0;
    }

    /// Smallest interval holding all atoms and segments; infinite ends allowed.
    std::optional<Interval> hull() const
    {
        if (empty()) return std::nullopt;
        double lo = kInf, hi = -kInf;
        for (const auto& a : atoms_) {
            lo = std::min(lo, a.location);
            hi = std::max(hi, a.location);
        }
        for (const auto& s : segments_) {
            lo = std::min(lo, s.lower);
            hi = std::max(hi, s.upper);
        }
        return Interval{lo, hi};
    }

    RadonMeasure operator+(const RadonMeasure& o) const
    {
        auto atoms = atoms_;
        atoms.insert(atoms.end(), o.atoms_.begin(), o.atoms_.end());
        auto segs = segments_;
        segs.insert(segs.end(), o.segments_.begin(), o.segments_.end());
        return normalized(std::move(atoms), std::move(segs));
    }

    RadonMeasure operator-(const RadonMeasure& o) const { return *this + o.scaled(-1.0); }

    RadonMeasure scaled(double c) const
    {
        if (!std::isfinite(c)) throw Error(Errc::InvalidArgument, "scale factor must be finite");
        if (c == 0.0) return {};
        RadonMeasure r;
        for (const auto& a : atoms_) r.atoms_.push_back({a.location, c * a.weight});
        for (const auto& s : segments_) {
            DensitySegment seg{s.lower, s.upper, {}};
            for (const auto& t : s.terms) seg.terms.push_back(detail::scale(t, c));
            r.segments_.push_back(std::move(seg));
        }
        return normalized(std::move(r.atoms_), std::move(r.segments_));
    }

    /// h(. - t0)
    RadonMeasure shifted(double t0) const
    {
        if (!std::isfinite(t0)) throw Error(Errc::InvalidArgument, "shift must be finite");
        std::vector<DiracAtom> atoms;
        std::vector<DensitySegment> segs;
        for (const auto& a : atoms_) atoms.push_back({a.location + t0, a.weight});
        for (const auto& s : segments_) {
            DensitySegment seg{s.lower + t0, s.upper + t0, {}};
            for (const auto& t : s.terms) seg.terms.push_back(detail::shift(t, t0));
            segs.push_back(std::move(seg));
        }
        return normalized(std::move(atoms), std::move(segs));
    }

    /// h(-.)
    RadonMeasure reversed() const
    {
        std::vector<DiracAtom> atoms;
        std::vector<DensitySegment> segs;
        for (const auto& a : atoms_) atoms.push_back({-a.location, a.weight});
        for (const auto& s : segments_) segs.push_back(detail::reflect(s));
        return normalized(std::move(atoms), std::move(segs));
    }

    /// Same measure restricted to its atoms or to its density.
    RadonMeasure atomic_part() const { return normalized(atoms_, {}); }
    RadonMeasure density_part() const { return normalized({}, segments_); }

private:
    static void validate(const std::vector<DiracAtom>& atoms, const std::vector<DensitySegment>& segments)
    {
        for (const auto& a : atoms) {
            if (!std::isfinite(a.location) || !std::isfinite(a.weight))
                throw Error(Errc::InvalidArgument, "atoms need finite location and weight");
        }
        for (const auto& s : segments) {
            if (std::isnan(s.lower) || std::isnan(s.upper) || !(s.lower < s.upper) || s.lower == kInf ||
                s.upper == -kInf)
                throw Error(Errc::InvalidSegment, "segment interval must satisfy lower < upper");
        }
    }

    static RadonMeasure normalized(std::vector<DiracAtom> atoms, std::vector<DensitySegment> segments)
    {
        RadonMeasure m;
        std::stable_sort(atoms.begin(), atoms.end(),
                         [](const DiracAtom& a, const DiracAtom& b) { return a.location < b.location; });
        for (const auto& a : atoms) {
            if (!m.atoms_.empty() && m.atoms_.back().location == a.location)
                m.atoms_.back().weight += a.weight;
            else
                m.atoms_.push_back(a);
        }
        std::erase_if(m.atoms_, [](const DiracAtom& a) { return a.weight == 0.0; });

        // Elementary intervals between all segment endpoints.
        std::vector<double> edges;
        for (const auto& s : segments) {
            edges.push_back(s.lower);
            edges.push_back(s.upper);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            const double lo = edges[i], hi = edges[i + 1];
            std::vector<DensityTerm> terms;
            for (const auto& s : segments)
                if (s.lower <= lo && s.upper >= hi) terms.insert(terms.end(), s.terms.begin(), s.terms.end());
            terms = detail::canonical_terms(terms);
            if (terms.empty()) continue;
            if (!m.segments_.empty() && m.segments_.back().upper == lo && m.segments_.back().terms == terms)
                m.segments_.back().upper = hi;
            else
                m.segments_.push_back({lo, hi, std::move(terms)});
        }
        return m;
    }

    std::vector<DiracAtom> atoms_;
    std::vector<DensitySegment> segments_;
};

inline RadonMeasure make_measure(std::vector<DiracAtom> atoms, std::vector<DensitySegment> density)
{
    return RadonMeasure::make(std::move(atoms), std::move(density));
}

inline RadonMeasure time_reverse(const RadonMeasure& h) { return h.reversed(); }

namespace detail {

/// |mu_h|([-T, T]) computed segment by segment.
inline double mass_within(const RadonMeasure& h, double T, double tol, bool closed_form_path = true)
{
    double total = 0.0;
    for (const auto& a : h.atoms())
        if (std::abs(a.location) <= T) total += std::abs(a.weight);
    for (const auto& s : h.segments()) {
        const double lo = std::max(s.lower, -T), hi = std::min(s.upper, T);
        if (!(hi > lo)) continue;
        if (closed_form_path) {
            total += abs_integral(s, lo, hi, tol).value;
        } else {
            quad::Options opt;
            opt.abs_tol = tol;
            opt.max_subdivisions = 20000;
            total += quad::integrate([&s](double t) { return std::abs(s(t)); }, lo, hi, {}, opt).value;
        }
    }
    return total;
}

inline GrowthCurve growth_curve(const RadonMeasure& h, int doublings, double cap, double tol,
                                bool closed_form_path = true)
{
    std::vector<GrowthPoint> pts;
    for (int k = 0; k <= doublings; ++k) {
        const double T = std::ldexp(1.0, k);
        const double v = mass_within(h, T, tol, closed_form_path);
        if (!std::isfinite(v)) break;
        pts.push_back({T, v});
        if (v > cap) break;
    }
    return GrowthCurve(std::move(pts));
}

enum class SegmentStatus { Finite, Divergent, Unknown };

struct SegmentMass {
    SegmentStatus status = SegmentStatus::Finite;
    double value = 0.0;
    double abs_error = 0.0;
};

/// int |density| over one segment, by closed form (or by blind adaptive
/// quadrature when closed_form_path is false).
inline SegmentMass segment_mass(const DensitySegment& seg, const NormOptions& opt, bool closed_form_path)
{
    if (diverges_upper(seg) || diverges_lower(seg)) return {SegmentStatus::Divergent, kInf, 0.0};
    const double tail_tol = std::min(1e-13, 1e-3 * opt.tol);
    auto w = integrable_window(seg, tail_tol);
    if (!w) return {SegmentStatus::Unknown, kInf, 0.0};
    if (closed_form_path) {
        const auto r = abs_integral(seg, w->lo, w->hi, opt.tol);
        if (!std::isfinite(r.value)) return {SegmentStatus::Divergent, kInf, 0.0};
        return {SegmentStatus::Finite, r.value, r.abs_error + w->tail};
    }
    quad::Options qo;
    qo.abs_tol = opt.tol;
    qo.max_subdivisions = 20000;
    const auto r = quad::integrate([&seg](double t) { return std::abs(seg(t)); }, w->lo, w->hi, {}, qo);
    return {SegmentStatus::Finite, r.value, r.abs_error + w->tail};
}

inline NormResult total_variation(const RadonMeasure& h, const NormOptions& opt, bool closed_form_path)
{
    double total = 0.0, err = 0.0;
    for (const auto& a : h.atoms()) total += std::abs(a.weight);
    err += 4.0 * kEps * total;
    bool divergent = false, unknown = false;
    for (const auto& s : h.segments()) {
        const auto m = segment_mass(s, opt, closed_form_path);
        if (m.status == SegmentStatus::Divergent) divergent = true;
        if (m.status == SegmentStatus::Unknown) unknown = true;
        total += m.value;
        err += m.abs_error;
    }
    if (divergent)
        return NormResult::divergent(
            growth_curve(h, opt.evidence_doublings, opt.divergence_cap, opt.tol, closed_form_path));
    if (unknown) {
        auto curve = growth_curve(h, opt.search_doublings, opt.divergence_cap, opt.tol, closed_form_path);
        if (!curve.empty() && curve.back().value > opt.divergence_cap) return NormResult::divergent(std::move(curve));
        return NormResult::indeterminate(std::move(curve));
    }
    return NormResult::finite_value(total, err);
}

} // namespace detail

/// Total-variation norm: sum of |atom weights| plus int |density|.
inline NormResult m_norm(const RadonMeasure& h, const NormOptions& opt = {})
{
    return detail::total_variation(h, opt, true);
}

/// L1 norm of an atom-free measure, computed by adaptive quadrature of
/// |density| without the sign-change splitting used by m_norm.
inline NormResult l1_norm(const RadonMeasure& h, const NormOptions& opt = {})
{
    if (h.has_atoms()) throw Error(Errc::HasAtomicPart, "the L1 norm is defined for the density part only");
    return detail::total_variation(h, opt, false);
}

inline NormResult lp_norm(const RadonMeasure& h, double p, const NormOptions& opt = {})
{
    if (h.has_atoms()) throw Error(Errc::HasAtomicPart, "Lp norms are defined for the density part only");
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error(Errc::InvalidArgument, "p must be finite and >= 1");
    double integral = 0.0, err = 0.0;
    for (const auto& s : h.segments()) {
        if (detail::diverges_upper(s) || detail::diverges_lower(s))
            return NormResult::divergent(
                detail::growth_curve(h, opt.evidence_doublings, opt.divergence_cap, opt.tol, false));
        // Past the horizon |h| <= 1, so int |h|^p <= int |h| there.
        auto w = detail::integrable_window(s, std::min(1e-13, 1e-3 * opt.tol), true);
        if (!w) return NormResult::indeterminate({});
        quad::Options qo;
        qo.abs_tol = opt.tol;
        qo.max_subdivisions = 20000;
        const auto r =
            quad::integrate([&s, p](double t) { return std::pow(std::abs(s(t)), p); }, w->lo, w->hi, {}, qo);
        integral += r.value;
        err += r.abs_error + w->tail;
    }
    const double v = std::pow(integral, 1.0 / p);
    const double dv = integral > 0.0 ? v / (p * integral) * err : std::pow(err, 1.0 / p);
    return NormResult::finite_value(v, dv);
}

namespace detail {

inline DensitySegment clipped_positive(const DensitySegment& s, double lower, double upper)
{
    auto seg = std::make_shared<const DensitySegment>(s);
    Callable::Fn up, lo;
    if (!std::isfinite(upper)) up = [seg](double S) { return upper_tail(*seg, S); };
    if (!std::isfinite(lower)) lo = [seg](double S) { return lower_tail(*seg, S); };
    return DensitySegment::of(lower, upper,
                              Callable::make([seg](double t) { return std::max((*seg)(t), 0.0); }, true, up, lo));
}

} // namespace detail

/// Jordan decomposition h = h+ - h-, both parts positive measures. Segments
/// are cut at sign changes and keep their terms where positive; beyond a
/// 1e-15 mass horizon (or without one) the part is max(density, 0).
inline RadonMeasure positive_part(const RadonMeasure& h)
{
    std::vector<DiracAtom> atoms;
    for (const auto& a : h.atoms())
        if (a.weight > 0.0) atoms.push_back(a);
    std::vector<DensitySegment> segs;
    for (const auto& s : h.segments()) {
        const auto w = detail::integrable_window(s, 1e-15);
        if (!w || !s.closed_form()) {
            segs.push_back(detail::clipped_positive(s, s.lower, s.upper));
            continue;
        }
        if (w->lo > s.lower) segs.push_back(detail::clipped_positive(s, s.lower, w->lo));
        if (w->hi < s.upper) segs.push_back(detail::clipped_positive(s, w->hi, s.upper));
        std::vector<double> cuts{w->lo};
        for (double r : detail::sign_changes(s, w->lo, w->hi)) cuts.push_back(r);
        cuts.push_back(w->hi);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double a = cuts[i], b = cuts[i + 1];
            if (b > a && s(0.5 * (a + b)) > 0.0) segs.push_back({a, b, s.terms});
        }
    }
    return RadonMeasure::make(std::move(atoms), std::move(segs));
}

inline RadonMeasure negative_part(const RadonMeasure& h) { return positive_part(h.scaled(-1.0)); }

namespace detail {

using BreakpointFn = std::function<std::vector<double>(double, double)>;

/// int_lo^hi g(t) density(t) dt over part of one segment. Infinite ends are
/// cut at a horizon where g_sup * tail <= tol; throws NonIntegrableAction
/// when no such horizon can be certified.
template <class G>
Integral integrate_against(const DensitySegment& seg, G&& g, double g_sup, double lo, double hi,
                           const BreakpointFn& breakpoints, double tol)
{
    Integral out;
    lo = std::max(lo, seg.lower);
    hi = std::min(hi, seg.upper);
    if (!(hi > lo) || g_sup == 0.0) return out;
    const double tail_tol = std::max(1e-300, 1e-3 * tol / std::max(g_sup, 1e-300));
    if (!std::isfinite(hi)) {
        auto S = diverges_upper(seg) ? std::nullopt : upper_horizon(seg, tail_tol);
        if (!S) throw Error(Errc::NonIntegrableAction, "density tail towards +inf is not integrable");
        out.abs_error += g_sup * upper_tail(seg, std::max(*S, lo));
        hi = std::max(*S, lo);
    }
    if (!std::isfinite(lo)) {
        auto S = diverges_lower(seg) ? std::nullopt : lower_horizon(seg, tail_tol);
        if (!S) throw Error(Errc::NonIntegrableAction, "density tail towards -inf is not integrable");
        out.abs_error += g_sup * lower_tail(seg, std::min(*S, hi));
        lo = std::min(*S, hi);
    }
    if (!(hi > lo)) return out;
    std::vector<double> bps;
    if (breakpoints) bps = breakpoints(lo, hi);
    quad::Options opt;
    opt.abs_tol = tol;
    opt.rel_tol = 1e-12;
    opt.max_subdivisions = 20000;
    const auto r = quad::integrate([&](double t) { return g(t) * seg(t); }, lo, hi, bps, opt);
    out.value += r.value;
    out.abs_error += r.abs_error;
    return out;
}

} // namespace detail

struct ApplyOptions {
    double tol = 1e-10;
};

/// <h, phi> = sum_k a_k phi(t_k) + int phi(t) density(t) dt.
inline double apply(const RadonMeasure& h, const BoundedSignal& phi, const ApplyOptions& opt = {})
{
    double total = 0.0;
    for (const auto& a : h.atoms()) total += a.weight * phi(a.location);
    double lo = -kInf, hi = kInf;
    if (phi.support()) {
        lo = phi.support()->lower;
        hi = phi.support()->upper;
    }
    detail::BreakpointFn bps = [&phi](double a, double b) { return phi.jumps_in(a, b); };
    for (const auto& s : h.segments())
        total += detail::integrate_against(s, phi, phi.sup_bound(), lo, hi, bps, opt.tol).value;
    return total;
}

} // namespace rbibo
