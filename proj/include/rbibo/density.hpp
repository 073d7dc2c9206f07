#pragma once

// Density forms that make up the absolutely continuous part of a measure,
// with their closed-form antiderivatives, tail bounds and the rigid motions
// (reflection, shift, scaling) needed by the measure algebra.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <variant>
#include <vector>

#include "rbibo/error.hpp"

namespace rbibo {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Constant value on the segment.
struct Constant {
    double value = 0.0;
    bool operator==(const Constant&) const = default;
};

/// e^{a s} (P(s) cos(w s) + Q(s) sin(w s)) with s = t - origin.
/// This is the real part of (P(s) - i Q(s)) e^{(a + i w) s}.
struct ExpPoly {
    std::vector<double> cos_coeffs{1.0}; // P, ascending powers of s
    std::vector<double> sin_coeffs;      // Q, ascending powers of s
    double rate = 0.0;
    double frequency = 0.0;
    double origin = 0.0;
    bool operator==(const ExpPoly&) const = default;

    int degree() const
    {
        return static_cast<int>(std::max(cos_coeffs.size(), sin_coeffs.size())) - 1;
    }
};

/// weight * scale / sqrt(2 pi) * exp(-(scale (t - center))^2 / 2). Unit mass
/// for weight 1, whatever the scale.
struct Gaussian {
    double weight = 1.0;
    double scale = 1.0;
    double center = 0.0;
    bool operator==(const Gaussian&) const = default;
};

/// Arbitrary locally integrable function. Tail bounds are optional; without
/// them nothing is known about integrability at infinity.
struct Callable {
    using Fn = std::function<double(double)>;

    std::shared_ptr<const Fn> evaluator;
    bool continuous = true;
    std::shared_ptr<const Fn> upper_tail; // S -> bound on int_S^inf |f|
    std::shared_ptr<const Fn> lower_tail; // S -> bound on int_-inf^S |f|

    static Callable make(Fn f, bool continuous = true, Fn upper_tail = {}, Fn lower_tail = {})
    {
        Callable c;
        c.evaluator = std::make_shared<const Fn>(std::move(f));
        c.continuous = continuous;
        if (upper_tail) c.upper_tail = std::make_shared<const Fn>(std::move(upper_tail));
        if (lower_tail) c.lower_tail = std::make_shared<const Fn>(std::move(lower_tail));
        return c;
    }

    // Identity, not extensional equality.
    bool operator==(const Callable& o) const
    {
        return evaluator == o.evaluator && continuous == o.continuous &&
               upper_tail == o.upper_tail && lower_tail == o.lower_tail;
    }
};

using DensityTerm = std::variant<Constant, ExpPoly, Gaussian, Callable>;

namespace detail {

using cplx = std::complex<double>;
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

inline double horner(const std::vector<double>& c, double s)
{
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
    return v;
}

inline cplx horner(const std::vector<cplx>& c, double s)
{
    cplx v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
    return v;
}

inline std::vector<cplx> derivative(const std::vector<cplx>& c)
{
    std::vector<cplx> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * double(k));
    return d;
}

inline void trim(std::vector<double>& c)
{
    while (!c.empty() && c.back() == 0.0) c.pop_back();
}

/// P - i Q as complex coefficients.
inline std::vector<cplx> complex_coeffs(const ExpPoly& e)
{
    const std::size_t n = std::max(e.cos_coeffs.size(), e.sin_coeffs.size());
    std::vector<cplx> r(n, 0.0);
    for (std::size_t k = 0; k < e.cos_coeffs.size(); ++k) r[k] += e.cos_coeffs[k];
    for (std::size_t k = 0; k < e.sin_coeffs.size(); ++k) r[k] -= cplx(0.0, e.sin_coeffs[k]);
    return r;
}

struct ComplexAnti {
    cplx value;
    double error = 0.0;
    bool ok = true;
};

/// Antiderivative of R(s) e^{g s} at s, R complex polynomial:
/// e^{g s} sum_i (-1)^i R^{(i)}(s) / g^{i+1}, or the polynomial primitive
/// when g = 0. At s = +-inf the limit is returned when it is zero.
inline ComplexAnti poly_exp_antiderivative(const std::vector<cplx>& r, cplx g, double s)
{
    ComplexAnti out;
    if (std::isinf(s)) {
        const bool decays = (s > 0 && g.real() < 0.0) || (s < 0 && g.real() > 0.0);
        bool all_zero = std::all_of(r.begin(), r.end(), [](cplx c) { return c == 0.0; });
        if (decays || all_zero) return out;
        out.ok = false;
        return out;
    }
    if (g == 0.0) {
        double mag = 0.0;
        double sp = s;
        for (std::size_t k = 0; k < r.size(); ++k) {
            const cplx term = r[k] * sp / double(k + 1);
            out.value += term;
            mag += std::abs(term);
            sp *= s;
        }
        out.error = 4.0 * kEps * mag;
        return out;
    }
    cplx sum = 0.0;
    double mag = 0.0;
    std::vector<cplx> d = r;
    cplx gp = g;
    double sign = 1.0;
    while (!d.empty()) {
        const cplx term = sign * horner(d, s) / gp;
        sum += term;
        mag += std::abs(term);
        d = derivative(d);
        gp *= g;
        sign = -sign;
    }
    const double growth = std::exp(g.real() * s);
    const cplx e = std::exp(g * s);
    out.value = e * sum;
    out.error = 8.0 * kEps * growth * mag * double(r.size() + 1);
    if (!std::isfinite(out.value.real()) || !std::isfinite(out.value.imag())) out.ok = false;
    return out;
}

inline double value(const DensityTerm& term, double t)
{
    return std::visit(
        [t](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return f.value;
            } else if constexpr (std::is_same_v<T, ExpPoly>) {
                const double s = t - f.origin;
                double poly = horner(f.cos_coeffs, s);
                if (f.frequency != 0.0) {
                    poly = poly * std::cos(f.frequency * s) + horner(f.sin_coeffs, s) * std::sin(f.frequency * s);
                }
                if (poly == 0.0) return 0.0;
                return std::exp(f.rate * s) * poly;
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                const double x = f.scale * (t - f.center);
                return f.weight * f.scale / std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * x * x);
            } else {
                return (*f.evaluator)(t);
            }
        },
        term);
}

struct RealAnti {
    double value = 0.0;
    double error = 0.0;
    bool ok = true;
};

/// Real antiderivative at finite t; ok=false for Callable terms.
inline RealAnti antiderivative(const DensityTerm& term, double t)
{
    return std::visit(
        [t](const auto& f) -> RealAnti {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return {f.value * t, kEps * std::abs(f.value * t), true};
            } else if constexpr (std::is_same_v<T, ExpPoly>) {
                const auto a = poly_exp_antiderivative(complex_coeffs(f), cplx(f.rate, f.frequency), t - f.origin);
                return {a.value.real(), a.error, a.ok};
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                const double x = f.scale * (t - f.center) / std::numbers::sqrt2;
                return {0.5 * f.weight * std::erf(x), 2.0 * kEps * std::abs(f.weight), true};
            } else {
                return {0.0, 0.0, false};
            }
        },
        term);
}

inline ExpPoly reflect(const ExpPoly& e)
{
    ExpPoly r = e;
    r.rate = -e.rate;
    r.origin = -e.origin;
    for (std::size_t k = 0; k < r.cos_coeffs.size(); ++k)
        if (k % 2 == 1) r.cos_coeffs[k] = -r.cos_coeffs[k];
    for (std::size_t k = 0; k < r.sin_coeffs.size(); ++k)
        if (k % 2 == 0) r.sin_coeffs[k] = -r.sin_coeffs[k];
    return r;
}

/// t -> term(-t)
inline DensityTerm reflect(const DensityTerm& term)
{
    return std::visit(
        [](const auto& f) -> DensityTerm {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return f;
            } else if constexpr (std::is_same_v<T, ExpPoly>) {
                return reflect(f);
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return Gaussian{f.weight, f.scale, -f.center};
            } else {
                auto ev = f.evaluator;
                Callable::Fn up, lo;
                if (f.lower_tail) {
                    auto lt = f.lower_tail;
                    up = [lt](double s) { return (*lt)(-s); };
                }
                if (f.upper_tail) {
                    auto ut = f.upper_tail;
                    lo = [ut](double s) { return (*ut)(-s); };
                }
                return Callable::make([ev](double t) { return (*ev)(-t); }, f.continuous, up, lo);
            }
        },
        term);
}

/// t -> term(t - t0)
inline DensityTerm shift(const DensityTerm& term, double t0)
{
    return std::visit(
        [t0](const auto& f) -> DensityTerm {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return f;
            } else if constexpr (std::is_same_v<T, ExpPoly>) {
                ExpPoly r = f;
                r.origin += t0;
                return r;
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return Gaussian{f.weight, f.scale, f.center + t0};
            } else {
                auto ev = f.evaluator;
                Callable::Fn up, lo;
                if (f.upper_tail) {
                    auto ut = f.upper_tail;
                    up = [ut, t0](double s) { return (*ut)(s - t0); };
                }
                if (f.lower_tail) {
                    auto lt = f.lower_tail;
                    lo = [lt, t0](double s) { return (*lt)(s - t0); };
                }
                return Callable::make([ev, t0](double t) { return (*ev)(t - t0); }, f.continuous, up, lo);
            }
        },
        term);
}

inline DensityTerm scale(const DensityTerm& term, double c)
{
    return std::visit(
        [c](const auto& f) -> DensityTerm {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return Constant{c * f.value};
            } else if constexpr (std::is_same_v<T, ExpPoly>) {
                ExpPoly r = f;
                for (double& v : r.cos_coeffs) v *= c;
                for (double& v : r.sin_coeffs) v *= c;
                return r;
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return Gaussian{c * f.weight, f.scale, f.center};
            } else {
                auto ev = f.evaluator;
                const double ac = std::abs(c);
                Callable::Fn up, lo;
                if (f.upper_tail) {
                    auto ut = f.upper_tail;
                    up = [ut, ac](double s) { return ac * (*ut)(s); };
                }
                if (f.lower_tail) {
                    auto lt = f.lower_tail;
                    lo = [lt, ac](double s) { return ac * (*lt)(s); };
                }
                return Callable::make([ev, c](double t) { return c * (*ev)(t); }, f.continuous, up, lo);
            }
        },
        term);
}

/// int_{s0}^inf s^k e^{a s} ds for a < 0, s0 >= 0.
inline double moment_tail(int k, double a, double s0)
{
    double sum = 0.0;
    double fact = 1.0; // k!/(k-i)!
    for (int i = 0; i <= k; ++i) {
        sum += fact * std::pow(s0, k - i) / std::pow(-a, i + 1);
        fact *= double(k - i);
    }
    return std::exp(a * s0) * sum;
}

/// Bound on int_S^inf |term|. +inf when no finite bound is available.
inline double upper_tail_bound(const DensityTerm& term, double S)
{
    return std::visit(
        [S](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return f.value == 0.0 ? 0.0 : kInf;
            } else if constexpr (std::is_same_v<T, ExpPoly>) {
                if (f.rate >= 0.0) return kInf;
                const double s0 = S - f.origin;
                if (s0 < 0.0) return kInf;
                double total = 0.0;
                const std::size_t n = std::max(f.cos_coeffs.size(), f.sin_coeffs.size());
                for (std::size_t k = 0; k < n; ++k) {
                    double m = 0.0;
                    if (k < f.cos_coeffs.size()) m += std::abs(f.cos_coeffs[k]);
                    if (k < f.sin_coeffs.size()) m += std::abs(f.sin_coeffs[k]);
                    if (m != 0.0) total += m * moment_tail(int(k), f.rate, s0);
                }
                return total;
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                return 0.5 * std::abs(f.weight) * std::erfc(f.scale * (S - f.center) / std::numbers::sqrt2);
            } else {
                return f.upper_tail ? (*f.upper_tail)(S) : kInf;
            }
        },
        term);
}

/// Bound on int_-inf^S |term|.
inline double lower_tail_bound(const DensityTerm& term, double S)
{
    if (std::holds_alternative<Callable>(term)) {
        const auto& f = std::get<Callable>(term);
        return f.lower_tail ? (*f.lower_tail)(S) : kInf;
    }
    return upper_tail_bound(reflect(term), -S);
}

/// Pointwise envelope of |term| valid for t >= S, nonincreasing there when
/// S is past the term's turning point. +inf when not available.
inline double upper_envelope(const DensityTerm& term, double S)
{
    return std::visit(
        [S](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return std::abs(f.value);
            } else if constexpr (std::is_same_v<T, ExpPoly>) {
                if (f.rate >= 0.0) return kInf;
                const double s0 = S - f.origin;
                if (s0 < std::max(0.0, f.degree() / -f.rate)) return kInf;
                double m = 0.0;
                for (std::size_t k = 0; k < f.cos_coeffs.size(); ++k) m += std::abs(f.cos_coeffs[k]) * std::pow(s0, double(k));
                for (std::size_t k = 0; k < f.sin_coeffs.size(); ++k) m += std::abs(f.sin_coeffs[k]) * std::pow(s0, double(k));
                return std::exp(f.rate * s0) * m;
            } else if constexpr (std::is_same_v<T, Gaussian>) {
                if (S < f.center) return kInf;
                const double x = f.scale * (S - f.center);
                return std::abs(f.weight) * f.scale / std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * x * x);
            } else {
                return kInf;
            }
        },
        term);
}

/// Point past which the analytic tail estimates of the term are valid.
inline double upper_tail_start(const DensityTerm& term)
{
    if (const auto* e = std::get_if<ExpPoly>(&term)) {
        if (e->rate < 0.0) return e->origin + std::max(0.0, e->degree() / -e->rate);
        return e->origin;
    }
    if (const auto* g = std::get_if<Gaussian>(&term)) return g->center;
    return -kInf;
}

/// Characteristic length below which the term can change sign.
inline double oscillation_scale(const DensityTerm& term)
{
    if (const auto* e = std::get_if<ExpPoly>(&term)) {
        if (e->frequency != 0.0) return std::numbers::pi / (6.0 * std::abs(e->frequency));
    }
    if (const auto* g = std::get_if<Gaussian>(&term)) return 0.25 / g->scale;
    return kInf;
}

/// Rough natural length scale used to size tail horizons.
inline double decay_scale(const DensityTerm& term)
{
    if (const auto* e = std::get_if<ExpPoly>(&term)) {
        if (e->rate != 0.0) return 1.0 / std::abs(e->rate);
    }
    if (const auto* g = std::get_if<Gaussian>(&term)) return 1.0 / g->scale;
    return 1.0;
}

/// Analytic divergence of int |term| towards +inf (a closed form that does
/// not decay). Callables never report analytic divergence.
inline bool diverges_upper(const DensityTerm& term)
{
    if (const auto* c = std::get_if<Constant>(&term)) return c->value != 0.0;
    if (const auto* e = std::get_if<ExpPoly>(&term)) return e->rate >= 0.0;
    return false;
}

inline bool diverges_lower(const DensityTerm& term)
{
    if (std::holds_alternative<Callable>(term)) return false;
    return diverges_upper(reflect(term));
}

} // namespace detail
} // namespace rbibo
