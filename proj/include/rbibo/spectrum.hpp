#pragma once

// Frequency response of a bounded measure, the sup bound |h^(w)| <= ||h||_M and
// a Riemann-Lebesgue decay trend probe.

#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "rbibo/convolution.hpp"
#include "rbibo/measure.hpp"

namespace rbibo {

struct SpectrumOptions {
    double tol = 1e-11;
    /// Filon is used once omega exceeds filon_factor / (window length).
    double filon_factor = 10.0;
};

namespace detail {

inline cplx numeric_fourier(const DensityTerm& term, double lo, double hi, double omega, const SpectrumOptions& opt,
                            double& err)
{
    DensitySegment seg{lo, hi, {term}};
    auto w = integrable_window(seg, 1e-3 * opt.tol);
    if (!w) throw Error(Errc::DivergentMeasure, "frequency response of a segment without certified tails");
    err += w->tail;
    auto f = [&term](double t) { return value(term, t); };
    const double len = w->hi - w->lo;
    if (!(len > 0.0)) return 0.0;
    if (std::abs(omega) > opt.filon_factor / len) {
        const auto r = quad::filon(f, w->lo, w->hi, omega, opt.tol);
        err += r.abs_error;
        return r.value;
    }
    quad::Options qo;
    qo.abs_tol = opt.tol;
    qo.max_subdivisions = 20000;
    const auto re = quad::integrate([&](double t) { return f(t) * std::cos(omega * t); }, w->lo, w->hi, {}, qo);
    const auto im = quad::integrate([&](double t) { return -f(t) * std::sin(omega * t); }, w->lo, w->hi, {}, qo);
    err += re.abs_error + im.abs_error;
    return {re.value, im.value};
}

/// int_lo^hi e^{a s}(P cos + Q sin)(s) e^{-i omega t} dt in closed form.
inline bool exppoly_fourier(const ExpPoly& e, double lo, double hi, double omega, cplx& out, double& err)
{
    const auto r = complex_coeffs(e);
    std::vector<cplx> rc(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) rc[k] = std::conj(r[k]);
    const cplx c(e.rate, e.frequency);
    const cplx g1 = c - cplx(0.0, omega);
    const cplx g2 = std::conj(c) - cplx(0.0, omega);
    const double slo = lo - e.origin, shi = hi - e.origin;
    const auto a1 = poly_exp_antiderivative(r, g1, shi), b1 = poly_exp_antiderivative(r, g1, slo);
    const auto a2 = poly_exp_antiderivative(rc, g2, shi), b2 = poly_exp_antiderivative(rc, g2, slo);
    if (!a1.ok || !b1.ok || !a2.ok || !b2.ok) return false;
    const cplx val = 0.5 * std::exp(cplx(0.0, -omega * e.origin)) * ((a1.value - b1.value) + (a2.value - b2.value));
    const double e_est = 0.5 * (a1.error + b1.error + a2.error + b2.error);
    if (e_est > 1e-12 * (1.0 + std::abs(val))) return false;
    out = val;
    err += e_est;
    return true;
}

} // namespace detail

struct FrequencyValue {
    std::complex<double> value;
    double abs_error = 0.0;
};

/// h^(w) = sum_k a_k e^{-i w t_k} + int density(t) e^{-i w t} dt.
inline FrequencyValue frequency_response_detailed(const RadonMeasure& h, double omega,
                                                  const SpectrumOptions& opt = {})
{
    if (!detail::certified_bounded(h))
        throw Error(Errc::DivergentMeasure, "frequency response needs ||h||_M < inf");
    FrequencyValue out;
    for (const auto& a : h.atoms()) out.value += a.weight * std::exp(detail::cplx(0.0, -omega * a.location));
    for (const auto& s : h.segments()) {
        for (const auto& term : s.terms) {
            detail::cplx v;
            bool done = false;
            if (const auto* e = std::get_if<ExpPoly>(&term)) {
                done = detail::exppoly_fourier(*e, s.lower, s.upper, omega, v, out.abs_error);
            } else if (const auto* c = std::get_if<Constant>(&term)) {
                ExpPoly as_exp{{c->value}, {}, 0.0, 0.0, 0.0};
                done = detail::exppoly_fourier(as_exp, s.lower, s.upper, omega, v, out.abs_error);
            } else if (const auto* g = std::get_if<Gaussian>(&term)) {
                if (std::isinf(s.lower) && std::isinf(s.upper)) {
                    v = g->weight * std::exp(detail::cplx(0.0, -omega * g->center)) *
                        std::exp(-0.5 * omega * omega / (g->scale * g->scale));
                    out.abs_error += 4.0 * detail::kEps * std::abs(g->weight);
                    done = true;
                }
            }
            if (!done) v = detail::numeric_fourier(term, s.lower, s.upper, omega, opt, out.abs_error);
            out.value += v;
        }
    }
    return out;
}

inline std::complex<double> frequency_response(const RadonMeasure& h, double omega, const SpectrumOptions& opt = {})
{
    return frequency_response_detailed(h, omega, opt).value;
}

struct SpectrumSupCheck {
    double max_modulus = 0.0;
    double argmax = 0.0;
    double m_norm = 0.0;
    bool satisfied = false;
};

inline SpectrumSupCheck spectrum_sup_check(const RadonMeasure& h, const std::vector<double>& omega_grid,
                                           double tol = 1e-9, const SpectrumOptions& opt = {})
{
    const auto norm = m_norm(h);
    if (!norm.finite()) throw Error(Errc::DivergentMeasure, "spectrum check needs ||h||_M < inf");
    SpectrumSupCheck out;
    out.m_norm = norm.value;
    for (double w : omega_grid) {
        const double m = std::abs(frequency_response(h, w, opt));
        if (m > out.max_modulus || w == omega_grid.front()) {
            out.max_modulus = m;
            out.argmax = w;
        }
    }
    out.satisfied = out.max_modulus <= out.m_norm + tol;
    return out;
}

enum class DecayVerdict { DecayObserved, NoDecay };

inline const char* to_string(DecayVerdict v) { return v == DecayVerdict::DecayObserved ? "DecayObserved" : "NoDecay"; }

struct DecayReport {
    std::vector<std::pair<double, double>> points;         // (omega, |h^(omega)|)
    std::vector<std::pair<int, double>> decade_maxima;     // (floor(log10 omega), max modulus)
    DecayVerdict verdict = DecayVerdict::NoDecay;
};

/// Groups |h^| along the schedule by decade of omega. DecayObserved when at
/// least three decades are present and each decade maximum is strictly below
/// the previous one (or both sit below the noise floor).
inline DecayReport spectral_decay_trend(const RadonMeasure& h, const std::vector<double>& schedule,
                                        double noise_floor = 1e-14, const SpectrumOptions& opt = {})
{
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0) || (i > 0 && !(schedule[i] > schedule[i - 1])))
            throw Error(Errc::InvalidArgument, "frequency schedule must be positive and strictly increasing");
    }
    DecayReport rep;
    std::map<int, double> maxima;
    for (double w : schedule) {
        const double m = std::abs(frequency_response(h, w, opt));
        rep.points.emplace_back(w, m);
        const int decade = static_cast<int>(std::floor(std::log10(w) + 1e-12));
        auto [it, fresh] = maxima.emplace(decade, m);
        if (!fresh) it->second = std::max(it->second, m);
    }
    rep.decade_maxima.assign(maxima.begin(), maxima.end());
    bool decreasing = rep.decade_maxima.size() >= 3;
    for (std::size_t i = 1; decreasing && i < rep.decade_maxima.size(); ++i) {
        const double prev = rep.decade_maxima[i - 1].second, cur = rep.decade_maxima[i].second;
        decreasing = cur < prev || (prev <= noise_floor && cur <= noise_floor);
    }
    rep.verdict = decreasing ? DecayVerdict::DecayObserved : DecayVerdict::NoDecay;
    return rep;
}

/// Decay-asserting variant restricted to atom-free measures.
inline DecayReport riemann_lebesgue_probe(const RadonMeasure& h, const std::vector<double>& schedule,
                                          double noise_floor = 1e-14, const SpectrumOptions& opt = {})
{
    if (h.has_atoms()) throw Error(Errc::HasAtomicPart, "Riemann-Lebesgue decay holds for L1 densities only");
    return spectral_decay_trend(h, schedule, noise_floor, opt);
}

} // namespace rbibo
