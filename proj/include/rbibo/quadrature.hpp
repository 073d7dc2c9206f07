#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature on finite intervals and a
// composite Filon rule for oscillatory Fourier integrals.

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <span>
#include <vector>

namespace rbibo::quad {

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    bool converged = true;
    int evaluations = 0;
};

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_subdivisions = 4000;
};

namespace detail {

// Kronrod abscissae (positive half), Kronrod weights, Gauss weights on the
// even-indexed abscissae.
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * wgk[7];
    double g = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const double s = f(c - dx) + f(c + dx);
        k += wgk[j] * s;
        if (j % 2 == 1) g += wg[j / 2] * s;
    }
    return {a, b, k * h, std::abs((k - g) * h)};
}

} // namespace detail

/// Integrates f over [a, b]. Interior breakpoints (any order, out-of-range
/// values ignored) seed the initial partition so that known kinks and jumps
/// sit on panel edges. Panels with the largest error estimate are bisected
/// until the summed estimate meets max(abs_tol, rel_tol*|value|).
template <class F>
Result integrate(F&& f, double a, double b, std::span<const double> breakpoints = {},
                 const Options& opt = {})
{
    Result out;
    if (!(b > a)) {
        if (a == b) return out;
        Result r = integrate(f, b, a, breakpoints, opt);
        r.value = -r.value;
        return r;
    }

    std::vector<double> edges{a};
    {
        std::vector<double> inner;
        for (double p : breakpoints)
            if (p > a && p < b) inner.push_back(p);
        std::sort(inner.begin(), inner.end());
        inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
        edges.insert(edges.end(), inner.begin(), inner.end());
        edges.push_back(b);
    }

    std::priority_queue<detail::Panel> heap;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i + 1] > edges[i])) continue;
        auto p = detail::gk15(f, edges[i], edges[i + 1]);
        out.evaluations += 15;
        total += p.value;
        err += p.error;
        heap.push(p);
    }

    const int budget = opt.max_subdivisions + static_cast<int>(edges.size());
    int splits = 0;
    while (!heap.empty() && err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (splits >= budget) {
            out.converged = false;
            break;
        }
        const detail::Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Panel no longer representable; its error is the floor.
            out.converged = false;
            break;
        }
        heap.pop();
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++splits;
    }

    // Re-sum from the panels to drop accumulated update roundoff.
    total = 0.0;
    err = 0.0;
    std::vector<detail::Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const detail::Panel& l, const detail::Panel& r) { return l.a < r.a; });
    for (const auto& p : panels) {
        total += p.value;
        err += p.error;
    }
    out.value = total;
    out.abs_error = err + 1e-15 * std::abs(total);
    return out;
}

struct ComplexResult {
    std::complex<double> value;
    double abs_error = 0.0;
    bool converged = true;
};

namespace detail {

// Moments m_k = int_{-1}^{1} x^k e^{-i theta x} dx for k = 0, 1, 2.
inline void filon_moments(double theta, std::complex<double> m[3])
{
    using C = std::complex<double>;
    if (std::abs(theta) < 0.25) {
        // Power series in theta; 14 terms is well past double precision here.
        C s0 = 0, s1 = 0, s2 = 0;
        C term = 1.0; // (-i theta)^n / n!
        for (int n = 0; n < 16; ++n) {
            const int k0 = n, k1 = n + 1, k2 = n + 2;
            auto mom = [](int k) { return (k % 2 == 0) ? 2.0 / (k + 1) : 0.0; };
            s0 += term * mom(k0);
            s1 += term * mom(k1);
            s2 += term * mom(k2);
            term *= C(0.0, -theta) / double(n + 1);
        }
        m[0] = s0;
        m[1] = s1;
        m[2] = s2;
        return;
    }
    const double s = std::sin(theta), c = std::cos(theta);
    const double t2 = theta * theta;
    m[0] = 2.0 * s / theta;
    m[1] = C(0.0, 2.0 * (theta * c - s) / t2);
    m[2] = 2.0 * s / theta + 4.0 * c / t2 - 4.0 * s / (t2 * theta);
}

template <class F>
std::complex<double> filon_composite(F& g, double a, double b, double omega, int panels)
{
    using C = std::complex<double>;
    const double h = (b - a) / (2.0 * panels);
    C m[3];
    filon_moments(omega * h, m);
    C sum = 0.0;
    double f_left = g(a);
    for (int p = 0; p < panels; ++p) {
        const double x0 = a + 2.0 * h * p;
        const double xc = x0 + h;
        const double f_mid = g(xc);
        const double f_right = g(x0 + 2.0 * h);
        // Quadratic through (-1, f_left), (0, f_mid), (1, f_right) in local x.
        const double c0 = f_mid;
        const double c1 = 0.5 * (f_right - f_left);
        const double c2 = 0.5 * (f_right + f_left) - f_mid;
        const C local = c0 * m[0] + c1 * m[1] + c2 * m[2];
        sum += h * std::exp(C(0.0, -omega * xc)) * local;
        f_left = f_right;
    }
    return sum;
}

} // namespace detail

/// Composite Filon-Simpson rule for int_a^b g(t) e^{-i omega t} dt. The panel
/// count doubles until two successive estimates agree within abs_tol.
template <class F>
ComplexResult filon(F&& g, double a, double b, double omega, double abs_tol = 1e-10,
                    int max_panels = 1 << 20)
{
    ComplexResult out;
    if (!(b > a)) return out;
    int panels = 8;
    auto prev = detail::filon_composite(g, a, b, omega, panels);
    for (;;) {
        panels *= 2;
        auto cur = detail::filon_composite(g, a, b, omega, panels);
        const double diff = std::abs(cur - prev);
        prev = cur;
        if (diff <= abs_tol) {
            out.value = cur;
            out.abs_error = diff;
            return out;
        }
        if (panels >= max_panels) {
            out.value = cur;
            out.abs_error = diff;
            out.converged = false;
            return out;
        }
    }
}

} // namespace rbibo::quad
