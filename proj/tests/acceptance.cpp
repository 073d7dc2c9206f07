// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "bounds.hpp"
#include "cli_cases.hpp"
#include "corpus.hpp"
#include "fuzz.hpp"
#include "rbibo/rbibo.hpp"

using namespace rbibo;

namespace {

// Reference constant for ||phi_n - phi_2n||_1, fixed offline:
// 4 (Phi(2 t*) - Phi(t*)), t* = sqrt(2 ln 2 / 3).
constexpr double kGaussGap = 0.64534913766953733;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Records the first failure only; later checks keep running.
struct Checker {
    Outcome out;
    void expect(bool ok, const std::string& what)
    {
        if (!ok && out.pass) {
            out.pass = false;
            out.detail = what;
        }
    }
};

std::string fmt(double v)
{
    char b[40];
    std::snprintf(b, sizeof b, "%.10g", v);
    return b;
}

std::vector<std::string> read_lines(const std::string& path)
{
    std::ifstream in(path);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) out.push_back(line);
    return out;
}

Outcome identity_and_shift()
{
    Checker c;
    for (double t0 : {0.0, -3.0, 7.0}) {
        const auto h = dsl::compile("delta(" + fmt(t0) + ")");
        const auto r = classify(h);
        c.expect(r.verdict == Verdict::Stable, "delta(" + fmt(t0) + ") not Stable");
        c.expect(r.m_norm.value == 1.0, "m_norm of delta(" + fmt(t0) + ") = " + fmt(r.m_norm.value));
        for (const auto& f : {sine_signal(1.0, 2.3, 0.4), step_signal(0.5), rect_signal(-1, 2, 1.5)}) {
            const auto out = convolve_grid(h, f, {-10, 10, 0.125});
            for (std::size_t i = 0; i < out.t.size(); ++i) {
                const double want = f(out.t[i] - t0);
                c.expect(std::abs(out.value[i] - want) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(want),
                         "convolve mismatch at t=" + fmt(out.t[i]));
            }
        }
        const auto run = cli::run("analyze -e 'delta(" + fmt(t0) + ")'");
        c.expect(run.status == 0 && run.out.find("\"Stable\"") != std::string::npos, "cli analyze not Stable");
    }
    return c.out;
}

Outcome comb_norm()
{
    Checker c;
    const auto n = m_norm(dsl::compile("comb([1,-2,0.5],1)"));
    c.expect(n.kind == NormKind::Finite && n.value == 3.5, "m_norm = " + fmt(n.value));
    return c.out;
}

Outcome l1_equals_m()
{
    Checker c;
    double worst = 0;
    for (const auto& f : atom_free_corpus()) {
        const auto h = dsl::compile(f.source);
        const double l = l1_norm(h).value, m = m_norm(h).value;
        worst = std::max(worst, std::abs(l - m));
        c.expect(std::abs(l - m) <= 1e-8, std::string(f.source) + ": |l1 - m| = " + fmt(std::abs(l - m)));
        c.expect(std::abs(m - f.norm) <= 1e-8, std::string(f.source) + ": m differs from reference");
    }
    if (c.out.pass) c.out.detail = "max |l1 - m| = " + fmt(worst);
    return c.out;
}

Outcome saturation()
{
    Checker c;
    std::vector<std::string> sources;
    for (const auto& f : atom_free_corpus()) sources.push_back(f.source);
    sources.push_back("delta(0) + expstep(-1)");
    double worst = 0;
    for (const auto& s : sources) {
        const auto r = probe_operator_norm(dsl::compile(s), 100, kMaxDualRefinement);
        const double allowed = std::max(1e-3, 0.005 * r.upper_bound);
        worst = std::max(worst, r.gap / allowed);
        c.expect(r.gap <= allowed, s + ": gap " + fmt(r.gap));
    }
    if (c.out.pass) c.out.detail = "worst gap / allowance = " + fmt(worst);
    return c.out;
}

Outcome witnesses()
{
    Checker c;
    const auto step = instability_witness(dsl::compile("expstep(0)"), {1, 2, 3, 10, 100});
    for (const auto& p : step.points())
        c.expect(std::abs(p.value - p.horizon) <= 1e-6 * p.horizon, "expstep(0) at T=" + fmt(p.horizon));
    const auto grow = instability_witness(dsl::compile("expstep(1)"), {1, 2, 3});
    for (const auto& p : grow.points()) {
        const double want = std::expm1(p.horizon);
        c.expect(std::abs(p.value - want) <= 1e-6 * want, "expstep(1) at T=" + fmt(p.horizon));
    }
    return c.out;
}

Outcome bound_suite()
{
    Checker c;
    std::mt19937_64 rng(20261015);
    double worst = kInf;
    for (int i = 0; i < 200; ++i) {
        const auto src = bounds::random_filter(rng);
        const auto in = bounds::random_input(rng);
        const double t = bounds::uniform(rng, -3, 3);
        const auto s = bounds::slacks(dsl::compile(src), in.f, t);
        worst = std::min(worst, s.min());
        c.expect(s.min() >= -1e-6, src + " / " + in.description + " t=" + fmt(t) + " slack " + fmt(s.min()));
    }
    if (c.out.pass) c.out.detail = "min slack = " + fmt(worst);
    return c.out;
}

Outcome adjoint()
{
    Checker c;
    std::mt19937_64 rng(4242);
    double worst = 0;
    for (int i = 0; i < 50; ++i) {
        const auto src = bounds::random_filter(rng);
        const auto f = bounds::random_input(rng), g = bounds::random_input(rng);
        const double r = adjoint_identity_residual(dsl::compile(src), f.f, g.f);
        worst = std::max(worst, r);
        c.expect(r <= 1e-6, src + ": residual " + fmt(r));
    }
    if (c.out.pass) c.out.detail = "max residual = " + fmt(worst);
    return c.out;
}

Outcome continuity()
{
    Checker c;
    const char* filters[] = {"rect(0,1)",       "expstep(-1)",          "gauss(2)",
                             "expstep(-0.5,3)", "rect(0,1) - rect(1,2)", "expstep(-1,0,[0,1])",
                             "gauss(1) - gauss(2)", "2*rect(-1,3)",     "expstep(0)",
                             "expstep(1,2)"};
    int divergent = 0;
    for (const char* s : filters) {
        const auto h = dsl::compile(s);
        divergent += m_norm(h).kind == NormKind::Divergent;
        for (const auto& f : {rect_signal(-1, 1), truncate(sign_pattern_signal(1, 3), 2)}) {
            for (double t0 : {0.0, 1.0, 2.5}) {
                const auto r = continuity_probe(h, f, t0);
                c.expect(r.verdict == ContinuityVerdict::ContinuousAt,
                         std::string(s) + " at " + fmt(t0) + ": " + to_string(r.verdict));
            }
        }
    }
    c.expect(divergent == 2, "expected two divergent filters, got " + std::to_string(divergent));
    const auto d = continuity_probe(RadonMeasure::dirac(0), step_signal(0), 0.0);
    c.expect(d.verdict == ContinuityVerdict::DiscontinuityDetected, std::string("delta: ") + to_string(d.verdict));
    return c.out;
}

Outcome gaussian_gap()
{
    Checker c;
    double worst = 0;
    for (double n : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        const auto phi = dsl::compile("gauss(" + fmt(n) + ")");
        const auto gap = l1_norm(phi - dsl::compile("gauss(" + fmt(2 * n) + ")")).value;
        worst = std::max(worst, std::abs(gap - kGaussGap));
        c.expect(std::abs(gap - kGaussGap) <= 1e-6 && gap > 0.3, "n=" + fmt(n) + ": gap " + fmt(gap));
        const double unit = l1_norm(phi).value;
        c.expect(std::abs(unit - 1.0) <= 1e-9, "n=" + fmt(n) + ": ||phi_n|| = " + fmt(unit));
    }
    if (c.out.pass) c.out.detail = "max |gap - " + fmt(kGaussGap) + "| = " + fmt(worst);
    return c.out;
}

Outcome spectrum()
{
    Checker c;
    std::vector<double> grid;
    for (int i = 0; i < 1000; ++i) grid.push_back(-100.0 + 200.0 * i / 999.0);
    std::vector<double> decades;
    for (int i = 0; i < 60; ++i) decades.push_back(10.0 * std::pow(10.0, i / 20.0));
    double worst_dual = 0;
    for (const auto& f : atom_free_corpus()) {
        const auto h = dsl::compile(f.source);
        const auto sup = spectrum_sup_check(h, grid, 1e-6);
        c.expect(sup.satisfied, std::string(f.source) + ": max |h^| " + fmt(sup.max_modulus));
        const auto rl = riemann_lebesgue_probe(h, decades);
        c.expect(rl.verdict == DecayVerdict::DecayObserved, std::string(f.source) + ": no decay");
        const double m = m_norm(h).value;
        const double d = dual_m_norm_estimate(h, kMaxDualRefinement);
        worst_dual = std::max(worst_dual, (m - d) / m);
        c.expect(d >= 0.98 * m && d <= m + 1e-9, std::string(f.source) + ": dual " + fmt(d));
    }
    for (double w : grid) {
        const auto v = frequency_response(RadonMeasure::dirac(0), w);
        c.expect(v == std::complex<double>(1.0, 0.0), "delta^ != 1 at " + fmt(w));
    }
    if (c.out.pass) c.out.detail = "worst dual shortfall = " + fmt(100 * worst_dual) + "%";
    return c.out;
}

Outcome parser()
{
    Checker c;
    std::mt19937_64 rng(20261016);
    int parsed = 0;
    for (int i = 0; i < 100000; ++i) {
        const std::string s = fuzz::input(rng, i);
        try {
            (void)dsl::lower(dsl::parse(s));
            ++parsed;
        } catch (const Error&) {
        }
    }
    const auto src = read_lines(std::string(RBIBO_GOLDEN_DIR) + "/dsl_corpus.txt");
    const auto ser = read_lines(std::string(RBIBO_GOLDEN_DIR) + "/dsl_corpus.serialized.txt");
    c.expect(src.size() == 30 && ser.size() == 30, "golden corpus must hold 30 lines");
    for (std::size_t i = 0; i < std::min(src.size(), ser.size()); ++i) {
        const auto h = dsl::compile(src[i]);
        const auto text = dsl::to_dsl(h);
        c.expect(text == ser[i], "serialization of " + src[i]);
        c.expect(dsl::compile(text) == h && dsl::to_dsl(dsl::compile(text)) == text, "round trip of " + src[i]);
    }
    for (const auto& k : cli::golden_cases()) {
        const auto why = cli::check(k);
        c.expect(why.empty(), why);
    }
    if (c.out.pass) c.out.detail = std::to_string(parsed) + " of 100000 fuzz inputs parsed";
    return c.out;
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"identity and shift", identity_and_shift},
        {"digital filter norm", comb_norm},
        {"L1 norm equals M norm on densities", l1_equals_m},
        {"operator norm saturation", saturation},
        {"instability witnesses", witnesses},
        {"convolution bound suite", bound_suite},
        {"adjoint identity", adjoint},
        {"continuity of density outputs", continuity},
        {"gaussian approximate identity gap", gaussian_gap},
        {"spectrum", spectrum},
        {"parser, round trip and CLI goldens", parser},
    };
    int failures = 0, index = 0;
    for (const auto& [name, fn] : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::printf("%s %2d %s (%.1fs)%s%s\n", o.pass ? "PASS" : "FAIL", index, name, secs,
                    o.detail.empty() ? "" : ": ", o.detail.c_str());
        std::fflush(stdout);
    }
    return failures ? 1 : 0;
}
