// radon-bibo: command-line front end.
//
// Exit codes: 0 success / Stable, 1 error, 2 Unstable (analyze) or divergent
// filter (spectrum, probe-norm), 3 Indeterminate (analyze).

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rbibo/rbibo.hpp"

using namespace rbibo;

namespace {

struct Common {
    std::string expr;
    std::string file;
    std::string measure;
    std::string out;
    double tol = 1e-10;
    double cap = 1e12;
    int refinement = 8;
    bool json = false;
    bool csv = false;
};

void add_common(CLI::App* sub, Common& c)
{
    auto* src = sub->add_option_group("source");
    src->add_option("-e,--expr", c.expr, "inline filter expression");
    src->add_option("-f,--file", c.file, "file holding a filter expression");
    src->add_option("-m,--measure", c.measure, "measure JSON document");
    src->require_option(1);
    sub->add_option("--tol", c.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--cap", c.cap, "growth value treated as divergence")->check(CLI::PositiveNumber);
    sub->add_option("--refinement", c.refinement, "probe refinement level")->check(CLI::Range(1, kMaxDualRefinement));
    sub->add_flag("--json", c.json, "emit JSON");
    sub->add_flag("--csv", c.csv, "emit CSV");
    sub->add_option("--out", c.out, "write output to this path instead of stdout");
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::InvalidArgument, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string source_text(const Common& c)
{
    if (!c.expr.empty()) return c.expr;
    if (!c.file.empty()) return slurp(c.file);
    return {};
}

RadonMeasure load(const Common& c)
{
    if (!c.measure.empty()) return io::measure_from_text(slurp(c.measure));
    return dsl::compile(source_text(c));
}

NormOptions norm_options(const Common& c)
{
    NormOptions o;
    o.divergence_cap = c.cap;
    return o;
}

void emit(const Common& c, const std::string& text)
{
    if (c.out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream o(c.out, std::ios::binary);
    if (!o) throw Error(Errc::InvalidArgument, "cannot write " + c.out);
    o << text;
}

int cmd_analyze(const Common& c)
{
    const auto h = load(c);
    StabilityOptions opt;
    opt.norm = norm_options(c);
    opt.refinement = c.refinement;
    opt.tol = c.tol;
    const auto r = classify(h, opt);
    if (c.csv) {
        std::vector<std::vector<double>> rows;
        if (r.witness)
            for (const auto& p : r.witness->points()) rows.push_back({p.horizon, p.value});
        emit(c, io::csv({"T", "value"}, rows));
    } else {
        emit(c, io::dump(io::report_to_json(r, source_text(c))));
    }
    switch (r.verdict) {
    case Verdict::Stable: return 0;
    case Verdict::Unstable: return 2;
    case Verdict::Indeterminate: return 3;
    }
    return 1;
}

struct ConvolveArgs {
    std::string signal;
    double from = 0.0;
    double to = 1.0;
    double step = 0.01;
};

int cmd_convolve(const Common& c, const ConvolveArgs& a)
{
    const auto h = load(c);
    const std::string text = !a.signal.empty() && a.signal.front() == '@' ? slurp(a.signal.substr(1)) : a.signal;
    const auto f = io::signal_from_text(text);
    const auto out = convolve_grid(h, f, SamplingGrid{a.from, a.to, a.step});
    if (c.json) {
        io::json j;
        j["schema"] = io::kSchema;
        j["t"] = out.t;
        j["value"] = out.value;
        j["flagged"] = out.flagged;
        emit(c, io::dump(j));
    } else {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < out.t.size(); ++i) rows.push_back({out.t[i], out.value[i]});
        emit(c, io::csv({"t", "value"}, rows));
    }
    return 0;
}

struct WitnessArgs {
    double first = 1.0;
    double last = 128.0;
    int count = 8;
    std::vector<double> schedule;
};

int cmd_witness(const Common& c, const WitnessArgs& a)
{
    const auto h = load(c);
    const auto schedule = a.schedule.empty() ? geometric_schedule(a.first, a.last, a.count) : a.schedule;
    StabilityOptions opt;
    opt.tol = c.tol;
    const auto curve = instability_witness(h, schedule, opt);
    if (c.json) {
        io::json j;
        j["schema"] = io::kSchema;
        j["witness"] = io::growth_to_json(curve);
        emit(c, io::dump(j));
    } else {
        std::vector<std::vector<double>> rows;
        for (const auto& p : curve.points()) rows.push_back({p.horizon, p.value});
        emit(c, io::csv({"T", "value"}, rows));
    }
    return 0;
}

struct SpectrumArgs {
    double wmin = 0.0;
    double wmax = 10.0;
    int samples = 101;
};

int cmd_spectrum(const Common& c, const SpectrumArgs& a)
{
    const auto h = load(c);
    if (a.samples < 1 || !(a.wmax >= a.wmin)) throw Error(Errc::InvalidArgument, "need samples >= 1 and wmax >= wmin");
    if (!detail::certified_bounded(h)) {
        std::cerr << "error: DivergentMeasure: spectrum needs a filter with finite total variation\n";
        return 2;
    }
    SpectrumOptions so;
    so.tol = std::min(c.tol, 1e-11);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < a.samples; ++i) {
        const double w = a.samples == 1 ? a.wmin : a.wmin + (a.wmax - a.wmin) * double(i) / double(a.samples - 1);
        const auto v = frequency_response(h, w, so);
        rows.push_back({w, v.real(), v.imag(), std::abs(v)});
    }
    if (c.json) {
        io::json j;
        j["schema"] = io::kSchema;
        io::json arr = io::json::array();
        for (const auto& r : rows) arr.push_back({{"omega", r[0]}, {"re", r[1]}, {"im", r[2]}, {"modulus", r[3]}});
        j["spectrum"] = arr;
        emit(c, io::dump(j));
    } else {
        emit(c, io::csv({"omega", "re", "im", "modulus"}, rows));
    }
    return 0;
}

int cmd_probe_norm(const Common& c, double t_max)
{
    const auto h = load(c);
    const auto opt = norm_options(c);
    const auto norm = m_norm(h, opt);
    io::json j;
    j["schema"] = io::kSchema;
    j["m_norm"] = io::norm_to_json(norm);
    if (!norm.finite()) {
        emit(c, io::dump(j));
        return 2;
    }
    if (!h.has_atoms()) j["l1_norm"] = io::norm_to_json(l1_norm(h, opt));
    j["dual_estimate"] = dual_m_norm_estimate(h, c.refinement, opt);
    StabilityOptions so;
    so.norm = opt;
    so.tol = c.tol;
    const auto s = probe_operator_norm(h, t_max, c.refinement, so);
    j["operator_norm"] = {{"lower_bound", s.lower_bound}, {"upper_bound", s.upper_bound}, {"gap", s.gap}};
    emit(c, io::dump(j));
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"BIBO stability analysis of LTI filters given by Radon-measure impulse responses"};
    app.require_subcommand(1);

    Common c_an, c_cv, c_wt, c_sp, c_pn;
    auto* analyze = app.add_subcommand("analyze", "classify a filter (exit 0 Stable, 2 Unstable, 3 Indeterminate)");
    add_common(analyze, c_an);

    ConvolveArgs cv;
    auto* convolve = app.add_subcommand("convolve", "sample (h * f) on a grid");
    add_common(convolve, c_cv);
    convolve->add_option("--signal", cv.signal, "signal JSON, or @path")->required();
    convolve->add_option("--from", cv.from, "first sample time");
    convolve->add_option("--to", cv.to, "last sample time");
    convolve->add_option("--step", cv.step, "grid step")->check(CLI::PositiveNumber);

    WitnessArgs wt;
    auto* witness = app.add_subcommand("witness", "growth curve of the truncated worst-case output at 0");
    add_common(witness, c_wt);
    witness->add_option("--first", wt.first, "first horizon of the geometric schedule");
    witness->add_option("--last", wt.last, "last horizon of the geometric schedule");
    witness->add_option("--count", wt.count, "number of horizons");
    witness->add_option("--schedule", wt.schedule, "explicit horizons (overrides the geometric schedule)")
        ->delimiter(',');

    SpectrumArgs sp;
    auto* spectrum = app.add_subcommand("spectrum", "frequency response table (omega, re, im, modulus)");
    add_common(spectrum, c_sp);
    spectrum->add_option("--wmin", sp.wmin, "first frequency");
    spectrum->add_option("--wmax", sp.wmax, "last frequency");
    spectrum->add_option("--samples", sp.samples, "number of frequencies");

    double t_max = 100.0;
    auto* probe = app.add_subcommand("probe-norm", "m-norm, L1 norm, dual estimate and operator-norm probe");
    add_common(probe, c_pn);
    probe->add_option("--t-max", t_max, "largest truncation horizon")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*analyze) return cmd_analyze(c_an);
        if (*convolve) return cmd_convolve(c_cv, cv);
        if (*witness) return cmd_witness(c_wt, wt);
        if (*spectrum) return cmd_spectrum(c_sp, sp);
        if (*probe) return cmd_probe_norm(c_pn, t_max);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.code() == Errc::DivergentMeasure && (*spectrum || *probe)) return 2;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
