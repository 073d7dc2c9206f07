#pragma once

// JSON documents for measures, signals and reports, plus a deterministic
// writer (17 significant digits, '\n' line endings) for JSON and CSV.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rbibo/dsl.hpp"
#include "rbibo/measure.hpp"
#include "rbibo/signal.hpp"
#include "rbibo/spectrum.hpp"
#include "rbibo/stability.hpp"

namespace rbibo::io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "radon-bibo/v1";

inline std::string format_double(double v)
{
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline void dump(const json& j, std::string& out, int indent)
{
    const std::string pad(std::size_t(indent + 2), ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            break;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad + json(k).dump() + ": ";
            dump(v, out, indent + 2);
        }
        out += "\n" + std::string(std::size_t(indent), ' ') + "}";
        break;
    }
    case json::value_t::array: {
        // Arrays of scalars stay on one line.
        bool scalars = true;
        for (const auto& v : j) scalars = scalars && !v.is_structured();
        if (j.empty()) {
            out += "[]";
        } else if (scalars) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                dump(j[i], out, indent);
            }
            out += "]";
        } else {
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                dump(j[i], out, indent + 2);
            }
            out += "\n" + std::string(std::size_t(indent), ' ') + "]";
        }
        break;
    }
    case json::value_t::number_float: out += format_double(j.get<double>()); break;
    default: out += j.dump(); break;
    }
}

inline double read_double(const json& j)
{
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw Error(Errc::BadDocument, "expected a number, \"inf\" or \"-inf\", got " + j.dump());
}

inline std::vector<double> read_doubles(const json& j)
{
    if (!j.is_array()) throw Error(Errc::BadDocument, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(read_double(v));
    return out;
}

inline const json& field(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key)) throw Error(Errc::BadDocument, std::string("missing field \"") + key + "\"");
    return j.at(key);
}

inline double number_or(const json& j, const char* key, double fallback)
{
    return j.contains(key) ? read_double(j.at(key)) : fallback;
}

inline json bound(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

} // namespace detail

/// Pretty-printed JSON with fixed number formatting and a trailing newline.
inline std::string dump(const json& j)
{
    std::string out;
    detail::dump(j, out, 0);
    return out + "\n";
}

// Measures

inline json term_to_json(const DensitySegment& s, const DensityTerm& t)
{
    json j;
    j["interval"] = json::array({detail::bound(s.lower), detail::bound(s.upper)});
    if (const auto* c = std::get_if<Constant>(&t)) {
        j["form"] = "constant";
        j["parameters"] = {{"value", c->value}};
    } else if (const auto* e = std::get_if<ExpPoly>(&t)) {
        j["form"] = "exppoly";
        j["parameters"] = {{"cos_coeffs", e->cos_coeffs}, {"sin_coeffs", e->sin_coeffs}, {"rate", e->rate},
                           {"frequency", e->frequency}, {"origin", e->origin}};
    } else if (const auto* g = std::get_if<Gaussian>(&t)) {
        j["form"] = "gaussian";
        j["parameters"] = {{"weight", g->weight}, {"scale", g->scale}, {"center", g->center}};
    } else {
        throw Error(Errc::NotExpressible, "callable density has no JSON form");
    }
    return j;
}

inline json measure_to_json(const RadonMeasure& h)
{
    json j;
    j["schema"] = kSchema;
    j["atoms"] = json::array();
    for (const auto& a : h.atoms()) j["atoms"].push_back(json::array({a.location, a.weight}));
    j["segments"] = json::array();
    for (const auto& s : h.segments())
        for (const auto& t : s.terms) j["segments"].push_back(term_to_json(s, t));
    return j;
}

inline RadonMeasure measure_from_json(const json& j)
{
    if (!j.is_object()) throw Error(Errc::BadDocument, "measure document must be an object");
    if (j.contains("schema") && j.at("schema") != kSchema)
        throw Error(Errc::BadDocument, "unsupported schema " + j.at("schema").dump());
    std::vector<DiracAtom> atoms;
    if (j.contains("atoms")) {
        for (const auto& a : j.at("atoms")) {
            const auto v = detail::read_doubles(a);
            if (v.size() != 2) throw Error(Errc::BadDocument, "atom must be [location, weight]");
            atoms.push_back({v[0], v[1]});
        }
    }
    std::vector<DensitySegment> segs;
    if (j.contains("segments")) {
        for (const auto& s : j.at("segments")) {
            const auto iv = detail::read_doubles(detail::field(s, "interval"));
            if (iv.size() != 2) throw Error(Errc::BadDocument, "interval must be [lower, upper]");
            const auto form = detail::field(s, "form").get<std::string>();
            const json p = s.contains("parameters") ? s.at("parameters") : json::object();
            DensityTerm term;
            if (form == "constant") {
                term = Constant{detail::read_double(detail::field(p, "value"))};
            } else if (form == "exppoly") {
                ExpPoly e;
                if (p.contains("cos_coeffs")) e.cos_coeffs = detail::read_doubles(p.at("cos_coeffs"));
                if (p.contains("sin_coeffs")) e.sin_coeffs = detail::read_doubles(p.at("sin_coeffs"));
                e.rate = detail::number_or(p, "rate", 0.0);
                e.frequency = detail::number_or(p, "frequency", 0.0);
                e.origin = detail::number_or(p, "origin", 0.0);
                term = e;
            } else if (form == "gaussian") {
                Gaussian g{detail::number_or(p, "weight", 1.0), detail::number_or(p, "scale", 1.0),
                           detail::number_or(p, "center", 0.0)};
                if (!(g.scale > 0.0)) throw Error(Errc::BadDocument, "gaussian scale must be positive");
                term = g;
            } else {
                throw Error(Errc::BadDocument, "unknown density form \"" + form + "\"");
            }
            segs.push_back(DensitySegment::of(iv[0], iv[1], term));
        }
    }
    return RadonMeasure::sum_of(std::move(atoms), std::move(segs));
}

inline RadonMeasure measure_from_text(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::BadDocument, e.what());
    }
    return measure_from_json(j);
}

// Signals

/// {"family": "rect" | "step" | "constant" | "sine" | "sign-pattern", ...}
inline BoundedSignal signal_from_json(const json& j)
{
    const auto family = detail::field(j, "family").get<std::string>();
    const double amp = detail::number_or(j, "amplitude", 1.0);
    if (family == "rect")
        return rect_signal(detail::read_double(detail::field(j, "lower")),
                           detail::read_double(detail::field(j, "upper")), amp);
    if (family == "step") return step_signal(detail::number_or(j, "at", 0.0), amp);
    if (family == "constant") return constant_signal(detail::number_or(j, "value", 1.0));
    if (family == "sine")
        return sine_signal(amp, detail::read_double(detail::field(j, "omega")), detail::number_or(j, "phase", 0.0));
    if (family == "sign-pattern")
        return sign_pattern_signal(amp, detail::read_double(detail::field(j, "omega")),
                                   detail::number_or(j, "phase", 0.0));
    throw Error(Errc::BadDocument, "unknown signal family \"" + family + "\"");
}

inline BoundedSignal signal_from_text(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::BadDocument, e.what());
    }
    return signal_from_json(j);
}

// Reports

inline json growth_to_json(const GrowthCurve& c)
{
    json arr = json::array();
    for (const auto& p : c.points()) arr.push_back(json::array({p.horizon, p.value}));
    return arr;
}

inline json norm_to_json(const NormResult& n)
{
    json j;
    j["kind"] = to_string(n.kind);
    j["value"] = n.finite() ? json(n.value) : json(nullptr);
    j["abs_error"] = n.abs_error;
    if (!n.evidence.empty()) j["evidence"] = growth_to_json(n.evidence);
    return j;
}

inline json report_to_json(const StabilityReport& r, const std::string& source = {})
{
    json j;
    j["schema"] = kSchema;
    if (!source.empty()) j["filter"] = source;
    j["verdict"] = to_string(r.verdict);
    j["m_norm"] = norm_to_json(r.m_norm);
    if (r.sharpness) {
        j["sharpness"] = {{"lower_bound", r.sharpness->lower_bound},
                          {"upper_bound", r.sharpness->upper_bound},
                          {"gap", r.sharpness->gap}};
    }
    if (r.witness) j["witness"] = growth_to_json(*r.witness);
    j["output_regularity"] = to_string(r.output_regularity);
    return j;
}

// CSV

inline std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows)
{
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

} // namespace rbibo::io
