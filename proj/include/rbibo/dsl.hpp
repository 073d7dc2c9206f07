#pragma once

// Filter description language:
//
//   expression := term (('+' | '-') term)*
//   term       := number '*' atom | atom
//   atom       := 'delta(' number ')'
//               | 'expstep(' number [',' number] [',' list] ')'
//               | 'rect(' number ',' number ')'
//               | 'gauss(' number ')'
//               | 'comb(' list ',' number [',' number] ')'
//               | '(' expression ')'
//   list       := '[' number (',' number)* ']'
//
// Hand-written LL(1) recursive descent; lowering produces a normalized
// RadonMeasure and to_dsl writes one back.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rbibo/measure.hpp"

namespace rbibo::dsl {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class Direction { Causal, Anticausal };

struct Sum {
    std::vector<ExprPtr> terms;
};

struct Scale {
    double coefficient = 1.0;
    ExprPtr expr;
};

struct Delta {
    double shift = 0.0;
    bool operator==(const Delta&) const = default;
};

/// 1_+(t) e^{rate t} P(t) cos(frequency t), mirrored for Anticausal.
struct ExpStep {
    double rate = 0.0;
    double frequency = 0.0;
    std::vector<double> coeffs{1.0};
    Direction direction = Direction::Causal;
    bool operator==(const ExpStep&) const = default;
};

/// Indicator of [lower, upper).
struct Rect {
    double lower = 0.0;
    double upper = 1.0;
    bool operator==(const Rect&) const = default;
};

/// n / sqrt(2 pi) e^{-(n t)^2 / 2}
struct Gauss {
    double scale = 1.0;
    bool operator==(const Gauss&) const = default;
};

/// sum_k weights[k] delta(. - offset - k spacing)
struct Comb {
    std::vector<double> weights;
    double spacing = 1.0;
    double offset = 0.0;
    bool operator==(const Comb&) const = default;
};

struct Expr {
    std::variant<Sum, Scale, Delta, ExpStep, Rect, Gauss, Comb> node;
};

bool operator==(const Expr& a, const Expr& b);

inline bool same(const ExprPtr& a, const ExprPtr& b)
{
    if (!a || !b) return a == b;
    return *a == *b;
}

inline bool operator==(const Sum& a, const Sum& b)
{
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t i = 0; i < a.terms.size(); ++i)
        if (!same(a.terms[i], b.terms[i])) return false;
    return true;
}

inline bool operator==(const Scale& a, const Scale& b)
{
    return a.coefficient == b.coefficient && same(a.expr, b.expr);
}

inline bool operator==(const Expr& a, const Expr& b) { return a.node == b.node; }

template <class Node>
ExprPtr make(Node n)
{
    return std::make_shared<const Expr>(Expr{std::move(n)});
}

/// Positioned parse failure. code() is SyntaxError or RangeError.
class ParseError : public Error {
public:
    ParseError(Errc code, std::size_t offset, int line, int column, std::vector<std::string> expected,
               const std::string& what)
        : Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          offset_(offset), line_(line), column_(column), expected_(std::move(expected))
    {
    }

    std::size_t offset() const { return offset_; }
    int line() const { return line_; }
    int column() const { return column_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    int line_;
    int column_;
    std::vector<std::string> expected_;
};

namespace detail {

inline constexpr int kMaxDepth = 200;

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprPtr parse()
    {
        auto e = expression();
        skip();
        if (pos_ != src_.size()) fail({"'+'", "'-'", "end of input"});
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int depth_ = 0;

    [[noreturn]] void raise(Errc code, std::size_t at, std::vector<std::string> expected, const std::string& msg) const
    {
        int line = 1, col = 1;
        for (std::size_t i = 0; i < at && i < src_.size(); ++i) {
            if (src_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(code, at, line, col, std::move(expected), msg);
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const
    {
        std::string msg = "expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? " or " : "") + expected[i];
        if (pos_ < src_.size()) {
            const auto c = static_cast<unsigned char>(src_[pos_]);
            msg += std::isprint(c) ? std::string(", found '") + char(c) + "'" : ", found byte " + std::to_string(c);
        } else {
            msg += ", found end of input";
        }
        raise(Errc::SyntaxError, pos_, std::move(expected), msg);
    }

    void skip()
    {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }

    bool peek(char c)
    {
        skip();
        return pos_ < src_.size() && src_[pos_] == c;
    }

    void expect(char c)
    {
        if (!peek(c)) fail({std::string("'") + c + "'"});
        ++pos_;
    }

    bool number_start()
    {
        skip();
        if (pos_ >= src_.size()) return false;
        const char c = src_[pos_];
        return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '+' || c == '-';
    }

    bool digit_at(std::size_t i) const
    {
        return i < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i]));
    }

    double number()
    {
        skip();
        const std::size_t start = pos_;
        std::size_t i = pos_;
        if (i < src_.size() && (src_[i] == '+' || src_[i] == '-')) ++i;
        const std::size_t body = i;
        bool digits = false;
        while (digit_at(i)) ++i, digits = true;
        if (i < src_.size() && src_[i] == '.') {
            ++i;
            while (digit_at(i)) ++i, digits = true;
        }
        if (!digits) {
            pos_ = body;
            fail({"number"});
        }
        if (i < src_.size() && (src_[i] == 'e' || src_[i] == 'E')) {
            std::size_t j = i + 1;
            if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
            if (!digit_at(j)) {
                pos_ = j;
                fail({"exponent digits"});
            }
            while (digit_at(j)) ++j;
            i = j;
        }
        // from_chars rejects a leading '+'.
        const char* first = src_.data() + (src_[start] == '+' ? start + 1 : start);
        double v = 0.0;
        const auto res = std::from_chars(first, src_.data() + i, v);
        if (res.ec == std::errc::result_out_of_range || !std::isfinite(v))
            raise(Errc::RangeError, start, {}, "number out of range: " + std::string(src_.substr(start, i - start)));
        if (res.ec != std::errc() || res.ptr != src_.data() + i) {
            pos_ = start;
            fail({"number"});
        }
        pos_ = i;
        return v;
    }

    std::vector<double> list()
    {
        expect('[');
        std::vector<double> out{number()};
        while (peek(',')) {
            ++pos_;
            out.push_back(number());
        }
        if (!peek(']')) fail({"','", "']'"});
        ++pos_;
        return out;
    }

    ExprPtr expression()
    {
        std::vector<ExprPtr> terms{term()};
        for (;;) {
            if (peek('+')) {
                ++pos_;
                terms.push_back(term());
            } else if (peek('-')) {
                ++pos_;
                terms.push_back(negate(term()));
            } else {
                break;
            }
        }
        if (terms.size() == 1) return terms.front();
        std::vector<ExprPtr> flat;
        for (auto& t : terms) {
            if (const auto* s = std::get_if<Sum>(&t->node))
                flat.insert(flat.end(), s->terms.begin(), s->terms.end());
            else
                flat.push_back(t);
        }
        return make(Sum{std::move(flat)});
    }

    static ExprPtr negate(const ExprPtr& e)
    {
        if (const auto* s = std::get_if<Scale>(&e->node)) {
            if (s->coefficient == -1.0) return s->expr;
            return make(Scale{-s->coefficient, s->expr});
        }
        return make(Scale{-1.0, e});
    }

    ExprPtr term()
    {
        if (number_start()) {
            const double c = number();
            expect('*');
            auto a = atom();
            return c == 1.0 ? a : make(Scale{c, std::move(a)});
        }
        return atom();
    }

    std::string identifier()
    {
        skip();
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        return std::string(src_.substr(start, pos_ - start));
    }

    ExprPtr atom()
    {
        static const std::vector<std::string> kAtoms{"number", "'delta('", "'expstep('", "'rect('",
                                                     "'gauss('", "'comb('", "'('"};
        if (peek('(')) {
            if (++depth_ > kMaxDepth) raise(Errc::SyntaxError, pos_, {}, "nesting deeper than 200 levels");
            ++pos_;
            auto e = expression();
            expect(')');
            --depth_;
            return e;
        }
        skip();
        const std::size_t start = pos_;
        const std::string name = identifier();
        auto range_error = [&](const std::string& msg) { raise(Errc::RangeError, start, {}, msg); };
        if (name == "delta") {
            expect('(');
            const double t = number();
            expect(')');
            return make(Delta{t});
        }
        if (name == "expstep") {
            expect('(');
            ExpStep e;
            e.rate = number();
            if (peek(',')) {
                ++pos_;
                if (peek('[')) {
                    e.coeffs = list();
                } else {
                    e.frequency = number();
                    if (peek(',')) {
                        ++pos_;
                        e.coeffs = list();
                    }
                }
            }
            if (!peek(')')) fail({"','", "')'"});
            ++pos_;
            return make(std::move(e));
        }
        if (name == "rect") {
            expect('(');
            const double lo = number();
            expect(',');
            const double hi = number();
            expect(')');
            if (!(lo < hi)) range_error("rect needs lower < upper");
            return make(Rect{lo, hi});
        }
        if (name == "gauss") {
            expect('(');
            const double n = number();
            expect(')');
            if (!(n > 0.0)) range_error("gauss needs n > 0");
            return make(Gauss{n});
        }
        if (name == "comb") {
            expect('(');
            Comb c;
            c.weights = list();
            expect(',');
            c.spacing = number();
            if (peek(',')) {
                ++pos_;
                c.offset = number();
            }
            if (!peek(')')) fail({"','", "')'"});
            ++pos_;
            if (!(c.spacing > 0.0)) range_error("comb needs spacing > 0");
            for (std::size_t k = 0; k < c.weights.size(); ++k)
                if (!std::isfinite(c.offset + double(k) * c.spacing)) range_error("comb tooth location overflows");
            return make(std::move(c));
        }
        pos_ = start;
        fail(kAtoms);
    }
};

} // namespace detail

inline ExprPtr parse(std::string_view source) { return detail::Parser(source).parse(); }

inline RadonMeasure lower(const Expr& e)
{
    return std::visit(
        [](const auto& n) -> RadonMeasure {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Sum>) {
                RadonMeasure acc;
                for (const auto& t : n.terms) acc = acc + lower(*t);
                return acc;
            } else if constexpr (std::is_same_v<T, Scale>) {
                return lower(*n.expr).scaled(n.coefficient);
            } else if constexpr (std::is_same_v<T, Delta>) {
                return RadonMeasure::dirac(n.shift);
            } else if constexpr (std::is_same_v<T, ExpStep>) {
                ExpPoly p{n.coeffs, {}, n.rate, n.frequency, 0.0};
                auto m = make_measure({}, {DensitySegment::of(0.0, kInf, p)});
                return n.direction == Direction::Causal ? m : m.reversed();
            } else if constexpr (std::is_same_v<T, Rect>) {
                return make_measure({}, {DensitySegment::of(n.lower, n.upper, Constant{1.0})});
            } else if constexpr (std::is_same_v<T, Gauss>) {
                return make_measure({}, {DensitySegment::of(-kInf, kInf, Gaussian{1.0, n.scale, 0.0})});
            } else {
                std::vector<DiracAtom> atoms;
                for (std::size_t k = 0; k < n.weights.size(); ++k)
                    atoms.push_back({n.offset + double(k) * n.spacing, n.weights[k]});
                return make_measure(std::move(atoms), {});
            }
        },
        e.node);
}

inline RadonMeasure lower(const ExprPtr& e) { return lower(*e); }

inline RadonMeasure compile(std::string_view source) { return lower(parse(source)); }

/// Shortest text that reads back to exactly v.
inline std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string format_list(const std::vector<double>& v)
{
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_number(v[i]);
    return out + "]";
}

inline std::string format_expstep(const ExpPoly& e)
{
    std::string out = "expstep(" + format_number(e.rate);
    if (e.frequency != 0.0 || e.cos_coeffs != std::vector<double>{1.0}) out += ", " + format_number(e.frequency);
    if (e.cos_coeffs != std::vector<double>{1.0}) out += ", " + format_list(e.cos_coeffs);
    return out + ")";
}

} // namespace detail

/// Source text of an expression tree.
inline std::string to_source(const Expr& e)
{
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Sum>) {
                std::string out;
                for (std::size_t i = 0; i < n.terms.size(); ++i) out += (i ? " + " : "") + to_source(*n.terms[i]);
                return out;
            } else if constexpr (std::is_same_v<T, Scale>) {
                return format_number(n.coefficient) + "*(" + to_source(*n.expr) + ")";
            } else if constexpr (std::is_same_v<T, Delta>) {
                return "delta(" + format_number(n.shift) + ")";
            } else if constexpr (std::is_same_v<T, ExpStep>) {
                if (n.direction == Direction::Anticausal)
                    throw Error(Errc::NotExpressible, "anticausal expstep has no source form");
                return detail::format_expstep(ExpPoly{n.coeffs, {}, n.rate, n.frequency, 0.0});
            } else if constexpr (std::is_same_v<T, Rect>) {
                return "rect(" + format_number(n.lower) + ", " + format_number(n.upper) + ")";
            } else if constexpr (std::is_same_v<T, Gauss>) {
                return "gauss(" + format_number(n.scale) + ")";
            } else {
                std::string out = "comb(" + detail::format_list(n.weights) + ", " + format_number(n.spacing);
                if (n.offset != 0.0) out += ", " + format_number(n.offset);
                return out + ")";
            }
        },
        e.node);
}

/// Writes a measure back as DSL text: atoms as weighted deltas, constant
/// pieces as weighted rects, exponential terms over [0, inf) as expsteps and
/// centred Gaussians over the whole line as gauss. Anything else is
/// NotExpressible.
inline std::string to_dsl(const RadonMeasure& h)
{
    std::vector<std::string> parts;
    for (const auto& a : h.atoms())
        parts.push_back(format_number(a.weight) + "*delta(" + format_number(a.location) + ")");

    struct Run {
        DensityTerm term;
        double lower;
        double upper;
    };
    std::vector<Run> runs; // ExpPoly / Gaussian terms with their covered span
    for (const auto& s : h.segments()) {
        for (const auto& t : s.terms) {
            if (const auto* c = std::get_if<Constant>(&t)) {
                if (!s.bounded()) throw Error(Errc::NotExpressible, "constant density on an unbounded segment");
                parts.push_back(format_number(c->value) + "*rect(" + format_number(s.lower) + ", " +
                                format_number(s.upper) + ")");
                continue;
            }
            if (std::holds_alternative<Callable>(t))
                throw Error(Errc::NotExpressible, "callable density has no source form");
            auto it = std::find_if(runs.begin(), runs.end(), [&](const Run& r) { return r.term == t; });
            if (it == runs.end()) {
                runs.push_back({t, s.lower, s.upper});
            } else if (it->upper == s.lower) {
                it->upper = s.upper;
            } else {
                throw Error(Errc::NotExpressible, "term covers a non-contiguous set");
            }
        }
    }
    for (const auto& r : runs) {
        if (const auto* e = std::get_if<ExpPoly>(&r.term)) {
            if (r.lower != 0.0 || r.upper != kInf || e->origin != 0.0 || !e->sin_coeffs.empty())
                throw Error(Errc::NotExpressible, "exponential term is not a causal expstep");
            parts.push_back(detail::format_expstep(*e));
        } else {
            const auto& g = std::get<Gaussian>(r.term);
            if (r.lower != -kInf || r.upper != kInf || g.center != 0.0)
                throw Error(Errc::NotExpressible, "gaussian term is not centred over the whole line");
            parts.push_back(format_number(g.weight) + "*gauss(" + format_number(g.scale) + ")");
        }
    }
    if (parts.empty()) return "0*delta(0)";
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
    return out;
}

} // namespace rbibo::dsl
