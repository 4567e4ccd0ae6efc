#include "lcgf/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace lcgf::dsl {

bool operator==(const Ast& a, const Ast& b) {
    return a.kind == b.kind && a.text == b.text && a.exponent == b.exponent && a.args == b.args;
}

Ast number(std::string text) {
    Ast a;
    a.kind = Ast::Kind::number;
    a.text = std::move(text);
    return a;
}

Ast symbol(std::string name) {
    Ast a;
    a.kind = Ast::Kind::symbol;
    a.text = std::move(name);
    return a;
}

Ast call(std::string name, std::vector<Ast> args) {
    Ast a;
    a.kind = Ast::Kind::call;
    a.text = std::move(name);
    a.args = std::move(args);
    return a;
}

Ast unary_minus(Ast x) {
    Ast a;
    a.kind = Ast::Kind::neg;
    a.line = x.line;
    a.column = x.column;
    a.args.push_back(std::move(x));
    return a;
}

Ast binary(Ast::Kind op, Ast l, Ast r) {
    Ast a;
    a.kind = op;
    a.line = l.line;
    a.column = l.column;
    a.args.push_back(std::move(l));
    a.args.push_back(std::move(r));
    return a;
}

Ast power(Ast base, Exponent e) {
    Ast a;
    a.kind = Ast::Kind::pow;
    a.exponent = std::move(e);
    a.line = base.line;
    a.column = base.column;
    a.args.push_back(std::move(base));
    return a;
}

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, weak_eq, eq, end };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

const char* describe(Tok t) {
    switch (t) {
        case Tok::number: return "a number";
        case Tok::ident: return "a name";
        case Tok::plus: return "'+'";
        case Tok::minus: return "'-'";
        case Tok::star: return "'*'";
        case Tok::slash: return "'/'";
        case Tok::caret: return "'^'";
        case Tok::lparen: return "'('";
        case Tok::rparen: return "')'";
        case Tok::comma: return "','";
        case Tok::weak_eq: return "'~='";
        case Tok::eq: return "'='";
        case Tok::end: return "end of input";
    }
    return "?";
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        const int l0 = line, c0 = col;
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < src.size() && src[j] == '.') {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
                    j = k;
                }
            }
            out.push_back({Tok::number, std::string(src.substr(i, j - i)), l0, c0});
            advance(j - i);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            while (j < src.size() && src[j] == '\'') ++j;
            out.push_back({Tok::ident, std::string(src.substr(i, j - i)), l0, c0});
            advance(j - i);
            continue;
        }
        Tok k;
        std::size_t n = 1;
        switch (c) {
            case '+': k = Tok::plus; break;
            case '-': k = Tok::minus; break;
            case '*': k = Tok::star; break;
            case '/': k = Tok::slash; break;
            case '^': k = Tok::caret; break;
            case '(': k = Tok::lparen; break;
            case ')': k = Tok::rparen; break;
            case ',': k = Tok::comma; break;
            case '=': k = Tok::eq; break;
            case '~':
                if (i + 1 < src.size() && src[i + 1] == '=') {
                    k = Tok::weak_eq;
                    n = 2;
                    break;
                }
                [[fallthrough]];
            default:
                throw SyntaxError(std::string("unexpected character '") + c + "'", l0, c0);
        }
        out.push_back({k, std::string(src.substr(i, n)), l0, c0});
        advance(n);
    }
    out.push_back({Tok::end, "", line, col});
    return out;
}

bool is_function(const std::string& name) {
    return name == "sin" || name == "cos" || name == "exp" || name == "H" || name == "delta" || name == "delta_n";
}

bool is_symbol(const std::string& name) {
    if (name == "s" || name == "i" || name == "t" || name == "z") return true;
    return name.rfind("y", 0) == 0 && name.find_first_not_of('\'', 1) == std::string::npos;
}

class Parser {
public:
    explicit Parser(std::string_view text) : toks_(lex(text)) {}

    Ast expr() {
        Ast a = term();
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            const auto op = next().kind == Tok::plus ? Ast::Kind::add : Ast::Kind::sub;
            a = binary(op, std::move(a), term());
        }
        return a;
    }

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }

    void expect(Tok k) {
        if (peek().kind != k) fail(std::string("expected ") + describe(k) + ", found " + describe(peek().kind));
        ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, peek().line, peek().column); }

private:
    Ast term() {
        Ast a = unary();
        while (peek().kind == Tok::star || peek().kind == Tok::slash) {
            const auto op = next().kind == Tok::star ? Ast::Kind::mul : Ast::Kind::div;
            a = binary(op, std::move(a), unary());
        }
        return a;
    }

    Ast unary() {
        if (peek().kind == Tok::minus) {
            const Token& m = next();
            Ast a = unary_minus(unary());
            a.line = m.line;
            a.column = m.column;
            return a;
        }
        return factor();
    }

    Ast factor() {
        Ast b = base();
        if (peek().kind == Tok::caret) {
            ++pos_;
            b = power(std::move(b), exponent());
        }
        return b;
    }

    std::int64_t integer() {
        if (peek().kind != Tok::number || peek().text.find_first_not_of("0123456789") != std::string::npos)
            fail("expected an integer in the exponent");
        const Token& t = next();
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc()) throw SyntaxError("exponent out of range", t.line, t.column);
        return v;
    }

    Exponent exponent() {
        if (peek().kind == Tok::lparen) {
            ++pos_;
            const bool negative = peek().kind == Tok::minus;
            if (negative) ++pos_;
            std::int64_t num = integer();
            std::int64_t den = 1;
            if (peek().kind == Tok::slash) {
                ++pos_;
                const Token& at = peek();
                den = integer();
                if (den == 0) throw SyntaxError("zero denominator in the exponent", at.line, at.column);
            }
            expect(Tok::rparen);
            return Exponent(negative ? -num : num, den);
        }
        const bool negative = peek().kind == Tok::minus;
        if (negative) ++pos_;
        const std::int64_t n = integer();
        return Exponent(negative ? -n : n);
    }

    Ast base() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::number: {
                ++pos_;
                Ast a = number(t.text);
                a.line = t.line;
                a.column = t.column;
                return a;
            }
            case Tok::lparen: {
                ++pos_;
                Ast a = expr();
                expect(Tok::rparen);
                return a;
            }
            case Tok::ident: {
                ++pos_;
                if (is_function(t.text)) {
                    if (peek().kind != Tok::lparen) fail("expected '(' after " + t.text);
                    ++pos_;
                    std::vector<Ast> args{expr()};
                    while (peek().kind == Tok::comma) {
                        ++pos_;
                        args.push_back(expr());
                    }
                    expect(Tok::rparen);
                    const std::size_t arity = t.text == "delta_n" ? 2 : 1;
                    if (args.size() != arity)
                        throw SyntaxError(t.text + " takes " + std::to_string(arity) + " argument" + (arity == 1 ? "" : "s"),
                                          t.line, t.column);
                    Ast a = call(t.text, std::move(args));
                    a.line = t.line;
                    a.column = t.column;
                    return a;
                }
                if (!is_symbol(t.text)) throw SyntaxError("unknown name '" + t.text + "'", t.line, t.column);
                if (peek().kind == Tok::lparen) fail("'" + t.text + "' is not a function");
                Ast a = symbol(t.text);
                a.line = t.line;
                a.column = t.column;
                return a;
            }
            default:
                fail(std::string("expected an operand, found ") + describe(t.kind));
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

int precedence(const Ast& a) {
    switch (a.kind) {
        case Ast::Kind::add:
        case Ast::Kind::sub: return 1;
        case Ast::Kind::mul:
        case Ast::Kind::div: return 2;
        case Ast::Kind::neg: return 3;
        case Ast::Kind::pow: return 4;
        default: return 5;
    }
}

void print_to(std::ostream& os, const Ast& a, int min_prec) {
    const bool paren = precedence(a) < min_prec;
    if (paren) os << '(';
    switch (a.kind) {
        case Ast::Kind::number:
        case Ast::Kind::symbol: os << a.text; break;
        case Ast::Kind::call:
            os << a.text << '(';
            for (std::size_t k = 0; k < a.args.size(); ++k) {
                if (k) os << ", ";
                print_to(os, a.args[k], 1);
            }
            os << ')';
            break;
        case Ast::Kind::neg:
            os << '-';
            print_to(os, a.args[0], 3);
            break;
        case Ast::Kind::add:
        case Ast::Kind::sub:
            print_to(os, a.args[0], 1);
            os << (a.kind == Ast::Kind::add ? " + " : " - ");
            print_to(os, a.args[1], 2);
            break;
        case Ast::Kind::mul:
        case Ast::Kind::div:
            print_to(os, a.args[0], 2);
            os << (a.kind == Ast::Kind::mul ? '*' : '/');
            print_to(os, a.args[1], 3);
            break;
        case Ast::Kind::pow:
            print_to(os, a.args[0], 5);
            os << '^';
            if (a.exponent.is_integer() && a.exponent.sign() >= 0) {
                os << a.exponent.to_string();
            } else {
                os << '(' << a.exponent.to_string() << ')';
            }
            break;
    }
    if (paren) os << ')';
}

const Ast* find_symbol(const Ast& a, std::string_view name) {
    if (a.kind == Ast::Kind::symbol && a.text == name) return &a;
    for (const auto& c : a.args) {
        if (const Ast* f = find_symbol(c, name)) return f;
    }
    return nullptr;
}

const Ast* find_unknown(const Ast& a) {
    if (a.kind == Ast::Kind::symbol && a.text[0] == 'y') return &a;
    for (const auto& c : a.args) {
        if (const Ast* f = find_unknown(c)) return f;
    }
    return nullptr;
}

bool singular_free(const Ast& a) {
    if (a.kind == Ast::Kind::call && (a.text == "H" || a.text == "delta" || a.text == "delta_n")) return false;
    for (const auto& c : a.args) {
        if (!singular_free(c)) return false;
    }
    return true;
}

[[noreturn]] void fail_at(const Ast& a, const std::string& msg) { throw SyntaxError(msg, a.line, a.column); }

double literal(const Ast& a) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(a.text.data(), a.text.data() + a.text.size(), v);
    if (ec != std::errc() || p != a.text.data() + a.text.size()) fail_at(a, "malformed number '" + a.text + "'");
    return v;
}

SmoothFn named(const std::string& name, const SmoothFn& arg) {
    if (name == "sin") return SmoothFn::sin(arg);
    if (name == "cos") return SmoothFn::cos(arg);
    return SmoothFn::exp(arg);
}

/// Classical smooth expressions in t (no scale, no singular atoms).
std::optional<SmoothFn> to_smooth(const Ast& a) {
    switch (a.kind) {
        case Ast::Kind::number: return SmoothFn::constant(literal(a));
        case Ast::Kind::symbol:
            if (a.text == "t") return SmoothFn::variable();
            if (a.text == "i") return SmoothFn::constant(Complex(0.0, 1.0));
            return std::nullopt;
        case Ast::Kind::call: {
            if (a.text != "sin" && a.text != "cos" && a.text != "exp") return std::nullopt;
            auto arg = to_smooth(a.args[0]);
            if (!arg) return std::nullopt;
            return named(a.text, *arg);
        }
        case Ast::Kind::neg: {
            auto x = to_smooth(a.args[0]);
            if (!x) return std::nullopt;
            return -*x;
        }
        case Ast::Kind::add:
        case Ast::Kind::sub:
        case Ast::Kind::mul: {
            auto l = to_smooth(a.args[0]);
            auto r = to_smooth(a.args[1]);
            if (!l || !r) return std::nullopt;
            if (a.kind == Ast::Kind::add) return *l + *r;
            if (a.kind == Ast::Kind::sub) return *l - *r;
            return *l * *r;
        }
        case Ast::Kind::div: {
            auto l = to_smooth(a.args[0]);
            auto r = to_smooth(a.args[1]);
            if (!l || !r || !r->is_constant() || r->is_zero()) return std::nullopt;
            return (Complex(1.0) / r->constant_value()) * *l;
        }
        case Ast::Kind::pow: {
            if (!a.exponent.is_integer() || a.exponent.sign() < 0) return std::nullopt;
            auto b = to_smooth(a.args[0]);
            if (!b) return std::nullopt;
            return SmoothFn::power(*b, static_cast<unsigned>(a.exponent.to_integer()));
        }
    }
    return std::nullopt;
}

/// arg = a t + b with a real and nonzero, b a finite real LC number.
struct Affine {
    LCComplex a;
    LCComplex b;
};

Affine affine(const Ast& x, const EvalOptions& opt) {
    const auto& ctx = opt.settings.ctx;
    if (!mentions(x, "t")) return {LCComplex(ctx), eval_number(x, opt)};
    switch (x.kind) {
        case Ast::Kind::symbol: return {LCComplex(Complex(1.0), ctx), LCComplex(ctx)};
        case Ast::Kind::neg: {
            auto r = affine(x.args[0], opt);
            return {-r.a, -r.b};
        }
        case Ast::Kind::add:
        case Ast::Kind::sub: {
            auto l = affine(x.args[0], opt);
            auto r = affine(x.args[1], opt);
            if (x.kind == Ast::Kind::add) return {l.a + r.a, l.b + r.b};
            return {l.a - r.a, l.b - r.b};
        }
        case Ast::Kind::mul: {
            const bool left_const = !mentions(x.args[0], "t");
            const bool right_const = !mentions(x.args[1], "t");
            if (!left_const && !right_const) break;
            const LCComplex c = eval_number(x.args[left_const ? 0 : 1], opt);
            auto r = affine(x.args[left_const ? 1 : 0], opt);
            return {c * r.a, c * r.b};
        }
        case Ast::Kind::div: {
            if (mentions(x.args[1], "t")) break;
            const LCComplex c = invert(eval_number(x.args[1], opt));
            auto r = affine(x.args[0], opt);
            return {c * r.a, c * r.b};
        }
        default: break;
    }
    fail_at(x, "the argument must be affine in t");
}

/// Zero a t + b at t = p, with a real standard.
std::pair<double, LCReal> affine_root(const Ast& arg, const EvalOptions& opt) {
    const Affine f = affine(arg, opt);
    if (!negligible(imag_part(f.a), 0.0) || !negligible(imag_part(f.b), 0.0)) fail_at(arg, "the argument must be real");
    const LCReal a = real_part(f.a);
    if (a.is_zero() || classify(a) != Magnitude::finite || !infinitesimal_part(a).is_zero())
        fail_at(arg, "the coefficient of t must be a nonzero real number");
    const double slope = standard_part(a);
    const LCReal p = -real_part(f.b) / slope;
    if (classify(p) == Magnitude::infinite) fail_at(arg, "the argument vanishes at an infinite point");
    return {slope, p};
}

GenFunction singular(const Ast& c, const EvalOptions& opt) {
    const auto& st = opt.settings;
    int order = -1;
    const Ast* arg = &c.args[0];
    if (c.text == "delta") order = 0;
    if (c.text == "delta_n") {
        const Ast& k = c.args[0];
        if (k.kind != Ast::Kind::number || k.text.find_first_not_of("0123456789") != std::string::npos)
            fail_at(k, "the order of delta_n must be a nonnegative integer literal");
        order = std::stoi(k.text);
        arg = &c.args[1];
    }
    if (!mentions(*arg, "t")) fail_at(*arg, c.text + " needs an argument in t");
    auto [slope, p] = affine_root(*arg, opt);
    GenFunction g = order < 0 ? embed_heaviside(0.0, st) : embed_delta(0.0, order, st);
    if (slope != 1.0) g = compose_affine(g, slope, 0.0);
    return translate(g, p);
}

GenFunction eval_gen(const Ast& a, const EvalOptions& opt) {
    const auto& st = opt.settings;
    if (const Ast* y = find_unknown(a)) fail_at(*y, "the unknown y may only appear in an equation");
    if (const Ast* z = find_symbol(a, "z")) fail_at(*z, "z is the transform variable; expected a function of t");
    if (!mentions(a, "t")) {
        if (!singular_free(a)) eval_number(a, opt);  // reports the misplaced call
        return embed_constant(eval_number(a, opt), st);
    }
    if (auto f = to_smooth(a)) return embed_smooth(*f, st);
    switch (a.kind) {
        case Ast::Kind::neg: return -eval_gen(a.args[0], opt);
        case Ast::Kind::add: return eval_gen(a.args[0], opt) + eval_gen(a.args[1], opt);
        case Ast::Kind::sub: return eval_gen(a.args[0], opt) - eval_gen(a.args[1], opt);
        case Ast::Kind::mul: return multiply(eval_gen(a.args[0], opt), eval_gen(a.args[1], opt));
        case Ast::Kind::div:
            if (mentions(a.args[1], "t")) fail_at(a.args[1], "division by a function of t");
            return invert(eval_number(a.args[1], opt)) * eval_gen(a.args[0], opt);
        case Ast::Kind::pow: {
            if (!a.exponent.is_integer() || a.exponent.sign() < 0)
                fail_at(a, "generalized functions take nonnegative integer powers only");
            const auto n = a.exponent.to_integer();
            const GenFunction b = eval_gen(a.args[0], opt);
            GenFunction r = embed_constant(LCComplex(Complex(1.0), st.ctx), st);
            for (std::int64_t k = 0; k < n; ++k) r = multiply(r, b);
            return r;
        }
        case Ast::Kind::call: {
            if (a.text == "H" || a.text == "delta" || a.text == "delta_n") return singular(a, opt);
            // smooth function of a shifted argument
            auto [slope, p] = affine_root(a.args[0], opt);
            const double p0 = standard_part(p);
            SmoothFn inner = p0 == 0.0 ? SmoothFn::variable() : SmoothFn::variable() - SmoothFn::constant(p0);
            if (slope != 1.0) inner = Complex(slope) * inner;
            return translate(embed_smooth(named(a.text, inner), st), infinitesimal_part(p));
        }
        default: break;
    }
    fail_at(a, "cannot interpret this expression as a function of t");
}

std::vector<Complex> smooth_jet(const SmoothFn& f, double x0, int order) { return f(x0, order); }

}  // namespace

Ast parse(std::string_view text) {
    Parser p(text);
    Ast a = p.expr();
    if (p.peek().kind != Tok::end) p.fail(std::string("unexpected ") + describe(p.peek().kind));
    return a;
}

Equation parse_equation(std::string_view text) {
    Parser p(text);
    Equation eq;
    eq.lhs = p.expr();
    if (p.peek().kind == Tok::weak_eq) {
        eq.relation = Relation::weak;
    } else if (p.peek().kind == Tok::eq) {
        eq.relation = Relation::exact;
    } else {
        p.fail(std::string("expected '=' or '~=', found ") + describe(p.peek().kind));
    }
    p.next();
    eq.rhs = p.expr();
    if (p.peek().kind != Tok::end) p.fail(std::string("unexpected ") + describe(p.peek().kind));
    return eq;
}

std::string print(const Ast& a) {
    std::ostringstream os;
    print_to(os, a, 1);
    return os.str();
}

bool mentions(const Ast& a, std::string_view name) { return find_symbol(a, name) != nullptr; }

LCComplex eval_number(const Ast& a, const EvalOptions& opt) {
    const auto& ctx = opt.settings.ctx;
    switch (a.kind) {
        case Ast::Kind::number: return LCComplex(Complex(literal(a)), ctx);
        case Ast::Kind::symbol:
            if (a.text == "s") {
                if (opt.classical_only) fail_at(a, "the scale s is not available in a classical computation");
                return LCComplex::scale(ctx);
            }
            if (a.text == "i") return LCComplex(Complex(0.0, 1.0), ctx);
            fail_at(a, "expected a constant, found '" + a.text + "'");
        case Ast::Kind::neg: return -eval_number(a.args[0], opt);
        case Ast::Kind::add: return eval_number(a.args[0], opt) + eval_number(a.args[1], opt);
        case Ast::Kind::sub: return eval_number(a.args[0], opt) - eval_number(a.args[1], opt);
        case Ast::Kind::mul: return eval_number(a.args[0], opt) * eval_number(a.args[1], opt);
        case Ast::Kind::div: return eval_number(a.args[0], opt) / eval_number(a.args[1], opt);
        case Ast::Kind::pow: {
            const Exponent& e = a.exponent;
            const Ast& b = a.args[0];
            if (b.kind == Ast::Kind::symbol && b.text == "s") {
                if (opt.classical_only) fail_at(b, "the scale s is not available in a classical computation");
                return LCComplex::monomial(Complex(1.0), e, ctx);
            }
            const LCComplex x = eval_number(b, opt);
            if (e.is_integer()) return pow(x, static_cast<int>(e.to_integer()));
            if (!negligible(imag_part(x), 0.0)) fail_at(b, "fractional powers need a real base");
            const auto den = static_cast<int>(boost::multiprecision::denominator(e.rational()));
            const auto num = static_cast<int>(boost::multiprecision::numerator(e.rational()));
            return complexify(pow(nth_root(real_part(x), den), num));
        }
        case Ast::Kind::call: {
            if (a.text == "exp") return exp(eval_number(a.args[0], opt));
            if (a.text == "sin" || a.text == "cos") {
                const SmoothFn f = named(a.text, SmoothFn::variable());
                return lift_smooth([&f](double x0, int order) { return smooth_jet(f, x0, order); },
                                   eval_number(a.args[0], opt));
            }
            fail_at(a, a.text + " needs an argument in t");
        }
    }
    fail_at(a, "not a constant expression");
}

GenFunction eval_function(const Ast& a, const EvalOptions& opt) { return eval_gen(a, opt); }

LaplaceDomainElement eval_transform_input(const Ast& a, const EvalOptions& opt) {
    if (const Ast* z = find_symbol(a, "z")) fail_at(*z, "z is the transform variable; give the input as a function of t");
    if (!mentions(a, "t")) {
        if (const Ast* s = find_symbol(a, "s"))
            fail_at(*s, "s is the fixed scale and cannot be the transform variable; the input must be a function of t");
    }
    return from_genfunction(eval_gen(a, opt));
}

namespace {

struct Collected {
    LCComplex c[3];
    std::vector<std::pair<LCComplex, const Ast*>> rest;
};

void collect(const Ast& a, const LCComplex& coef, Collected& out, const EvalOptions& opt) {
    if (!find_unknown(a)) {
        out.rest.emplace_back(coef, &a);
        return;
    }
    switch (a.kind) {
        case Ast::Kind::symbol: {
            const std::size_t order = a.text.size() - 1;
            if (order > 2) fail_at(a, "equations of order above two are not supported");
            out.c[order] += coef;
            return;
        }
        case Ast::Kind::neg: collect(a.args[0], -coef, out, opt); return;
        case Ast::Kind::add:
        case Ast::Kind::sub:
            collect(a.args[0], coef, out, opt);
            collect(a.args[1], a.kind == Ast::Kind::add ? coef : -coef, out, opt);
            return;
        case Ast::Kind::mul: {
            const bool left = find_unknown(a.args[0]) != nullptr;
            const bool right = find_unknown(a.args[1]) != nullptr;
            if (left && right) fail_at(a, "the equation must be linear in y");
            const Ast& k = a.args[left ? 1 : 0];
            if (mentions(k, "t")) fail_at(k, "only constant coefficients are supported");
            collect(a.args[left ? 0 : 1], coef * eval_number(k, opt), out, opt);
            return;
        }
        case Ast::Kind::div:
            if (find_unknown(a.args[1])) fail_at(a.args[1], "the equation must be linear in y");
            if (mentions(a.args[1], "t")) fail_at(a.args[1], "only constant coefficients are supported");
            collect(a.args[0], coef / eval_number(a.args[1], opt), out, opt);
            return;
        default: break;
    }
    fail_at(a, "the equation must be linear in y");
}

double real_coefficient(const LCComplex& c, const Ast& where) {
    if (!c.part_above(Exponent(0)).is_zero() || !c.part_below(Exponent(0)).is_zero())
        fail_at(where, "equation coefficients must be real numbers");
    const Complex v = c.coefficient(Exponent(0));
    if (v.imag() != 0.0) fail_at(where, "equation coefficients must be real numbers");
    return v.real();
}

}  // namespace

LinearOde eval_ode(const Equation& eq, const EvalOptions& opt) {
    const auto& st = opt.settings;
    if (const Ast* y = find_unknown(eq.rhs)) fail_at(*y, "move the unknown to the left-hand side");
    Collected col{{LCComplex(st.ctx), LCComplex(st.ctx), LCComplex(st.ctx)}, {}};
    collect(eq.lhs, LCComplex(Complex(1.0), st.ctx), col, opt);
    LinearOde ode;
    ode.relation = eq.relation;
    ode.a0 = real_coefficient(col.c[0], eq.lhs);
    ode.a1 = real_coefficient(col.c[1], eq.lhs);
    ode.a2 = real_coefficient(col.c[2], eq.lhs);
    GenFunction rhs = eval_gen(eq.rhs, opt);
    for (const auto& [c, term] : col.rest) rhs = rhs - c * eval_gen(*term, opt);
    ode.rhs = from_genfunction(rhs);
    return ode;
}

}  // namespace lcgf::dsl
