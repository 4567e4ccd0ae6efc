#include "lcgf/laplace.hpp"

#include "lcgf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <tuple>

namespace lcgf {

namespace {

using Poly = std::vector<LCComplex>;
using CPoly = std::vector<Complex>;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

bool same_pole(Complex a, Complex b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

void trim(Poly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Poly poly_add(const Poly& a, const Poly& b, const TruncationContext& ctx) {
    Poly r(std::max(a.size(), b.size()), LCComplex(ctx));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}

/// p(z) * (z - lambda).
Poly times_linear(const Poly& p, Complex lambda, const TruncationContext& ctx) {
    Poly r(p.size() + 1, LCComplex(ctx));
    for (std::size_t i = 0; i < p.size(); ++i) {
        r[i + 1] += p[i];
        r[i] -= p[i] * lambda;
    }
    trim(r);
    return r;
}

/// Quotient of p by (z - lambda); the remainder is dropped.
Poly divide_linear(const Poly& p, Complex lambda, const TruncationContext& ctx) {
    if (p.size() <= 1) return {};
    Poly q(p.size() - 1, LCComplex(ctx));
    LCComplex carry(ctx);
    for (std::size_t i = p.size(); i-- > 1;) {
        carry = p[i] + carry * lambda;
        q[i - 1] = carry;
    }
    trim(q);
    return q;
}

LCComplex poly_eval(const Poly& p, const LCComplex& z) {
    LCComplex acc(z.context());
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
    return acc;
}

/// Coefficients of p(lambda + w) in powers of w.
Poly taylor_shift(const Poly& p, Complex lambda, const TruncationContext& ctx) {
    Poly r = p;
    const std::size_t n = r.size();
    for (std::size_t k = 0; k + 1 < n; ++k)
        for (std::size_t i = n - 1; i > k; --i) r[i - 1] += r[i] * lambda;
    (void)ctx;
    return r;
}

CPoly cpoly_mul(const CPoly& a, const CPoly& b) {
    CPoly r(a.size() + b.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

/// First n coefficients of 1/q as a power series.
CPoly series_inverse(const CPoly& q, std::size_t n) {
    CPoly r(n, Complex(0.0));
    const Complex inv0 = Complex(1.0) / q[0];
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc = k == 0 ? Complex(1.0) : Complex(0.0);
        for (std::size_t j = 1; j <= k && j < q.size(); ++j) acc -= q[j] * r[k - j];
        r[k] = acc * inv0;
    }
    return r;
}

/// Drops coefficients that are rounding residue relative to the given scale.
LCComplex clean(const LCComplex& x, double scale) {
    std::vector<LCComplex::Term> kept;
    for (const auto& t : x.terms())
        if (std::abs(t.coeff) > 1e-13 * scale) kept.push_back(t);
    return LCComplex::from_terms(std::move(kept), x.context());
}

std::string exact_key(const LCReal& x) {
    std::string out;
    char buf[64];
    for (const auto& t : x.terms()) {
        std::snprintf(buf, sizeof(buf), "%a", t.coeff);
        out += t.exponent.to_string() + ":" + buf + ";";
    }
    return out;
}

void check_settings(const GfSettings& a, const GfSettings& b) {
    if (!(a == b)) throw ContextMismatch("Laplace domain elements use different settings");
}

void normalize(LaplaceDomainElement& f) {
    std::vector<ClassicalTerm> merged;
    for (auto& t : f.classical) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const ClassicalTerm& u) {
            return u.power == t.power && u.rate == t.rate && u.shift == t.shift;
        });
        if (it != merged.end()) {
            it->coef += t.coef;
        } else {
            merged.push_back(t);
        }
    }
    std::erase_if(merged, [](const ClassicalTerm& t) { return t.coef.is_zero(); });
    std::sort(merged.begin(), merged.end(), [](const ClassicalTerm& a, const ClassicalTerm& b) {
        const Ordering o = compare(a.shift, b.shift);
        if (o != Ordering::equal) return o == Ordering::less;
        return std::tuple(a.power, a.rate.real(), a.rate.imag()) < std::tuple(b.power, b.rate.real(), b.rate.imag());
    });
    f.classical = std::move(merged);
    std::erase_if(f.generalized, [](const GeneralizedPart& g) { return g.coef.is_zero() || g.psi.is_zero(); });
}

// ------------------------------------------------ exponential polynomials

struct ExpTerm {
    Complex c;
    int power = 0;
    Complex rate;
};
using ExpPoly = std::vector<ExpTerm>;

ExpPoly merge(ExpPoly p) {
    ExpPoly out;
    for (const auto& t : p) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const ExpTerm& u) { return u.power == t.power && u.rate == t.rate; });
        if (it != out.end()) {
            it->c += t.c;
        } else {
            out.push_back(t);
        }
    }
    std::erase_if(out, [](const ExpTerm& t) { return t.c == Complex(0.0); });
    return out;
}

ExpPoly exp_poly_mul(const ExpPoly& a, const ExpPoly& b) {
    ExpPoly r;
    for (const auto& x : a)
        for (const auto& y : b) r.push_back({x.c * y.c, x.power + y.power, x.rate + y.rate});
    return merge(std::move(r));
}

std::optional<ExpPoly> as_exp_poly(const SmoothFn& f);

/// a t + b when the argument is affine.
std::optional<std::pair<Complex, Complex>> affine(const SmoothFn& f) {
    auto p = as_exp_poly(f);
    if (!p) return std::nullopt;
    Complex a(0.0), b(0.0);
    for (const auto& t : *p) {
        if (t.rate != Complex(0.0) || t.power > 1) return std::nullopt;
        (t.power == 1 ? a : b) += t.c;
    }
    return std::pair{a, b};
}

std::optional<ExpPoly> as_exp_poly(const SmoothFn& f) {
    using K = SmoothFn::Kind;
    const Complex i(0.0, 1.0);
    switch (f.kind()) {
        case K::constant: return ExpPoly{{f.constant_value(), 0, Complex(0.0)}};
        case K::variable: return ExpPoly{{Complex(1.0), 1, Complex(0.0)}};
        case K::add: {
            ExpPoly r;
            for (const auto& c : f.children()) {
                auto p = as_exp_poly(c);
                if (!p) return std::nullopt;
                r.insert(r.end(), p->begin(), p->end());
            }
            return merge(std::move(r));
        }
        case K::mul: {
            ExpPoly r{{Complex(1.0), 0, Complex(0.0)}};
            for (const auto& c : f.children()) {
                auto p = as_exp_poly(c);
                if (!p) return std::nullopt;
                r = exp_poly_mul(r, *p);
            }
            return r;
        }
        case K::power: {
            auto p = as_exp_poly(f.children().front());
            if (!p) return std::nullopt;
            ExpPoly r{{Complex(1.0), 0, Complex(0.0)}};
            for (unsigned k = 0; k < f.power_exponent(); ++k) r = exp_poly_mul(r, *p);
            return r;
        }
        case K::exp: {
            auto ab = affine(f.children().front());
            if (!ab) return std::nullopt;
            return ExpPoly{{std::exp(ab->second), 0, ab->first}};
        }
        case K::sin:
        case K::cos: {
            auto ab = affine(f.children().front());
            if (!ab) return std::nullopt;
            const auto [a, b] = *ab;
            if (f.kind() == K::sin)
                return merge({{Complex(0.0, -0.5) * std::exp(i * b), 0, i * a},
                              {Complex(0.0, 0.5) * std::exp(-i * b), 0, -i * a}});
            return merge({{0.5 * std::exp(i * b), 0, i * a}, {0.5 * std::exp(-i * b), 0, -i * a}});
        }
        default: return std::nullopt;
    }
}

/// t^k e^{alpha t} times cos(omega t), sin(omega t) or 1.
SmoothFn basis(int k, double alpha, double omega, char kind) {
    const SmoothFn t = SmoothFn::variable();
    SmoothFn f = SmoothFn::constant(1.0);
    if (k == 1) f = t;
    if (k > 1) f = SmoothFn::power(t, static_cast<unsigned>(k));
    if (alpha != 0.0) f = f * SmoothFn::exp(alpha == 1.0 ? t : SmoothFn::constant(alpha) * t);
    if (kind != 'e') {
        const SmoothFn arg = omega == 1.0 ? t : SmoothFn::constant(omega) * t;
        f = f * (kind == 's' ? SmoothFn::sin(arg) : SmoothFn::cos(arg));
    }
    return f;
}

std::string poly_text(const std::vector<LCComplex>& p) {
    std::string out;
    for (std::size_t j = p.size(); j-- > 0;) {
        if (p[j].is_zero()) continue;
        LCComplex c = p[j];
        bool negative = false;
        if (c.size() == 1 && c.terms().front().coeff.imag() == 0.0 && c.terms().front().coeff.real() < 0) {
            negative = true;
            c = -c;
        }
        std::string ct = to_string(c);
        const bool unit = ct == "1";
        if (c.size() > 1 || ct.find(' ') != std::string::npos) ct = "(" + ct + ")";
        std::string mono = j == 0 ? "" : (j == 1 ? "z" : "z^" + std::to_string(j));
        std::string term = mono.empty() ? ct : (unit ? mono : ct + "*" + mono);
        if (out.empty()) {
            out = negative ? "-" + term : term;
        } else {
            out += negative ? " - " + term : " + " + term;
        }
    }
    return out.empty() ? "0" : out;
}

/// Derivative of order d of t^k e^{rate t} at 0.
Complex derivative_at_zero(int k, Complex rate, int d) {
    if (d < k) return Complex(0.0);
    return factorial(d) / factorial(d - k) * std::pow(rate, d - k);
}

void check_dom(const GenFunction& psi) {
    const SupportInfo info = support(psi);
    if (info.external.empty()) return;
    if (!info.external.bounded()) throw DomainError("generalized part without compact support is outside the transform domain");
    const LCReal s = LCReal::scale(psi.context());
    for (const auto& i : info.internal) {
        if (!i.lo || compare(*i.lo, s) == Ordering::less)
            throw DomainError("internal support " + to_string(i) + " is not contained in [s, inf); the transform is undefined");
    }
}

LaplaceImage transform_impl(const LaplaceDomainElement& f, Ruleset rules, std::vector<std::string>* trace) {
    const auto& ctx = f.settings.ctx;
    auto note = [&](const std::string& rule) {
        if (trace && std::find(trace->begin(), trace->end(), rule) == trace->end()) trace->push_back(rule);
    };
    std::vector<ImageTerm> terms;
    for (const auto& t : f.classical) {
        if (sign(t.shift) < 0) throw DomainError("classical delay must be nonnegative");
        Poly num{t.coef * Complex(factorial(t.power))};
        terms.push_back({num, {{t.rate, t.power + 1}}, t.shift});
        note("L[t^n e^(at)] = n!/(z - a)^(n+1)");
        if (!t.shift.is_zero()) note("L[H(t - c) f(t - c)] = e^(-cz) L[f]");
    }
    for (const auto& g : f.generalized) {
        if (rules == Ruleset::hat) check_dom(g.psi);
        const NormalForm nf = normal_form(g.psi);
        if (!is_delta_combination(nf)) throw UnsupportedError("generalized part is not a combination of deltas");
        for (const auto& d : nf.deltas) {
            LCReal shift = d.position;
            switch (rules) {
                case Ruleset::hat: note("L^[delta^(n)(t - a)] = z^n e^(-az)"); break;
                case Ruleset::naive:
                    if (!d.position.is_zero()) throw UnsupportedError("the naive table only knows deltas at 0");
                    note(d.order == 0 ? "L[delta(t)] = 1" : "L[delta^(n)(t)] = z^n");
                    break;
                case Ruleset::engineer:
                    if (!infinitesimal_part(d.position).is_zero() || sign(d.position) < 0)
                        throw UnsupportedError("the engineer table needs a real delay eps >= 0");
                    note("L[delta^(n)(t - eps)] = z^n e^(-eps z)");
                    break;
            }
            Poly num(static_cast<std::size_t>(d.order) + 1, LCComplex(ctx));
            num.back() = g.coef * d.coef;
            terms.push_back({num, {}, shift});
        }
    }
    return LaplaceImage::from_terms(std::move(terms), ctx, growth_bound(f));
}

}  // namespace

// ============================================================ domain elements

LaplaceDomainElement operator+(const LaplaceDomainElement& a, const LaplaceDomainElement& b) {
    check_settings(a.settings, b.settings);
    LaplaceDomainElement r = a;
    r.classical.insert(r.classical.end(), b.classical.begin(), b.classical.end());
    r.generalized.insert(r.generalized.end(), b.generalized.begin(), b.generalized.end());
    normalize(r);
    return r;
}

LaplaceDomainElement operator*(const LCComplex& c, const LaplaceDomainElement& f) {
    LaplaceDomainElement r = f;
    for (auto& t : r.classical) t.coef = t.coef * c;
    for (auto& g : r.generalized) g.coef = g.coef * c;
    normalize(r);
    return r;
}

LaplaceDomainElement operator-(const LaplaceDomainElement& a, const LaplaceDomainElement& b) {
    return a + LCComplex(Complex(-1.0), b.settings.ctx) * b;
}

LaplaceDomainElement exp_poly(const LCComplex& coef, int power, Complex rate, const GfSettings& settings) {
    if (power < 0) throw DomainError("negative power");
    LaplaceDomainElement f(settings);
    f.classical.push_back({coef.with_context(settings.ctx), power, rate, LCReal(settings.ctx)});
    normalize(f);
    return f;
}

LaplaceDomainElement classical_sin(double omega, const GfSettings& settings) {
    const Complex i(0.0, 1.0);
    return exp_poly(LCComplex(Complex(0.0, -0.5), settings.ctx), 0, i * omega, settings) +
           exp_poly(LCComplex(Complex(0.0, 0.5), settings.ctx), 0, -i * omega, settings);
}

LaplaceDomainElement classical_cos(double omega, const GfSettings& settings) {
    const Complex i(0.0, 1.0);
    return exp_poly(LCComplex(Complex(0.5), settings.ctx), 0, i * omega, settings) +
           exp_poly(LCComplex(Complex(0.5), settings.ctx), 0, -i * omega, settings);
}

LaplaceDomainElement generalized(const GenFunction& psi) {
    LaplaceDomainElement f(psi.settings());
    f.generalized.push_back({LCComplex(Complex(1.0), psi.context()), psi});
    normalize(f);
    return f;
}

LaplaceDomainElement delayed(const LaplaceDomainElement& f, const LCReal& a) {
    if (sign(a) < 0) throw DomainError("delay must be nonnegative");
    LaplaceDomainElement r = f;
    for (auto& t : r.classical) t.shift = t.shift + a;
    for (auto& g : r.generalized) g.psi = translate(g.psi, a);
    normalize(r);
    return r;
}

double growth_bound(const LaplaceDomainElement& f) {
    double b = -std::numeric_limits<double>::infinity();
    for (const auto& t : f.classical) b = std::max(b, t.rate.real());
    return b;
}

GenFunction to_genfunction(const LaplaceDomainElement& f) {
    const auto& st = f.settings;
    // pair conjugate rates into cos/sin
    struct Pair {
        LCReal shift;
        int power;
        double alpha;
        double omega;
        LCComplex plus;
        LCComplex minus;
    };
    std::map<std::tuple<std::string, int, double, double>, Pair> groups;
    for (const auto& t : f.classical) {
        const double omega = std::abs(t.rate.imag());
        auto key = std::tuple(exact_key(t.shift), t.power, t.rate.real(), omega);
        auto it = groups.find(key);
        if (it == groups.end())
            it = groups.emplace(key, Pair{t.shift, t.power, t.rate.real(), omega, LCComplex(st.ctx), LCComplex(st.ctx)}).first;
        (t.rate.imag() >= 0 ? it->second.plus : it->second.minus) += t.coef;
    }
    GenFunction out(st);
    const Complex i(0.0, 1.0);
    for (const auto& [key, g] : groups) {
        std::vector<std::pair<LCComplex, SmoothFn>> parts;
        if (g.omega == 0.0) {
            parts.emplace_back(g.plus + g.minus, basis(g.power, g.alpha, 0.0, 'e'));
        } else {
            parts.emplace_back(g.plus + g.minus, basis(g.power, g.alpha, g.omega, 'c'));
            parts.emplace_back((g.plus - g.minus) * i, basis(g.power, g.alpha, g.omega, 's'));
        }
        for (const auto& [c, fn] : parts) {
            if (c.is_zero()) continue;
            GenFunction piece = embed_smooth(fn, st);
            if (!g.shift.is_zero()) piece = translate(embed_heaviside(0.0, st) * piece, g.shift);
            out = out + c * piece;
        }
    }
    for (const auto& g : f.generalized) out = out + g.coef * g.psi;
    return out;
}

LaplaceDomainElement from_genfunction(const GenFunction& g) {
    const auto& st = g.settings();
    LaplaceDomainElement out(st);
    for (const auto& m : g.terms()) {
        std::optional<LCReal> shift;
        bool classical = true;
        if (m.singular.size() == 1 && std::holds_alternative<HeavisideAtom>(m.singular.front())) {
            shift = position(m.singular.front(), st.ctx);
            if (sign(*shift) < 0) classical = false;
        } else if (!m.singular.empty()) {
            classical = false;
        }
        const LCReal delay = shift.value_or(LCReal(st.ctx));
        ExpPoly ep{{Complex(1.0), 0, Complex(0.0)}};
        for (const auto& a : m.smooth) {
            if (!classical) break;
            if (!(a.shift == delay)) {
                classical = false;
                break;
            }
            auto p = as_exp_poly(a.f);
            if (!p) {
                classical = false;
                break;
            }
            ep = exp_poly_mul(ep, *p);
        }
        if (classical) {
            for (const auto& t : ep) out.classical.push_back({m.coef * t.c, t.power, t.rate, delay});
        } else {
            out.generalized.push_back({LCComplex(Complex(1.0), st.ctx), GenFunction::from_monomials({m}, st)});
        }
    }
    normalize(out);
    return out;
}

std::string to_string(const LaplaceDomainElement& f) { return to_genfunction(f).to_string(); }

// ============================================================ images

std::vector<Complex> expand_denominator(const std::vector<Pole>& poles) {
    CPoly d{Complex(1.0)};
    for (const auto& p : poles)
        for (int k = 0; k < p.multiplicity; ++k) d = cpoly_mul(d, {-p.value, Complex(1.0)});
    return d;
}

LaplaceImage::LaplaceImage(TruncationContext ctx, double half_plane) : ctx_(std::move(ctx)), half_plane_(half_plane) {}

LaplaceImage LaplaceImage::from_terms(std::vector<ImageTerm> terms, TruncationContext ctx, double half_plane) {
    LaplaceImage img(ctx, half_plane);
    std::vector<std::vector<ImageTerm>> groups;
    for (auto& t : terms) {
        for (auto& c : t.numerator) c = c.with_context(ctx);
        t.shift = t.shift.with_context(ctx);
        auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.front().shift == t.shift; });
        if (it == groups.end()) {
            groups.push_back({std::move(t)});
        } else {
            it->push_back(std::move(t));
        }
    }
    for (auto& group : groups) {
        std::vector<Pole> poles;
        for (const auto& t : group) {
            for (const auto& p : t.poles) {
                auto it = std::find_if(poles.begin(), poles.end(), [&](const Pole& q) { return same_pole(q.value, p.value); });
                if (it == poles.end()) {
                    poles.push_back(p);
                } else {
                    it->multiplicity = std::max(it->multiplicity, p.multiplicity);
                }
            }
        }
        Poly num;
        double scale = 0.0;
        for (const auto& t : group) {
            Poly n = t.numerator;
            for (const auto& p : poles) {
                int have = 0;
                for (const auto& q : t.poles)
                    if (same_pole(q.value, p.value)) have += q.multiplicity;
                for (int k = have; k < p.multiplicity; ++k) n = times_linear(n, p.value, ctx);
            }
            for (const auto& c : n) scale = std::max(scale, max_abs_coefficient(c));
            num = poly_add(num, n, ctx);
        }
        for (auto& c : num) c = clean(c, scale);
        trim(num);
        if (num.empty()) continue;
        // cancel common factors
        for (auto& p : poles) {
            while (p.multiplicity > 0 && !num.empty()) {
                double size = 0.0;
                for (const auto& c : num) size = std::max(size, max_abs_coefficient(c));
                const LCComplex v = poly_eval(num, LCComplex(p.value, ctx));
                if (max_abs_coefficient(v) > 1e-12 * std::max(1.0, size)) break;
                num = divide_linear(num, p.value, ctx);
                --p.multiplicity;
            }
        }
        std::erase_if(poles, [](const Pole& p) { return p.multiplicity == 0; });
        std::sort(poles.begin(), poles.end(), [](const Pole& a, const Pole& b) {
            return std::pair(a.value.real(), a.value.imag()) < std::pair(b.value.real(), b.value.imag());
        });
        if (num.empty()) continue;
        img.terms_.push_back({std::move(num), std::move(poles), group.front().shift});
    }
    std::sort(img.terms_.begin(), img.terms_.end(),
              [](const ImageTerm& a, const ImageTerm& b) { return compare(a.shift, b.shift) == Ordering::less; });
    return img;
}

LCComplex LaplaceImage::operator()(const LCComplex& z) const {
    const LCComplex zz = z.with_context(ctx_);
    if (classify(zz) == Magnitude::infinite) throw NotFinite("image evaluated at an infinite point");
    if (!(standard_part(zz).real() > half_plane_)) throw DomainError("point outside the half-plane of the image");
    LCComplex total(ctx_);
    for (const auto& t : terms_) {
        LCComplex den(Complex(1.0), ctx_);
        for (const auto& p : t.poles)
            for (int k = 0; k < p.multiplicity; ++k) den = den * (zz - LCComplex(p.value, ctx_));
        total += poly_eval(t.numerator, zz) / den * exp(-(complexify(t.shift) * zz));
    }
    return total;
}

LaplaceImage operator+(const LaplaceImage& a, const LaplaceImage& b) {
    if (!(a.ctx_ == b.ctx_)) throw ContextMismatch("images use different truncation contexts");
    std::vector<ImageTerm> all = a.terms_;
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    return LaplaceImage::from_terms(std::move(all), a.ctx_, std::max(a.half_plane_, b.half_plane_));
}

LaplaceImage operator*(const LCComplex& c, const LaplaceImage& f) {
    std::vector<ImageTerm> all = f.terms_;
    for (auto& t : all)
        for (auto& x : t.numerator) x = x * c;
    return LaplaceImage::from_terms(std::move(all), f.ctx_, f.half_plane_);
}

LaplaceImage operator-(const LaplaceImage& a, const LaplaceImage& b) {
    return a + LCComplex(Complex(-1.0), b.ctx_) * b;
}

LaplaceImage LaplaceImage::divided_by(double a2, double a1, double a0) const {
    std::vector<Complex> roots;
    double lead = 0.0;
    if (a2 != 0.0) {
        const Complex sq = std::sqrt(Complex(a1 * a1 - 4.0 * a2 * a0));
        roots = {(-a1 + sq) / (2.0 * a2), (-a1 - sq) / (2.0 * a2)};
        lead = a2;
    } else if (a1 != 0.0) {
        roots = {Complex(-a0 / a1)};
        lead = a1;
    } else if (a0 != 0.0) {
        lead = a0;
    } else {
        throw DomainError("the characteristic polynomial is zero");
    }
    std::vector<ImageTerm> all = terms_;
    double hp = half_plane_;
    for (auto& t : all) {
        for (auto& x : t.numerator) x = x * Complex(1.0 / lead);
        for (const auto& r : roots) t.poles.push_back({r, 1});
    }
    for (auto& t : all) {
        // repeated roots
        std::vector<Pole> merged;
        for (const auto& p : t.poles) {
            auto it = std::find_if(merged.begin(), merged.end(), [&](const Pole& q) { return same_pole(q.value, p.value); });
            if (it == merged.end()) {
                merged.push_back(p);
            } else {
                it->multiplicity += p.multiplicity;
            }
        }
        t.poles = std::move(merged);
    }
    for (const auto& r : roots) hp = std::max(hp, r.real());
    return from_terms(std::move(all), ctx_, hp);
}

LaplaceImage LaplaceImage::delayed(const LCReal& a) const {
    if (sign(a) < 0) throw DomainError("delay must be nonnegative");
    std::vector<ImageTerm> all = terms_;
    for (auto& t : all) t.shift = t.shift + a.with_context(ctx_);
    return from_terms(std::move(all), ctx_, half_plane_);
}

std::string to_string(const LaplaceImage& f) {
    if (f.is_zero()) return "0";
    std::string out;
    for (const auto& t : f.terms()) {
        std::string term = poly_text(t.numerator);
        if (!t.poles.empty()) {
            const CPoly d = expand_denominator(t.poles);
            Poly dl;
            for (const auto& c : d) dl.push_back(LCComplex(c, f.context()));
            if (term.find(' ') != std::string::npos) term = "(" + term + ")";
            term += "/(" + poly_text(dl) + ")";
        }
        if (!t.shift.is_zero()) {
            std::string a = to_string(t.shift);
            if (t.shift.size() > 1) a = "(" + a + ")";
            if (term == "1") {
                term = "exp(-" + a + "*z)";
            } else {
                if (term.find(' ') != std::string::npos && t.poles.empty()) term = "(" + term + ")";
                term += "*exp(-" + a + "*z)";
            }
        }
        out += out.empty() ? term : " + " + term;
    }
    return out;
}

bool images_equal(const LaplaceImage& a, const LaplaceImage& b, double tol) {
    const LaplaceImage d = a - b;
    for (const auto& t : d.terms())
        for (const auto& c : t.numerator)
            if (max_abs_coefficient(c) > tol) return false;
    return true;
}

const char* to_string(Ruleset r) {
    switch (r) {
        case Ruleset::hat: return "hat";
        case Ruleset::engineer: return "engineer";
        case Ruleset::naive: return "naive";
    }
    return "?";
}

// ============================================================ transforms

LaplaceImage transform(const LaplaceDomainElement& f) { return transform_impl(f, Ruleset::hat, nullptr); }

LaplaceImage transform_derivative_shifted(int n, const TruncationContext& ctx) {
    if (n < 0) throw DomainError("derivative order must be nonnegative");
    Poly num(static_cast<std::size_t>(n) + 1, LCComplex(ctx));
    num.back() = LCComplex(Complex(1.0), ctx);
    return LaplaceImage::from_terms({{num, {}, LCReal::scale(ctx) * 2.0}}, ctx,
                                    -std::numeric_limits<double>::infinity());
}

LaplaceImage classical_table(const LaplaceDomainElement& f, Ruleset ruleset, std::vector<std::string>* trace) {
    return transform_impl(f, ruleset, trace);
}

LaplaceDomainElement inverse_transform(const LaplaceImage& F, const GfSettings& settings) {
    if (!(F.context() == settings.ctx)) throw ContextMismatch("image and settings use different truncation contexts");
    const auto& ctx = settings.ctx;
    LaplaceDomainElement out(settings);
    for (const auto& t : F.terms()) {
        const CPoly d = expand_denominator(t.poles);
        // polynomial division by the monic denominator
        Poly rem = t.numerator;
        const std::size_t dd = d.size() - 1;
        Poly quot;
        if (rem.size() > dd) {
            quot.assign(rem.size() - dd, LCComplex(ctx));
            for (std::size_t k = rem.size(); k-- > dd;) {
                const LCComplex q = rem[k];
                quot[k - dd] = q;
                for (std::size_t j = 0; j <= dd; ++j) rem[k - dd + j] -= q * d[j];
            }
            rem.resize(dd);
            trim(rem);
        }
        for (std::size_t j = 0; j < quot.size(); ++j) {
            if (quot[j].is_zero()) continue;
            const GenFunction psi = translate(embed_delta(0.0, static_cast<int>(j), settings), t.shift);
            out.generalized.push_back({quot[j], psi});
        }
        if (rem.empty()) continue;
        for (const auto& p : t.poles) {
            CPoly other{Complex(1.0)};
            for (const auto& q : t.poles) {
                if (&q == &p) continue;
                for (int k = 0; k < q.multiplicity; ++k) other = cpoly_mul(other, {p.value - q.value, Complex(1.0)});
            }
            const std::size_t m = static_cast<std::size_t>(p.multiplicity);
            const CPoly inv = series_inverse(other, m);
            const Poly r = taylor_shift(rem, p.value, ctx);
            for (std::size_t j = 1; j <= m; ++j) {
                // coefficient of w^{m-j} in r * inv
                LCComplex b(ctx);
                const std::size_t order = m - j;
                for (std::size_t i = 0; i <= order && i < r.size(); ++i) b += r[i] * inv[order - i];
                if (b.is_zero()) continue;
                out.classical.push_back({b * Complex(1.0 / factorial(static_cast<int>(j) - 1)), static_cast<int>(j) - 1,
                                         p.value, t.shift});
            }
        }
    }
    normalize(out);
    return out;
}

// ============================================================ IVPs

namespace {

LaplaceImage initial_image(const IVPSpec& p, const TruncationContext& ctx) {
    Poly num{p.yp0 * Complex(p.a2) + p.y0 * Complex(p.a1), p.y0 * Complex(p.a2)};
    for (auto& c : num) c = c.with_context(ctx);
    return LaplaceImage::from_terms({{num, {}, LCReal(ctx)}}, ctx, -std::numeric_limits<double>::infinity());
}

void derivative_rules(const IVPSpec& p, const std::string& L, std::vector<std::string>& trace) {
    if (p.a2 != 0.0) trace.push_back(L + "[f''] = z^2 " + L + "[f] - z f(0) - f'(0)");
    if (p.a1 != 0.0) trace.push_back(L + "[f'] = z " + L + "[f] - f(0)");
}

ValueCheck make_check(std::string name, const LCComplex& expected, const LCComplex& obtained, bool exact) {
    ValueCheck c{std::move(name), expected, obtained, obtained - expected, false};
    if (exact) {
        c.holds = max_abs_coefficient(c.discrepancy) <= 1e-12;
    } else {
        const Magnitude m = classify(c.discrepancy);
        c.holds = m == Magnitude::infinitesimal;
    }
    return c;
}

}  // namespace

IVPResult solve_ivp(const IVPSpec& p, const BatteryOptions& battery) {
    const GfSettings& st = p.rhs.settings;
    const auto& ctx = st.ctx;
    IVPResult r;
    if (p.a2 == 0.0 && p.a1 == 0.0) throw DomainError("the equation has no derivative terms");
    r.trace.push_back("apply L^ to both sides");
    derivative_rules(p, "L^", r.trace);
    const LaplaceImage rhs = classical_table(p.rhs, Ruleset::hat, &r.trace);
    r.image = (rhs + initial_image(p, ctx)).divided_by(p.a2, p.a1, p.a0);
    r.trace.push_back("solve for L^[y]: L^[y] = " + to_string(r.image));
    r.solution = inverse_transform(r.image, st);
    r.trace.push_back("partial fractions and inverse table: y = " + to_string(r.solution));
    r.solution_gen = to_genfunction(r.solution);

    const LCReal zero(ctx);
    r.initial_checks.push_back(make_check("y(0)", p.y0, evaluate_at(r.solution_gen, zero), true));
    const GenFunction dy = derive(r.solution_gen);
    if (p.a2 != 0.0) r.initial_checks.push_back(make_check("y'(0)", p.yp0, evaluate_at(dy, zero), true));
    r.initial_ok = std::all_of(r.initial_checks.begin(), r.initial_checks.end(), [](const ValueCheck& c) { return c.holds; });

    const GenFunction lhs = Complex(p.a2) * derive(dy) + Complex(p.a1) * dy + Complex(p.a0) * r.solution_gen;
    const GenFunction target = to_genfunction(p.rhs);
    r.equation = weak_equal_report(lhs, target, battery);
    r.equation_ok = p.mode == EqualityMode::exact ? (lhs - target).is_zero() : r.equation.verdict == Verdict::yes;
    return r;
}

const char* to_string(AuditVerdict v) { return v == AuditVerdict::consistent ? "consistent" : "inconsistent"; }

ContradictionReport audit_classical(const IVPSpec& p, Ruleset ruleset) {
    const GfSettings& st = p.rhs.settings;
    const auto& ctx = st.ctx;
    ContradictionReport rep;
    rep.ruleset = ruleset;
    if (p.a2 == 0.0 && p.a1 == 0.0) throw DomainError("the equation has no derivative terms");
    rep.trace.push_back("apply L to both sides");
    derivative_rules(p, "L", rep.trace);
    const LaplaceImage rhs = classical_table(p.rhs, ruleset, &rep.trace);
    const LaplaceImage image = (rhs + initial_image(p, ctx)).divided_by(p.a2, p.a1, p.a0);
    rep.trace.push_back("solve for L[y]: L[y] = " + to_string(image));
    rep.solution = inverse_transform(image, st);
    rep.trace.push_back("partial fractions and inverse table: y = " + to_string(rep.solution));
    if (ruleset == Ruleset::engineer) {
        for (auto& t : rep.solution.classical) t.shift = LCReal(ctx);
        normalize(rep.solution);
        rep.trace.push_back("weak limit eps -> 0+: y = " + to_string(rep.solution));
    }
    if (!rep.solution.generalized.empty())
        throw UnsupportedError("the classical pipeline produced a generalized part; one-sided limits are undefined");

    auto one_sided = [&](int d) {
        LCComplex v(ctx);
        for (const auto& t : rep.solution.classical) {
            if (sign(t.shift) > 0) continue;  // H(t - c) vanishes near 0+
            v += t.coef * derivative_at_zero(t.power, t.rate, d);
        }
        return v;
    };
    rep.checks.push_back(make_check("y(0+)", p.y0, one_sided(0), false));
    if (p.a2 != 0.0) rep.checks.push_back(make_check("y'(0+)", p.yp0, one_sided(1), false));
    const bool ok = std::all_of(rep.checks.begin(), rep.checks.end(), [](const ValueCheck& c) { return c.holds; });
    rep.verdict = ok ? AuditVerdict::consistent : AuditVerdict::inconsistent;
    return rep;
}

Lemma62Check check_lemma_6_2(const LaplaceDomainElement& f, const LaplaceDomainElement& g, const BatteryOptions& battery) {
    Lemma62Check c;
    c.weak = weak_equal(to_genfunction(f), to_genfunction(g), battery);
    c.transforms_equal = images_equal(transform(f), transform(g));
    c.agree = c.weak != Verdict::undetermined && (c.weak == Verdict::yes) == c.transforms_equal;
    return c;
}

}  // namespace lcgf
