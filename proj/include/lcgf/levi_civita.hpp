#pragma once

// Truncated Levi-Civita series  sum_k c_k s^{q_k}  over a real or complex
// coefficient scalar. Values are immutable-by-convention; every arithmetic
// operation returns a canonical series (exponents strictly increasing, no zero
// coefficients, nothing above the context's q_max).

#include "lcgf/errors.hpp"
#include "lcgf/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace lcgf {

struct TruncationContext {
    Exponent q_max{6};
    double coeff_floor = 1e-30;

    TruncationContext() = default;
    explicit TruncationContext(Exponent q, double floor = 1e-30) : q_max(std::move(q)), coeff_floor(floor) {
        if (q_max.sign() < 0) throw DomainError("q_max must be nonnegative");
        if (!(coeff_floor >= 0.0)) throw DomainError("coeff_floor must be nonnegative");
    }

    friend bool operator==(const TruncationContext& a, const TruncationContext& b) {
        return a.q_max == b.q_max && a.coeff_floor == b.coeff_floor;
    }
};

namespace detail {
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }
template <class T> struct is_complex : std::false_type {};
template <class T> struct is_complex<std::complex<T>> : std::true_type {};
}  // namespace detail

template <class Scalar>
class LeviCivita {
public:
    using scalar_type = Scalar;

    struct Term {
        Exponent exponent;
        Scalar coeff;
        friend bool operator==(const Term&, const Term&) = default;
    };

    explicit LeviCivita(TruncationContext ctx = {}) : ctx_(std::move(ctx)) {}
    LeviCivita(Scalar c, TruncationContext ctx) : ctx_(std::move(ctx)) {
        if (c != Scalar(0)) terms_.push_back({Exponent(0), c});
    }

    static LeviCivita constant(Scalar c, const TruncationContext& ctx) { return LeviCivita(c, ctx); }

    static LeviCivita monomial(Scalar c, const Exponent& q, const TruncationContext& ctx) {
        LeviCivita r(ctx);
        if (c != Scalar(0) && q <= ctx.q_max) r.terms_.push_back({q, c});
        return r;
    }

    /// The scale s itself.
    static LeviCivita scale(const TruncationContext& ctx) { return monomial(Scalar(1), Exponent(1), ctx); }

    /// Canonicalizes user-supplied terms: merges duplicates, drops exact zeros
    /// and exponents above q_max. No floor pruning is applied to input.
    static LeviCivita from_terms(std::vector<Term> terms, const TruncationContext& ctx) {
        std::map<Exponent, Scalar> acc;
        for (auto& t : terms) {
            if (t.exponent > ctx.q_max) continue;
            acc[t.exponent] += t.coeff;
        }
        LeviCivita r(ctx);
        for (auto& [e, c] : acc) {
            if (c != Scalar(0)) r.terms_.push_back({e, c});
        }
        return r;
    }

    template <class Other>
    static LeviCivita convert(const LeviCivita<Other>& other) {
        LeviCivita r(other.context());
        for (const auto& t : other.terms()) r.terms_.push_back({t.exponent, Scalar(t.coeff)});
        return r;
    }

    const std::vector<Term>& terms() const { return terms_; }
    const TruncationContext& context() const { return ctx_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Scalar coefficient(const Exponent& q) const {
        for (const auto& t : terms_) {
            if (t.exponent == q) return t.coeff;
            if (t.exponent > q) break;
        }
        return Scalar(0);
    }

    const Exponent& leading_exponent() const {
        if (terms_.empty()) throw DomainError("zero has no leading term");
        return terms_.front().exponent;
    }
    Scalar leading_coefficient() const {
        if (terms_.empty()) throw DomainError("zero has no leading term");
        return terms_.front().coeff;
    }

    /// Same value re-truncated under another context.
    LeviCivita with_context(const TruncationContext& ctx) const {
        LeviCivita r(ctx);
        for (const auto& t : terms_) {
            if (t.exponent > ctx.q_max) break;
            r.terms_.push_back(t);
        }
        return r;
    }

    /// Multiplication by s^q (exact exponent shift, then truncation).
    LeviCivita shifted(const Exponent& q) const {
        LeviCivita r(ctx_);
        for (const auto& t : terms_) {
            Exponent e = t.exponent + q;
            if (e > ctx_.q_max) break;
            r.terms_.push_back({std::move(e), t.coeff});
        }
        return r;
    }

    /// Terms with exponent strictly below q (q = 0 gives the infinite part).
    LeviCivita part_below(const Exponent& q) const {
        LeviCivita r(ctx_);
        for (const auto& t : terms_) {
            if (t.exponent >= q) break;
            r.terms_.push_back(t);
        }
        return r;
    }
    /// Terms with exponent strictly above q (q = 0 gives the infinitesimal part).
    LeviCivita part_above(const Exponent& q) const {
        LeviCivita r(ctx_);
        for (const auto& t : terms_)
            if (t.exponent > q) r.terms_.push_back(t);
        return r;
    }

    template <class F>
    LeviCivita map_coefficients(F&& f) const {
        LeviCivita r(ctx_);
        for (const auto& t : terms_) {
            Scalar c = f(t.coeff);
            if (c != Scalar(0)) r.terms_.push_back({t.exponent, c});
        }
        r.prune();
        return r;
    }

    LeviCivita operator-() const {
        LeviCivita r = *this;
        for (auto& t : r.terms_) t.coeff = -t.coeff;
        return r;
    }

    LeviCivita& operator+=(const LeviCivita& o) { return *this = add(*this, o, Scalar(1)); }
    LeviCivita& operator-=(const LeviCivita& o) { return *this = add(*this, o, Scalar(-1)); }
    LeviCivita& operator*=(const LeviCivita& o) { return *this = multiply(*this, o); }
    LeviCivita& operator*=(Scalar c) {
        if (c == Scalar(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& t : terms_) t.coeff *= c;
        prune();
        return *this;
    }
    LeviCivita& operator/=(Scalar c) {
        if (c == Scalar(0)) throw DivisionByZero("division of a series by scalar zero");
        for (auto& t : terms_) t.coeff /= c;
        prune();
        return *this;
    }
    LeviCivita& operator+=(Scalar c) { return *this += LeviCivita(c, ctx_); }
    LeviCivita& operator-=(Scalar c) { return *this -= LeviCivita(c, ctx_); }

    friend LeviCivita operator+(LeviCivita a, const LeviCivita& b) { return a += b; }
    friend LeviCivita operator-(LeviCivita a, const LeviCivita& b) { return a -= b; }
    friend LeviCivita operator*(const LeviCivita& a, const LeviCivita& b) { return multiply(a, b); }
    friend LeviCivita operator*(LeviCivita a, Scalar c) { return a *= c; }
    friend LeviCivita operator*(Scalar c, LeviCivita a) { return a *= c; }
    friend LeviCivita operator/(LeviCivita a, Scalar c) { return a /= c; }
    friend LeviCivita operator+(LeviCivita a, Scalar c) { return a += c; }
    friend LeviCivita operator+(Scalar c, LeviCivita a) { return a += c; }
    friend LeviCivita operator-(LeviCivita a, Scalar c) { return a -= c; }
    friend LeviCivita operator-(Scalar c, const LeviCivita& a) { return LeviCivita(c, a.ctx_) - a; }

    /// Exact structural equality (same terms, same context).
    friend bool operator==(const LeviCivita& a, const LeviCivita& b) {
        return a.ctx_ == b.ctx_ && a.terms_ == b.terms_;
    }

private:
    static void check_context(const LeviCivita& a, const LeviCivita& b) {
        if (!(a.ctx_ == b.ctx_)) throw ContextMismatch("operands use different truncation contexts");
    }

    static LeviCivita add(const LeviCivita& a, const LeviCivita& b, Scalar sign) {
        check_context(a, b);
        LeviCivita r(a.ctx_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].exponent < b.terms_[j].exponent)) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i == a.terms_.size() || b.terms_[j].exponent < a.terms_[i].exponent) {
                r.terms_.push_back({b.terms_[j].exponent, sign * b.terms_[j].coeff});
                ++j;
            } else {
                Scalar c = a.terms_[i].coeff + sign * b.terms_[j].coeff;
                if (c != Scalar(0)) r.terms_.push_back({a.terms_[i].exponent, c});
                ++i;
                ++j;
            }
        }
        r.prune();
        return r;
    }

    static LeviCivita multiply(const LeviCivita& a, const LeviCivita& b) {
        check_context(a, b);
        LeviCivita r(a.ctx_);
        if (a.is_zero() || b.is_zero()) return r;
        std::map<Exponent, Scalar> acc;
        for (const auto& ta : a.terms_) {
            for (const auto& tb : b.terms_) {
                Exponent e = ta.exponent + tb.exponent;
                if (e > a.ctx_.q_max) break;
                acc[e] += ta.coeff * tb.coeff;
            }
        }
        for (auto& [e, c] : acc) {
            if (c != Scalar(0)) r.terms_.push_back({e, c});
        }
        r.prune();
        return r;
    }

    void prune() {
        const double floor = ctx_.coeff_floor;
        std::erase_if(terms_, [floor](const Term& t) {
            return t.coeff == Scalar(0) || detail::magnitude(t.coeff) < floor;
        });
    }

    TruncationContext ctx_;
    std::vector<Term> terms_;
};

using LCReal = LeviCivita<double>;
using LCComplex = LeviCivita<std::complex<double>>;

inline LCComplex complexify(const LCReal& x) { return LCComplex::convert(x); }
inline LCComplex make_complex(const LCReal& re, const LCReal& im) {
    return complexify(re) + complexify(im) * std::complex<double>(0.0, 1.0);
}
inline LCReal real_part(const LCComplex& z) {
    std::vector<LCReal::Term> t;
    for (const auto& term : z.terms()) t.push_back({term.exponent, term.coeff.real()});
    return LCReal::from_terms(std::move(t), z.context());
}
inline LCReal imag_part(const LCComplex& z) {
    std::vector<LCReal::Term> t;
    for (const auto& term : z.terms()) t.push_back({term.exponent, term.coeff.imag()});
    return LCReal::from_terms(std::move(t), z.context());
}
inline LCComplex conj(const LCComplex& z) {
    return z.map_coefficients([](const std::complex<double>& c) { return std::conj(c); });
}

/// Integer power by repeated squaring; negative powers go through invert().
template <class Scalar>
LeviCivita<Scalar> pow(const LeviCivita<Scalar>& x, unsigned n) {
    LeviCivita<Scalar> result(Scalar(1), x.context());
    LeviCivita<Scalar> base = x;
    while (n) {
        if (n & 1U) result *= base;
        n >>= 1U;
        if (n) base *= base;
    }
    return result;
}

/// Maximum coefficient magnitude, 0 for the zero series.
template <class Scalar>
double max_abs_coefficient(const LeviCivita<Scalar>& x) {
    double m = 0.0;
    for (const auto& t : x.terms()) m = std::max(m, detail::magnitude(t.coeff));
    return m;
}

/// True when every coefficient has magnitude <= tol.
template <class Scalar>
bool negligible(const LeviCivita<Scalar>& x, double tol) {
    return max_abs_coefficient(x) <= tol;
}

std::string format_scalar(double x);
std::string format_scalar(const std::complex<double>& z);

/// Human-readable form such as "1 + 2*s - 3*s^(1/2)".
std::string to_string(const LCReal& x);
std::string to_string(const LCComplex& x);

}  // namespace lcgf
