#include "lcgf/lc_functions.hpp"

#include <charconv>
#include <sstream>

namespace lcgf {

std::string format_scalar(double x) {
    if (x == 0.0) return "0";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string format_scalar(const std::complex<double>& z) {
    if (z.imag() == 0.0) return format_scalar(z.real());
    if (z.real() == 0.0) {
        if (z.imag() == 1.0) return "i";
        if (z.imag() == -1.0) return "-i";
        return format_scalar(z.imag()) + "*i";
    }
    std::string im = z.imag() == 1.0 || z.imag() == -1.0 ? "i" : format_scalar(std::abs(z.imag())) + "*i";
    return "(" + format_scalar(z.real()) + (z.imag() < 0 ? " - " : " + ") + im + ")";
}

namespace {

std::string monomial_text(const Exponent& q) {
    if (q == Exponent(1)) return "s";
    if (q.is_integer() && q.sign() > 0) return "s^" + q.to_string();
    return "s^(" + q.to_string() + ")";
}

template <class Scalar>
std::string series_text(const LeviCivita<Scalar>& x) {
    if (x.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : x.terms()) {
        Scalar c = t.coeff;
        bool negative = false;
        if constexpr (std::is_same_v<Scalar, double>) {
            negative = c < 0;
        } else {
            negative = c.imag() == 0.0 && c.real() < 0;
        }
        if (negative) c = -c;
        if (first) {
            if (negative) os << "-";
        } else {
            os << (negative ? " - " : " + ");
        }
        first = false;
        if (t.exponent.is_zero()) {
            os << format_scalar(c);
        } else if (c == Scalar(1)) {
            os << monomial_text(t.exponent);
        } else {
            os << format_scalar(c) << "*" << monomial_text(t.exponent);
        }
    }
    return os.str();
}

}  // namespace

std::string to_string(const LCReal& x) { return series_text(x); }
std::string to_string(const LCComplex& x) { return series_text(x); }

const char* to_string(Ordering o) {
    switch (o) {
        case Ordering::less: return "less";
        case Ordering::equal: return "equal";
        case Ordering::greater: return "greater";
    }
    return "?";
}

const char* to_string(Magnitude m) {
    switch (m) {
        case Magnitude::infinitesimal: return "infinitesimal";
        case Magnitude::finite: return "finite-noninfinitesimal";
        case Magnitude::infinite: return "infinite";
    }
    return "?";
}

int sign(const LCReal& x) {
    if (x.is_zero()) return 0;
    return x.leading_coefficient() > 0 ? 1 : -1;
}

Ordering compare(const LCReal& a, const LCReal& b) {
    const int sg = sign(a - b);
    if (sg < 0) return Ordering::less;
    if (sg > 0) return Ordering::greater;
    return Ordering::equal;
}

LCReal abs(const LCReal& x) { return sign(x) < 0 ? -x : x; }

LCReal exp_scale(const Exponent& q, const TruncationContext& ctx) {
    return LCReal::monomial(1.0, q, ctx);
}

LCReal nth_root(const LCReal& x, int n) {
    if (n <= 0) throw DomainError("root order must be positive");
    if (x.is_zero()) return x;
    const double c = x.leading_coefficient();
    if (c < 0 && n % 2 == 0) throw DomainError("even root of a negative value");
    if (n == 1) return x;
    const Exponent step = Exponent(1, n);
    auto f = detail::factor_leading(x, step);
    const double root_c = c < 0 ? -std::pow(-c, 1.0 / n) : std::pow(c, 1.0 / n);

    LCReal sum = binomial_series(f.u, 1.0 / n, f.working);
    sum *= root_c;
    return sum.shifted(f.q * step).with_context(x.context());
}

int taylor_depth(const Valuation& v_h, const TruncationContext& ctx) {
    if (v_h.is_infinite()) return 0;
    const Exponent& v = v_h.exponent();
    if (v.sign() <= 0) throw DomainError("Taylor displacement must be infinitesimal");
    // largest k with k * v <= q_max
    Exponent ratio = ctx.q_max / v;
    auto num = boost::multiprecision::numerator(ratio.rational());
    auto den = boost::multiprecision::denominator(ratio.rational());
    boost::multiprecision::cpp_int k = num / den;
    return k.convert_to<int>();
}

LCComplex horner(const std::vector<std::complex<double>>& coeffs, const LCComplex& h) {
    LCComplex acc(h.context());
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * h;
        acc += *it;
    }
    return acc;
}

LCComplex exp(const LCComplex& x) {
    if (classify(x) == Magnitude::infinite) throw NotFinite("exp of an infinite value");
    const LCComplex h = infinitesimal_part(x);
    const int depth = taylor_depth(valuation(h), x.context());
    std::vector<std::complex<double>> c(static_cast<std::size_t>(depth) + 1);
    std::complex<double> term = std::exp(standard_part(x));
    for (int k = 0; k <= depth; ++k) {
        c[static_cast<std::size_t>(k)] = term;
        term /= k + 1;
    }
    return horner(c, h);
}

}  // namespace lcgf
