#pragma once

// Order, valuation, topology and analytic operations on truncated
// Levi-Civita numbers.

#include "lcgf/levi_civita.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <complex>
#include <concepts>
#include <vector>

namespace lcgf {

enum class Ordering { less, equal, greater };
enum class Magnitude { infinitesimal, finite, infinite };

const char* to_string(Ordering o);
const char* to_string(Magnitude m);

/// Leading exponent; infinite for zero. For complex values this is v(|z|).
template <class Scalar>
Valuation valuation(const LeviCivita<Scalar>& x) {
    if (x.is_zero()) return Valuation::infinity();
    return Valuation(x.leading_exponent());
}

/// Sign of the leading coefficient (-1, 0, 1).
int sign(const LCReal& x);
Ordering compare(const LCReal& a, const LCReal& b);
LCReal abs(const LCReal& x);

/// e^{-v(x)}, the sharp norm; 0 for zero.
template <class Scalar>
double ultra_norm(const LeviCivita<Scalar>& x) {
    if (x.is_zero()) return 0.0;
    return std::exp(-x.leading_exponent().to_double());
}

/// Sharp distance e^{-v(x-y)}.
template <class Scalar>
double ultra_distance(const LeviCivita<Scalar>& x, const LeviCivita<Scalar>& y) {
    return ultra_norm(x - y);
}

template <class Scalar>
Magnitude classify(const LeviCivita<Scalar>& x) {
    if (x.is_zero()) return Magnitude::infinitesimal;
    const int s = x.leading_exponent().sign();
    if (s > 0) return Magnitude::infinitesimal;
    if (s < 0) return Magnitude::infinite;
    return Magnitude::finite;
}

/// The exponent-0 coefficient of a finite value.
template <class Scalar>
Scalar standard_part(const LeviCivita<Scalar>& x) {
    if (classify(x) == Magnitude::infinite) throw NotFinite("standard part of an infinite value");
    return x.coefficient(Exponent(0));
}

/// x - st(x) for finite x.
template <class Scalar>
LeviCivita<Scalar> infinitesimal_part(const LeviCivita<Scalar>& x) {
    if (classify(x) == Magnitude::infinite) throw NotFinite("infinitesimal part of an infinite value");
    return x.part_above(Exponent(0));
}

/// s^q for rational q.
LCReal exp_scale(const Exponent& q, const TruncationContext& ctx);

namespace detail {

// Factor x = c * s^q * (1 + u) with v(u) > 0, u computed under a widened
// context so that later series in u retain everything that survives the
// final shift by a multiple of q.
template <class Scalar>
struct LeadingFactorization {
    Scalar c;
    Exponent q;
    LeviCivita<Scalar> u;
    TruncationContext working;
};

template <class Scalar>
LeadingFactorization<Scalar> factor_leading(const LeviCivita<Scalar>& x, const Exponent& result_shift_per_q) {
    const Scalar c = x.leading_coefficient();
    const Exponent q = x.leading_exponent();
    // result = c' s^{q * k} * series(u); the series must be kept up to q_max - q*k.
    Exponent needed = x.context().q_max - q * result_shift_per_q;
    TruncationContext working = x.context();
    if (needed > working.q_max) working.q_max = needed;
    LeviCivita<Scalar> normalized = x.with_context(working).shifted(-q);
    normalized /= c;
    normalized -= Scalar(1);
    return {c, q, normalized, working};
}

}  // namespace detail

/// (1 + u)^alpha for v(u) > 0, coefficient by coefficient. With D = s d/ds,
/// (1 + u) Dg = alpha g Du gives
///   g_e = (1/e) sum_j u_j g_{e - d_j} (alpha d_j - (e - d_j)),
/// which avoids forming large powers of u and cancelling them again.
template <class Scalar>
LeviCivita<Scalar> binomial_series(const LeviCivita<Scalar>& u, double alpha, const TruncationContext& working) {
    const Exponent& limit = working.q_max;
    // every exponent reachable as a sum of exponents of u
    std::set<Exponent> reachable{Exponent(0)};
    std::vector<Exponent> frontier{Exponent(0)};
    while (!frontier.empty()) {
        std::vector<Exponent> next;
        for (const auto& base : frontier) {
            for (const auto& t : u.terms()) {
                Exponent e = base + t.exponent;
                if (e <= limit && reachable.insert(e).second) next.push_back(std::move(e));
            }
        }
        frontier = std::move(next);
    }
    const std::vector<Exponent> lattice(reachable.begin(), reachable.end());

    std::map<Exponent, Scalar> g;
    g[Exponent(0)] = Scalar(1);
    for (std::size_t i = 1; i < lattice.size(); ++i) {
        const Exponent& e = lattice[i];
        Scalar acc(0);
        for (const auto& t : u.terms()) {
            if (t.exponent > e) break;
            auto it = g.find(e - t.exponent);
            if (it == g.end()) continue;
            const double weight = (alpha * t.exponent.to_double() - (e - t.exponent).to_double());
            acc += t.coeff * it->second * weight;
        }
        g[e] = acc / Scalar(e.to_double());
    }
    std::vector<typename LeviCivita<Scalar>::Term> terms;
    for (auto& [e, c] : g) terms.push_back({e, c});
    return LeviCivita<Scalar>::from_terms(std::move(terms), working);
}

/// Multiplicative inverse: c^{-1} s^{-q} (1 + u)^{-1}.
template <class Scalar>
LeviCivita<Scalar> invert(const LeviCivita<Scalar>& x) {
    if (x.is_zero()) throw DivisionByZero("inverse of zero");
    auto f = detail::factor_leading(x, Exponent(-1));
    LeviCivita<Scalar> sum = binomial_series(f.u, -1.0, f.working);
    sum /= f.c;
    return sum.shifted(-f.q).with_context(x.context());
}

template <class Scalar>
LeviCivita<Scalar> operator/(const LeviCivita<Scalar>& a, const LeviCivita<Scalar>& b) {
    return a * invert(b);
}

template <class Scalar>
LeviCivita<Scalar> operator/(Scalar c, const LeviCivita<Scalar>& b) {
    return invert(b) * c;
}

/// Signed integer power; negative exponents invert first.
template <class Scalar>
LeviCivita<Scalar> pow(const LeviCivita<Scalar>& x, int n) {
    if (n >= 0) return pow(x, static_cast<unsigned>(n));
    return pow(invert(x), static_cast<unsigned>(-n));
}

/// Real n-th root via c^{1/n} s^{q/n} sum binom(1/n, k) u^k.
LCReal nth_root(const LCReal& x, int n);

/// Concept for Taylor oracles: jet(x0, order) returns f^{(k)}(x0)/k!, k = 0..order.
template <class F>
concept JetOracle = requires(const F& f, double x0, int order) {
    { f(x0, order) } -> std::convertible_to<std::vector<std::complex<double>>>;
};

/// Number of Taylor terms needed so that h^k stays within the window.
int taylor_depth(const Valuation& v_h, const TruncationContext& ctx);

/// Evaluates sum_k c_k h^k with Horner's scheme.
LCComplex horner(const std::vector<std::complex<double>>& coeffs, const LCComplex& h);

/// e^x for finite x: exp of the standard part times the series of the infinitesimal part.
LCComplex exp(const LCComplex& x);

/// Taylor lift of a smooth function to a monadic point: sum_k f^{(k)}(st x) h^k / k!.
template <JetOracle F>
LCComplex lift_smooth(const F& jet, const LCComplex& x) {
    if (classify(x) == Magnitude::infinite) throw NotFinite("lift_smooth at an infinite point");
    const std::complex<double> st = standard_part(x);
    if (st.imag() != 0.0) throw DomainError("lift_smooth needs a real standard part");
    const LCComplex h = infinitesimal_part(x);
    const int depth = taylor_depth(valuation(h), x.context());
    std::vector<std::complex<double>> coeffs = jet(st.real(), depth);
    coeffs.resize(static_cast<std::size_t>(depth) + 1);
    return horner(coeffs, h);
}

template <JetOracle F>
LCComplex lift_smooth(const F& jet, const LCReal& x) {
    return lift_smooth(jet, complexify(x));
}

}  // namespace lcgf
