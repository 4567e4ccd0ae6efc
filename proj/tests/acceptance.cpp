// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "generators.hpp"

#include "lcgf/genfunc.hpp"
#include "lcgf/laplace.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace lcgf;

namespace {

const TruncationContext ctx{};
const Complex I(0.0, 1.0);

const GfSettings& settings() {
    static const GfSettings g{};
    return g;
}

LCReal scale() { return LCReal::scale(ctx); }
LCComplex lc(Complex c) { return LCComplex(c, ctx); }

GenFunction delta(double c = 0.0, int k = 0) { return embed_delta(c, k, settings()); }
GenFunction delta2s(int k = 0) { return translate(delta(0.0, k), scale() * 2.0); }

std::vector<TestFunction> battery32() { return make_battery({0.0}, settings().domain, BatteryOptions{32, 0, 1e-8}); }

/// Independent half-line / interval integral of tau.
double tanh_sinh(const std::function<double(double)>& f, double a, double b) {
    boost::math::quadrature::tanh_sinh<double> q;
    return q.integrate(f, a, b, 1e-14);
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (id < 10 ? " " : "") << id << "  " << name << "  -- " << o.detail
              << " (" << fmt(secs) << " s)\n";
}

// ------------------------------------------------------------------ 1-3

Outcome valuation_laws() {
    std::mt19937_64 rng(1);
    int bad = 0;
    for (int i = 0; i < 10000; ++i) {
        const LCReal x = testing::random_lc(rng, ctx, -3, 3);
        const LCReal y = testing::random_lc(rng, ctx, -3, 3);
        if (!(valuation(x * y) == valuation(x) + valuation(y))) ++bad;
        if (valuation(x + y) < std::min(valuation(x), valuation(y))) ++bad;
    }
    return {bad == 0, "10000 pairs, " + std::to_string(bad) + " violations"};
}

Outcome ultrametric() {
    std::mt19937_64 rng(2);
    int bad = 0;
    for (int i = 0; i < 10000; ++i) {
        const LCReal x = testing::random_lc(rng, ctx, -3, 6);
        const LCReal y = testing::random_lc(rng, ctx, -3, 6);
        const LCReal z = testing::random_lc(rng, ctx, -3, 6);
        if (ultra_distance(x, z) > std::max(ultra_distance(x, y), ultra_distance(y, z))) ++bad;
        if (valuation(x - z) < std::min(valuation(x - y), valuation(y - z))) ++bad;
    }
    return {bad == 0, "10000 triples, " + std::to_string(bad) + " violations"};
}

/// Largest coefficient of the residual at exponents <= limit, relative to the input.
LCReal abs_coefficients(const LCReal& x) {
    std::vector<LCReal::Term> terms;
    for (const auto& t : x.terms()) terms.push_back({t.exponent, std::abs(t.coeff)});
    return LCReal::from_terms(std::move(terms), x.context());
}

/// Largest residual coefficient at exponents <= limit, measured against the rounding
/// scale of that coefficient: the products |r_i||r_j| that were summed into it, or |a_q|.
double residual_below(const LCReal& residual, const Exponent& limit, const LCReal& r, const LCReal& a) {
    const LCReal scale = abs_coefficients(r) * abs_coefficients(r);
    double worst = 0.0;
    for (const auto& t : residual.terms()) {
        if (t.exponent > limit) continue;
        const double ref = std::max(std::abs(scale.coefficient(t.exponent)), std::abs(a.coefficient(t.exponent)));
        worst = std::max(worst, std::abs(t.coeff) / ref);
    }
    return worst;
}

Outcome root_round_trip() {
    // A root truncated at q_max fixes its square only through q_max + v(a)/2, so for
    // infinite inputs the root is taken with -v(a)/2 guard orders before squaring.
    // Root coefficients grow geometrically, so the square is a sum of large cancelling
    // products; a residual coefficient counts only above 1e-12 of their magnitude.
    std::mt19937_64 rng(3);
    int bad_guarded = 0, bad_plain = 0, infinite = 0;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const LCReal a = testing::random_positive_lc(rng, ctx, -3, 3);
        const Exponent v = a.leading_exponent();
        const Exponent guard = v.sign() < 0 ? -v / Exponent(2) : Exponent(0);
        infinite += v.sign() < 0;

        const TruncationContext wide(ctx.q_max + guard);
        const LCReal r = nth_root(a.with_context(wide), 2);
        const double g = residual_below((r * r).with_context(ctx) - a, ctx.q_max, r, a);
        worst = std::max(worst, g);
        if (g > 1e-12) ++bad_guarded;

        const LCReal p = nth_root(a, 2);
        if (residual_below(p * p - a, ctx.q_max - guard, p, a) > 1e-12) ++bad_plain;
    }
    return {bad_guarded == 0 && bad_plain == 0,
            "1000 values (" + std::to_string(infinite) + " infinite), " + std::to_string(bad_guarded) +
                " residuals with valuation <= 6, worst relative rounding " + fmt(worst) +
                "; unguarded residual valuation > 6 + v/2: " + std::to_string(1000 - bad_plain) + "/1000"};
}

// ------------------------------------------------------------------ 4-6

Outcome pairing_exactness() {
    const GenFunction d = delta2s();
    double worst = 0.0;
    for (const auto& tau : battery32()) {
        const LCComplex p = pairing(d, tau);
        // Taylor polynomial of tau at 0, evaluated at 2s
        const auto jet = tau.fn.jet(0.0, 6).coefficients();
        std::vector<LCComplex::Term> terms;
        double pow2 = 1.0;
        for (int k = 0; k <= 6; ++k, pow2 *= 2.0) terms.push_back({Exponent(k), jet[k] * pow2});
        const LCComplex diff = p - LCComplex::from_terms(terms, ctx);
        worst = std::max(worst, max_abs_coefficient(diff));
    }
    return {worst <= 1e-8, "32 test functions, max coefficient difference " + fmt(worst)};
}

Outcome heaviside_products() {
    const auto& st = settings();
    const GenFunction H = embed_heaviside(0.0, st);
    const GenFunction Hd = H * delta();
    double worst_hd = 0.0, worst_hn = 0.0;
    bool no_infinite = true;
    for (const auto& tau : battery32()) {
        const LCComplex p = pairing(Hd, tau);
        if (!p.is_zero() && p.leading_exponent() < Exponent(0)) no_infinite = false;
        const double want = tau.fn(0.0).real() / 2.0;
        worst_hd = std::max(worst_hd, std::abs(p.coefficient(0) - want));

        const double half_line = tau.hi <= 0.0 ? 0.0 : tanh_sinh([&](double x) { return tau.fn(x).real(); }, std::max(0.0, tau.lo), tau.hi);
        GenFunction Hn = H;
        for (int n = 2; n <= 3; ++n) {
            Hn = Hn * H;
            const LCComplex q = pairing(Hn, tau);
            if (!q.is_zero() && q.leading_exponent() < Exponent(0)) no_infinite = false;
            worst_hn = std::max(worst_hn, std::abs(q.coefficient(0) - half_line));
        }
    }
    const bool ok = no_infinite && worst_hd <= 1e-8 && worst_hn <= 1e-8;
    return {ok, "H*delta vs tau(0)/2: " + fmt(worst_hd) + ", H^2 and H^3 vs integral over (0, inf): " + fmt(worst_hn)};
}

Outcome delta_norm() {
    const LCComplex I2 = integral_compact(delta() * delta());
    const Mollifier& phi = settings().mollifier;
    const double l2 = tanh_sinh([&](double x) { return phi(x) * phi(x); }, -1.0, 1.0);
    const double golden = 1.4036359564453881119;  // mpmath, 50 digits, moment order 2
    const bool val = valuation(I2) == Valuation(Exponent(-1));
    const double lead = I2.is_zero() ? 0.0 : I2.leading_coefficient().real();
    const LCReal root = nth_root(real_part(I2), 2);
    const bool root_ok = !root.is_zero() && classify(root) == Magnitude::infinite;
    const bool ok = val && std::abs(lead - l2) <= 1e-8 && std::abs(l2 - golden) <= 1e-12 && root_ok;
    return {ok, "valuation " + valuation(I2).to_string() + ", leading " + format_scalar(lead) + " vs quadrature " +
                    format_scalar(l2) + ", sqrt = " + to_string(root)};
}

// ------------------------------------------------------------------ 7-11

LCComplex pairing_transform(const GenFunction& psi, const LCComplex& z) {
    return integral_compact(psi * specialize_parameter(exponential_family(), z, psi.settings()));
}

Outcome laplace_identity() {
    const LaplaceImage F = transform(generalized(delta2s()));
    bool symbolic = F.terms().size() == 1;
    if (symbolic) {
        const ImageTerm& t = F.terms()[0];
        symbolic = t.poles.empty() && t.numerator.size() == 1 && t.numerator[0] == lc(1.0) && t.shift == scale() * 2.0;
    }
    double worst = 0.0, worst_closed = 0.0;
    for (Complex z0 : {Complex(1.0), Complex(2.0), Complex(1.0, 1.0)}) {
        const LCComplex z = lc(z0);
        const LCComplex image = F(z);
        const LCComplex integral = pairing_transform(delta2s(), z);
        Complex closed(1.0);
        for (int k = 0; k <= 4; ++k) {
            worst = std::max(worst, std::abs(image.coefficient(k) - integral.coefficient(k)));
            worst_closed = std::max(worst_closed, std::abs(image.coefficient(k) - closed));
            closed *= -2.0 * z0 / double(k + 1);
        }
    }
    const bool ok = symbolic && worst <= 1e-8 && worst_closed <= 1e-12;
    return {ok, std::string("image ") + to_string(F) + (symbolic ? " (term-level match)" : " (term mismatch)") +
                    ", vs pairing integral through s^4: " + fmt(worst)};
}

Outcome ivp_resolution() {
    IVPSpec p;
    p.a2 = 1.0;
    p.a0 = 1.0;
    p.rhs = generalized(delta2s());
    p.y0 = lc(0.0);
    p.yp0 = lc(1.0);
    const IVPResult a = solve_ivp(p, BatteryOptions{32, 0, 1e-8});
    const bool exact_values = a.initial_checks.size() == 2 && a.initial_checks[0].discrepancy.is_zero() &&
                              a.initial_checks[1].discrepancy.is_zero();
    const bool a_ok = to_string(a.solution) == "sin(t) + H(t - 2*s)*sin(t - 2*s)" && exact_values && a.verified();
    p.yp0 = lc(0.0);
    const IVPResult b = solve_ivp(p, BatteryOptions{32, 0, 1e-8});
    const bool b_ok = to_string(b.solution) == "H(t - 2*s)*sin(t - 2*s)" && b.verified();
    return {a_ok && b_ok, "y = " + to_string(a.solution) + " [weak check " + to_string(a.equation.verdict) +
                              "]; with y'(0) = 0: y = " + to_string(b.solution) + " [weak check " +
                              to_string(b.equation.verdict) + "]"};
}

Outcome contradiction() {
    IVPSpec p;
    p.a2 = 1.0;
    p.a0 = 1.0;
    p.rhs = generalized(delta());
    p.y0 = lc(0.0);
    p.yp0 = lc(1.0);
    auto violated = [](const ContradictionReport& r) {
        return r.checks.size() == 2 && r.checks[1].name == "y'(0+)" && r.checks[1].obtained == lc(2.0) &&
               r.checks[1].expected == lc(1.0) && r.checks[1].discrepancy == lc(1.0) &&
               r.verdict == AuditVerdict::inconsistent && to_string(r.solution) == "2*sin(t)";
    };
    bool ok = violated(audit_classical(p, Ruleset::naive));
    for (double eps : {0.1, 0.01}) {
        p.rhs = generalized(delta(eps));
        ok = ok && violated(audit_classical(p, Ruleset::engineer));
    }
    return {ok, "naive and engineer (eps 0.1, 0.01): y = 2 sin t, y'(0+) expected 1 obtained 2, discrepancy 1"};
}

Outcome domain_gate() {
    bool rejected = false;
    try {
        transform(generalized(delta()));
    } catch (const DomainError&) {
        rejected = true;
    }
    bool accepted = true;
    try {
        transform(generalized(delta2s()));
    } catch (const std::exception&) {
        accepted = false;
    }
    return {rejected && accepted, std::string("delta ") + (rejected ? "rejected" : "accepted") + ", delta(t - 2s) " +
                                      (accepted ? "accepted" : "rejected")};
}

LaplaceImage over_z2_plus_1(Complex num, const LCReal& shift) {
    return LaplaceImage::from_terms({{{lc(num)}, {{I, 1}, {-I, 1}}, shift}}, ctx, 0.0);
}

Outcome lemma_catalog() {
    const GfSettings& g = settings();
    const LCReal s = scale();
    const auto sin_t = classical_sin(1.0, g);
    const auto cos_t = classical_cos(1.0, g);
    const LCComplex cos2s = exp(complexify(s * 2.0) * I) * Complex(0.5) + exp(complexify(s * -2.0) * I) * Complex(0.5);
    const GenFunction cos_fn = embed_smooth(SmoothFn::cos(SmoothFn::variable()), g);
    struct Case {
        LaplaceDomainElement f, g;
    };
    const std::vector<Case> cases{
        {generalized(delta2s()), generalized(delta2s())},
        {sin_t, lc(2.0) * sin_t},
        {delayed(sin_t, s * 2.0), inverse_transform(over_z2_plus_1(1.0, s * 2.0), g)},
        {generalized(delta2s()), generalized(translate(delta(), s * 3.0))},
        {sin_t + cos_t, inverse_transform(LaplaceImage::from_terms({{{lc(1.0), lc(1.0)}, {{I, 1}, {-I, 1}}, LCReal(ctx)}}, ctx, 0.0), g)},
        {generalized(delta2s(1)), generalized(delta2s())},
        {exp_poly(lc(1.0), 0, -1.0, g), exp_poly(lc(1.0), 1, -1.0, g)},
        {generalized(cos_fn * delta2s()), cos2s * generalized(delta2s())},
        {generalized(delta2s() + delta2s()), lc(2.0) * generalized(delta2s())},
        {complexify(s * 2.0) * generalized(delta2s()), LaplaceDomainElement(g)},
    };
    int agree = 0, equal = 0;
    for (const auto& c : cases) {
        const Lemma62Check r = check_lemma_6_2(c.f, c.g);
        agree += r.agree;
        equal += r.transforms_equal;
    }
    return {agree == 10, std::to_string(agree) + "/10 pairs agree (" + std::to_string(equal) + " equal, " +
                             std::to_string(10 - equal) + " unequal)"};
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion(1, "valuation laws", valuation_laws);
    criterion(2, "ultrametric inequality", ultrametric);
    criterion(3, "square root round trip", root_round_trip);
    criterion(4, "pairing with delta(t - 2s)", pairing_exactness);
    criterion(5, "H*delta ~ delta/2, H^n ~ H", heaviside_products);
    criterion(6, "L2 norm of delta", delta_norm);
    criterion(7, "transform of delta(t - 2s)", laplace_identity);
    criterion(8, "initial value problem", ivp_resolution);
    criterion(9, "classical contradiction", contradiction);
    criterion(10, "domain gate", domain_gate);
    criterion(11, "weak equality vs transform equality", lemma_catalog);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << " in "
              << fmt(secs) << " s\n";
    return failures == 0 ? 0 : 1;
}
