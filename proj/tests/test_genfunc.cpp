#include "doctest.h"

#include "lcgf/errors.hpp"
#include "lcgf/genfunc.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

using namespace lcgf;

namespace {

const TruncationContext ctx{};
const LCReal s = LCReal::scale(ctx);

namespace golden {
constexpr double phi2_at_0 = 1.5688387740067776948;
constexpr double phi2_l2_squared = 1.4036359564453881119;
}  // namespace golden

GfSettings settings() {
    static const GfSettings g{};
    return g;
}

TestFunction tau0() { return TestFunction::polynomial_bump({1.0, 0.5, -0.3}, 0.2, 1.5); }

/// Derivatives of a real function by a seven-point stencil applied repeatedly.
double fd(const std::function<double(double)>& f, double x, int k, double h = 1e-2) {
    if (k == 0) return f(x);
    auto g = [&](double y) { return fd(f, y, k - 1, h); };
    return (-g(x - 3 * h) + 9 * g(x - 2 * h) - 45 * g(x - h) + 45 * g(x + h) - 9 * g(x + 2 * h) + g(x + 3 * h)) /
           (60 * h);
}

std::function<double(double)> real_fn(const TestFunction& t) {
    return [t](double x) { return t.fn(x).real(); };
}

double coeff(const LCComplex& x, int q) { return x.coefficient(Exponent(q)).real(); }

double max_gap(const LCComplex& a, const LCComplex& b) { return max_abs_coefficient(a - b); }

GenFunction delta(double c = 0.0, int k = 0) { return embed_delta(c, k, settings()); }
GenFunction heaviside(double c = 0.0) { return embed_heaviside(c, settings()); }
GenFunction smooth(const SmoothFn& f) { return embed_smooth(f, settings()); }

const SmoothFn t = SmoothFn::variable();
const SmoothFn sin_t = SmoothFn::sin(t);
const SmoothFn cos_t = SmoothFn::cos(t);

std::vector<GenFunction> catalog() {
    return {delta(),
            delta(0.0, 1),
            heaviside(),
            translate(delta(), s * 2.0),
            heaviside() * smooth(sin_t),
            heaviside() * delta(),
            delta() * delta(),
            heaviside() * heaviside(),
            smooth(cos_t) * translate(delta(), s),
            translate(heaviside(), s * 2.0) * translate(smooth(sin_t), s * 2.0),
            smooth(SmoothFn::bump(0.3, 0.8)) + delta(0.4, 2)};
}

}  // namespace

TEST_CASE("smooth embedding evaluates pointwise and lifts to monads") {
    CHECK(evaluate_at(smooth(sin_t), LCReal(ctx)).is_zero());
    const LCComplex e = evaluate_at(smooth(SmoothFn::exp(t)), s);
    for (int k = 0; k <= 6; ++k) CHECK(coeff(e, k) == doctest::Approx(1.0 / std::tgamma(k + 1)).epsilon(1e-14));
    const SmoothFn f = SmoothFn::exp(t * SmoothFn::constant(-0.5));
    CHECK(weak_equal(smooth(f * sin_t), smooth(f) * smooth(sin_t)) == Verdict::yes);
}

TEST_CASE("delta pairings reproduce point evaluations") {
    const TestFunction tau = tau0();
    const auto f = real_fn(tau);
    const LCComplex p0 = pairing(delta(), tau);
    CHECK(p0.size() == 1);
    CHECK(coeff(p0, 0) == doctest::Approx(f(0.0)).epsilon(1e-14));
    CHECK(coeff(pairing(delta(0.0, 1), tau), 0) == doctest::Approx(-fd(f, 0.0, 1)).epsilon(1e-9));
    CHECK(coeff(pairing(delta(0.0, 2), tau), 0) == doctest::Approx(fd(f, 0.0, 2)).epsilon(1e-7));
    CHECK_THROWS_AS(embed_delta(3.0, 0, GfSettings{Mollifier::construct(2), ctx, RealInterval{0.0, 2.0}}), DomainError);
}

TEST_CASE("delta vanishes at distance s or more") {
    const GenFunction d = delta();
    for (const LCReal& x : {s, -s, s * 2.0, s * -3.0, LCReal(1.0, ctx), LCReal(-0.5, ctx) + s})
        CHECK(evaluate_at(d, x).is_zero());
    const LCComplex at0 = evaluate_at(d, LCReal(ctx));
    CHECK(at0.size() == 1);
    CHECK(at0.leading_exponent() == Exponent(-1));
    CHECK(coeff(at0, -1) == doctest::Approx(golden::phi2_at_0).epsilon(1e-13));
    const LCComplex v = evaluate_at(smooth(sin_t) + d, LCReal(std::numbers::pi, ctx));
    CHECK(max_abs_coefficient(v) < 1e-15);
}

TEST_CASE("Heaviside representative values") {
    const GenFunction h = heaviside();
    CHECK(evaluate_at(h, s * -2.0).is_zero());
    CHECK(evaluate_at(h, s * -1.0).is_zero());
    const LCComplex one = evaluate_at(h, s * 3.0);
    CHECK(one.size() == 1);
    CHECK(coeff(one, 0) == 1.0);
    CHECK(coeff(evaluate_at(h, LCReal(ctx)), 0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(coeff(evaluate_at(h, LCReal(-1.0, ctx)), 0) == 0.0);
}

TEST_CASE("derivatives") {
    CHECK(weak_equal(derive(heaviside()), delta()) == Verdict::yes);
    CHECK(derive(smooth(sin_t)).terms().size() == 1);
    CHECK(weak_equal(derive(smooth(sin_t)), smooth(cos_t)) == Verdict::yes);
    const TestFunction tau = tau0();
    CHECK(coeff(pairing(derive(delta()), tau), 0) == doctest::Approx(-fd(real_fn(tau), 0.0, 1)).epsilon(1e-9));
    CHECK_THROWS_AS(derive(delta(), -1), DomainError);
}

TEST_CASE("translation by infinitesimals") {
    const TestFunction tau = tau0();
    const auto f = real_fn(tau);
    const LCComplex p = pairing(translate(delta(), s * 2.0), tau);
    CHECK(coeff(p, 0) == doctest::Approx(f(0.0)).epsilon(1e-13));
    CHECK(coeff(p, 1) == doctest::Approx(2.0 * fd(f, 0.0, 1)).epsilon(1e-9));
    CHECK(coeff(p, 2) == doctest::Approx(2.0 * fd(f, 0.0, 2)).epsilon(1e-7));
    const GenFunction g = heaviside() * smooth(sin_t) + delta(0.5, 1);
    CHECK(factor_key(translate(g, LCReal(ctx)).terms()[0]) == factor_key(g.terms()[0]));
    CHECK(weak_equal(translate(g, LCReal(ctx)), g) == Verdict::yes);
    CHECK(weak_equal(translate(translate(delta(), s), s), translate(delta(), s * 2.0)) == Verdict::yes);
    CHECK_THROWS_AS(translate(delta(), s.shifted(Exponent(-2))), NotFinite);
}

TEST_CASE("products of singular atoms") {
    const TestFunction tau = tau0();
    const auto f = real_fn(tau);
    const LCComplex hd = pairing(heaviside() * delta(), tau);
    // integral of Phi Phi' over [-1, 1] is 1/2
    CHECK(coeff(hd, 0) == doctest::Approx(0.5 * f(0.0)).epsilon(1e-10));
    CHECK((delta(0.0) * delta(5.0)).is_zero());
    CHECK((heaviside(1.0) * delta(0.0)).is_zero());
    // a step to the left of the delta equals 1 on its support
    const GenFunction left = heaviside(0.0) * delta(1.0);
    CHECK(left.terms().size() == 1);
    CHECK(left.terms()[0].singular.size() == 1);
    const SmoothFn psi = SmoothFn::exp(t) + SmoothFn::constant(2.0) * cos_t;
    CHECK(weak_equal(smooth(psi) * delta(), 3.0 * delta()) == Verdict::yes);
    const LCComplex dd = pairing(delta() * delta(), tau);
    CHECK(dd.leading_exponent() == Exponent(-1));
    CHECK(coeff(dd, -1) == doctest::Approx(f(0.0) * golden::phi2_l2_squared).epsilon(1e-11));
}

TEST_CASE("Heaviside pairing is a half-line integral") {
    const TestFunction tau = tau0();
    boost::math::quadrature::tanh_sinh<double> ts;
    const double oracle = ts.integrate(real_fn(tau), 0.0, tau.hi);
    const LCComplex p = pairing(heaviside(), tau);
    CHECK(p.size() == 1);
    CHECK(coeff(p, 0) == doctest::Approx(oracle).epsilon(1e-12));
    // shifted step: the lost sliver is expanded in powers of s
    const LCComplex q = pairing(translate(heaviside(), s), tau);
    CHECK(coeff(q, 1) == doctest::Approx(-tau.fn(0.0).real()).epsilon(1e-12));
    CHECK(coeff(q, 2) == doctest::Approx(-0.5 * fd(real_fn(tau), 0.0, 1)).epsilon(1e-9));
}

TEST_CASE("integrals over compact supports") {
    const LCComplex one = integral_compact(translate(delta(), s * 2.0));
    CHECK(one.size() == 1);
    CHECK(coeff(one, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(max_abs_coefficient(integral_compact(delta(0.0, 1))) < 1e-14);
    const LCComplex sq = integral_compact(delta() * delta());
    CHECK(coeff(sq, -1) == doctest::Approx(golden::phi2_l2_squared).epsilon(1e-11));
    CHECK(max_abs_coefficient(sq - LCComplex::monomial(golden::phi2_l2_squared, Exponent(-1), ctx)) < 1e-10);
    CHECK_THROWS_AS(integral_compact(heaviside()), SupportError);
    CHECK_THROWS_AS(integral_compact(smooth(sin_t)), SupportError);
}

TEST_CASE("weak equality and association") {
    const GenFunction d = delta();
    CHECK(weak_equal(d, d) == Verdict::yes);
    CHECK(weak_equal(d, translate(d, s * 2.0)) == Verdict::no);
    const auto report = weak_equal_report(d, translate(d, s * 2.0));
    REQUIRE(report.normal_form.has_value());
    CHECK_FALSE(*report.normal_form);
    CHECK(report.battery_max > 1e-3);
    CHECK(associated(heaviside() * heaviside(), heaviside()));
    CHECK(weak_equal(heaviside() * heaviside(), heaviside()) == Verdict::no);
    CHECK(associated(heaviside() * delta(), 0.5 * delta()));
    CHECK_FALSE(associated(delta() * delta(), delta()));
    CHECK(associated(d, translate(d, s * 2.0)));
}

TEST_CASE("supports") {
    const SupportInfo info = support(translate(delta(), s * 2.0));
    CHECK(info.external == IntervalSet::point(0.0));
    REQUIRE(info.internal.size() == 1);
    CHECK(*info.internal[0].lo == s);
    CHECK(*info.internal[0].hi == s * 3.0);
    const SupportInfo h = support(heaviside());
    REQUIRE(h.internal.size() == 1);
    CHECK(*h.internal[0].lo == -s);
    CHECK_FALSE(h.internal[0].hi.has_value());
    CHECK(to_string(h.internal[0]) == "[-s, inf]");
    CHECK(support(smooth(sin_t)).external == IntervalSet::whole_line());
    const SmoothFn opaque = SmoothFn::custom("g", [](double x0, int order) { return ComplexJet::variable(order, x0); });
    CHECK_THROWS_AS(support(smooth(opaque)), UnsupportedError);
}

TEST_CASE("restriction") {
    CHECK(restrict_to(delta(), RealInterval{1.0, 2.0}).is_zero());
    const GenFunction r = restrict_to(smooth(sin_t), RealInterval{1.0, 2.0});
    CHECK(coeff(evaluate_at(r, LCReal(1.5, ctx)), 0) == doctest::Approx(std::sin(1.5)).epsilon(1e-15));
    CHECK_THROWS_AS(evaluate_at(r, LCReal(0.5, ctx)), DomainError);
    const GenFunction f = heaviside() + smooth(cos_t);
    const GenFunction g = delta(0.0, 1) + smooth(SmoothFn::bump(0.5, 1.0));
    const RealInterval o{-0.5, 0.5};
    CHECK(weak_equal(restrict_to(f * g, o), restrict_to(f, o) * restrict_to(g, o)) == Verdict::yes);
    const GfSettings narrow{Mollifier::construct(2), ctx, RealInterval{0.0, 1.0}};
    CHECK_THROWS_AS(restrict_to(embed_heaviside(0.5, narrow), RealInterval{-1.0, 0.5}), DomainError);
}

TEST_CASE("parameter specialization") {
    const ParametricFamily fam = exponential_family();
    const GenFunction e1 = specialize_parameter(fam, LCComplex(Complex(1.0), ctx), settings());
    CHECK(coeff(evaluate_at(e1, LCReal(0.7, ctx)), 0) == doctest::Approx(std::exp(-0.7)).epsilon(1e-15));
    const LCComplex z = complexify(LCReal(1.0, ctx) + s);
    const GenFunction e2 = specialize_parameter(fam, z, settings());
    const LCComplex got = evaluate_at(e2, LCReal(1.0, ctx));
    const LCComplex want = lift_smooth(
        [](double x0, int order) {
            std::vector<Complex> c;
            double f = std::exp(-x0);
            for (int k = 0; k <= order; ++k) {
                c.push_back(f);
                f *= -1.0 / (k + 1);
            }
            return c;
        },
        z);
    CHECK(max_gap(got, want) < 1e-14);
    CHECK_THROWS_AS(specialize_parameter(fam, complexify(s.shifted(Exponent(-2))), settings()), NotFinite);

    // H(t) delta(t - 2s) exp(-z t) integrates to exp(-2 s z)
    for (const LCComplex& zz : {LCComplex(Complex(1.0), ctx), z}) {
        const GenFunction prod = heaviside() * translate(delta(), s * 2.0) * specialize_parameter(fam, zz, settings());
        const LCComplex v = integral_compact(prod);
        const LCComplex expected = lift_smooth(
            [](double x0, int order) {
                std::vector<Complex> c;
                double f = std::exp(x0);
                for (int k = 0; k <= order; ++k) {
                    c.push_back(f);
                    f /= k + 1;
                }
                return c;
            },
            zz * complexify(s * -2.0));
        CHECK(max_gap(v, expected) < 1e-12);
    }
}

TEST_CASE("affine composition of deltas") {
    const TestFunction tau = tau0();
    for (auto [a, b] : {std::pair{2.0, 0.3}, std::pair{-0.5, 0.2}, std::pair{3.0, -1.2}}) {
        const GenFunction g = compose_affine(delta(), a, b);
        CHECK(coeff(pairing(g, tau), 0) == doctest::Approx(tau.fn(-b / a).real() / std::abs(a)).epsilon(1e-12));
    }
    CHECK(weak_equal(compose_affine(heaviside(), -1.0, 0.0) + heaviside(), embed_constant(LCComplex(Complex(1.0), ctx), settings())) ==
          Verdict::yes);
    CHECK_THROWS_AS(compose_affine(smooth(sin_t), 2.0, 0.0), UnsupportedError);
}

TEST_CASE("formatting") {
    const GenFunction g = translate(heaviside(), s * 2.0) * translate(smooth(sin_t), s * 2.0);
    CHECK(g.to_string() == "H(t - 2*s)*sin(t - 2*s)");
    CHECK(delta(0.0, 1).to_string() == "delta_n(1, t)");
    CHECK((delta() - 2.0 * heaviside(1.0)).to_string().find(" - 2*H(t - 1)") != std::string::npos);
}

// ---------------------------------------------------------------- properties

TEST_CASE("pairing is linear over LC scalars") {
    const auto cat = catalog();
    const TestFunction tau = tau0();
    const LCComplex alpha = complexify(LCReal(2.0, ctx) - s * 3.0);
    const LCComplex beta = LCComplex(Complex(0.5, -1.0), ctx);
    for (std::size_t i = 0; i + 1 < cat.size(); ++i) {
        const LCComplex lhs = pairing(alpha * cat[i] + beta * cat[i + 1], tau);
        const LCComplex rhs = alpha * pairing(cat[i], tau) + beta * pairing(cat[i + 1], tau);
        CHECK(max_gap(lhs, rhs) <= 1e-12 * std::max(1.0, max_abs_coefficient(rhs)));
    }
}

TEST_CASE("integration by parts") {
    const TestFunction tau = tau0();
    const TestFunction dtau{tau.fn.derivative(), tau.lo, tau.hi};
    for (const auto& f : catalog()) {
        const LCComplex lhs = pairing(derive(f), tau);
        const LCComplex rhs = -pairing(f, dtau);
        CHECK_MESSAGE(max_gap(lhs, rhs) <= 1e-8 * std::max(1.0, max_abs_coefficient(rhs)), f.to_string());
    }
}

TEST_CASE("Leibniz rule under pairing") {
    const auto cat = catalog();
    const TestFunction tau = tau0();
    for (std::size_t i = 0; i + 1 < cat.size(); i += 2) {
        const GenFunction& f = cat[i];
        const GenFunction& g = cat[i + 1];
        const LCComplex lhs = pairing(derive(f * g), tau);
        const LCComplex rhs = pairing(derive(f) * g + f * derive(g), tau);
        CHECK_MESSAGE(max_gap(lhs, rhs) <= 1e-8 * std::max(1.0, max_abs_coefficient(rhs)), f.to_string(), " * ",
                      g.to_string());
    }
}

TEST_CASE("smooth pairings match quadrature") {
    const TestFunction tau = tau0();
    boost::math::quadrature::tanh_sinh<double> ts;
    for (const SmoothFn& f : {sin_t, SmoothFn::exp(t * SmoothFn::constant(-1.0)), t * t + SmoothFn::constant(3.0)}) {
        const double oracle = ts.integrate([&](double x) { return (f(x) * tau.fn(x)).real(); }, tau.lo, tau.hi);
        const LCComplex p = pairing(smooth(f), tau);
        CHECK(coeff(p, 0) == doctest::Approx(oracle).epsilon(1e-10));
        CHECK(p.size() <= 1);
    }
}

TEST_CASE("evaluations of real atoms are real") {
    const std::vector<LCReal> points{LCReal(ctx), s * 0.5, LCReal(0.3, ctx) - s * s, s * -0.25 + s * s * 3.0};
    for (const auto& f : {delta(), delta(0.0, 2), heaviside(), smooth(sin_t), heaviside() * delta()}) {
        for (const auto& x : points) {
            const LCComplex v = evaluate_at(f, x);
            CHECK(max_abs_coefficient(complexify(imag_part(v))) == 0.0);
        }
    }
}

TEST_CASE("translation duality") {
    const TestFunction tau = tau0();
    // real shift: tau(. + h) is again a polynomial bump
    for (const auto& f : catalog()) {
        const double h = 0.3;
        const LCComplex lhs = pairing(translate(f, LCReal(h, ctx)), tau);
        const TestFunction moved = TestFunction::polynomial_bump({1.0, 0.5, -0.3}, 0.2 - h, 1.5);
        const LCComplex rhs = pairing(f, moved);
        CHECK_MESSAGE(max_gap(lhs, rhs) <= 1e-8 * std::max(1.0, max_abs_coefficient(rhs)), f.to_string());
    }
    // infinitesimal shift: Taylor lift of tau(. + h)
    const LCReal h = s * 0.5 - s * s;
    for (const auto& f : catalog()) {
        const LCComplex lhs = pairing(translate(f, h), tau);
        LCComplex rhs(ctx);
        LCComplex hp(Complex(1.0), ctx);
        for (int j = 0; j <= 8; ++j) {
            const TestFunction dj{tau.fn.derivative(j), tau.lo, tau.hi};
            rhs += hp * pairing(f, dj) * Complex(1.0 / std::tgamma(j + 1));
            hp = hp * complexify(h);
        }
        CHECK_MESSAGE(max_gap(lhs, rhs) <= 1e-8 * std::max(1.0, max_abs_coefficient(rhs)), f.to_string());
    }
}

TEST_CASE("sheaf gluing on a two-interval cover") {
    const GenFunction f = derive(heaviside()) + heaviside() * smooth(sin_t);
    const GenFunction g = delta() + smooth(sin_t) * heaviside();
    const RealInterval left{-std::numeric_limits<double>::infinity(), 0.5};
    const RealInterval right{-0.5, std::numeric_limits<double>::infinity()};
    REQUIRE(weak_equal(restrict_to(f, left), restrict_to(g, left)) == Verdict::yes);
    REQUIRE(weak_equal(restrict_to(f, right), restrict_to(g, right)) == Verdict::yes);
    CHECK(weak_equal(f, g) == Verdict::yes);
}

TEST_CASE("external support is the standard part of the internal one") {
    std::vector<GenFunction> fs = catalog();
    fs.erase(std::remove_if(fs.begin(), fs.end(),
                            [](const GenFunction& f) {
                                return std::any_of(f.terms().begin(), f.terms().end(),
                                                   [](const Monomial& m) {
                                                       return std::any_of(m.smooth.begin(), m.smooth.end(),
                                                                          [](const SmoothAtom& a) { return !a.f.support(); });
                                                   });
                            }),
             fs.end());
    REQUIRE(fs.size() >= 6);
    for (const auto& f : fs) {
        const SupportInfo info = support(f);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& i : info.internal) {
            lo = std::min(lo, i.lo ? standard_part(*i.lo) : -std::numeric_limits<double>::infinity());
            hi = std::max(hi, i.hi ? standard_part(*i.hi) : std::numeric_limits<double>::infinity());
        }
        CHECK_MESSAGE(info.external.lower() == lo, f.to_string());
        CHECK_MESSAGE(info.external.upper() == hi, f.to_string());
    }
}

TEST_CASE("battery is reproducible") {
    const auto a = make_battery({0.0, 1.0}, RealInterval{}, BatteryOptions{});
    const auto b = make_battery({0.0, 1.0}, RealInterval{}, BatteryOptions{});
    REQUIRE(a.size() == 32);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].fn.key() == b[i].fn.key());
        CHECK(a[i].lo == b[i].lo);
    }
    const auto c = make_battery({0.1}, RealInterval{0.0, 1.0}, BatteryOptions{8, 3, 1e-8});
    for (const auto& tf : c) {
        CHECK(tf.lo > 0.0);
        CHECK(tf.hi < 1.0);
    }
}
