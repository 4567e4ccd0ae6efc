#include "doctest.h"

#include "lcgf/cli.hpp"
#include "lcgf/dsl.hpp"

#include <cstdlib>
#include <random>
#include <sstream>

using namespace lcgf;
using dsl::Ast;

namespace {

const GfSettings& settings() {
    static const GfSettings g{};
    return g;
}

dsl::EvalOptions options(bool classical = false) { return dsl::EvalOptions{settings(), classical}; }

LCReal scale() { return LCReal::scale(settings().ctx); }

Ast random_ast(std::mt19937_64& rng, int depth) {
    static const char* numbers[] = {"0", "1", "2", "3.5", "0.25", "10", "1e-3", "7.125"};
    static const char* symbols[] = {"s", "i", "t", "z", "y", "y'", "y''"};
    static const char* funcs[] = {"sin", "cos", "exp", "H", "delta"};
    static const Exponent exps[] = {Exponent(2), Exponent(0), Exponent(-1), Exponent(1, 2), Exponent(-3, 2), Exponent(5)};
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 10);
    auto any = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    switch (pick(rng)) {
        case 0: return dsl::number(numbers[any(8)]);
        case 1: return dsl::symbol(symbols[any(7)]);
        case 2: return dsl::call(funcs[any(5)], {random_ast(rng, depth - 1)});
        case 3: return dsl::call("delta_n", {dsl::number(std::to_string(any(4))), random_ast(rng, depth - 1)});
        case 4: return dsl::unary_minus(random_ast(rng, depth - 1));
        case 5: return dsl::power(random_ast(rng, depth - 1), exps[any(6)]);
        default: {
            static const Ast::Kind ops[] = {Ast::Kind::add, Ast::Kind::sub, Ast::Kind::mul, Ast::Kind::div};
            return dsl::binary(ops[any(4)], random_ast(rng, depth - 1), random_ast(rng, depth - 1));
        }
    }
}

cli::Command command(std::string verb, std::string expr) {
    cli::Command c;
    c.verb = std::move(verb);
    c.expression = std::move(expr);
    return c;
}

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run run(std::vector<const char*> args) {
    args.insert(args.begin(), "lcgf");
    std::ostringstream out, err;
    const int status = cli::run(static_cast<int>(args.size()), args.data(), out, err);
    return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("parse builds the documented trees") {
    const Ast d = dsl::parse("delta(t - 2*s)");
    CHECK(d == dsl::call("delta", {dsl::binary(Ast::Kind::sub, dsl::symbol("t"),
                                               dsl::binary(Ast::Kind::mul, dsl::number("2"), dsl::symbol("s")))}));
    const GenFunction g = dsl::eval_function(d, options());
    REQUIRE(g.terms().size() == 1);
    REQUIRE(g.terms()[0].singular.size() == 1);
    const auto* atom = std::get_if<DeltaAtom>(&g.terms()[0].singular[0]);
    REQUIRE(atom);
    CHECK(atom->center == 0.0);
    CHECK(atom->shift == scale() * 2.0);

    const LCComplex lit = dsl::eval_number(dsl::parse("3*s^(1/2) - 2"), options());
    CHECK(lit == LCComplex::from_terms({{Exponent(0), -2.0}, {Exponent(1, 2), 3.0}}, settings().ctx));

    const Ast p = dsl::parse("H(t)*delta(t)");
    CHECK(p.kind == Ast::Kind::mul);
    CHECK(p.args[0] == dsl::call("H", {dsl::symbol("t")}));
}

TEST_CASE("precedence and associativity") {
    using K = Ast::Kind;
    const Ast a = dsl::parse("1 - 2 - 3");
    CHECK(a == dsl::binary(K::sub, dsl::binary(K::sub, dsl::number("1"), dsl::number("2")), dsl::number("3")));
    const Ast b = dsl::parse("-2^2*t");
    CHECK(b == dsl::binary(K::mul, dsl::unary_minus(dsl::power(dsl::number("2"), Exponent(2))), dsl::symbol("t")));
    const Ast c = dsl::parse("s^(-3/2)");
    CHECK(c == dsl::power(dsl::symbol("s"), Exponent(-3, 2)));
    CHECK(dsl::parse("s^-1") == dsl::power(dsl::symbol("s"), Exponent(-1)));
    CHECK_THROWS_AS(dsl::parse("2^3^2"), SyntaxError);
}

TEST_CASE("syntax errors carry positions") {
    try {
        dsl::parse("1 +\n  * 2");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
    try {
        dsl::parse("sin t");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.column() == 5);
    }
    CHECK_THROWS_AS(dsl::parse("foo(t)"), SyntaxError);
    CHECK_THROWS_AS(dsl::parse("delta(t, 1)"), SyntaxError);
    CHECK_THROWS_AS(dsl::parse("s^(1/0)"), SyntaxError);
    CHECK_THROWS_AS(dsl::parse("t(2)"), SyntaxError);
    CHECK_THROWS_AS(dsl::parse("1 # 2"), SyntaxError);
    CHECK_THROWS_AS(dsl::parse_equation("y'' + y"), SyntaxError);
}

TEST_CASE("the scale is reserved") {
    try {
        dsl::eval_transform_input(dsl::parse("1/(s^2 + 1)"), options());
        FAIL("s accepted as the transform variable");
    } catch (const SyntaxError& e) {
        CHECK(e.column() == 4);
    }
    CHECK_THROWS_AS(dsl::eval_transform_input(dsl::parse("1/(z^2 + 1)"), options()), SyntaxError);
    CHECK_NOTHROW(dsl::eval_transform_input(dsl::parse("delta(t - 2*s)"), options()));
    CHECK_THROWS_AS(dsl::eval_function(dsl::parse("delta(t - 2*s)"), options(true)), SyntaxError);
    CHECK_NOTHROW(dsl::eval_function(dsl::parse("delta(t - 0.1)"), options(true)));
}

TEST_CASE("parse and print round trip on random trees") {
    std::mt19937_64 rng(20261016);
    for (int k = 0; k < 2000; ++k) {
        const Ast a = random_ast(rng, 5);
        const std::string text = dsl::print(a);
        CAPTURE(text);
        const Ast b = dsl::parse(text);
        CHECK(b == a);
        CHECK(dsl::print(b) == text);
    }
}

TEST_CASE("LC literals") {
    const auto x = dsl::eval_number(dsl::parse("1/(1 - s)"), {GfSettings{Mollifier::construct(2), TruncationContext(Exponent(4))}, false});
    CHECK(to_string(x) == "1 + s + s^2 + s^3 + s^4");
    const auto r = dsl::eval_number(dsl::parse("(4 + 4*s)^(1/2)"), options());
    CHECK(std::abs(r.coefficient(0).real() - 2.0) < 1e-15);
    CHECK(std::abs(r.coefficient(1).real() - 1.0) < 1e-15);
    CHECK(std::abs(r.coefficient(2).real() + 0.25) < 1e-15);
    const auto e = dsl::eval_number(dsl::parse("exp(s)"), options());
    CHECK(std::abs(e.coefficient(3).real() - 1.0 / 6.0) < 1e-15);
    const auto sn = dsl::eval_number(dsl::parse("sin(1 + 2*s)"), options());
    CHECK(std::abs(sn.coefficient(1).real() - 2.0 * std::cos(1.0)) < 1e-14);
    const auto c = dsl::eval_number(dsl::parse("(1 + 2*i)*i"), options());
    CHECK(c.coefficient(0) == Complex(-2.0, 1.0));
    CHECK_THROWS_AS(dsl::eval_number(dsl::parse("t + 1"), options()), SyntaxError);
    CHECK_THROWS_AS(dsl::eval_number(dsl::parse("1/(s - s)"), options()), DivisionByZero);
}

TEST_CASE("function expressions match the library constructors") {
    const auto& st = settings();
    const LCReal s2 = scale() * 2.0;
    const GenFunction sin_t = embed_smooth(SmoothFn::sin(SmoothFn::variable()), st);

    const GenFunction a = dsl::eval_function(dsl::parse("H(t - 2*s)*sin(t - 2*s)"), options());
    CHECK((a - translate(embed_heaviside(0.0, st) * sin_t, s2)).is_zero());
    CHECK(a.to_string() == "H(t - 2*s)*sin(t - 2*s)");

    const GenFunction b = dsl::eval_function(dsl::parse("delta_n(2, t - 1) + 3*H(t)"), options());
    CHECK((b - embed_delta(1.0, 2, st) - Complex(3.0) * embed_heaviside(0.0, st)).is_zero());

    const GenFunction c = dsl::eval_function(dsl::parse("delta(2*t - 1)"), options());
    CHECK((c - compose_affine(embed_delta(0.0, 0, st), 2.0, -1.0)).is_zero());

    const GenFunction d = dsl::eval_function(dsl::parse("sin(t)^2 + cos(t)^2 - 1"), options());
    CHECK(evaluate_at(d, LCReal(0.7, st.ctx)).coefficient(0).real() == doctest::Approx(0.0).scale(1.0));

    const GenFunction e = dsl::eval_function(dsl::parse("H(t)^3"), options());
    CHECK((e - embed_heaviside(0.0, st) * embed_heaviside(0.0, st) * embed_heaviside(0.0, st)).is_zero());

    CHECK_THROWS_AS(dsl::eval_function(dsl::parse("1/t"), options()), SyntaxError);
    CHECK_THROWS_AS(dsl::eval_function(dsl::parse("H(t^2)"), options()), SyntaxError);
    CHECK_THROWS_AS(dsl::eval_function(dsl::parse("delta(s*t)"), options()), SyntaxError);
}

TEST_CASE("printed generalized functions parse back to themselves") {
    const char* inputs[] = {"H(t - 2*s)*sin(t - 2*s)", "delta_n(1, t) - 2*delta(t - 1)", "H(t)*delta(t)",
                            "sin(t) + H(t - 2*s)*sin(t - 2*s)", "(1 + s)*delta(t + s)", "exp(t)*H(t - 1)",
                            "delta(t - 2*s)*cos(t)"};
    for (const char* in : inputs) {
        CAPTURE(in);
        const GenFunction f = dsl::eval_function(dsl::parse(in), options());
        const GenFunction g = dsl::eval_function(dsl::parse(f.to_string()), options());
        CHECK((f - g).is_zero());
    }
}

TEST_CASE("equations") {
    const dsl::Equation eq = dsl::parse_equation("2*y'' + 3*y' - y + t ~= delta(t - 2*s)");
    CHECK(eq.relation == dsl::Relation::weak);
    const dsl::LinearOde ode = dsl::eval_ode(eq, options());
    CHECK(ode.a2 == 2.0);
    CHECK(ode.a1 == 3.0);
    CHECK(ode.a0 == -1.0);
    const GenFunction expect = dsl::eval_function(dsl::parse("delta(t - 2*s) - t"), options());
    CHECK((to_genfunction(ode.rhs) - expect).is_zero());

    CHECK(dsl::parse_equation("y' = 0").relation == dsl::Relation::exact);
    CHECK_THROWS_AS(dsl::eval_ode(dsl::parse_equation("y*y' = 0"), options()), SyntaxError);
    CHECK_THROWS_AS(dsl::eval_ode(dsl::parse_equation("y''' = 0"), options()), SyntaxError);
    CHECK_THROWS_AS(dsl::eval_ode(dsl::parse_equation("t*y' = 0"), options()), SyntaxError);
    CHECK_THROWS_AS(dsl::eval_ode(dsl::parse_equation("s*y'' + y = 0"), options()), SyntaxError);
    CHECK_THROWS_AS(dsl::eval_ode(dsl::parse_equation("y' = y"), options()), SyntaxError);
}

TEST_CASE("LC emission format") {
    const LCComplex x = LCComplex::from_terms({{Exponent(0), 1.0}, {Exponent(1), 2.0}}, settings().ctx);
    CHECK(to_json(x).dump() == R"([{"exp":"0","re":1,"im":0},{"exp":"1","re":2,"im":0}])");
    const LCComplex y = LCComplex::from_terms({{Exponent(-1, 2), Complex(0.5, -1.0)}}, settings().ctx);
    CHECK(to_json(y).dump() == R"([{"exp":"-1/2","re":0.5,"im":-1}])");
    CHECK(lc_from_json(to_json(y), settings().ctx) == y);
}

TEST_CASE("dispatch: solve-ivp") {
    cli::Command c = command("solve-ivp", "y'' + y ~= delta(t - 2*s)");
    c.options.y0 = "0";
    c.options.yp0 = "1";
    const cli::Report r = cli::dispatch(c);
    CHECK(r.status == 0);
    const std::string text = cli::emit(r, cli::Format::text);
    CHECK(text.find("sin(t) + H(t - 2*s)*sin(t - 2*s)") != std::string::npos);
    CHECK(text.find("verification    PASS") != std::string::npos);
    CHECK(r.document["result"]["verified"] == true);
    CHECK(r.document["schema_version"] == cli::schema_version);

    cli::Command exact = command("solve-ivp", "y'' + y = delta(t - 2*s)");
    exact.options.yp0 = "1";
    CHECK(cli::dispatch(exact).status == 1);
}

TEST_CASE("dispatch: audit reproduces the contradiction") {
    cli::Command c = command("audit", "y'' + y = delta(t)");
    c.options.yp0 = "1";
    c.options.ruleset = Ruleset::naive;
    const cli::Report r = cli::dispatch(c);
    CHECK(r.status == 3);
    const std::string text = cli::emit(r, cli::Format::text);
    CHECK(text.find("y'(0+): expected 1, obtained 2") != std::string::npos);
    CHECK(text.find("L[f''] = z^2 L[f] - z f(0) - f'(0)") != std::string::npos);
    CHECK(r.document["result"]["verdict"] == "inconsistent");

    cli::Command scaled = command("audit", "y'' + y = delta(t - 2*s)");
    scaled.options.yp0 = "1";
    const cli::Report bad = cli::dispatch(scaled);
    CHECK(bad.status == 1);
    CHECK(bad.document["error"]["kind"] == "syntax");
}

TEST_CASE("dispatch: domain errors exit with 2") {
    const cli::Report r = cli::dispatch(command("laplace", "delta(t)"));
    CHECK(r.status == 2);
    CHECK(r.document["error"]["kind"] == "domain");
    const cli::Report ok = cli::dispatch(command("laplace", "delta(t - 2*s)"));
    CHECK(ok.status == 0);
    CHECK(ok.document["result"]["image"]["text"] == "exp(-2*s*z)");
}

TEST_CASE("dispatch: lc-eval and gf verbs") {
    cli::Command c = command("lc-eval", "1/(1 - s)");
    c.options.trunc = "4";
    const cli::Report r = cli::dispatch(c);
    CHECK(r.document["result"]["text"] == "1 + s + s^2 + s^3 + s^4");

    const cli::Report w = cli::dispatch(command("gf-check", "delta(t - 2*s)*H(t) ~= delta(t - 2*s)"));
    CHECK(w.status == 0);
    CHECK(w.document["result"]["verdict"] == "true");
    const cli::Report a = cli::dispatch(command("gf-check", "H(t)*delta(t) ~= 1/2*delta(t)"));
    CHECK(a.document["result"]["verdict"] == "false");
    CHECK(a.document["result"]["associated"] == true);
    const cli::Report e = cli::dispatch(command("gf-check", "H(t)*H(t) = H(t)"));
    CHECK(e.document["result"]["verdict"] == "no");

    cli::Command p = command("gf-pair", "delta(t - 2*s)");
    p.options.battery = 4;
    const cli::Report pr = cli::dispatch(p);
    CHECK(pr.document["result"]["pairings"].size() == 4);
}

TEST_CASE("dispatch: mollifier-dump samples 1001 nodes") {
    const cli::Report r = cli::dispatch(command("mollifier-dump", ""));
    CHECK(r.status == 0);
    const auto& nodes = r.document["result"]["nodes"];
    REQUIRE(nodes.size() == 1001);
    CHECK(nodes[0][0] == -1.0);
    CHECK(nodes[1000][0] == 1.0);
    CHECK(nodes[500][1].get<double>() == doctest::Approx(Mollifier::construct(2)(0.0)).epsilon(1e-15));
    CHECK(r.raw.size() == 1002);
}

TEST_CASE("options are validated before dispatch") {
    cli::Command c = command("lc-eval", "1");
    c.options.trunc = "x";
    CHECK(cli::dispatch(c).document["error"]["kind"] == "usage");
    c.options.trunc = "-1";
    CHECK(cli::dispatch(c).status == 1);
    c = command("lc-eval", "1");
    c.options.battery = 0;
    CHECK_THROWS_AS(cli::validate(c), cli::UsageError);
    c = command("lc-eval", "1");
    c.options.quad_tol = 0.0;
    CHECK_THROWS_AS(cli::validate(c), cli::UsageError);
    CHECK_THROWS_AS(cli::validate(command("gf-pair", "")), cli::UsageError);
    CHECK_NOTHROW(cli::validate(command("mollifier-dump", "")));
}

TEST_CASE("machine output is byte-identical across runs") {
    for (const char* verb : {"gf-check", "gf-pair"}) {
        cli::Command c = command(verb, std::string(verb) == "gf-check" ? "H(t)*H(t) ~= H(t)" : "H(t)*delta(t - s)");
        c.options.seed = 11;
        c.options.battery = 6;
        const std::string a = cli::emit(cli::dispatch(c), cli::Format::machine);
        const std::string b = cli::emit(cli::dispatch(c), cli::Format::machine);
        CHECK(a == b);
    }
    cli::Command s = command("solve-ivp", "y'' + y ~= delta(t - 2*s)");
    s.options.yp0 = "1";
    CHECK(cli::emit(cli::dispatch(s), cli::Format::machine) == cli::emit(cli::dispatch(s), cli::Format::machine));
}

TEST_CASE("command line flags and the seed variable") {
    const Run a = run({"--format", "machine", "lc-eval", "1 + 2*s"});
    CHECK(a.status == 0);
    const auto doc = Json::parse(a.out);
    CHECK(doc.begin().key() == "schema_version");
    CHECK(doc["options"]["seed"] == 0);

    ::setenv("LCGF_SEED", "7", 1);
    const Run b = run({"--format", "machine", "lc-eval", "1"});
    CHECK(Json::parse(b.out)["options"]["seed"] == 7);
    const Run c = run({"--seed", "3", "--format", "machine", "lc-eval", "1"});
    CHECK(Json::parse(c.out)["options"]["seed"] == 3);
    ::unsetenv("LCGF_SEED");

    const Run d = run({"audit", "y'' + y = delta(t)", "--yp0", "1", "--ruleset", "naive"});
    CHECK(d.status == 3);
    CHECK(d.out.find("y'(0+): expected 1, obtained 2") != std::string::npos);

    CHECK(run({"--format", "yaml", "lc-eval", "1"}).status == 1);
    CHECK(run({"lc-eval"}).status == 1);
    CHECK(run({"laplace", "delta(t)"}).status == 2);
    const Run e = run({"lc-eval", "1 +"});
    CHECK(e.status == 1);
    CHECK(e.err.find("1:4") != std::string::npos);
}
