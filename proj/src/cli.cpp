#include "lcgf/cli.hpp"

#include "lcgf/dsl.hpp"
#include "lcgf/serialize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

namespace lcgf::cli {

using json = Json;

namespace {

std::string num(double x) { return format_scalar(x); }

const char* format_name(Format f) { return f == Format::text ? "text" : "machine"; }

Ruleset ruleset_or(const Options& o, Ruleset fallback) { return o.ruleset.value_or(fallback); }

struct Context {
    GfSettings settings;
    BatteryOptions battery;
};

Context make_context(const Options& o) {
    QuadratureScheme scheme;
    scheme.abs_tol = o.quad_tol;
    Context c;
    c.settings.mollifier = Mollifier::construct(o.moment_order, scheme);
    c.settings.ctx = TruncationContext(Exponent::parse(o.trunc));
    c.battery = BatteryOptions{o.battery, o.seed, 1e-8};
    return c;
}

json options_json(const Command& cmd) {
    const Options& o = cmd.options;
    json j{{"trunc", o.trunc},         {"moment_order", o.moment_order}, {"quad_tol", o.quad_tol},
           {"battery", o.battery},     {"seed", o.seed},                 {"format", format_name(o.format)},
           {"ruleset", nullptr}};
    if (o.ruleset) j["ruleset"] = to_string(*o.ruleset);
    if (cmd.verb == "solve-ivp" || cmd.verb == "audit") {
        j["y0"] = o.y0;
        j["yp0"] = o.yp0;
    }
    return j;
}

Section options_section(const Command& cmd) {
    const Options& o = cmd.options;
    Section s{"options", {}, {}};
    s.rows = {{"trunc", o.trunc},
              {"moment-order", std::to_string(o.moment_order)},
              {"quad-tol", num(o.quad_tol)},
              {"battery", std::to_string(o.battery)},
              {"seed", std::to_string(o.seed)},
              {"format", format_name(o.format)}};
    if (o.ruleset) s.rows.emplace_back("ruleset", to_string(*o.ruleset));
    if (cmd.verb == "solve-ivp" || cmd.verb == "audit") {
        s.rows.emplace_back("y0", o.y0);
        s.rows.emplace_back("yp0", o.yp0);
    }
    return s;
}

std::string check_line(const ValueCheck& c) {
    return c.name + ": expected " + to_string(c.expected) + ", obtained " + to_string(c.obtained) + ", discrepancy " +
           to_string(c.discrepancy) + (c.holds ? " [holds]" : " [violated]");
}

std::vector<double> points_of_interest(const GenFunction& f) {
    std::vector<double> pts;
    for (const auto& m : f.terms()) {
        for (const auto& a : m.singular) pts.push_back(standard_part(position(a, f.context())));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.empty()) pts.push_back(0.0);
    return pts;
}

LCComplex initial_value(const std::string& text, const dsl::EvalOptions& opt) {
    return dsl::eval_number(dsl::parse(text), opt);
}

// ------------------------------------------------------------------ verbs

void lc_eval(const Command& cmd, const Context& c, Report& r) {
    const dsl::EvalOptions opt{c.settings, false};
    const LCComplex x = dsl::eval_number(dsl::parse(cmd.expression), opt);
    Section s{"result", {{"value", to_string(x)}}, {}};
    json res{{"value", to_json(x)}, {"text", to_string(x)}};
    const Valuation v = valuation(x);
    s.rows.emplace_back("valuation", v.to_string());
    s.rows.emplace_back("class", to_string(classify(x)));
    res["valuation"] = v.to_string();
    res["class"] = to_string(classify(x));
    if (classify(x) != Magnitude::infinite) {
        const Complex st = standard_part(x);
        s.rows.emplace_back("standard part", format_scalar(st));
        res["standard_part"] = to_json(st);
    }
    r.sections.push_back(std::move(s));
    r.document["result"] = std::move(res);
}

void gf_pair(const Command& cmd, const Context& c, Report& r) {
    const dsl::EvalOptions opt{c.settings, false};
    const GenFunction f = dsl::eval_function(dsl::parse(cmd.expression), opt);
    const auto battery = make_battery(points_of_interest(f), c.settings.domain, c.battery);
    Section s{"pairings", {}, {}};
    json rows = json::array();
    for (std::size_t k = 0; k < battery.size(); ++k) {
        const auto& tau = battery[k];
        const LCComplex v = pairing(f, tau);
        s.rows.emplace_back("tau[" + std::to_string(k) + "] on [" + num(tau.lo) + ", " + num(tau.hi) + "]", to_string(v));
        rows.push_back(json{{"index", k}, {"lo", tau.lo}, {"hi", tau.hi}, {"value", to_json(v)}});
    }
    r.sections.push_back(Section{"function", {{"canonical", f.to_string()}}, {}});
    r.sections.push_back(std::move(s));
    r.document["result"] = json{{"canonical", f.to_string()}, {"pairings", rows}};
}

void gf_check(const Command& cmd, const Context& c, Report& r) {
    const dsl::EvalOptions opt{c.settings, false};
    const dsl::Equation eq = dsl::parse_equation(cmd.expression);
    const GenFunction f = dsl::eval_function(eq.lhs, opt);
    const GenFunction g = dsl::eval_function(eq.rhs, opt);
    const GenFunction diff = f - g;
    Section s{"result", {}, {}};
    s.rows = {{"lhs", f.to_string()}, {"rhs", g.to_string()}, {"difference", diff.to_string()}};
    json res{{"lhs", f.to_string()}, {"rhs", g.to_string()}, {"difference", diff.to_string()}};
    if (eq.relation == dsl::Relation::exact) {
        const bool equal = diff.is_zero();
        s.rows.emplace_back("relation", "exact");
        s.rows.emplace_back("verdict", equal ? "yes" : "no");
        res["relation"] = "exact";
        res["verdict"] = equal ? "yes" : "no";
    } else {
        const WeakEqualReport w = weak_equal_report(f, g, c.battery);
        const bool assoc = associated(f, g, c.battery);
        s.rows.emplace_back("relation", "weak");
        s.rows.emplace_back("verdict", to_string(w.verdict));
        s.rows.emplace_back("normal form", w.normal_form ? (*w.normal_form ? "equal" : "different") : "inconclusive");
        s.rows.emplace_back("battery", std::string(w.battery ? "equal" : "different") + " (max " + num(w.battery_max) + ")");
        s.rows.emplace_back("associated", assoc ? "yes" : "no");
        res["relation"] = "weak";
        res["verdict"] = to_string(w.verdict);
        res["weak_equal"] = to_json(w);
        res["associated"] = assoc;
    }
    r.sections.push_back(std::move(s));
    r.document["result"] = std::move(res);
}

void laplace(const Command& cmd, const Context& c, Report& r) {
    const dsl::EvalOptions opt{c.settings, false};
    const LaplaceDomainElement f = dsl::eval_transform_input(dsl::parse(cmd.expression), opt);
    const Ruleset rules = ruleset_or(cmd.options, Ruleset::hat);
    std::vector<std::string> trace;
    const LaplaceImage F = classical_table(f, rules, &trace);
    Section s{"result", {{"input", to_string(f)}, {"image", to_string(F)}}, {}};
    if (std::isfinite(F.half_plane())) s.rows.emplace_back("region", "Re z > " + num(F.half_plane()));
    Section t{"rules", {}, trace};
    r.sections.push_back(std::move(s));
    r.sections.push_back(std::move(t));
    r.document["result"] = json{{"input", to_string(f)}, {"image", to_json(F)}, {"trace", trace}};
}

IVPSpec ivp_spec(const Command& cmd, const dsl::EvalOptions& opt, dsl::Relation& relation) {
    const dsl::LinearOde ode = dsl::eval_ode(dsl::parse_equation(cmd.expression), opt);
    relation = ode.relation;
    IVPSpec p;
    p.a2 = ode.a2;
    p.a1 = ode.a1;
    p.a0 = ode.a0;
    p.rhs = ode.rhs;
    p.y0 = initial_value(cmd.options.y0, opt);
    p.yp0 = initial_value(cmd.options.yp0, opt);
    p.mode = ode.relation == dsl::Relation::weak ? EqualityMode::weak : EqualityMode::exact;
    return p;
}

void solve(const Command& cmd, const Context& c, Report& r) {
    const dsl::EvalOptions opt{c.settings, false};
    dsl::Relation relation{};
    const IVPSpec p = ivp_spec(cmd, opt, relation);
    const IVPResult res = solve_ivp(p, c.battery);
    const bool pass = res.verified();
    Section s{"result", {}, {}};
    s.rows = {{"solution", to_string(res.solution)},
              {"image", to_string(res.image)},
              {"equation", relation == dsl::Relation::weak ? "weak (~=)" : "exact (=)"},
              {"equation check", to_string(res.equation.verdict)},
              {"verification", pass ? "PASS" : "FAIL"}};
    if (p.mode == EqualityMode::exact) s.rows[3].second = res.equation_ok ? "yes" : "no";
    Section checks{"initial values", {}, {}};
    json cj = json::array();
    for (const auto& v : res.initial_checks) {
        checks.lines.push_back(check_line(v));
        cj.push_back(to_json(v));
    }
    r.sections.push_back(std::move(s));
    r.sections.push_back(std::move(checks));
    r.sections.push_back(Section{"rules", {}, res.trace});
    r.document["result"] = json{{"solution", to_string(res.solution)},
                                {"image", to_json(res.image)},
                                {"trace", res.trace},
                                {"initial_checks", cj},
                                {"equation", to_json(res.equation)},
                                {"equation_ok", res.equation_ok},
                                {"verified", pass}};
    if (!pass) r.status = 1;
}

void audit(const Command& cmd, const Context& c, Report& r) {
    const dsl::EvalOptions opt{c.settings, true};
    dsl::Relation relation{};
    const IVPSpec p = ivp_spec(cmd, opt, relation);
    const Ruleset rules = ruleset_or(cmd.options, Ruleset::naive);
    const ContradictionReport rep = audit_classical(p, rules);
    Section s{"result", {{"ruleset", to_string(rules)}, {"solution", to_string(rep.solution)}, {"verdict", to_string(rep.verdict)}}, {}};
    Section checks{"one-sided initial values", {}, {}};
    for (const auto& v : rep.checks) checks.lines.push_back(check_line(v));
    r.sections.push_back(std::move(s));
    r.sections.push_back(std::move(checks));
    r.sections.push_back(Section{"rules", {}, rep.trace});
    r.document["result"] = to_json(rep);
    if (rep.verdict == AuditVerdict::inconsistent) r.status = 3;
}

void mollifier_dump(const Command&, const Context& c, Report& r) {
    constexpr int nodes = 1001;
    const Mollifier& phi = c.settings.mollifier;
    json pts = json::array();
    r.raw.push_back("x,phi");
    for (int k = 0; k < nodes; ++k) {
        const double x = -1.0 + 2.0 * k / (nodes - 1);
        const double y = phi(x);
        pts.push_back(json::array({x, y}));
        r.raw.push_back(num(x) + "," + num(y));
    }
    r.sections.push_back(Section{"mollifier", {{"moment order", std::to_string(phi.moment_order())},
                                               {"nodes", std::to_string(nodes)},
                                               {"condition number", num(phi.condition_number())}}, {}});
    r.document["result"] = json{{"moment_order", phi.moment_order()}, {"nodes", pts}};
}

using Handler = void (*)(const Command&, const Context&, Report&);

Handler handler(const std::string& verb) {
    if (verb == "lc-eval") return lc_eval;
    if (verb == "gf-pair") return gf_pair;
    if (verb == "gf-check") return gf_check;
    if (verb == "laplace") return laplace;
    if (verb == "solve-ivp") return solve;
    if (verb == "audit") return audit;
    if (verb == "mollifier-dump") return mollifier_dump;
    return nullptr;
}

void fail(Report& r, int status, const std::string& kind, const std::string& message, const SyntaxError* syntax = nullptr) {
    r.status = status;
    json e{{"kind", kind}, {"message", message}};
    Section s{"error", {{"kind", kind}, {"message", message}}, {}};
    if (syntax) {
        e["line"] = syntax->line();
        e["column"] = syntax->column();
    }
    r.document["error"] = std::move(e);
    r.document.erase("result");
    r.sections.push_back(std::move(s));
}

}  // namespace

const std::vector<std::string>& verbs() {
    static const std::vector<std::string> v{"lc-eval", "gf-pair", "gf-check", "laplace", "solve-ivp", "audit", "mollifier-dump"};
    return v;
}

void validate(const Command& cmd) {
    if (!handler(cmd.verb)) throw UsageError("unknown command '" + cmd.verb + "'");
    const Options& o = cmd.options;
    if (cmd.verb != "mollifier-dump" && cmd.expression.empty()) throw UsageError(cmd.verb + " needs an expression");
    Exponent q;
    try {
        q = Exponent::parse(o.trunc);
    } catch (const std::exception&) {
        throw UsageError("--trunc expects a rational such as 6 or 13/2, got '" + o.trunc + "'");
    }
    if (q.sign() < 0) throw UsageError("--trunc must be nonnegative");
    if (o.moment_order < 0 || o.moment_order > 12) throw UsageError("--moment-order must lie in 0..12");
    if (!(o.quad_tol > 0.0) || !std::isfinite(o.quad_tol)) throw UsageError("--quad-tol must be positive");
    if (o.battery < 1) throw UsageError("--battery must be positive");
}

Report dispatch(const Command& cmd) {
    Report r;
    r.document = json{{"schema_version", schema_version},
                      {"command", cmd.verb},
                      {"input", cmd.expression},
                      {"options", options_json(cmd)}};
    Section head{cmd.verb, {}, {}};
    if (cmd.verb != "mollifier-dump") head.rows.emplace_back("input", cmd.expression);
    r.sections.push_back(std::move(head));
    r.sections.push_back(options_section(cmd));
    try {
        validate(cmd);
        handler(cmd.verb)(cmd, make_context(cmd.options), r);
    } catch (const UsageError& e) {
        fail(r, 1, "usage", e.what());
    } catch (const SyntaxError& e) {
        fail(r, 1, "syntax", e.what(), &e);
    } catch (const DomainError& e) {
        fail(r, 2, "domain", e.what());
    } catch (const UnsupportedError& e) {
        fail(r, 1, "unsupported", e.what());
    } catch (const Error& e) {
        fail(r, 1, "error", e.what());
    } catch (const std::exception& e) {
        fail(r, 1, "internal", e.what());
    }
    r.document["status"] = r.status;
    return r;
}

std::string emit(const Report& r, Format format) {
    std::ostringstream os;
    if (format == Format::machine) {
        os << r.document.dump(2) << '\n';
        return os.str();
    }
    if (!r.raw.empty() && !r.document.contains("error")) {
        // delimited data for plotting; the tables become comments
        for (const auto& s : r.sections) {
            for (const auto& [k, v] : s.rows) os << "# " << s.title << '.' << k << " = " << v << '\n';
        }
        for (const auto& l : r.raw) os << l << '\n';
        return os.str();
    }
    for (const auto& s : r.sections) {
        os << s.title << '\n';
        std::size_t w = 0;
        for (const auto& row : s.rows) w = std::max(w, row.first.size());
        for (const auto& [k, v] : s.rows) os << "  " << k << std::string(w - k.size() + 2, ' ') << v << '\n';
        for (const auto& l : s.lines) os << "  " << l << '\n';
    }
    return os.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Levi-Civita generalized functions and the Laplace transform"};
    app.require_subcommand(1);
    app.fallthrough();

    Command cmd;
    Options& o = cmd.options;
    std::string format = "text";
    std::string ruleset;
    app.add_option("--trunc", o.trunc, "truncation order q_max (rational)")->capture_default_str();
    app.add_option("--moment-order", o.moment_order, "vanishing moments of the mollifier")->capture_default_str();
    app.add_option("--quad-tol", o.quad_tol, "quadrature tolerance")->capture_default_str();
    app.add_option("--battery", o.battery, "number of test functions")->capture_default_str();
    app.add_option("--seed", o.seed, "battery seed")->envname("LCGF_SEED")->capture_default_str();
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "machine"}))->capture_default_str();
    app.add_option("--ruleset", ruleset, "transform table")->check(CLI::IsMember({"naive", "engineer", "hat"}));
    app.add_option("--y0", o.y0, "y(0)")->capture_default_str();
    app.add_option("--yp0", o.yp0, "y'(0)")->capture_default_str();

    static const std::map<std::string, std::string> blurb = {
        {"lc-eval", "evaluate an LC number"},
        {"gf-pair", "pair a generalized function with the test battery"},
        {"gf-check", "decide an equation f ~= g or f = g"},
        {"laplace", "transform of a domain element"},
        {"solve-ivp", "solve a linear ODE with initial values"},
        {"audit", "solve an IVP with a classical transform table"},
        {"mollifier-dump", "tabulate the mollifier as CSV"},
    };
    for (const auto& v : verbs()) {
        CLI::App* sub = app.add_subcommand(v, blurb.at(v));
        if (v != "mollifier-dump") sub->add_option("expression", cmd.expression, "DSL text")->required();
        sub->callback([&cmd, v] { cmd.verb = v; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }
    o.format = format == "machine" ? Format::machine : Format::text;
    if (ruleset == "naive") o.ruleset = Ruleset::naive;
    if (ruleset == "engineer") o.ruleset = Ruleset::engineer;
    if (ruleset == "hat") o.ruleset = Ruleset::hat;

    const Report r = dispatch(cmd);
    const std::string text = emit(r, o.format);
    (r.document.contains("error") && o.format == Format::text ? err : out) << text;
    return r.status;
}

}  // namespace lcgf::cli
