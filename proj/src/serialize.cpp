#include "lcgf/serialize.hpp"

#include <cmath>
#include <cstdint>

namespace lcgf {

using json = Json;

namespace {

/// Integral values print without a fractional part.
json real_json(double x) {
    if (x == std::trunc(x) && std::abs(x) < 9007199254740992.0) return json(static_cast<std::int64_t>(x));
    return json(x);
}

}  // namespace

json to_json(const Complex& c) { return json{{"re", real_json(c.real())}, {"im", real_json(c.imag())}}; }

json to_json(const LCReal& x) { return to_json(complexify(x)); }

json to_json(const LCComplex& x) {
    json out = json::array();
    for (const auto& t : x.terms())
        out.push_back(json{{"exp", t.exponent.to_string()}, {"re", real_json(t.coeff.real())}, {"im", real_json(t.coeff.imag())}});
    return out;
}

LCComplex lc_from_json(const json& j, const TruncationContext& ctx) {
    if (!j.is_array()) throw DomainError("an LC number is an array of records");
    std::vector<LCComplex::Term> terms;
    for (const auto& r : j) {
        terms.push_back({Exponent::parse(r.at("exp").get<std::string>()),
                         Complex(r.at("re").get<double>(), r.value("im", 0.0))});
    }
    return LCComplex::from_terms(std::move(terms), ctx);
}

json to_json(const LaplaceImage& f) {
    json terms = json::array();
    for (const auto& t : f.terms()) {
        json num = json::array();
        for (const auto& c : t.numerator) num.push_back(to_json(c));
        json den = json::array();
        for (const auto& c : expand_denominator(t.poles)) den.push_back(to_json(c));
        json poles = json::array();
        for (const auto& p : t.poles) poles.push_back(json{{"value", to_json(p.value)}, {"multiplicity", p.multiplicity}});
        terms.push_back(json{{"num", num}, {"den", den}, {"poles", poles}, {"shift", to_json(t.shift)}});
    }
    json hp = std::isfinite(f.half_plane()) ? json(f.half_plane()) : json(nullptr);
    return json{{"terms", terms}, {"half_plane", hp}, {"text", to_string(f)}};
}

json to_json(const ValueCheck& c) {
    return json{{"name", c.name},
                {"expected", to_json(c.expected)},
                {"obtained", to_json(c.obtained)},
                {"discrepancy", to_json(c.discrepancy)},
                {"holds", c.holds}};
}

json to_json(const ContradictionReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return json{{"ruleset", to_string(r.ruleset)},
                {"trace", r.trace},
                {"solution", to_string(r.solution)},
                {"checks", checks},
                {"verdict", to_string(r.verdict)}};
}

json to_json(const SupportInfo& s) {
    json ext = json::array();
    for (const auto& p : s.external.parts()) {
        ext.push_back(json{{"lo", std::isfinite(p.lo) ? json(p.lo) : json(nullptr)},
                           {"hi", std::isfinite(p.hi) ? json(p.hi) : json(nullptr)}});
    }
    json internal = json::array();
    for (const auto& i : s.internal) {
        internal.push_back(json{{"lo", i.lo ? to_json(*i.lo) : json(nullptr)}, {"hi", i.hi ? to_json(*i.hi) : json(nullptr)}});
    }
    return json{{"external", ext}, {"internal", internal}};
}

json to_json(const WeakEqualReport& r) {
    return json{{"verdict", to_string(r.verdict)},
                {"normal_form", r.normal_form ? json(*r.normal_form) : json(nullptr)},
                {"battery", r.battery},
                {"battery_max", r.battery_max}};
}

}  // namespace lcgf
