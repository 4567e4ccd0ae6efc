#include "lcgf/smooth.hpp"

#include "lcgf/errors.hpp"
#include "lcgf/levi_civita.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lcgf {

struct SmoothFn::Node {
    Kind kind = Kind::constant;
    std::vector<SmoothFn> children;
    Complex value{0.0, 0.0};
    unsigned order = 0;
    double p0 = 0.0;
    double p1 = 0.0;
    std::string name;
    CustomJet custom;
    std::optional<IntervalSet> custom_support;
    bool custom_real = true;
    std::string key;
};

namespace {

bool needs_parens_in_product(const SmoothFn& f) {
    if (f.kind() == SmoothFn::Kind::add) return true;
    if (f.kind() == SmoothFn::Kind::constant) {
        const Complex c = f.constant_value();
        return c.real() != 0.0 && c.imag() != 0.0;
    }
    return false;
}

std::string make_key(const SmoothFn::Node& n) {
    using K = SmoothFn::Kind;
    switch (n.kind) {
        case K::constant: return format_scalar(n.value);
        case K::variable: return "t";
        case K::add: {
            std::string out;
            for (const auto& c : n.children) {
                if (!out.empty()) out += " + ";
                out += c.key();
            }
            return out;
        }
        case K::mul: {
            std::string out;
            for (const auto& c : n.children) {
                if (!out.empty()) out += "*";
                out += needs_parens_in_product(c) ? "(" + c.key() + ")" : c.key();
            }
            return out;
        }
        case K::power: {
            const auto& b = n.children.front();
            const bool atomic = b.kind() == K::variable || b.kind() == K::exp || b.kind() == K::sin ||
                                b.kind() == K::cos;
            return (atomic ? b.key() : "(" + b.key() + ")") + "^" + std::to_string(n.order);
        }
        case K::exp: return "exp(" + n.children.front().key() + ")";
        case K::sin: return "sin(" + n.children.front().key() + ")";
        case K::cos: return "cos(" + n.children.front().key() + ")";
        case K::bump: return "bump(t; " + format_scalar(n.p0) + ", " + format_scalar(n.p1) + ")";
        case K::step: return "step(t; " + format_scalar(n.p0) + ", " + format_scalar(n.p1) + ")";
        case K::derivative:
            return "d" + std::to_string(n.order) + "[" + n.children.front().key() + "]";
        case K::custom: return n.name;
    }
    return "?";
}

ComplexJet zero_jet(int order) { return ComplexJet(order); }

}  // namespace

SmoothFn::SmoothFn() : SmoothFn(constant(Complex(0.0)).node_) {}

SmoothFn SmoothFn::make(Node node) {
    node.key = make_key(node);
    return SmoothFn(std::make_shared<const Node>(std::move(node)));
}

SmoothFn::Kind SmoothFn::kind() const { return node_->kind; }
const std::vector<SmoothFn>& SmoothFn::children() const { return node_->children; }
Complex SmoothFn::constant_value() const { return node_->value; }
unsigned SmoothFn::power_exponent() const { return node_->kind == Kind::power ? node_->order : 1U; }
const std::string& SmoothFn::key() const { return node_->key; }

SmoothFn SmoothFn::constant(Complex c) {
    Node n;
    n.kind = Kind::constant;
    n.value = c;
    return make(std::move(n));
}

SmoothFn SmoothFn::variable() {
    Node n;
    n.kind = Kind::variable;
    return make(std::move(n));
}

SmoothFn SmoothFn::exp(const SmoothFn& arg) {
    if (arg.is_constant()) return constant(std::exp(arg.constant_value()));
    Node n;
    n.kind = Kind::exp;
    n.children = {arg};
    return make(std::move(n));
}

SmoothFn SmoothFn::sin(const SmoothFn& arg) {
    if (arg.is_constant()) return constant(std::sin(arg.constant_value()));
    Node n;
    n.kind = Kind::sin;
    n.children = {arg};
    return make(std::move(n));
}

SmoothFn SmoothFn::cos(const SmoothFn& arg) {
    if (arg.is_constant()) return constant(std::cos(arg.constant_value()));
    Node n;
    n.kind = Kind::cos;
    n.children = {arg};
    return make(std::move(n));
}

SmoothFn SmoothFn::power(const SmoothFn& base, unsigned k) {
    if (k == 0) return constant(1.0);
    if (k == 1) return base;
    if (base.is_constant()) return constant(std::pow(base.constant_value(), static_cast<double>(k)));
    if (base.kind() == Kind::power) return power(base.children().front(), base.node_->order * k);
    if (base.kind() == Kind::mul) {
        std::vector<SmoothFn> factors;
        for (const auto& f : base.children()) factors.push_back(power(f, k));
        return product(std::move(factors));
    }
    Node n;
    n.kind = Kind::power;
    n.order = k;
    n.children = {base};
    return make(std::move(n));
}

SmoothFn SmoothFn::bump(double center, double radius) {
    if (!(radius > 0)) throw DomainError("bump radius must be positive");
    Node n;
    n.kind = Kind::bump;
    n.p0 = center;
    n.p1 = radius;
    return make(std::move(n));
}

SmoothFn SmoothFn::step(double a, double b) {
    if (a == b) throw DomainError("step needs a nondegenerate transition interval");
    Node n;
    n.kind = Kind::step;
    n.p0 = a;
    n.p1 = b;
    return make(std::move(n));
}

SmoothFn SmoothFn::plateau(double a0, double a1, double b1, double b0) {
    if (!(a0 < a1 && a1 <= b1 && b1 < b0)) throw DomainError("plateau needs a0 < a1 <= b1 < b0");
    return step(a0, a1) * step(b0, b1);
}

SmoothFn SmoothFn::custom(std::string name, CustomJet jet, std::optional<IntervalSet> support, bool real_valued) {
    Node n;
    n.kind = Kind::custom;
    n.name = std::move(name);
    n.custom = std::move(jet);
    n.custom_support = std::move(support);
    n.custom_real = real_valued;
    return make(std::move(n));
}

std::pair<Complex, SmoothFn> SmoothFn::split_constant() const {
    if (is_constant()) return {constant_value(), constant(1.0)};
    if (kind() == Kind::mul && children().front().is_constant()) {
        std::vector<SmoothFn> rest(children().begin() + 1, children().end());
        return {children().front().constant_value(), product(std::move(rest))};
    }
    return {Complex(1.0), *this};
}

SmoothFn SmoothFn::sum(std::vector<SmoothFn> terms) {
    std::map<std::string, std::pair<Complex, SmoothFn>> grouped;
    Complex constant_sum(0.0);
    std::vector<SmoothFn> flat;
    for (auto& t : terms) {
        if (t.kind() == Kind::add) {
            flat.insert(flat.end(), t.children().begin(), t.children().end());
        } else {
            flat.push_back(t);
        }
    }
    for (auto& t : flat) {
        if (t.is_constant()) {
            constant_sum += t.constant_value();
            continue;
        }
        auto [c, rest] = t.split_constant();
        auto it = grouped.find(rest.key());
        if (it == grouped.end()) {
            grouped.emplace(rest.key(), std::make_pair(c, rest));
        } else {
            it->second.first += c;
        }
    }
    std::vector<SmoothFn> out;
    if (constant_sum != Complex(0.0)) out.push_back(constant(constant_sum));
    for (auto& [k, cr] : grouped) {
        if (cr.first == Complex(0.0)) continue;
        out.push_back(cr.first == Complex(1.0) ? cr.second : constant(cr.first) * cr.second);
    }
    if (out.empty()) return constant(0.0);
    if (out.size() == 1) return out.front();
    Node n;
    n.kind = Kind::add;
    n.children = std::move(out);
    return make(std::move(n));
}

SmoothFn SmoothFn::product(std::vector<SmoothFn> factors) {
    Complex c(1.0);
    std::map<std::string, std::pair<SmoothFn, unsigned>> powers;
    std::vector<SmoothFn> flat;
    for (auto& f : factors) {
        if (f.kind() == Kind::mul) {
            flat.insert(flat.end(), f.children().begin(), f.children().end());
        } else {
            flat.push_back(f);
        }
    }
    for (auto& f : flat) {
        if (f.is_constant()) {
            c *= f.constant_value();
            continue;
        }
        SmoothFn base = f;
        unsigned k = 1;
        if (f.kind() == Kind::power) {
            base = f.children().front();
            k = f.node_->order;
        }
        auto it = powers.find(base.key());
        if (it == powers.end()) {
            powers.emplace(base.key(), std::make_pair(base, k));
        } else {
            it->second.second += k;
        }
    }
    if (c == Complex(0.0)) return constant(0.0);
    std::vector<SmoothFn> out;
    for (auto& [key, bk] : powers) {
        if (bk.second == 1) {
            out.push_back(bk.first);
        } else {
            Node n;
            n.kind = Kind::power;
            n.order = bk.second;
            n.children = {bk.first};
            out.push_back(make(std::move(n)));
        }
    }
    if (out.empty()) return constant(c);
    if (c != Complex(1.0)) out.insert(out.begin(), constant(c));
    if (out.size() == 1) return out.front();
    Node n;
    n.kind = Kind::mul;
    n.children = std::move(out);
    return make(std::move(n));
}

SmoothFn operator+(const SmoothFn& a, const SmoothFn& b) { return SmoothFn::sum({a, b}); }
SmoothFn operator-(const SmoothFn& a, const SmoothFn& b) { return SmoothFn::sum({a, -b}); }
SmoothFn operator*(const SmoothFn& a, const SmoothFn& b) { return SmoothFn::product({a, b}); }
SmoothFn operator*(Complex c, const SmoothFn& f) { return SmoothFn::product({SmoothFn::constant(c), f}); }
SmoothFn SmoothFn::operator-() const { return Complex(-1.0) * *this; }

ComplexJet SmoothFn::jet(double x0, int order) const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::constant: return ComplexJet(order, n.value);
        case Kind::variable: return ComplexJet::variable(order, Complex(x0));
        case Kind::add: {
            ComplexJet acc(order);
            for (const auto& c : n.children) acc += c.jet(x0, order);
            return acc;
        }
        case Kind::mul: {
            ComplexJet acc(order, Complex(1.0));
            for (const auto& c : n.children) acc = acc * c.jet(x0, order);
            return acc;
        }
        case Kind::power: return pow(n.children.front().jet(x0, order), n.order);
        case Kind::exp: return lcgf::exp(n.children.front().jet(x0, order));
        case Kind::sin: return lcgf::sin(n.children.front().jet(x0, order));
        case Kind::cos: return lcgf::cos(n.children.front().jet(x0, order));
        case Kind::bump: {
            const double w0 = (x0 - n.p0) / n.p1;
            if (std::abs(w0) >= 1.0) return zero_jet(order);
            if (std::exp(-1.0 / (1.0 - w0 * w0)) == 0.0) return zero_jet(order);
            ComplexJet w(order, Complex(w0));
            if (order >= 1) w[1] = Complex(1.0 / n.p1);
            ComplexJet u = ComplexJet(order, Complex(1.0)) - w * w;
            ComplexJet g = ComplexJet(order, Complex(-1.0)) / u;
            return lcgf::exp(g);
        }
        case Kind::step: {
            const double w0 = (x0 - n.p0) / (n.p1 - n.p0);
            if (w0 <= 0.0) return zero_jet(order);
            if (w0 >= 1.0) return ComplexJet(order, Complex(1.0));
            ComplexJet w(order, Complex(w0));
            if (order >= 1) w[1] = Complex(1.0 / (n.p1 - n.p0));
            const ComplexJet one(order, Complex(1.0));
            ComplexJet d = one / w - one / (one - w);
            if (w0 < 0.5) {
                ComplexJet e = lcgf::exp(-d);
                if (e[0] == Complex(0.0)) return zero_jet(order);
                return e / (one + e);
            }
            ComplexJet e = lcgf::exp(d);
            if (e[0] == Complex(0.0)) return one;
            return one / (one + e);
        }
        case Kind::derivative:
            return differentiate(n.children.front().jet(x0, order + static_cast<int>(n.order)),
                                 static_cast<int>(n.order));
        case Kind::custom: {
            ComplexJet j = n.custom(x0, order);
            if (j.order() < order) throw DomainError("custom jet oracle returned too few coefficients");
            return j;
        }
    }
    return zero_jet(order);
}

SmoothFn SmoothFn::derivative(int k) const {
    if (k < 0) throw DomainError("negative derivative order");
    if (k == 0) return *this;
    if (k > 1) return derivative(1).derivative(k - 1);
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::constant: return constant(0.0);
        case Kind::variable: return constant(1.0);
        case Kind::add: {
            std::vector<SmoothFn> terms;
            for (const auto& c : n.children) terms.push_back(c.derivative());
            return sum(std::move(terms));
        }
        case Kind::mul: {
            std::vector<SmoothFn> terms;
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                std::vector<SmoothFn> factors = n.children;
                factors[i] = factors[i].derivative();
                terms.push_back(product(std::move(factors)));
            }
            return sum(std::move(terms));
        }
        case Kind::power: {
            const SmoothFn& b = n.children.front();
            return product({constant(static_cast<double>(n.order)), power(b, n.order - 1), b.derivative()});
        }
        case Kind::exp: return *this * n.children.front().derivative();
        case Kind::sin: return cos(n.children.front()) * n.children.front().derivative();
        case Kind::cos: return -(sin(n.children.front()) * n.children.front().derivative());
        case Kind::derivative: {
            Node d;
            d.kind = Kind::derivative;
            d.order = n.order + 1;
            d.children = n.children;
            return make(std::move(d));
        }
        case Kind::bump:
        case Kind::step:
        case Kind::custom: {
            Node d;
            d.kind = Kind::derivative;
            d.order = 1;
            d.children = {*this};
            return make(std::move(d));
        }
    }
    return {};
}

std::optional<IntervalSet> SmoothFn::support() const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::constant: return n.value == Complex(0.0) ? IntervalSet() : IntervalSet::whole_line();
        case Kind::variable:
        case Kind::exp:
        case Kind::sin:
        case Kind::cos: return IntervalSet::whole_line();
        case Kind::power:
        case Kind::derivative: return n.children.front().support();
        case Kind::add: {
            IntervalSet acc;
            for (const auto& c : n.children) {
                auto s = c.support();
                if (!s) return std::nullopt;
                acc = acc.unite(*s);
            }
            return acc;
        }
        case Kind::mul: {
            IntervalSet acc = IntervalSet::whole_line();
            for (const auto& c : n.children) {
                auto s = c.support();
                if (!s) return std::nullopt;
                acc = acc.intersect(*s);
            }
            return acc;
        }
        case Kind::bump: return IntervalSet::interval(n.p0 - n.p1, n.p0 + n.p1);
        case Kind::step:
            if (n.p0 < n.p1) return IntervalSet::interval(n.p0, std::numeric_limits<double>::infinity());
            return IntervalSet::interval(-std::numeric_limits<double>::infinity(), n.p0);
        case Kind::custom: return n.custom_support;
    }
    return std::nullopt;
}

bool SmoothFn::is_real() const {
    const Node& n = *node_;
    if (n.kind == Kind::constant) return n.value.imag() == 0.0;
    if (n.kind == Kind::custom) return n.custom_real;
    return std::all_of(n.children.begin(), n.children.end(), [](const SmoothFn& c) { return c.is_real(); });
}

}  // namespace lcgf
