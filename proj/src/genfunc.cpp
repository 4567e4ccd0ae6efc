#include "lcgf/genfunc.hpp"

#include "lcgf/errors.hpp"
#include "lcgf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

namespace lcgf {

namespace {

using Complex = std::complex<double>;
using Jet = std::vector<LCComplex>;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

bool lc_less(const LCReal& a, const LCReal& b) { return compare(a, b) == Ordering::less; }

/// Exact text of an LC number (hex floats) for structural keys.
std::string exact_key(const LCReal& x) {
    std::string out;
    char buf[64];
    for (const auto& t : x.terms()) {
        std::snprintf(buf, sizeof(buf), "%a", t.coeff);
        out += t.exponent.to_string() + ":" + buf + ";";
    }
    return out.empty() ? "0" : out;
}

bool is_delta(const SingularAtom& a) { return std::holds_alternative<DeltaAtom>(a); }

int delta_order(const SingularAtom& a) {
    if (const auto* d = std::get_if<DeltaAtom>(&a)) return d->order;
    return -1;
}

void check_settings(const GfSettings& a, const GfSettings& b) {
    if (!(a == b)) throw ContextMismatch("generalized functions use different mollifiers, contexts or domains");
}

bool in_domain(double x, const RealInterval& d) { return d.lo < x && x < d.hi; }

// ---------------------------------------------------------------- monomials

/// Singular factors after removing exact ones and detecting exact zeros.
/// Atoms whose positions differ by less than 2s interact; farther apart, the
/// representatives either have disjoint supports or a step is identically 0 or 1
/// on the other atom's support.
std::optional<std::vector<SingularAtom>> reduce_singular(std::vector<SingularAtom> atoms,
                                                         const TruncationContext& ctx) {
    if (atoms.size() <= 1) return atoms;
    struct Item {
        SingularAtom atom;
        LCReal pos;
    };
    std::vector<Item> items;
    for (auto& a : atoms) items.push_back({a, position(a, ctx)});
    std::stable_sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
        const Ordering o = compare(x.pos, y.pos);
        if (o != Ordering::equal) return o == Ordering::less;
        return delta_order(x.atom) > delta_order(y.atom);
    });
    const LCReal gap = LCReal::monomial(2.0, Exponent(1), ctx);
    std::vector<std::vector<Item>> clusters;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i == 0 || !lc_less(items[i].pos - items[i - 1].pos, gap)) clusters.emplace_back();
        clusters.back().push_back(items[i]);
    }
    std::vector<std::size_t> with_delta;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        if (std::any_of(clusters[c].begin(), clusters[c].end(), [](const Item& it) { return is_delta(it.atom); }))
            with_delta.push_back(c);
    }
    std::size_t keep = clusters.size() - 1;
    if (with_delta.size() > 1) return std::nullopt;
    if (with_delta.size() == 1) {
        keep = with_delta.front();
        // a step to the right of every delta vanishes on their supports
        if (keep + 1 < clusters.size()) return std::nullopt;
    }
    std::vector<SingularAtom> out;
    for (auto& it : clusters[keep]) out.push_back(std::move(it.atom));
    return out;
}

std::optional<Monomial> canonical(Monomial m, const GfSettings& settings) {
    if (m.coef.is_zero()) return std::nullopt;
    std::vector<SmoothAtom> merged;
    for (auto& a : m.smooth) {
        if (a.f.is_constant()) {
            m.coef *= a.f.constant_value();
            continue;
        }
        auto it = std::find_if(merged.begin(), merged.end(), [&](const SmoothAtom& b) { return b.shift == a.shift; });
        if (it != merged.end()) {
            it->f = it->f * a.f;
        } else {
            merged.push_back(a);
        }
    }
    std::vector<SmoothAtom> smooth;
    for (auto& a : merged) {
        auto [c, rest] = a.f.split_constant();
        m.coef *= c;
        if (rest.is_constant()) {
            m.coef *= rest.constant_value();
            continue;
        }
        smooth.push_back({rest, a.shift});
    }
    if (m.coef.is_zero()) return std::nullopt;
    std::sort(smooth.begin(), smooth.end(), [](const SmoothAtom& a, const SmoothAtom& b) {
        if (a.f.key() != b.f.key()) return a.f.key() < b.f.key();
        return exact_key(a.shift) < exact_key(b.shift);
    });
    m.smooth = std::move(smooth);
    auto singular = reduce_singular(std::move(m.singular), settings.ctx);
    if (!singular) return std::nullopt;
    m.singular = std::move(*singular);
    return m;
}

std::vector<Monomial> merge_like_terms(std::vector<Monomial> terms) {
    std::map<std::string, Monomial> acc;
    for (auto& m : terms) {
        const std::string key = factor_key(m);
        auto it = acc.find(key);
        if (it == acc.end()) {
            acc.emplace(key, std::move(m));
        } else {
            it->second.coef += m.coef;
        }
    }
    std::vector<Monomial> out;
    for (auto& [key, m] : acc)
        if (!m.coef.is_zero()) out.push_back(std::move(m));
    return out;
}

// ---------------------------------------------------------------- jets

Jet jet_one(int order, const TruncationContext& ctx) {
    Jet j(static_cast<std::size_t>(order) + 1, LCComplex(ctx));
    j[0] = LCComplex(Complex(1.0), ctx);
    return j;
}

Jet jet_mul(const Jet& a, const Jet& b) {
    const std::size_t n = std::min(a.size(), b.size());
    Jet r(n, LCComplex(a.front().context()));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i <= k; ++i) r[k] += a[i] * b[k - i];
    return r;
}

/// Jet of the product of smooth factors at the LC point p.
Jet cofactor_jet(const std::vector<SmoothAtom>& smooth, const LCReal& p, int order, const TruncationContext& ctx) {
    Jet j = jet_one(order, ctx);
    for (const auto& a : smooth) j = jet_mul(j, lc_jet(a.f, p - a.shift, order, ctx));
    return j;
}

TruncationContext widened(const TruncationContext& ctx, const Exponent& extra) {
    TruncationContext w = ctx;
    if (extra.sign() > 0) w.q_max = ctx.q_max + extra;
    return w;
}

/// Largest integer m with m <= x.
int floor_exponent(const Exponent& x) {
    auto num = boost::multiprecision::numerator(x.rational());
    auto den = boost::multiprecision::denominator(x.rational());
    boost::multiprecision::cpp_int q = num / den;
    if (num.sign() < 0 && q * den != num) q -= 1;
    return q.convert_to<int>();
}

/// Multi-indices j with sum_i j_i v_i <= budget (v_i > 0; a zero displacement allows only j_i = 0).
void enumerate_indices(const std::vector<std::optional<Exponent>>& v, const Exponent& budget,
                       const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> j(v.size(), 0);
    std::function<void(std::size_t, const Exponent&)> rec = [&](std::size_t i, const Exponent& left) {
        if (i == v.size()) {
            visit(j);
            return;
        }
        j[i] = 0;
        rec(i + 1, left);
        if (!v[i]) return;
        Exponent used = *v[i];
        for (int k = 1; used <= left; ++k, used += *v[i]) {
            j[i] = k;
            rec(i + 1, left - used);
        }
        j[i] = 0;
    };
    if (budget.sign() >= 0) rec(0, budget);
}

// ---------------------------------------------------------------- normal form

struct DeltaAccumulator {
    std::vector<NormalForm::DeltaTerm> terms;
    void add(const LCReal& p, int order, const LCComplex& c) {
        if (c.is_zero()) return;
        for (auto& t : terms) {
            if (t.order == order && t.position == p) {
                t.coef += c;
                return;
            }
        }
        terms.push_back({p, order, c});
    }
};

/// psi * delta^{(k)}_p as a combination of delta^{(i)}_p.
void reduce_single_delta(const Monomial& m, const DeltaAtom& d, const GfSettings& settings, DeltaAccumulator& out) {
    const auto& ctx = settings.ctx;
    const LCReal p = position(SingularAtom(d), ctx);
    const Jet psi = cofactor_jet(m.smooth, p, d.order, ctx);
    for (int i = 0; i <= d.order; ++i) {
        const double w = ((d.order - i) % 2 ? -1.0 : 1.0) * factorial(d.order) / factorial(i);
        out.add(p, i, m.coef * psi[static_cast<std::size_t>(d.order - i)] * Complex(w));
    }
}

/// Products of interacting singular atoms: substitute x = p + s u and integrate the
/// mollifier factors against powers of u.
void reduce_cluster(const Monomial& m, const GfSettings& settings, DeltaAccumulator& out,
                    std::vector<Monomial>& residual) {
    const auto& ctx = settings.ctx;
    const Mollifier& phi = settings.mollifier;
    const LCReal p_ref = position(m.singular.front(), ctx);

    int sigma = 0;
    bool any_delta = false;
    std::vector<double> a;
    std::vector<LCReal> eta;
    std::vector<std::optional<Exponent>> v;
    std::vector<int> kind;  // delta order, or -1 for a step
    for (const auto& atom : m.singular) {
        const LCReal d = (position(atom, ctx) - p_ref).shifted(Exponent(-1));
        a.push_back(standard_part(d));
        eta.push_back(infinitesimal_part(d));
        v.push_back(eta.back().is_zero() ? std::nullopt : std::optional<Exponent>(eta.back().leading_exponent()));
        const int k = delta_order(atom);
        kind.push_back(k);
        if (k >= 0) {
            sigma += 1 + k;
            any_delta = true;
        }
    }
    const Exponent e0 = Exponent(1 - sigma);
    const TruncationContext wide = widened(ctx, -e0);
    const int m_max = floor_exponent(ctx.q_max - e0);
    if (m_max < 0) return;

    double lo = -1e300;
    double hi = 1e300;
    if (any_delta) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (kind[i] < 0) continue;
            lo = std::max(lo, a[i] - 1.0);
            hi = std::min(hi, a[i] + 1.0);
        }
    } else {
        lo = *std::min_element(a.begin(), a.end()) - 1.0;
        hi = *std::max_element(a.begin(), a.end()) + 1.0;
    }

    auto factor = [&](std::size_t i, int j, double u) {
        const double x = u - a[i];
        if (kind[i] >= 0) return phi.derivative(kind[i] + j, x);
        return j == 0 ? phi.cumulative(x) : phi.derivative(j - 1, x);
    };

    std::vector<LCReal> k_m(static_cast<std::size_t>(m_max) + 1, LCReal(wide));
    for (int mm = 0; mm <= m_max; ++mm) {
        const Exponent budget = ctx.q_max - e0 - Exponent(mm);
        enumerate_indices(v, budget, [&](const std::vector<int>& j) {
            // interval of the product: steps with j >= 1 are compact as well
            double l = lo, h = hi;
            const bool all_zero = std::all_of(j.begin(), j.end(), [](int x) { return x == 0; });
            if (!any_delta && !all_zero) {
                l = -1e300;
                h = 1e300;
                for (std::size_t i = 0; i < a.size(); ++i) {
                    if (j[i] == 0) continue;
                    l = std::max(l, a[i] - 1.0);
                    h = std::min(h, a[i] + 1.0);
                }
            }
            if (!(l < h)) return;
            const bool subtract_step = !any_delta && all_zero;
            auto integrand = [&](double u) {
                double prod = std::pow(u, mm);
                for (std::size_t i = 0; i < a.size(); ++i) prod *= factor(i, j[i], u);
                if (subtract_step && u > 0) prod -= std::pow(u, mm);
                return prod;
            };
            double value = 0.0;
            if (subtract_step && l < 0.0 && 0.0 < h) {
                value = integrate(integrand, l, 0.0, phi.scheme()) + integrate(integrand, 0.0, h, phi.scheme());
            } else {
                value = integrate(integrand, l, h, phi.scheme());
            }
            LCReal w = LCReal::monomial(value, e0 + Exponent(mm), wide);
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (j[i] == 0) continue;
                w *= pow((-eta[i]).with_context(wide), static_cast<unsigned>(j[i])) * (1.0 / factorial(j[i]));
            }
            k_m[static_cast<std::size_t>(mm)] += w;
        });
    }

    const Jet psi = cofactor_jet(m.smooth, p_ref, m_max, ctx);
    for (int i = 0; i <= m_max; ++i) {
        LCComplex c(ctx);
        for (int mm = i; mm <= m_max; ++mm) {
            c += complexify(k_m[static_cast<std::size_t>(mm)].with_context(ctx)) *
                 psi[static_cast<std::size_t>(mm - i)];
        }
        out.add(p_ref, i, m.coef * c * Complex((i % 2 ? -1.0 : 1.0) / factorial(i)));
    }
    if (!any_delta) {
        Monomial r = m;
        r.singular = {m.singular.front()};
        residual.push_back(std::move(r));
    }
}

// ---------------------------------------------------------------- pairing

/// Integral of tau times the smooth factors (and a step at c + h when present).
LCComplex residual_pairing(const Monomial& m, const TestFunction& tau, const GfSettings& settings) {
    const auto& ctx = settings.ctx;
    const QuadratureScheme& scheme = settings.mollifier.scheme();
    std::vector<double> a;
    std::vector<LCReal> eta;
    std::vector<std::optional<Exponent>> v;
    for (const auto& s : m.smooth) {
        a.push_back(standard_part(s.shift));
        eta.push_back(infinitesimal_part(s.shift));
        v.push_back(eta.back().is_zero() ? std::nullopt : std::optional<Exponent>(eta.back().leading_exponent()));
    }
    double lo = tau.lo;
    const double hi = tau.hi;
    std::optional<HeavisideAtom> step;
    if (!m.singular.empty()) {
        step = std::get<HeavisideAtom>(m.singular.front());
        lo = std::max(lo, step->center);
    }
    LCComplex total(ctx);
    if (lo < hi) {
        std::map<std::pair<std::size_t, int>, SmoothFn> derivs;
        enumerate_indices(v, ctx.q_max, [&](const std::vector<int>& j) {
            std::vector<SmoothFn> fs;
            LCReal w(1.0, ctx);
            for (std::size_t i = 0; i < j.size(); ++i) {
                auto key = std::make_pair(i, j[i]);
                auto it = derivs.find(key);
                if (it == derivs.end()) it = derivs.emplace(key, m.smooth[i].f.derivative(j[i])).first;
                fs.push_back(it->second);
                if (j[i] > 0) w *= pow(-eta[i], static_cast<unsigned>(j[i])) * (1.0 / factorial(j[i]));
            }
            if (w.is_zero()) return;
            auto integrand = [&](double x) {
                Complex prod = tau.fn(x);
                for (std::size_t i = 0; i < fs.size() && prod != Complex(0.0); ++i) prod *= fs[i](x - a[i]);
                return prod;
            };
            const Complex value = integrate_complex(integrand, lo, hi, scheme);
            total += complexify(w) * value;
        });
    }
    if (step && !step->shift.is_zero()) {
        // integral over [c, c + h] removed by Taylor expansion at c
        const LCComplex h = complexify(step->shift);
        const int depth = taylor_depth(valuation(step->shift), ctx);
        if (depth >= 1) {
            const LCReal c(step->center, ctx);
            Jet f = lc_jet(tau.fn, c, depth - 1, ctx);
            f = jet_mul(f, cofactor_jet(m.smooth, c, depth - 1, ctx));
            LCComplex hp = h;
            for (int k = 0; k < depth; ++k) {
                total -= f[static_cast<std::size_t>(k)] * hp * Complex(1.0 / (k + 1));
                hp = hp * h;
            }
        }
    }
    return m.coef * total;
}

// ---------------------------------------------------------------- support helpers

std::optional<LCInterval> intersect(const LCInterval& x, const LCInterval& y) {
    LCInterval r;
    if (!x.lo) r.lo = y.lo;
    else if (!y.lo) r.lo = x.lo;
    else r.lo = lc_less(*x.lo, *y.lo) ? y.lo : x.lo;
    if (!x.hi) r.hi = y.hi;
    else if (!y.hi) r.hi = x.hi;
    else r.hi = lc_less(*x.hi, *y.hi) ? x.hi : y.hi;
    if (r.lo && r.hi && lc_less(*r.hi, *r.lo)) return std::nullopt;
    return r;
}

LCInterval from_real(const RealInterval& r, const LCReal& shift) {
    LCInterval out;
    if (std::isfinite(r.lo)) out.lo = LCReal(r.lo, shift.context()) + shift;
    if (std::isfinite(r.hi)) out.hi = LCReal(r.hi, shift.context()) + shift;
    return out;
}

/// Internal support of one monomial; smooth factors without a declared support count as the whole line.
std::optional<LCInterval> monomial_internal(const Monomial& m, const TruncationContext& ctx) {
    LCInterval acc;
    const LCReal s = LCReal::scale(ctx);
    for (const auto& a : m.smooth) {
        auto sup = a.f.support();
        if (!sup) continue;
        if (sup->empty()) return std::nullopt;
        auto r = intersect(acc, from_real(RealInterval{sup->lower(), sup->upper()}, a.shift));
        if (!r) return std::nullopt;
        acc = *r;
    }
    for (const auto& atom : m.singular) {
        const LCReal p = position(atom, ctx);
        LCInterval i;
        i.lo = p - s;
        if (is_delta(atom)) i.hi = p + s;
        auto r = intersect(acc, i);
        if (!r) return std::nullopt;
        acc = *r;
    }
    return acc;
}

std::string position_text(const LCReal& p) {
    if (p.is_zero()) return "t";
    if (p.size() == 1) {
        const double c = p.terms().front().coeff;
        return c > 0 ? "t - " + to_string(p) : "t + " + to_string(-p);
    }
    return "t - (" + to_string(p) + ")";
}

/// Replaces the variable t in a smooth-function key by t - shift.
std::string substitute_shift(const std::string& key, const LCReal& shift) {
    if (shift.is_zero()) return key;
    const std::string arg = position_text(shift);
    auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    std::string out;
    for (std::size_t i = 0; i < key.size(); ++i) {
        const bool standalone = key[i] == 't' && (i == 0 || !ident(key[i - 1])) &&
                                (i + 1 == key.size() || !ident(key[i + 1]));
        if (!standalone) {
            out += key[i];
            continue;
        }
        const bool bare = i > 0 && key[i - 1] == '(' && i + 1 < key.size() &&
                          (key[i + 1] == ')' || key[i + 1] == ';' || key[i + 1] == ',');
        out += bare ? arg : "(" + arg + ")";
    }
    return out;
}

std::string singular_text(const SingularAtom& a, const TruncationContext& ctx) {
    const std::string pos = position_text(position(a, ctx));
    if (const auto* d = std::get_if<DeltaAtom>(&a)) {
        if (d->order == 0) return "delta(" + pos + ")";
        return "delta_n(" + std::to_string(d->order) + ", " + pos + ")";
    }
    return "H(" + pos + ")";
}

}  // namespace

// ==================================================================== public

LCReal position(const SingularAtom& a, const TruncationContext& ctx) {
    return std::visit([&](const auto& x) { return LCReal(x.center, ctx) + x.shift.with_context(ctx); }, a);
}

std::string factor_key(const Monomial& m) {
    std::string out;
    for (const auto& a : m.smooth) out += "[" + a.f.key() + "@" + exact_key(a.shift) + "]";
    for (const auto& a : m.singular) {
        const int k = delta_order(a);
        const std::string pos = std::visit(
            [](const auto& x) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%a", x.center);
                return std::string(buf) + "+" + exact_key(x.shift);
            },
            a);
        out += (k >= 0 ? "{D" + std::to_string(k) : std::string("{H")) + "@" + pos + "}";
    }
    return out;
}

GenFunction::GenFunction(GfSettings settings) : settings_(std::move(settings)) {}

GenFunction GenFunction::from_monomials(std::vector<Monomial> terms, GfSettings settings) {
    std::vector<Monomial> reduced;
    for (auto& m : terms) {
        m.coef = m.coef.with_context(settings.ctx);
        if (auto c = canonical(std::move(m), settings)) reduced.push_back(std::move(*c));
    }
    GenFunction f(std::move(settings));
    f.terms_ = merge_like_terms(std::move(reduced));
    return f;
}

GenFunction operator+(const GenFunction& a, const GenFunction& b) {
    check_settings(a.settings_, b.settings_);
    std::vector<Monomial> all = a.terms_;
    all.insert(all.end(), b.terms_.begin(), b.terms_.end());
    GenFunction r(a.settings_);
    r.terms_ = merge_like_terms(std::move(all));
    return r;
}

GenFunction GenFunction::operator-() const {
    GenFunction r = *this;
    for (auto& m : r.terms_) m.coef = -m.coef;
    return r;
}

GenFunction operator-(const GenFunction& a, const GenFunction& b) { return a + (-b); }

GenFunction operator*(const GenFunction& a, const GenFunction& b) {
    check_settings(a.settings_, b.settings_);
    std::vector<Monomial> out;
    for (const auto& x : a.terms_) {
        for (const auto& y : b.terms_) {
            Monomial m;
            m.coef = x.coef * y.coef;
            m.smooth = x.smooth;
            m.smooth.insert(m.smooth.end(), y.smooth.begin(), y.smooth.end());
            m.singular = x.singular;
            m.singular.insert(m.singular.end(), y.singular.begin(), y.singular.end());
            out.push_back(std::move(m));
        }
    }
    return GenFunction::from_monomials(std::move(out), a.settings_);
}

GenFunction operator*(const LCComplex& c, const GenFunction& f) {
    std::vector<Monomial> out = f.terms_;
    for (auto& m : out) m.coef = m.coef * c;
    return GenFunction::from_monomials(std::move(out), f.settings_);
}

GenFunction operator*(std::complex<double> c, const GenFunction& f) {
    return LCComplex(c, f.context()) * f;
}

std::string GenFunction::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& m : terms_) {
        std::vector<std::string> factors;
        for (const auto& a : m.singular) factors.push_back(singular_text(a, settings_.ctx));
        for (const auto& a : m.smooth) factors.push_back(substitute_shift(a.f.key(), a.shift));
        LCComplex c = m.coef;
        bool negative = false;
        if (c.size() == 1 && c.terms().front().coeff.imag() == 0.0 && c.terms().front().coeff.real() < 0) {
            negative = true;
            c = -c;
        }
        std::string coef_text;
        const bool unit = c.size() == 1 && c.terms().front().exponent.is_zero() &&
                          c.terms().front().coeff == Complex(1.0);
        if (!unit || factors.empty()) {
            coef_text = lcgf::to_string(c);
            if (c.size() > 1) coef_text = "(" + coef_text + ")";
        }
        std::string body = coef_text;
        for (const auto& f : factors) {
            if (!body.empty()) body += "*";
            const bool sum = f.find(" + ") != std::string::npos && f.front() != '(';
            body += sum && (m.smooth.size() + m.singular.size() > 1 || !coef_text.empty()) ? "(" + f + ")" : f;
        }
        if (out.empty()) {
            out = negative ? "-" + body : body;
        } else {
            out += negative ? " - " + body : " + " + body;
        }
    }
    return out;
}

GenFunction embed_smooth(const SmoothFn& f, const GfSettings& settings) {
    Monomial m{LCComplex(Complex(1.0), settings.ctx), {{f, LCReal(settings.ctx)}}, {}};
    return GenFunction::from_monomials({m}, settings);
}

GenFunction embed_delta(double center, int order, const GfSettings& settings) {
    if (order < 0) throw DomainError("delta derivative order must be nonnegative");
    if (!in_domain(center, settings.domain)) throw DomainError("delta center outside the domain");
    Monomial m{LCComplex(Complex(1.0), settings.ctx), {}, {DeltaAtom{center, LCReal(settings.ctx), order}}};
    return GenFunction::from_monomials({m}, settings);
}

GenFunction embed_heaviside(double center, const GfSettings& settings) {
    Monomial m{LCComplex(Complex(1.0), settings.ctx), {}, {HeavisideAtom{center, LCReal(settings.ctx)}}};
    return GenFunction::from_monomials({m}, settings);
}

GenFunction embed_constant(const LCComplex& c, const GfSettings& settings) {
    Monomial m{c, {}, {}};
    return GenFunction::from_monomials({m}, settings);
}

GenFunction derive(const GenFunction& f, int times) {
    if (times < 0) throw DomainError("negative derivative order");
    GenFunction cur = f;
    for (int n = 0; n < times; ++n) {
        std::vector<Monomial> out;
        for (const auto& m : cur.terms()) {
            for (std::size_t i = 0; i < m.smooth.size(); ++i) {
                Monomial d = m;
                d.smooth[i].f = d.smooth[i].f.derivative();
                out.push_back(std::move(d));
            }
            for (std::size_t i = 0; i < m.singular.size(); ++i) {
                Monomial d = m;
                if (auto* delta = std::get_if<DeltaAtom>(&d.singular[i])) {
                    delta->order += 1;
                } else {
                    const auto& h = std::get<HeavisideAtom>(d.singular[i]);
                    d.singular[i] = DeltaAtom{h.center, h.shift, 0};
                }
                out.push_back(std::move(d));
            }
        }
        cur = GenFunction::from_monomials(std::move(out), cur.settings());
    }
    return cur;
}

GenFunction translate(const GenFunction& f, const LCReal& h) {
    const LCReal hh = h.with_context(f.context());
    const double a = standard_part(hh);
    const LCReal eta = infinitesimal_part(hh);
    GfSettings settings = f.settings();
    settings.domain.lo += a;
    settings.domain.hi += a;
    std::vector<Monomial> out = f.terms();
    for (auto& m : out) {
        for (auto& s : m.smooth) s.shift = s.shift + hh;
        for (auto& atom : m.singular) {
            std::visit(
                [&](auto& x) {
                    x.center += a;
                    x.shift = x.shift + eta;
                },
                atom);
        }
    }
    return GenFunction::from_monomials(std::move(out), settings);
}

GenFunction multiply(const GenFunction& f, const GenFunction& g) { return f * g; }

GenFunction compose_affine(const GenFunction& f, double a, double b) {
    if (a == 0.0) throw DomainError("affine change of variable needs a nonzero slope");
    const auto& ctx = f.context();
    std::vector<Monomial> out;
    for (const auto& m : f.terms()) {
        if (!m.smooth.empty() || m.singular.size() > 1)
            throw UnsupportedError("affine composition is implemented for single singular atoms");
        if (m.singular.empty()) {
            out.push_back(m);
            continue;
        }
        const LCReal p = position(m.singular.front(), ctx);
        const LCReal q = (p - LCReal(b, ctx)) * (1.0 / a);
        const double c = standard_part(q);
        const LCReal h = infinitesimal_part(q);
        if (const auto* d = std::get_if<DeltaAtom>(&m.singular.front())) {
            Monomial r = m;
            r.coef = m.coef * Complex(1.0 / (std::abs(a) * std::pow(a, d->order)));
            r.singular = {DeltaAtom{c, h, d->order}};
            out.push_back(std::move(r));
        } else if (a > 0) {
            Monomial r = m;
            r.singular = {HeavisideAtom{c, h}};
            out.push_back(std::move(r));
        } else {
            // H(a x + b - p) = 1 - H(x - q) away from a null set when a < 0
            out.push_back(Monomial{m.coef, {}, {}});
            out.push_back(Monomial{-m.coef, {}, {HeavisideAtom{c, h}}});
        }
    }
    GfSettings settings = f.settings();
    double lo = (settings.domain.lo - b) / a;
    double hi = (settings.domain.hi - b) / a;
    if (a < 0) std::swap(lo, hi);
    settings.domain = RealInterval{lo, hi};
    return GenFunction::from_monomials(std::move(out), settings);
}

std::vector<LCComplex> lc_jet(const SmoothFn& f, const LCReal& y, int order, const TruncationContext& ctx) {
    const LCReal yy = y.with_context(ctx);
    const double y0 = standard_part(yy);
    const LCComplex h = complexify(infinitesimal_part(yy));
    const int depth = taylor_depth(valuation(h), ctx);
    const ComplexJet base = f.jet(y0, order + depth);
    std::vector<LCComplex> out;
    out.reserve(static_cast<std::size_t>(order) + 1);
    for (int k = 0; k <= order; ++k) {
        std::vector<Complex> c(static_cast<std::size_t>(depth) + 1);
        for (int j = 0; j <= depth; ++j) c[static_cast<std::size_t>(j)] = base[static_cast<std::size_t>(k + j)] * binomial(k + j, j);
        out.push_back(horner(c, h));
    }
    return out;
}

LCComplex evaluate_at(const GenFunction& f, const LCReal& x) {
    const auto& ctx = f.context();
    const LCReal xx = x.with_context(ctx);
    if (classify(xx) == Magnitude::infinite) throw NotFinite("evaluation at an infinite point");
    if (!in_domain(standard_part(xx), f.settings().domain)) throw DomainError("evaluation point outside the domain");
    const Mollifier& phi = f.mollifier();
    LCComplex total(ctx);
    for (const auto& m : f.terms()) {
        LCComplex v = m.coef;
        for (const auto& a : m.smooth) {
            if (v.is_zero()) break;
            v *= lc_jet(a.f, xx - a.shift, 0, ctx).front();
        }
        for (const auto& atom : m.singular) {
            if (v.is_zero()) break;
            const int k = delta_order(atom);
            const Exponent extra(k >= 0 ? 2 + k : 1);
            const TruncationContext wide = widened(ctx, extra);
            const LCReal w = (xx.with_context(wide) - position(atom, wide)).shifted(Exponent(-1));
            LCComplex value(wide);
            if (classify(w) == Magnitude::infinite) {
                if (k < 0 && sign(w) > 0) value = LCComplex(Complex(1.0), wide);
            } else {
                const double w0 = standard_part(w);
                if (k >= 0) {
                    if (w0 > -1.0 && w0 < 1.0) {
                        auto oracle = [&](double x0, int order) {
                            const Taylor<double> t = differentiate(phi.jet(x0, order + k), k);
                            return std::vector<Complex>(t.coefficients().begin(), t.coefficients().end());
                        };
                        value = lift_smooth(oracle, w).shifted(Exponent(-1 - k));
                    }
                } else if (w0 >= 1.0) {
                    value = LCComplex(Complex(1.0), wide);
                } else if (w0 > -1.0) {
                    auto oracle = [&](double x0, int order) {
                        std::vector<Complex> c{Complex(phi.cumulative(x0))};
                        if (order >= 1) {
                            const Taylor<double> t = phi.jet(x0, order - 1);
                            for (int i = 0; i < order; ++i)
                                c.push_back(Complex(t[static_cast<std::size_t>(i)] / (i + 1)));
                        }
                        return c;
                    };
                    value = lift_smooth(oracle, w);
                }
            }
            v = v * value.with_context(ctx);
        }
        total += v;
    }
    return total;
}

TestFunction TestFunction::polynomial_bump(const std::vector<double>& coeffs, double center, double radius) {
    if (!(radius > 0)) throw DomainError("test function radius must be positive");
    const SmoothFn w = SmoothFn::constant(1.0 / radius) * (SmoothFn::variable() - SmoothFn::constant(center));
    SmoothFn poly = SmoothFn::constant(0.0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) poly = poly * w + SmoothFn::constant(*it);
    return TestFunction{poly * SmoothFn::bump(center, radius), center - radius, center + radius};
}

TestFunction TestFunction::plateau(double a0, double a1, double b1, double b0) {
    return TestFunction{SmoothFn::plateau(a0, a1, b1, b0), a0, b0};
}

NormalForm normal_form(const GenFunction& f) {
    NormalForm nf;
    nf.settings = f.settings();
    DeltaAccumulator deltas;
    std::vector<Monomial> residual;
    for (const auto& m : f.terms()) {
        if (m.singular.empty()) {
            residual.push_back(m);
        } else if (m.singular.size() == 1) {
            if (const auto* d = std::get_if<DeltaAtom>(&m.singular.front())) {
                reduce_single_delta(m, *d, f.settings(), deltas);
            } else {
                residual.push_back(m);
            }
        } else {
            reduce_cluster(m, f.settings(), deltas, residual);
        }
    }
    for (auto& t : deltas.terms)
        if (!t.coef.is_zero()) nf.deltas.push_back(std::move(t));
    nf.residual = merge_like_terms(std::move(residual));
    return nf;
}

bool is_delta_combination(const NormalForm& nf, double tol) {
    return std::all_of(nf.residual.begin(), nf.residual.end(),
                       [tol](const Monomial& m) { return negligible(m.coef, tol); });
}

LCComplex pairing(const NormalForm& nf, const TestFunction& tau) {
    const auto& ctx = nf.settings.ctx;
    LCComplex total(ctx);
    for (const auto& d : nf.deltas) {
        const Jet t = lc_jet(tau.fn, d.position, d.order, ctx);
        const double w = (d.order % 2 ? -1.0 : 1.0) * factorial(d.order);
        total += d.coef * t[static_cast<std::size_t>(d.order)] * Complex(w);
    }
    for (const auto& m : nf.residual) total += residual_pairing(m, tau, nf.settings);
    return total;
}

LCComplex pairing(const GenFunction& f, const TestFunction& tau) { return pairing(normal_form(f), tau); }

LCComplex integral_compact(const GenFunction& f) {
    const SupportInfo info = support(f);
    if (info.external.empty()) return LCComplex(f.context());
    if (!info.external.bounded()) throw SupportError("integral needs a compact external support");
    const double a = info.external.lower();
    const double b = info.external.upper();
    return pairing(f, TestFunction::plateau(a - 2.0, a - 1.0, b + 1.0, b + 2.0));
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "true";
        case Verdict::no: return "false";
        case Verdict::undetermined: return "undetermined";
    }
    return "?";
}

std::vector<TestFunction> make_battery(const std::vector<double>& points, const RealInterval& domain,
                                       const BatteryOptions& options) {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> radius_dist(0.5, 2.0);
    std::uniform_int_distribution<int> degree_dist(0, 3);
    std::vector<double> pts = points;
    if (pts.empty()) pts.push_back(0.0);
    constexpr double margin = 1e-3;
    for (auto& p : pts) {
        if (std::isfinite(domain.lo)) p = std::max(p, domain.lo + 2 * margin);
        if (std::isfinite(domain.hi)) p = std::min(p, domain.hi - 2 * margin);
    }
    std::vector<TestFunction> out;
    for (int i = 0; i < options.size; ++i) {
        const double p = pts[static_cast<std::size_t>(i) % pts.size()];
        double r = radius_dist(rng);
        double center = p + 0.6 * r * unit(rng);
        double lo = center - r;
        double hi = center + r;
        if (std::isfinite(domain.lo)) lo = std::max(lo, domain.lo + margin);
        if (std::isfinite(domain.hi)) hi = std::min(hi, domain.hi - margin);
        center = 0.5 * (lo + hi);
        r = 0.5 * (hi - lo);
        std::vector<double> c(static_cast<std::size_t>(degree_dist(rng)) + 1);
        for (auto& x : c) x = unit(rng);
        out.push_back(TestFunction::polynomial_bump(c, center, r));
    }
    return out;
}

namespace {

std::vector<double> points_of_interest(const NormalForm& nf) {
    std::vector<double> pts;
    for (const auto& d : nf.deltas) pts.push_back(standard_part(d.position));
    for (const auto& m : nf.residual)
        for (const auto& a : m.singular) pts.push_back(std::get<HeavisideAtom>(a).center);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.empty()) {
        const auto& d = nf.settings.domain;
        if (std::isfinite(d.lo) && std::isfinite(d.hi)) pts.push_back(0.5 * (d.lo + d.hi));
        else if (std::isfinite(d.lo)) pts.push_back(d.lo + 1.0);
        else if (std::isfinite(d.hi)) pts.push_back(d.hi - 1.0);
        else pts.push_back(0.0);
    }
    // spread a few extra centers for the smooth residue
    const double lo = pts.front() - 2.0;
    const double hi = pts.back() + 2.0;
    pts.push_back(lo);
    pts.push_back(hi);
    return pts;
}

}  // namespace

WeakEqualReport weak_equal_report(const GenFunction& f, const GenFunction& g, const BatteryOptions& options) {
    WeakEqualReport report;
    const NormalForm nf = normal_form(f - g);
    const bool deltas_zero = std::all_of(nf.deltas.begin(), nf.deltas.end(), [&](const NormalForm::DeltaTerm& d) {
        return negligible(d.coef, options.tol);
    });
    if (!deltas_zero) {
        report.normal_form = false;
    } else if (is_delta_combination(nf, options.tol)) {
        report.normal_form = true;
    }
    for (const auto& tau : make_battery(points_of_interest(nf), nf.settings.domain, options))
        report.battery_max = std::max(report.battery_max, max_abs_coefficient(pairing(nf, tau)));
    report.battery = report.battery_max <= options.tol;
    if (!report.normal_form) {
        report.verdict = report.battery ? Verdict::yes : Verdict::no;
    } else if (*report.normal_form == report.battery) {
        report.verdict = report.battery ? Verdict::yes : Verdict::no;
    } else {
        report.verdict = Verdict::undetermined;
    }
    return report;
}

Verdict weak_equal(const GenFunction& f, const GenFunction& g, const BatteryOptions& options) {
    return weak_equal_report(f, g, options).verdict;
}

bool associated(const GenFunction& f, const GenFunction& g, const BatteryOptions& options) {
    const NormalForm nf = normal_form(f - g);
    for (const auto& tau : make_battery(points_of_interest(nf), nf.settings.domain, options)) {
        const LCComplex d = pairing(nf, tau);
        for (const auto& t : d.terms()) {
            if (t.exponent.sign() > 0) break;
            if (std::abs(t.coeff) > options.tol) return false;
        }
    }
    return true;
}

SupportInfo support(const GenFunction& f) {
    const auto& ctx = f.context();
    SupportInfo info;
    for (const auto& m : f.terms()) {
        IntervalSet ext = IntervalSet::whole_line();
        for (const auto& a : m.smooth) {
            auto sup = a.f.support();
            if (!sup) throw UnsupportedError("no declared support for " + a.f.key());
            const double shift = standard_part(a.shift);
            std::vector<RealInterval> moved;
            for (const auto& part : sup->parts()) moved.push_back({part.lo + shift, part.hi + shift});
            ext = ext.intersect(IntervalSet(std::move(moved)));
        }
        for (const auto& atom : m.singular) {
            const double c = std::visit([](const auto& x) { return x.center; }, atom);
            ext = ext.intersect(is_delta(atom) ? IntervalSet::point(c)
                                               : IntervalSet::interval(c, std::numeric_limits<double>::infinity()));
        }
        if (ext.empty()) continue;
        info.external = info.external.unite(ext);
        if (auto internal = monomial_internal(m, ctx)) info.internal.push_back(*internal);
    }
    return info;
}

std::string to_string(const LCInterval& i) {
    return "[" + (i.lo ? to_string(*i.lo) : std::string("-inf")) + ", " + (i.hi ? to_string(*i.hi) : std::string("inf")) +
           "]";
}

GenFunction restrict_to(const GenFunction& f, const RealInterval& open) {
    const auto& dom = f.settings().domain;
    if (open.lo < dom.lo || open.hi > dom.hi || !(open.lo < open.hi))
        throw DomainError("restriction interval is not an open subinterval of the domain");
    std::vector<Monomial> kept;
    for (const auto& m : f.terms()) {
        auto internal = monomial_internal(m, f.context());
        if (!internal) continue;
        const bool above = !internal->hi || standard_part(*internal->hi) > open.lo;
        const bool below = !internal->lo || standard_part(*internal->lo) < open.hi;
        if (above && below) kept.push_back(m);
    }
    GfSettings settings = f.settings();
    settings.domain = open;
    return GenFunction::from_monomials(std::move(kept), settings);
}

ParametricFamily exponential_family() {
    return ParametricFamily{"exp(-z*t)", [](Complex lambda, int i) {
                                const SmoothFn t = SmoothFn::variable();
                                SmoothFn f = SmoothFn::exp(SmoothFn::constant(-lambda) * t);
                                if (i == 0) return f;
                                const double c = (i % 2 ? -1.0 : 1.0) / factorial(i);
                                return SmoothFn::constant(c) * SmoothFn::power(t, static_cast<unsigned>(i)) * f;
                            }};
}

GenFunction specialize_parameter(const ParametricFamily& family, const LCComplex& lambda0, const GfSettings& settings) {
    const LCComplex l = lambda0.with_context(settings.ctx);
    if (classify(l) == Magnitude::infinite) throw NotFinite("parameter value must be finite");
    const Complex base = standard_part(l);
    const LCComplex eps = infinitesimal_part(l);
    const int depth = taylor_depth(valuation(eps), settings.ctx);
    std::vector<Monomial> terms;
    LCComplex power(Complex(1.0), settings.ctx);
    for (int i = 0; i <= depth; ++i) {
        terms.push_back(Monomial{power, {{family.taylor_coefficient(base, i), LCReal(settings.ctx)}}, {}});
        power = power * eps;
    }
    return GenFunction::from_monomials(std::move(terms), settings);
}

}  // namespace lcgf
