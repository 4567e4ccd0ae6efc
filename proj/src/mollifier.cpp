#include "lcgf/mollifier.hpp"

#include "lcgf/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lcgf {

namespace {

constexpr int kPanels = 512;
constexpr double kMaxCondition = 1e12;

double polynomial(const Eigen::VectorXd& p, double x) {
    double acc = 0.0;
    for (Eigen::Index k = p.size() - 1; k >= 0; --k) acc = acc * x + p[k];
    return acc;
}

// Integral of |phi|, split at the sign changes of P so every piece is smooth.
double l1_norm(const Mollifier& phi) {
    std::vector<double> cuts{-1.0};
    constexpr int kScan = 4000;
    auto p = [&phi](double x) { return polynomial(phi.coefficients(), x); };
    for (int i = 0; i < kScan; ++i) {
        double a = -1.0 + 2.0 * i / kScan;
        double b = -1.0 + 2.0 * (i + 1) / kScan;
        if (p(a) == 0.0) {
            cuts.push_back(a);
            continue;
        }
        if ((p(a) < 0) != (p(b) < 0) && p(b) != 0.0) {
            for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
                const double m = 0.5 * (a + b);
                ((p(a) < 0) == (p(m) < 0) ? a : b) = m;
            }
            cuts.push_back(0.5 * (a + b));
        }
    }
    cuts.push_back(1.0);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += integrate([&phi](double x) { return std::abs(phi(x)); }, cuts[i], cuts[i + 1], phi.scheme());
    return total;
}

}  // namespace

double bump_profile(double x) {
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - x * x));
}

Taylor<double> bump_profile_jet(double x0, int order) {
    if (std::abs(x0) >= 1.0 || bump_profile(x0) == 0.0) return Taylor<double>(order);
    const Taylor<double> w = Taylor<double>::variable(order, x0);
    const Taylor<double> one(order, 1.0);
    return exp(Taylor<double>(order, -1.0) / (one - w * w));
}

Mollifier Mollifier::construct(int n, const QuadratureScheme& scheme) {
    if (n < 0) throw DomainError("moment order must be nonnegative");
    auto d = std::make_shared<Data>();
    d->n = n;
    d->scheme = scheme;

    // Hankel system H p = e_0 with H_{kl} = integral x^{k+l} bump; odd moments vanish by parity.
    std::vector<double> b(static_cast<std::size_t>(2 * n + 1), 0.0);
    for (int j = 0; j <= 2 * n; j += 2)
        b[static_cast<std::size_t>(j)] =
            integrate([j](double x) { return std::pow(x, j) * bump_profile(x); }, -1.0, 1.0, scheme);

    Eigen::MatrixXd h(n + 1, n + 1);
    for (int k = 0; k <= n; ++k)
        for (int l = 0; l <= n; ++l) h(k, l) = b[static_cast<std::size_t>(k + l)];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(h);
    const auto& sv = svd.singularValues();
    d->condition = sv[sv.size() - 1] > 0 ? sv[0] / sv[sv.size() - 1] : std::numeric_limits<double>::infinity();
    if (!std::isfinite(d->condition) || d->condition > kMaxCondition) {
        std::ostringstream os;
        os << "moment matrix of order " << n << " is singular (condition number " << d->condition << ")";
        throw ConstructionError(os.str(), d->condition);
    }

    // The right-hand side e_0 is even, so only the even block is solved and P is even.
    const int m = n / 2 + 1;
    Eigen::MatrixXd he(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    rhs[0] = 1.0;
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) he(k, l) = b[static_cast<std::size_t>(2 * k + 2 * l)];
    const Eigen::VectorXd pe = he.fullPivLu().solve(rhs);
    d->p = Eigen::VectorXd::Zero(n + 1);
    for (int k = 0; k < m; ++k) d->p[2 * k] = pe[k];

    Mollifier result(d);
    d->grid.resize(kPanels + 1);
    d->cumulant.resize(kPanels + 1);
    for (int i = 0; i <= kPanels; ++i) d->grid[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / kPanels;
    d->cumulant[0] = 0.0;
    for (std::size_t i = 1; i <= kPanels; ++i)
        d->cumulant[i] = d->cumulant[i - 1] + result.panel_integral(d->grid[i - 1], d->grid[i]);
    return result;
}

double Mollifier::operator()(double x) const { return polynomial(data_->p, x) * bump_profile(x); }

Taylor<double> Mollifier::jet(double x0, int order) const {
    const Taylor<double> bump = bump_profile_jet(x0, order);
    const Taylor<double> w = Taylor<double>::variable(order, x0);
    Taylor<double> poly(order, 0.0);
    for (Eigen::Index k = data_->p.size() - 1; k >= 0; --k) poly = poly * w + data_->p[k];
    return poly * bump;
}

double Mollifier::derivative(int k, double x) const {
    if (k == -1) return cumulative(x);
    if (k < -1) throw DomainError("derivative order below -1");
    return jet(x, k).derivative(k);
}

double Mollifier::panel_integral(double a, double b) const {
    if (a == b) return 0.0;
    return boost::math::quadrature::gauss<double, 20>::integrate([this](double x) { return (*this)(x); }, a, b);
}

double Mollifier::cumulative(double x) const {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return data_->cumulant.back();
    const double pos = (x + 1.0) / 2.0 * kPanels;
    const auto i = std::min<std::size_t>(static_cast<std::size_t>(pos), kPanels - 1);
    return data_->cumulant[i] + panel_integral(data_->grid[i], x);
}

double radius_of_support(const TestFunctionDescription& phi) {
    struct Visitor {
        double operator()(const ZeroFunction&) const { return 1.0; }
        double operator()(const Mollifier&) const { return 1.0; }
        double operator()(const ScaledMollifier& m) const { return std::abs(m.eps); }
    };
    return std::visit(Visitor{}, phi);
}

double moment(const Mollifier& phi, int k) {
    if (k < 0) throw DomainError("moment order must be nonnegative");
    return integrate([&phi, k](double x) { return std::pow(x, k) * phi(x); }, -1.0, 1.0, phi.scheme());
}

double moment(const ScaledMollifier& phi, int k) {
    if (k < 0) throw DomainError("moment order must be nonnegative");
    const double r = std::abs(phi.eps);
    return integrate([&phi, k](double x) { return std::pow(x, k) * phi(x); }, -r, r, phi.base.scheme());
}

DnReport dn_membership_report(const TestFunctionDescription& phi, int n) {
    if (n <= 0) throw DomainError("directing-set index must be positive");
    DnReport r;
    r.n = n;
    r.radius = radius_of_support(phi);
    r.l1_bound = 1.0 + 1.0 / n;
    r.moments.assign(static_cast<std::size_t>(n), 0.0);
    r.sup_bounds.resize(static_cast<std::size_t>(n) + 1);
    r.sup_derivatives.assign(static_cast<std::size_t>(n) + 1, 0.0);

    const Mollifier* base = nullptr;
    double eps0 = 1.0;
    if (const auto* m = std::get_if<Mollifier>(&phi)) base = m;
    if (const auto* m = std::get_if<ScaledMollifier>(&phi)) {
        base = &m->base;
        eps0 = m->eps;
    }
    // rescale so that the radius of support is 1/n
    r.scale = 1.0 / (n * r.radius);
    const double eps = eps0 * r.scale;
    const double radius = std::abs(eps);
    for (int a = 0; a <= n; ++a) r.sup_bounds[static_cast<std::size_t>(a)] = std::pow(radius, -2.0 * (a + 1));

    if (base == nullptr) {
        r.derivative_bounds_ok = true;
        r.l1_ok = true;
        return r;
    }
    const QuadratureScheme& q = base->scheme();
    r.mass = integrate([&](double x) { return (*base)(x); }, -1.0, 1.0, q);
    bool ok = std::abs(r.mass - 1.0) <= 1e-10;
    for (int k = 1; k <= n; ++k) {
        const double mk = std::pow(eps, k) * moment(*base, k);
        r.moments[static_cast<std::size_t>(k - 1)] = mk;
        ok = ok && std::abs(mk) <= 1e-10;
    }
    r.moments_ok = ok;
    r.l1_norm = l1_norm(*base);
    r.l1_ok = r.l1_norm <= r.l1_bound;

    constexpr int kSamples = 2001;
    r.derivative_bounds_ok = true;
    for (int i = 0; i < kSamples; ++i) {
        const double x = -1.0 + 2.0 * i / (kSamples - 1);
        const Taylor<double> j = base->jet(x, n);
        for (int a = 0; a <= n; ++a) {
            const double v = std::abs(j.derivative(a)) * std::pow(radius, -1.0 - a);
            auto& slot = r.sup_derivatives[static_cast<std::size_t>(a)];
            slot = std::max(slot, v);
        }
    }
    for (int a = 0; a <= n; ++a)
        r.derivative_bounds_ok = r.derivative_bounds_ok &&
                                 r.sup_derivatives[static_cast<std::size_t>(a)] <= r.sup_bounds[static_cast<std::size_t>(a)];
    return r;
}

}  // namespace lcgf
