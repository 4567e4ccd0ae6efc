#include "lcgf/quadrature.hpp"

#include "lcgf/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lcgf {

namespace {

template <class F>
auto gk_at_depth(const F& f, double a, double b, int nodes, unsigned depth, double rel, double* err, double* l1) {
    using boost::math::quadrature::gauss_kronrod;
    switch (nodes) {
        case 15: return gauss_kronrod<double, 15>::integrate(f, a, b, depth, rel, err, l1);
        case 31: return gauss_kronrod<double, 31>::integrate(f, a, b, depth, rel, err, l1);
        case 61: return gauss_kronrod<double, 61>::integrate(f, a, b, depth, rel, err, l1);
        default: throw DomainError("unsupported Kronrod node count " + std::to_string(nodes));
    }
}

double target(double l1, const QuadratureScheme& scheme) { return scheme.abs_tol * std::max(1.0, l1); }

// Once bisection reaches rounding noise the error estimate grows with depth,
// so depth is raised gradually and the first acceptable result is kept.
template <class F>
auto run_gk(const F& f, double a, double b, const QuadratureScheme& scheme, double* err, double* l1) {
    const double rel = std::max(1e-13, 0.01 * scheme.abs_tol);
    const unsigned max_depth = static_cast<unsigned>(std::max(scheme.max_depth, 1));
    auto best = gk_at_depth(f, a, b, scheme.nodes, std::min(5u, max_depth), rel, err, l1);
    double best_err = *err;
    double best_l1 = *l1;
    for (unsigned depth = 10; best_err > target(best_l1, scheme) && depth < max_depth + 5; depth += 5) {
        const auto v = gk_at_depth(f, a, b, scheme.nodes, std::min(depth, max_depth), rel, err, l1);
        if (*err < best_err) {
            best = v;
            best_err = *err;
            best_l1 = *l1;
        }
    }
    *err = best_err;
    *l1 = best_l1;
    return best;
}

void check(double err, double l1, const QuadratureScheme& scheme, double a, double b) {
    if (!(scheme.abs_tol > 0)) throw DomainError("quadrature tolerance must be positive");
    if (!std::isfinite(err) || err > target(l1, scheme)) {
        std::ostringstream os;
        os << "quadrature on [" << a << ", " << b << "] did not reach tolerance " << scheme.abs_tol
           << " (error estimate " << err << ")";
        throw ToleranceError(os.str());
    }
}

}  // namespace

QuadratureResult integrate_unchecked(const std::function<double(double)>& f, double a, double b,
                                     const QuadratureScheme& scheme) {
    QuadratureResult r;
    if (a == b) return r;
    r.value = run_gk(f, a, b, scheme, &r.error, &r.l1);
    return r;
}

double integrate(const std::function<double(double)>& f, double a, double b, const QuadratureScheme& scheme) {
    if (a == b) return 0.0;
    double err = 0.0;
    double l1 = 0.0;
    const double v = run_gk(f, a, b, scheme, &err, &l1);
    check(err, l1, scheme, a, b);
    return v;
}

std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f, double a, double b,
                                       const QuadratureScheme& scheme) {
    if (a == b) return {0.0, 0.0};
    double err = 0.0;
    double l1 = 0.0;
    const std::complex<double> v = run_gk(f, a, b, scheme, &err, &l1);
    check(err, l1, scheme, a, b);
    return v;
}

}  // namespace lcgf
