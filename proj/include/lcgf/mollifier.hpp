#pragma once

// phi(x) = P(x) exp(-1/(1-x^2)) on (-1, 1), with P even of degree <= n chosen so
// that phi has unit mass and vanishing moments of orders 1..n.

#include "lcgf/quadrature.hpp"
#include "lcgf/taylor.hpp"

#include <Eigen/Dense>

#include <memory>
#include <variant>
#include <vector>

namespace lcgf {

class Mollifier {
public:
    /// Solves the moment system; ConstructionError when it is singular.
    static Mollifier construct(int moment_order, const QuadratureScheme& scheme = {});

    int moment_order() const { return data_->n; }
    /// Coefficients of P in ascending powers.
    const Eigen::VectorXd& coefficients() const { return data_->p; }
    double condition_number() const { return data_->condition; }
    const QuadratureScheme& scheme() const { return data_->scheme; }

    double operator()(double x) const;
    /// Jet of phi at x0 (coefficient k is phi^{(k)}(x0)/k!).
    Taylor<double> jet(double x0, int order) const;
    /// phi^{(k)}(x); k = -1 gives the cumulative Phi.
    double derivative(int k, double x) const;
    /// Phi(x) = integral of phi over [-1, x].
    double cumulative(double x) const;

    friend bool operator==(const Mollifier& a, const Mollifier& b) {
        return a.data_ == b.data_ || (a.data_->n == b.data_->n && a.data_->p == b.data_->p);
    }

private:
    struct Data {
        int n = 0;
        Eigen::VectorXd p;
        double condition = 1.0;
        QuadratureScheme scheme;
        std::vector<double> grid;      // panel boundaries on [-1, 1]
        std::vector<double> cumulant;  // Phi at the panel boundaries
    };
    explicit Mollifier(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
    double panel_integral(double a, double b) const;

    std::shared_ptr<const Data> data_;
};

/// The profile exp(-1/(1-x^2)) and its jets, zero outside (-1, 1).
double bump_profile(double x);
Taylor<double> bump_profile_jet(double x0, int order);

/// phi(x / eps) / eps.
struct ScaledMollifier {
    Mollifier base;
    double eps = 1.0;
    double operator()(double x) const { return base(x / eps) / eps; }
};

struct ZeroFunction {};

using TestFunctionDescription = std::variant<ZeroFunction, Mollifier, ScaledMollifier>;

/// sup |x| over the nonvanishing set, with the convention 1 for the zero function.
double radius_of_support(const TestFunctionDescription& phi);

/// Integral of x^k phi(x) by adaptive quadrature.
double moment(const Mollifier& phi, int k);
double moment(const ScaledMollifier& phi, int k);

struct DnReport {
    int n = 0;
    double radius = 1.0;
    double mass = 0.0;
    std::vector<double> moments;  // orders 1..n
    bool moments_ok = false;
    double l1_norm = 0.0;
    double l1_bound = 0.0;  // 1 + 1/n
    bool l1_ok = false;
    double scale = 1.0;     // eps with eps * R_phi = 1/n
    std::vector<double> sup_derivatives;  // sup |d^a phi_eps|, a = 0..n
    std::vector<double> sup_bounds;       // (R_phi_eps)^{-2(a+1)}
    bool derivative_bounds_ok = false;
};

/// Numerical check of the directing-set conditions D_n for the rescaled phi.
DnReport dn_membership_report(const TestFunctionDescription& phi, int n);

}  // namespace lcgf
