#pragma once

// Smooth complex-valued functions of one real variable t, represented as
// small expression trees that can produce Taylor jets at any real point.

#include "lcgf/interval.hpp"
#include "lcgf/taylor.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lcgf {

using Complex = std::complex<double>;
using ComplexJet = Taylor<Complex>;

class SmoothFn {
public:
    enum class Kind { constant, variable, add, mul, power, exp, sin, cos, bump, step, derivative, custom };

    using CustomJet = std::function<ComplexJet(double x0, int order)>;

    /// The zero function.
    SmoothFn();

    static SmoothFn constant(Complex c);
    static SmoothFn variable();
    static SmoothFn exp(const SmoothFn& arg);
    static SmoothFn sin(const SmoothFn& arg);
    static SmoothFn cos(const SmoothFn& arg);
    static SmoothFn power(const SmoothFn& base, unsigned n);
    /// exp(-1/(1-w^2)) with w = (t - center)/radius, zero outside |w| < 1.
    static SmoothFn bump(double center, double radius);
    /// Smooth monotone step: 0 for t <= a, 1 for t >= b.
    static SmoothFn step(double a, double b);
    /// 1 on [a1, b1], 0 outside (a0, b0), smooth in between.
    static SmoothFn plateau(double a0, double a1, double b1, double b0);
    /// User-supplied jet oracle; support is the closure of the nonvanishing set if known.
    static SmoothFn custom(std::string name, CustomJet jet, std::optional<IntervalSet> support = std::nullopt,
                           bool real_valued = true);

    Kind kind() const;
    const std::vector<SmoothFn>& children() const;
    Complex constant_value() const;
    /// Exponent n of a power node.
    unsigned power_exponent() const;
    bool is_constant() const { return kind() == Kind::constant; }
    bool is_zero() const { return is_constant() && constant_value() == Complex(0); }
    bool is_one() const { return is_constant() && constant_value() == Complex(1); }

    /// Jet of f at x0: coefficient k is f^{(k)}(x0)/k!.
    ComplexJet jet(double x0, int order) const;
    std::vector<Complex> operator()(double x0, int order) const { return jet(x0, order).coefficients(); }
    Complex operator()(double x) const { return jet(x, 0)[0]; }

    SmoothFn derivative(int k = 1) const;

    /// Splits f = c * rest with the constant factor pulled out of a product.
    std::pair<Complex, SmoothFn> split_constant() const;

    /// Closure of the nonvanishing set where the catalog can state it.
    std::optional<IntervalSet> support() const;
    bool is_real() const;

    /// Canonical text; equal keys mean structurally equal functions.
    const std::string& key() const;

    friend SmoothFn operator+(const SmoothFn& a, const SmoothFn& b);
    friend SmoothFn operator-(const SmoothFn& a, const SmoothFn& b);
    friend SmoothFn operator*(const SmoothFn& a, const SmoothFn& b);
    friend SmoothFn operator*(Complex c, const SmoothFn& f);
    SmoothFn operator-() const;

    friend bool operator==(const SmoothFn& a, const SmoothFn& b) { return a.key() == b.key(); }

    struct Node;

private:
    explicit SmoothFn(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static SmoothFn make(Node node);
    static SmoothFn sum(std::vector<SmoothFn> terms);
    static SmoothFn product(std::vector<SmoothFn> factors);

    std::shared_ptr<const Node> node_;
};

}  // namespace lcgf
