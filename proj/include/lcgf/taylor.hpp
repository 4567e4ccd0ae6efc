#pragma once

// Truncated Taylor polynomials a_0 + a_1 e + ... + a_N e^N used to propagate
// derivative jets through elementary functions (coefficient k is f^{(k)}/k!).

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace lcgf {

template <class Scalar>
class Taylor {
public:
    Taylor() = default;
    explicit Taylor(int order, Scalar value = Scalar(0)) : c_(static_cast<std::size_t>(order) + 1, Scalar(0)) {
        c_[0] = value;
    }
    /// The jet of the identity function at x0.
    static Taylor variable(int order, Scalar x0) {
        Taylor t(order, x0);
        if (order >= 1) t.c_[1] = Scalar(1);
        return t;
    }
    static Taylor from_coefficients(std::vector<Scalar> c) {
        Taylor t;
        t.c_ = std::move(c);
        return t;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const Scalar& operator[](std::size_t k) const { return c_[k]; }
    Scalar& operator[](std::size_t k) { return c_[k]; }
    const std::vector<Scalar>& coefficients() const { return c_; }
    Scalar value() const { return c_[0]; }

    /// k-th derivative value f^{(k)}(x0).
    Scalar derivative(int k) const {
        Scalar f = c_[static_cast<std::size_t>(k)];
        for (int j = 2; j <= k; ++j) f *= Scalar(j);
        return f;
    }

    Taylor operator-() const {
        Taylor r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    Taylor& operator+=(const Taylor& o) {
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    Taylor& operator-=(const Taylor& o) {
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Taylor& operator*=(Scalar a) {
        for (auto& x : c_) x *= a;
        return *this;
    }
    Taylor& operator+=(Scalar a) {
        c_[0] += a;
        return *this;
    }

    friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
    friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
    friend Taylor operator*(Taylor a, Scalar b) { return a *= b; }
    friend Taylor operator*(Scalar b, Taylor a) { return a *= b; }
    friend Taylor operator+(Taylor a, Scalar b) { return a += b; }

    friend Taylor operator*(const Taylor& a, const Taylor& b) {
        const std::size_t n = a.c_.size();
        Taylor r(static_cast<int>(n) - 1);
        for (std::size_t k = 0; k < n; ++k) {
            Scalar acc(0);
            for (std::size_t j = 0; j <= k; ++j) acc += a.c_[j] * b.c_[k - j];
            r.c_[k] = acc;
        }
        return r;
    }

    friend Taylor operator/(const Taylor& a, const Taylor& b) {
        if (b.c_[0] == Scalar(0)) throw std::domain_error("Taylor division by a jet with zero value");
        const std::size_t n = a.c_.size();
        Taylor r(static_cast<int>(n) - 1);
        for (std::size_t k = 0; k < n; ++k) {
            Scalar acc = a.c_[k];
            for (std::size_t j = 1; j <= k; ++j) acc -= b.c_[j] * r.c_[k - j];
            r.c_[k] = acc / b.c_[0];
        }
        return r;
    }

private:
    std::vector<Scalar> c_;
};

template <class Scalar>
Taylor<Scalar> exp(const Taylor<Scalar>& g) {
    const int n = g.order();
    Taylor<Scalar> e(n, std::exp(g[0]));
    for (int k = 1; k <= n; ++k) {
        Scalar acc(0);
        for (int j = 1; j <= k; ++j) acc += Scalar(j) * g[j] * e[k - j];
        e[k] = acc / Scalar(k);
    }
    return e;
}

/// Simultaneous sine and cosine jets.
template <class Scalar>
std::pair<Taylor<Scalar>, Taylor<Scalar>> sincos(const Taylor<Scalar>& g) {
    const int n = g.order();
    Taylor<Scalar> s(n, std::sin(g[0]));
    Taylor<Scalar> c(n, std::cos(g[0]));
    for (int k = 1; k <= n; ++k) {
        Scalar as(0), ac(0);
        for (int j = 1; j <= k; ++j) {
            as += Scalar(j) * g[j] * c[k - j];
            ac -= Scalar(j) * g[j] * s[k - j];
        }
        s[k] = as / Scalar(k);
        c[k] = ac / Scalar(k);
    }
    return {s, c};
}

template <class Scalar>
Taylor<Scalar> sin(const Taylor<Scalar>& g) { return sincos(g).first; }
template <class Scalar>
Taylor<Scalar> cos(const Taylor<Scalar>& g) { return sincos(g).second; }

template <class Scalar>
Taylor<Scalar> pow(const Taylor<Scalar>& g, unsigned n) {
    Taylor<Scalar> r(g.order(), Scalar(1));
    Taylor<Scalar> b = g;
    while (n) {
        if (n & 1U) r = r * b;
        n >>= 1U;
        if (n) b = b * b;
    }
    return r;
}

/// Drops the first k coefficients and rescales: jet of f^{(k)} from the jet of f.
template <class Scalar>
Taylor<Scalar> differentiate(const Taylor<Scalar>& f, int k) {
    const int n = f.order() - k;
    if (n < 0) throw std::domain_error("jet too short to differentiate");
    Taylor<Scalar> r(n);
    for (int j = 0; j <= n; ++j) {
        // coefficient of f^{(k)} at order j is (j+k)!/j! * f_{j+k}
        Scalar factor(1);
        for (int m = j + 1; m <= j + k; ++m) factor *= Scalar(m);
        r[static_cast<std::size_t>(j)] = f[static_cast<std::size_t>(j + k)] * factor;
    }
    return r;
}

}  // namespace lcgf
