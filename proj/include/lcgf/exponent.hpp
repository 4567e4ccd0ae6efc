#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace lcgf {

/// Exact rational exponent of the scale, always in lowest terms.
class Exponent {
public:
    using Rational = boost::multiprecision::cpp_rational;

    Exponent() = default;
    Exponent(std::int64_t n) : value_(n) {}  // NOLINT(google-explicit-constructor)
    Exponent(std::int64_t num, std::int64_t den);
    explicit Exponent(Rational r) : value_(std::move(r)) {}

    /// Parses "p", "-p" or "p/q".
    static Exponent parse(std::string_view text);

    const Rational& rational() const { return value_; }
    double to_double() const { return static_cast<double>(value_); }
    bool is_integer() const;
    bool is_zero() const { return value_.is_zero(); }
    int sign() const { return value_.sign(); }
    /// Exact integer value; throws when the exponent is not an integer.
    std::int64_t to_integer() const;
    std::string to_string() const;

    Exponent operator-() const { return Exponent(Rational(-value_)); }
    Exponent& operator+=(const Exponent& o) { value_ += o.value_; return *this; }
    Exponent& operator-=(const Exponent& o) { value_ -= o.value_; return *this; }
    Exponent& operator*=(const Exponent& o) { value_ *= o.value_; return *this; }
    Exponent& operator/=(const Exponent& o);

    friend Exponent operator+(Exponent a, const Exponent& b) { return a += b; }
    friend Exponent operator-(Exponent a, const Exponent& b) { return a -= b; }
    friend Exponent operator*(Exponent a, const Exponent& b) { return a *= b; }
    friend Exponent operator/(Exponent a, const Exponent& b) { return a /= b; }

    friend bool operator==(const Exponent& a, const Exponent& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Exponent& e) {
        return os << e.to_string();
    }

private:
    Rational value_{0};
};

Exponent min(const Exponent& a, const Exponent& b);
Exponent max(const Exponent& a, const Exponent& b);

/// Valuation value: an exponent or +infinity (the valuation of zero).
class Valuation {
public:
    static Valuation infinity() { return Valuation(); }
    Valuation(Exponent e) : finite_(true), value_(std::move(e)) {}  // NOLINT(google-explicit-constructor)

    bool is_infinite() const { return !finite_; }
    const Exponent& exponent() const;

    friend bool operator==(const Valuation& a, const Valuation& b) {
        if (a.finite_ != b.finite_) return false;
        return !a.finite_ || a.value_ == b.value_;
    }
    friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
        if (!a.finite_ || !b.finite_) {
            if (a.finite_ == b.finite_) return std::strong_ordering::equal;
            return a.finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
        }
        return a.value_ <=> b.value_;
    }
    friend Valuation operator+(const Valuation& a, const Valuation& b) {
        if (!a.finite_ || !b.finite_) return infinity();
        return Valuation(a.value_ + b.value_);
    }
    std::string to_string() const { return finite_ ? value_.to_string() : "inf"; }

private:
    Valuation() = default;
    bool finite_ = false;
    Exponent value_{};
};

}  // namespace lcgf
