#include "lcgf/exponent.hpp"

#include "lcgf/errors.hpp"

#include <cctype>

namespace lcgf {

Exponent::Exponent(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DivisionByZero("exponent with zero denominator");
    value_ = Rational(num, den);
}

Exponent& Exponent::operator/=(const Exponent& o) {
    if (o.is_zero()) throw DivisionByZero("exponent division by zero");
    value_ /= o.value_;
    return *this;
}

bool Exponent::is_integer() const {
    return boost::multiprecision::denominator(value_) == 1;
}

std::int64_t Exponent::to_integer() const {
    if (!is_integer()) throw DomainError("exponent " + to_string() + " is not an integer");
    return boost::multiprecision::numerator(value_).convert_to<std::int64_t>();
}

std::string Exponent::to_string() const {
    auto num = boost::multiprecision::numerator(value_);
    auto den = boost::multiprecision::denominator(value_);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Exponent Exponent::parse(std::string_view text) {
    auto parse_int = [&](std::string_view part) {
        std::size_t i = 0;
        if (!part.empty() && (part[0] == '-' || part[0] == '+')) i = 1;
        if (i == part.size()) throw DomainError("malformed exponent '" + std::string(text) + "'");
        for (std::size_t j = i; j < part.size(); ++j) {
            if (!std::isdigit(static_cast<unsigned char>(part[j])))
                throw DomainError("malformed exponent '" + std::string(text) + "'");
        }
        return boost::multiprecision::cpp_int(std::string(part[0] == '+' ? part.substr(1) : part));
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Exponent(Rational(parse_int(text)));
    auto num = parse_int(text.substr(0, slash));
    auto den = parse_int(text.substr(slash + 1));
    if (den == 0) throw DivisionByZero("exponent with zero denominator");
    return Exponent(Rational(num, den));
}

Exponent min(const Exponent& a, const Exponent& b) { return b < a ? b : a; }
Exponent max(const Exponent& a, const Exponent& b) { return a < b ? b : a; }

const Exponent& Valuation::exponent() const {
    if (!finite_) throw DomainError("valuation of zero is infinite");
    return value_;
}

}  // namespace lcgf
