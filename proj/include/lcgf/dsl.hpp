#pragma once

// Expression language of the command-line front end.
//
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | factor
//   factor := base ('^' exponent)?
//   base   := number | symbol | func '(' args ')' | '(' expr ')'
//
// Exponents are rational literals: 2, -1, (1/2), (-3/2). Symbols are s (the
// fixed scale), i, t, z and the unknown y with primes. Functions are sin, cos,
// exp, H, delta and delta_n(k, arg).

#include "lcgf/genfunc.hpp"
#include "lcgf/laplace.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lcgf::dsl {

struct Ast {
    enum class Kind { number, symbol, call, neg, add, sub, mul, div, pow };

    Kind kind = Kind::number;
    std::string text;         ///< literal text, symbol or function name
    Exponent exponent;        ///< for pow
    std::vector<Ast> args;    ///< operands or call arguments
    int line = 1;
    int column = 1;

    /// Structural equality; source positions are ignored.
    friend bool operator==(const Ast& a, const Ast& b);
};

Ast number(std::string text);
Ast symbol(std::string name);
Ast call(std::string name, std::vector<Ast> args);
Ast unary_minus(Ast a);
Ast binary(Ast::Kind op, Ast a, Ast b);
Ast power(Ast base, Exponent e);

Ast parse(std::string_view text);
/// Minimal-parenthesis text; parse(print(a)) == a.
std::string print(const Ast& a);

bool mentions(const Ast& a, std::string_view symbol);

enum class Relation { exact, weak };

struct Equation {
    Ast lhs;
    Ast rhs;
    Relation relation = Relation::exact;
};

/// "lhs ~= rhs" (weak) or "lhs = rhs" (exact).
Equation parse_equation(std::string_view text);

struct EvalOptions {
    GfSettings settings{};
    /// Rejects the scale s (classical pipelines).
    bool classical_only = false;
};

/// A constant expression as an LC number.
LCComplex eval_number(const Ast& a, const EvalOptions& opt);
/// An expression in t as a generalized function.
GenFunction eval_function(const Ast& a, const EvalOptions& opt);
/// Input of the transform: a function of t; z is rejected, and s may not stand in for it.
LaplaceDomainElement eval_transform_input(const Ast& a, const EvalOptions& opt);

/// a2 y'' + a1 y' + a0 y with the right-hand side split off.
struct LinearOde {
    double a2 = 0.0;
    double a1 = 0.0;
    double a0 = 0.0;
    LaplaceDomainElement rhs;
    Relation relation = Relation::exact;
};

LinearOde eval_ode(const Equation& eq, const EvalOptions& opt);

}  // namespace lcgf::dsl
