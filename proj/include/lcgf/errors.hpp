#pragma once

#include <stdexcept>
#include <string>

namespace lcgf {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands built under different truncation contexts or mollifiers.
class ContextMismatch : public Error {
public:
    using Error::Error;
};

class DivisionByZero : public Error {
public:
    using Error::Error;
};

/// An infinite value was passed where a finite one is required.
class NotFinite : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of an operation (including dom of the Laplace transform).
class DomainError : public Error {
public:
    using Error::Error;
};

class ToleranceError : public Error {
public:
    using Error::Error;
};

class SupportError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

class ConstructionError : public Error {
public:
    ConstructionError(const std::string& what, double condition_number)
        : Error(what), condition_number_(condition_number) {}
    double condition_number() const { return condition_number_; }

private:
    double condition_number_;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, int line, int column)
        : Error(message + " at " + std::to_string(line) + ":" + std::to_string(column)),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace lcgf
