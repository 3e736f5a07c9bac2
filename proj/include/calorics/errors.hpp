#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace calorics {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class ZeroPolynomial : public Error {
public:
    ZeroPolynomial() : Error("zero polynomial has no parabolic degree") {}
};

class NotHomogeneous : public Error {
public:
    NotHomogeneous(int first_weight, int second_weight)
        : Error("not parabolically homogeneous: term weights " + std::to_string(first_weight) +
                " and " + std::to_string(second_weight)),
          first_(first_weight), second_(second_weight) {}

    int first_weight() const noexcept { return first_; }
    int second_weight() const noexcept { return second_; }

private:
    int first_;
    int second_;
};

class NotOnUnitCircle : public Error {
public:
    using Error::Error;
};

/// Raised when a construction family's degree condition is violated.
class CongruenceError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class UnresolvedSign : public Error {
public:
    using Error::Error;
};

class BoundViolation : public Error {
public:
    using Error::Error;
};

}  // namespace calorics
