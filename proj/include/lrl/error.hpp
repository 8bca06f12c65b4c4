#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lrl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A body description that does not define a valid star body.
class BodyInvalid : public Error {
public:
    using Error::Error;
};

/// Non-finite coordinates or out-of-domain scalar arguments.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Enumeration would visit more candidate lattice points than allowed.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(std::uint64_t required, std::uint64_t cap)
        : Error("enumeration budget exceeded: " + std::to_string(required) +
                " candidate points required, cap is " + std::to_string(cap)),
          required_(required), cap_(cap) {}
    std::uint64_t required() const noexcept { return required_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t required_;
    std::uint64_t cap_;
};

/// A query beyond the dilation range covered by a spectrum.
class CoverageError : public Error {
public:
    using Error::Error;
};

/// Numerical quadrature did not reach its tolerance.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double achieved)
        : Error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
          achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Malformed text input; position is a 0-based character offset.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : Error("parse error at position " + std::to_string(position) + ": " + msg),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Not enough usable data for a fit or statistic.
class FitError : public Error {
public:
    using Error::Error;
};

}  // namespace lrl
