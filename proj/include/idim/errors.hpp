#ifndef IDIM_ERRORS_HPP
#define IDIM_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace idim {

// Bad parameters are reported with std::invalid_argument.

// Malformed command-line or text input; token is the offending piece.
class UsageError : public std::invalid_argument {
public:
    UsageError(const std::string& what, std::string token)
        : std::invalid_argument(what), token_(std::move(token)) {}
    const std::string& token() const { return token_; }

private:
    std::string token_;
};

// A request that would exceed sampling or memory limits.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A measure construction refused because delta is above its admissible range.
class ThresholdError : public std::domain_error {
public:
    ThresholdError(const std::string& what, double required)
        : std::domain_error(what), required_(required) {}
    double required() const { return required_; }

private:
    double required_;
};

// An internal consistency check failed.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace idim

#endif // IDIM_ERRORS_HPP
