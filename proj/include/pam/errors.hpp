#pragma once
#include <stdexcept>
#include <string>

namespace pam {

/// Invalid model or distribution parameters.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the domain of a function.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A size or resource bound was exceeded.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pam
