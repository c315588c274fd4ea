#pragma once

#include <stdexcept>
#include <string>

namespace izeros {

// Exit-code families used by the CLI: 1 validation, 2 resource, 3 numeric.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : ValidationError {
    using ValidationError::ValidationError;
};

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotARootError : NumericError {
    explicit NotARootError(const std::string& what, double remainder_log2)
        : NumericError(what), remainder_log2(remainder_log2) {}
    double remainder_log2;
};

}  // namespace izeros
