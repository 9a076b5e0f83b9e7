#pragma once

#include <stdexcept>
#include <string>

namespace cmtest {

/// Rejected user input: bad parameters, malformed documents, unknown names.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A function id or parameter name that is not in the catalog.
class UnknownNameError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Filesystem failures and truncated or unreadable files.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cmtest
