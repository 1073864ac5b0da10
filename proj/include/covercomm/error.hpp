#pragma once

#include <stdexcept>
#include <string>

namespace covercomm {

/// Malformed or inconsistent input. Carries a 1-based line/column when the
/// problem was found while reading a text file (0 otherwise).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& message, int line = 0, int column = 0);

    /// The message without the location prefix that what() carries.
    const std::string& message() const noexcept { return message_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    std::string message_;
    int line_;
    int column_;
};

/// An operation was called outside its documented domain.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace covercomm
