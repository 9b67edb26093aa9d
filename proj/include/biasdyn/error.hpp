#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace biasdyn {

// Input failed a domain invariant (range, shape, uniqueness).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Validation failure tied to a location in a text input. Line and column are
// 1-based; column 0 means the whole line.
class ParseError : public ValidationError {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : ValidationError(format(line, column, message)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(std::size_t line, std::size_t column, const std::string& message) {
        std::string out = "line " + std::to_string(line);
        if (column > 0) out += ", column " + std::to_string(column);
        return out + ": " + message;
    }

    std::size_t line_;
    std::size_t column_;
};

// Filesystem or stream failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace biasdyn
