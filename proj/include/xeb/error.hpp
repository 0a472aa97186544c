#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xeb {

/// Invalid user input: lattice, variant, rates, flags.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested size exceeds a configured cap (qubits, enumerated spins).
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// An oracle cross-check did not hold.
class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed circuit/noise/sample text. `line` is 1-based, 0 when unknown;
/// `field` is a JSON-pointer-like path to the offending value when known.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t line, std::string field)
        : std::runtime_error(format(message, line, field)),
          line_(line),
          field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string format(const std::string& message, std::size_t line,
                              const std::string& field) {
        std::string out = "parse error";
        if (line > 0) out += " at line " + std::to_string(line);
        if (!field.empty()) out += " in field '" + field + "'";
        return out + ": " + message;
    }

    std::size_t line_;
    std::string field_;
};

}  // namespace xeb
