#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace leqa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed netlist input. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A gate or circuit violates a structural invariant.
class CircuitError : public Error {
public:
    using Error::Error;
};

/// Fabric or run configuration violates an invariant.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Dependency graph is malformed (cycle, unreachable end node, ...).
class GraphError : public Error {
public:
    using Error::Error;
};

/// The circuit has no two-qubit operations, so presence zones are undefined.
class NoInteractionError : public Error {
public:
    NoInteractionError() : Error("no two-qubit operations") {}
};

}  // namespace leqa
