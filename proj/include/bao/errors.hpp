#pragma once

#include <stdexcept>
#include <string>

namespace bao {

/// A precondition on an operation's arguments was violated.
struct invalid_parameter : std::invalid_argument {
    explicit invalid_parameter(const std::string& what) : std::invalid_argument(what) {}
};

/// A configured cap (node count, atom count, closure size, ...) was exceeded.
/// Distinct from invalid_parameter: the request is well-formed, just too big.
struct resource_limit : std::runtime_error {
    explicit resource_limit(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed textual input (graph files, structure dumps, terms, equations).
struct parse_error : std::runtime_error {
    parse_error(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    explicit parse_error(const std::string& what) : std::runtime_error(what), position(0) {}
    std::size_t position;
};

} // namespace bao
