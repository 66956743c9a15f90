#pragma once

#include <stdexcept>
#include <string>

namespace feo {

// Target not enclosed by the function values at the bracket endpoints.
struct bracket_error : std::runtime_error {
    explicit bracket_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Iteration cap reached before the requested tolerance (misconfigured spec).
struct iteration_error : std::runtime_error {
    explicit iteration_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Problem instance admits no feasible assignment.
struct infeasible_error : std::runtime_error {
    explicit infeasible_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed scenario file or flag set.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace feo
