#pragma once

#include <stdexcept>
#include <string>

namespace pentile {

// A computation was asked to exceed its configured budget (ball radius,
// census cap, memory estimate). Carries the offending quantity in the text.
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Inputs that the operation explicitly excludes (e.g. identical axes in a
// cone-piece query).
struct excluded_case_error : std::invalid_argument {
    explicit excluded_case_error(const std::string& what) : std::invalid_argument(what) {}
};

// Geometrically degenerate inputs (shared ideal endpoint, axis on a wall).
struct degenerate_input_error : std::invalid_argument {
    explicit degenerate_input_error(const std::string& what) : std::invalid_argument(what) {}
};

// A floating-point value strayed outside its documented tolerance band,
// indicating a logic bug rather than roundoff.
struct invariant_violation : std::runtime_error {
    explicit invariant_violation(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pentile
