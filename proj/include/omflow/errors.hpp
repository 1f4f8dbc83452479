#pragma once

// =============================================================================
// omflow - error taxonomy
// =============================================================================
// Three failure families, mapped 1:1 to CLI exit codes:
//   model_error / selector_error / std::domain_error -> user input (exit 1)
//   numerical_error                                  -> numerics    (exit 2)
// =============================================================================

#include <stdexcept>
#include <string>

namespace omflow {

/// A network model or configuration violates a structural invariant
/// (bad topology, negative rate, unresolved label, malformed config file).
class model_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A selector path or sweep specification cannot be resolved against a model.
class selector_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numeric routine cannot deliver its accuracy contract (non-converged
/// quadrature, unstable dynamics where a steady state was requested,
/// disagreeing redundant solvers).
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace omflow
