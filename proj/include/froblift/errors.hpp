#pragma once

#include <stdexcept>
#include <string>

namespace froblift {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operands belong to different ring objects.
struct ring_mismatch_error : error {
    using error::error;
};

// A request exceeds (or otherwise conflicts with) the working precision.
struct precision_error : error {
    using error::error;
};

// An element or map that must be invertible is not.
struct not_invertible_error : error {
    using error::error;
};

// An iterative solve failed to stabilize within its step budget.
struct convergence_error : error {
    using error::error;
};

// Structural axiom violated (reported with the axiom name and a witness).
struct validation_error : error {
    using error::error;
};

// Malformed config document.
struct schema_error : error {
    using error::error;
};

// Enumeration budget exceeded.
struct budget_error : error {
    using error::error;
};

} // namespace froblift
