#include "casimir/accuracy.hpp"

#include <cmath>

#include "casimir/error.hpp"

namespace casimir {

void Accuracy::validate() const {
    if (!(rel_tol > 0.0) || !(rel_tol <= 1e-3))
        throw DomainError("accuracy: rel_tol must lie in (0, 1e-3]");
    if (max_terms < 16) throw DomainError("accuracy: max_terms must be at least 16");
}

}  // namespace casimir
