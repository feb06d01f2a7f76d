#pragma once

namespace casimir {

struct Accuracy {
    double rel_tol = 1e-12;
    int max_terms = 4096;

    void validate() const;
};

}  // namespace casimir
