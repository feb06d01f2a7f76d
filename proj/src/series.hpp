#pragma once

#include <cmath>
#include <vector>

#include "casimir/error.hpp"

namespace casimir::detail {

// Smallest cut index whose bounded tail, sum_{k > cut} w(k), is at most tol.
// w(k) bounds shell k and must be positive and eventually decrease at least
// like exp(-decay * k / 2).
template <class W>
long long choose_cut(W w, double decay, double tol, long long cap, double* tail_out) {
    std::vector<double> bounds;
    const double geometric = 1.0 / -std::expm1(-0.5 * decay);
    for (long long k = 1;; ++k) {
        if (k > cap) throw ConvergenceError("series truncation exceeded the term budget");
        const double v = w(k);
        bounds.push_back(v);
        if (v == 0.0 || v * geometric < 0.01 * tol) break;
    }
    const double rest = bounds.back() * geometric;
    double suffix = rest;
    long long cut = static_cast<long long>(bounds.size());
    for (long long k = cut; k >= 1; --k) {
        if (suffix + bounds[k - 1] > tol) break;
        suffix += bounds[k - 1];
        cut = k - 1;
    }
    *tail_out = suffix;
    return cut;
}

}  // namespace casimir::detail
