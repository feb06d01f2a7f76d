#pragma once

#include <vector>

#include "casimir/accuracy.hpp"

namespace casimir {

struct LatticeLengths {
    std::vector<double> lengths;

    void validate() const;
    int dim() const { return static_cast<int>(lengths.size()); }
};

struct EpsteinResult {
    double value = 0.0;
    double truncation_bound = 0.0;  // absolute
    long long terms_used = 0;
};

// Value plus d Z / d a_i in the caller's length order. gradient_bound is an
// absolute bound on every component.
struct EpsteinGradient : EpsteinResult {
    std::vector<double> gradient;
    double gradient_bound = 0.0;
};

// Z_d(a; s) = sum over nonzero integer n of (sum_i (n_i a_i)^2)^(-s/2), s > d.
EpsteinResult epstein_z(const LatticeLengths& lat, double s, const Accuracy& acc = {});
EpsteinGradient epstein_z_gradient(const LatticeLengths& lat, double s, const Accuracy& acc = {});

// Independent oracle: smoothly windowed direct lattice sum inside radius * min(a),
// completed by the window's analytic continuum integral.
EpsteinResult epstein_z_bruteforce(const LatticeLengths& lat, double s, int radius);

// 2 zeta(s) / a_1^s, the leading behaviour as a_1 -> 0.
double small_leading_term(const LatticeLengths& lat, double s);

}  // namespace casimir
