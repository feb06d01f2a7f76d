#pragma once

#include "casimir/accuracy.hpp"

namespace casimir {

// Largest supported order; orders must be integers or half-integers.
inline constexpr double kMaxBesselOrder = 30.0;

// Modified Bessel function of the second kind K_nu(x), x > 0.
double bessel_k(double nu, double x);

// e^x K_nu(x); finite for large x where bessel_k underflows.
double bessel_k_scaled(double nu, double x);

// K_nu(x) and K_{nu+1}(x) together; cheaper than two calls.
struct BesselPair {
    double k_nu;
    double k_nu1;
};
BesselPair bessel_k_pair_scaled(double nu, double x);

// Riemann zeta for real s > 1.
double riemann_zeta(double s, const Accuracy& acc = {});

}  // namespace casimir
