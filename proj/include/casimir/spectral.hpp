#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "casimir/rect_piston.hpp"
#include "casimir/thermal.hpp"

namespace casimir {

// Rectangular cavity; a is the axis normal to the piston.
struct Box {
    double a = 1.0, b = 1.0, c = 1.0;
    void validate() const;
    double volume() const { return a * b * c; }
    double surface() const { return 2.0 * (a * b + a * c + b * c); }
    double edges() const { return 4.0 * (a + b + c); }
};

// Largest allowed lattice extent k_max * side / pi.
constexpr double kMaxLatticeExtent = 1e4;
// Largest number of modes held in memory by enumerate_modes.
constexpr double kMaxStoredModes = 5e7;

struct SpectrumLine {
    double omega = 0.0;
    std::int64_t multiplicity = 0;
};

// EM uses the union of the Dirichlet and Neumann spectra with the modes
// (n, 0, 0) removed. The kept n = 0 surplus does not depend on a.
struct ModeSpectrum {
    std::vector<SpectrumLine> frequencies;  // ascending, equal omegas merged
    double k_max = 0.0;
    Field boundary = Field::Dirichlet;
    Box box;
    std::int64_t count() const;
};

ModeSpectrum enumerate_modes(const Box& box, Field boundary, double k_max);

// Mode count below k (multiplicities included), without storing modes.
std::int64_t count_modes(const Box& box, Field boundary, double k);

// 1/2 sum omega e^{-omega/lambda}; lambda <= k_max/8.
double cutoff_energy(const ModeSpectrum& spec, double lambda);

struct CutoffFit {
    double c4 = 0.0, c3 = 0.0, c2 = 0.0;  // coefficients of lambda^4, lambda^3, lambda^2
    double E_tilde = 0.0;
    double residual = 0.0;  // RMS misfit over the grid
    std::vector<double> lambdas;
    std::vector<double> energies;
    std::vector<double> corrections;  // coefficients of lambda^-2, -4, -6, -8
    double k_max = 0.0;
};

// Grid over [lambda_hi/2, lambda_hi] equally spaced in 1/lambda, lambda_hi = 4.7 / shortest side.
std::vector<double> default_lambda_grid(const Box& box, int points = 16);

// Least-squares fit of E(lambda) = c4 L^4 + c3 L^3 + c2 L^2 + E~ + sum_k d_k L^{-2k}, k = 1..4.
// Modes are streamed up to 44 * max(lambda).
CutoffFit fit_cutoff_expansion(const Box& box, Field boundary, const std::vector<double>& lambda_grid);

struct DirectSum {
    double value = 0.0;
    double truncation_bound = 0.0;
    double k_max = 0.0;
};

// (1/beta) sum ln(1 - e^{-beta omega}) over a stored spectrum.
DirectSum free_energy_direct(const ModeSpectrum& spec, const ThermalState& t);
// Same, streaming, with k_max grown until the tail bound is below rel_tol |value|.
DirectSum free_energy_box(const Box& box, Field boundary, const ThermalState& t, double rel_tol = 1e-13);

struct NumericForce {
    double value = 0.0;
    double error = 0.0;
};

// -dE/da by central differences at step and step/2 with one Richardson stage.
NumericForce force_numeric(const std::function<double(double)>& energy, double a, double step);

struct OracleOptions {
    double lambda_scale = 6.0;  // lambda_hi * shortest side
    int points = 16;
    double rel_step = 5e-4;
};

// Zero-temperature piston force at finite h from cutoff fits of both regions.
NumericForce oracle_force(const PistonGeometry& g, Field field, const OracleOptions& opt = {});

// Direct mode-sum free energy of both regions.
DirectSum oracle_free_energy(const PistonGeometry& g, const ThermalState& t, Field field);
// -d/da of oracle_free_energy.
NumericForce oracle_thermal_force(const PistonGeometry& g, const ThermalState& t, Field field);

// One "omega multiplicity" pair per line.
void write_spectrum(const ModeSpectrum& spec, std::ostream& out);

}  // namespace casimir
