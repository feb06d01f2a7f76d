#pragma once

#include <string>
#include <vector>

#include "casimir/accuracy.hpp"
#include "casimir/cross_section.hpp"
#include "casimir/rect_piston.hpp"

namespace casimir {

struct ThermalState {
    double beta = 1.0;  // inverse temperature

    void validate() const;
};

// Whole-piston totals for the h x b x c box (volume, closed surface).
struct PistonTotals {
    double volume = 0.0;
    double surface = 0.0;
    double area = 0.0;
    double perimeter = 0.0;
    double h = 0.0;

    static PistonTotals of(const PistonGeometry& g);
};

struct ThermalResult {
    double value = 0.0;
    double series_bound = 0.0;
    std::vector<std::string> warnings;  // validity notes, never fatal
};

// Thermal free-energy correction of the piston, region-I contribution
// (exponentially small for a << pi beta) omitted. Needs finite h. For
// Neumann the omega = 0 mode is excluded, so only the a-dependence is
// physical.
ThermalResult free_energy_scalar(const PistonGeometry& g, const ThermalState& t, Field field,
                                 const Accuracy& acc = {});
ThermalResult free_energy_em(const PistonGeometry& g, const ThermalState& t, const Accuracy& acc = {});

// M(x) for aspect ratio x = b/c; EM gives M_D + M_N.
double m_factor(double x, Field field, const Accuracy& acc = {});

// -d(delta F)/da: the coefficient of (h - a), independent of a and h.
// Auto evaluates the closed series for beta <= max(b, c) and the sum over
// transverse waveguide modes beyond, where the closed series cancels.
ThermalResult thermal_force(const PistonGeometry& g, const ThermalState& t, Field field,
                            const Accuracy& acc = {}, Representation rep = Representation::Auto);

// Leading small-beta terms for an arbitrary cross section; the O(1/beta)
// remainder is not included.
ThermalResult thermal_force_general(double a, const CrossSection& shape, double h, const ThermalState& t,
                                    Field field);

// Small-a, small-beta EM force: zero-temperature asymptotic terms plus the
// general thermal terms.
ThermalResult combined_force_em(double a, const CrossSection& shape, const ThermalState& t);

// Exact h = infinity force at temperature 1/beta: Casimir force plus thermal
// force. The region-II J term enters each part with opposite sign and so is
// counted once overall (it cancels).
double total_force(const PistonGeometry& g, const ThermalState& t, Field field, const Accuracy& acc = {});

// Large-beta EM free energy (needs finite h) and the matching force.
double low_temp_asymptote(const PistonGeometry& g, const ThermalState& t);
double low_temp_asymptote_force(const PistonGeometry& g, const ThermalState& t);
// Lowest-mode asymptote of thermal_force: EM as above, Dirichlet from the
// (1,1) transverse mode. Neumann has no exponential asymptote (massless mode).
double low_temp_asymptote_force(const PistonGeometry& g, const ThermalState& t, Field field);

}  // namespace casimir
