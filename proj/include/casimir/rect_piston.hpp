#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "casimir/accuracy.hpp"

namespace casimir {

enum class Field { Dirichlet, Neumann, EM };

// -1 for Dirichlet, +1 for Neumann; DomainError for EM.
double eta(Field f);
const char* field_name(Field f);
Field parse_field(const std::string& name);

struct PistonGeometry {
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    double h = std::numeric_limits<double>::infinity();

    void validate() const;
    bool infinite() const { return std::isinf(h); }
    double area() const { return b * c; }
    double perimeter() const { return 2.0 * (b + c); }
};

// Which exact representation evaluates the h = infinity force. The closed
// series suits a <~ max(b,c); the waveguide-mode sum suits a >~ max(b,c),
// where the closed series loses digits to cancellation.
enum class Representation { Auto, ClosedSeries, WaveguideModes };

struct ForceResult {
    double total = 0.0;
    // Keys: parallel_plate, perimeter, edge, region_II_J, exp_series, one_dim_EM.
    std::map<std::string, double> terms;
    double series_bound = 0.0;
    Representation representation = Representation::ClosedSeries;
};

// total is authoritative; when both regions are long it is formed from mode
// sums directly and the parts below agree with it only to rounding.
struct FiniteForce {
    double total = 0.0;
    double region_I = 0.0;    // -dE_I/da
    double region_II = 0.0;   // -dE_II/da
    double one_dim_EM = 0.0;  // EM only
    double series_bound = 0.0;
};

// Cutoff-independent energy of a scalar field in an a x b x c box.
double tilde_energy(double a, double b, double c, Field field, const Accuracy& acc = {});
// d/da of tilde_energy at fixed b, c (analytic differentiation).
double tilde_energy_da(double a, double b, double c, Field field, const Accuracy& acc = {});

// h = infinity forces; field Dirichlet or Neumann for force_scalar.
ForceResult force_scalar(const PistonGeometry& g, Field field, const Accuracy& acc = {},
                         Representation rep = Representation::Auto);
ForceResult force_em(const PistonGeometry& g, const Accuracy& acc = {},
                     Representation rep = Representation::Auto);

// Finite h: -d/da [E(a) + E(h-a)], plus the EM one-dimensional terms.
FiniteForce force_finite_h(const PistonGeometry& g, Field field, const Accuracy& acc = {});

// Dispatches on g.h: infinite -> force_scalar/force_em total, finite -> force_finite_h total.
double piston_force(const PistonGeometry& g, Field field, const Accuracy& acc = {});

// Single-cavity prescription: piston force with the region-II J term removed.
double force_box(const PistonGeometry& g, Field field, const Accuracy& acc = {});

// J(x) for aspect ratio x = b/c; EM gives J_D + J_N.
double j_factor(double x, Field field, const Accuracy& acc = {});

// Large-a EM asymptote: two exponentials in a/b and a/c.
double force_em_asymptote(const PistonGeometry& g);

}  // namespace casimir
