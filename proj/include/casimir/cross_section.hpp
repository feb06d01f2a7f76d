#pragma once

#include <string>
#include <vector>

#include "casimir/rect_piston.hpp"

namespace casimir {

struct Arc {
    double length = 0.0;
    double curvature = 0.0;  // signed, constant along the arc
};

struct CrossSection {
    std::vector<double> corners;  // interior angles, radians, each in (0, 2 pi)
    std::vector<Arc> arcs;
    double area = 0.0;
    double perimeter = 0.0;

    // Checks ranges and that the boundary turns by exactly 2 pi in total.
    void validate() const;
};

CrossSection rectangle(double b, double c);
CrossSection regular_polygon(int n, double side);
CrossSection disk(double radius);

// sum_i (pi/alpha_i - alpha_i/pi)/24 + sum_j (integral of curvature)/(12 pi)
double chi(const CrossSection& shape);

// chi with every corner kept sharp (rounding radius << a) and with every
// corner replaced by an arc of the same turning (rounding radius >> a).
struct ChiLimits {
    double sharp;
    double smooth;
};
ChiLimits chi_rounding_limits(const CrossSection& shape);

// Smooth eigenvalue counting function; the step at E = 0 is taken as 1.
double weyl_count(const CrossSection& shape, double energy, Field field);

// Small-a three-term forces (terms keyed as in ForceResult; J and series are 0).
ForceResult force_asymptotic_scalar(double a, const CrossSection& shape, Field field);
ForceResult force_asymptotic_em(double a, const CrossSection& shape);

// Shape description: JSON object or line-oriented text (see README).
// Errors carry the offending line number.
CrossSection parse_shape(const std::string& text);
CrossSection load_shape(const std::string& path);

}  // namespace casimir
