#include "casimir/thermal.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

#include "casimir/epstein.hpp"
#include "casimir/error.hpp"
#include "casimir/special_functions.hpp"
#include "series.hpp"

namespace casimir {

namespace {

using detail::choose_cut;

constexpr double kPi = std::numbers::pi;
const double kZ2 = kPi * kPi / 6.0;
const double kZ3 = 1.2020569031595942854;
const double kZ4 = kPi * kPi * kPi * kPi / 90.0;

struct Sum {
    double value = 0.0;
    double bound = 0.0;
};

// (1 + 2f - e^{-2f}) / (f^3 sinh^2 f)
double sinh_weight(double f) {
    const double q = std::exp(-2.0 * f);
    const double om = -std::expm1(-2.0 * f);
    return 4.0 * q * (1.0 + 2.0 * f - q) / (f * f * f * om * om);
}

// sum over (m,n) != 0 of sinh_weight(pi sqrt((m x)^2 + (n y)^2))
Sum sinh_series(double x, double y, double tol, long long cap) {
    Sum out;
    const double gamma = kPi * std::min(x, y);
    auto w = [&](long long k) { return 8.0 * k * sinh_weight(k * gamma); };
    const long long cut = choose_cut(w, 2.0 * gamma, tol, cap, &out.bound);
    for (long long m = 0; m <= cut; ++m)
        for (long long n = 0; n <= cut; ++n) {
            if (m == 0 && n == 0) continue;
            out.value += (m ? 2.0 : 1.0) * (n ? 2.0 : 1.0) * sinh_weight(kPi * std::hypot(m * x, n * y));
        }
    return out;
}

// sum_{m,n >= 1} (n/m) K_1(kappa m n)
Sum k1_series(double kappa, double tol, long long cap) {
    Sum out;
    auto w = [&](long long nn) { return 2.0 * std::pow(double(nn), 1.5) * bessel_k(1.0, kappa * nn); };
    const long long cut = choose_cut(w, kappa, tol, cap, &out.bound);
    for (long long m = 1; m <= cut; ++m)
        for (long long n = 1; m * n <= cut; ++n) out.value += double(n) / m * bessel_k(1.0, kappa * m * n);
    return out;
}

// Thermal force from one transverse mode of mass mu in a long region.
double mode_thermal(double mu, double beta) {
    double sum = 0.0;
    for (int q = 1; q < 100000; ++q) {
        const double z = q * beta * mu;
        const double t = bessel_k_scaled(1.0, z) * std::exp(-z) / q;
        sum += t;
        if (t <= 1e-18 * sum || t == 0.0) break;
    }
    return -mu / (kPi * beta) * sum;
}

Sum waveguide_thermal(double b, double c, double beta, bool dirichlet, bool neumann, double tol, long long cap) {
    Sum out;
    const double wide = std::max(b, c);
    auto shell = [&](long long k) {
        const double modes = (dirichlet ? 2.0 * k - 1.0 : 0.0) + (neumann ? 2.0 * k + 1.0 : 0.0);
        return modes * std::fabs(mode_thermal(kPi * k / wide, beta));
    };
    const long long monotone_from = static_cast<long long>(std::ceil(wide / (kPi * beta))) + 1;
    const long long cut = std::max(monotone_from, choose_cut(shell, kPi * beta / wide, tol, cap, &out.bound));
    for (long long m = 0; m <= cut; ++m)
        for (long long l = 0; l <= cut; ++l) {
            if (m == 0 && l == 0) continue;
            const double count = (dirichlet && m > 0 && l > 0 ? 1.0 : 0.0) + (neumann ? 1.0 : 0.0);
            if (count == 0.0) continue;
            out.value += count * mode_thermal(kPi * std::hypot(m / b, l / c), beta);
        }
    return out;
}

long long cap_of(const Accuracy& acc) { return 64LL * acc.max_terms; }

// Closed-series coefficient of (h - a) for a scalar field.
Sum coefficient_closed(double b, double c, double beta, Field field, const Accuracy& acc) {
    const double A = b * c, P = 2.0 * (b + c), x = b / c, e = eta(field);
    const double b4 = beta * beta * beta * beta;
    // The lattice constants cancel against each other at low temperature; keep them near rounding.
    Accuracy fine = acc;
    fine.rel_tol = 1e-15;
    const double mj[] = {-m_factor(x, field, fine) / (32.0 * kPi * beta * std::sqrt(A)),
                         j_factor(x, field, fine) / (32.0 * kPi * kPi * A)};
    const double parts[] = {-kZ4 * A / (kPi * kPi * b4), -e * kZ3 * P / (8.0 * kPi * beta * beta * beta),
                            -kZ2 / (4.0 * kPi * beta * beta), mj[0], mj[1]};
    double fixed = 0.0, scale = 0.0;
    for (double p : parts) {
        fixed += p;
        scale += std::fabs(p);
    }
    const double tol = 0.25 * acc.rel_tol * scale;
    const double bb = 2.0 * b / beta, cb = 2.0 * c / beta;
    const double pre1 = -kPi * kPi * A / (8.0 * b4);
    const Sum s1 = sinh_series(bb, cb, tol / std::fabs(pre1), cap_of(acc));
    const double pre2 = -e / (beta * beta);
    const Sum kb = k1_series(2.0 * kPi * bb, 0.5 * tol / std::fabs(pre2), cap_of(acc));
    const Sum kc = k1_series(2.0 * kPi * cb, 0.5 * tol / std::fabs(pre2), cap_of(acc));
    return {fixed + pre1 * s1.value + pre2 * (kb.value + kc.value),
            std::fabs(pre1) * s1.bound + std::fabs(pre2) * (kb.bound + kc.bound) + 4e-16 * scale +
                1e-15 * (std::fabs(mj[0]) + std::fabs(mj[1]))};
}

Sum coefficient_modes(double b, double c, double beta, Field field, const Accuracy& acc) {
    const bool d = field != Field::Neumann, n = field != Field::Dirichlet;
    // Tolerance against the leading mode's size so tiny low-temperature values keep their digits.
    const double lead = std::fabs(mode_thermal(kPi / std::max(b, c), beta));
    Sum s = waveguide_thermal(b, c, beta, d, n, 0.25 * acc.rel_tol * lead, cap_of(acc));
    if (field == Field::Neumann) s.value -= kZ2 / (kPi * beta * beta);
    return s;
}

// Coefficient of (h - a) in the free energy; the thermal force itself.
Sum coefficient(double b, double c, double beta, Field field, const Accuracy& acc,
              Representation rep = Representation::Auto) {
    if (rep == Representation::Auto)
        rep = beta > std::max(b, c) ? Representation::WaveguideModes : Representation::ClosedSeries;
    if (rep == Representation::WaveguideModes) return coefficient_modes(b, c, beta, field, acc);
    if (field != Field::EM) return coefficient_closed(b, c, beta, field, acc);
    const Sum d = coefficient_closed(b, c, beta, Field::Dirichlet, acc);
    const Sum n = coefficient_closed(b, c, beta, Field::Neumann, acc);
    return {d.value + n.value + kZ2 / (kPi * beta * beta), d.bound + n.bound};
}

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
}

void warn_region_one(double a, double beta, std::vector<std::string>& w) {
    if (a > kPi * beta / 4.0)
        w.push_back("a = " + fmt(a) + " exceeds pi*beta/4 = " + fmt(kPi * beta / 4.0) +
                    "; region-I thermal terms are no longer negligible");
}

void check_finite_h(const PistonGeometry& g) {
    g.validate();
    if (g.infinite()) throw DomainError("free energy needs a finite h");
}

}  // namespace

void ThermalState::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be positive and finite");
}

PistonTotals PistonTotals::of(const PistonGeometry& g) {
    g.validate();
    return {g.h * g.area(), g.h * g.perimeter() + 2.0 * g.area(), g.area(), g.perimeter(), g.h};
}

double m_factor(double x, Field field, const Accuracy& acc) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("m_factor: aspect ratio must be positive and finite");
    const double r = std::sqrt(x);
    const double z = epstein_z({{r, 1.0 / r}}, 3.0, acc).value;
    if (field == Field::EM) return 2.0 * z;
    return z + 4.0 * eta(field) * (r + 1.0 / r) * kZ2;
}

ThermalResult thermal_force(const PistonGeometry& g, const ThermalState& t, Field field, const Accuracy& acc,
                            Representation rep) {
    g.validate();
    t.validate();
    acc.validate();
    const Sum s = coefficient(g.b, g.c, t.beta, field, acc, rep);
    ThermalResult r{s.value, s.bound, {}};
    warn_region_one(g.a, t.beta, r.warnings);
    return r;
}

ThermalResult free_energy_scalar(const PistonGeometry& g, const ThermalState& t, Field field, const Accuracy& acc) {
    if (field == Field::EM) throw DomainError("free_energy_scalar: use free_energy_em for the EM field");
    check_finite_h(g);
    t.validate();
    acc.validate();
    const double l = g.h - g.a;
    const Sum s = coefficient(g.b, g.c, t.beta, field, acc);
    // The closed surface exceeds P (h - a) by the two end caps.
    const double caps = -eta(field) * kZ3 * 2.0 * g.area() / (8.0 * kPi * t.beta * t.beta * t.beta);
    ThermalResult r{s.value * l + caps, s.bound * l, {}};
    warn_region_one(g.a, t.beta, r.warnings);
    return r;
}

ThermalResult free_energy_em(const PistonGeometry& g, const ThermalState& t, const Accuracy& acc) {
    check_finite_h(g);
    t.validate();
    acc.validate();
    const double l = g.h - g.a;
    const Sum s = coefficient(g.b, g.c, t.beta, Field::EM, acc);
    ThermalResult r{s.value * l, s.bound * l, {}};
    warn_region_one(g.a, t.beta, r.warnings);
    return r;
}

ThermalResult thermal_force_general(double a, const CrossSection& shape, double h, const ThermalState& t, Field field) {
    t.validate();
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("separation a must be positive and finite");
    if (!(h > a)) throw DomainError("piston height h must exceed a");
    const double x = chi(shape);
    const double beta = t.beta, b2 = beta * beta;
    ThermalResult r;
    if (field == Field::EM) {
        r.value = -2.0 * kZ4 * shape.area / (kPi * kPi * b2 * b2) + kZ2 * (1.0 - 2.0 * x) / (kPi * b2);
    } else {
        r.value = -kZ4 * shape.area / (kPi * kPi * b2 * b2) - eta(field) * kZ3 * shape.perimeter / (8.0 * kPi * b2 * beta) -
                  kZ2 * x / (kPi * b2);
    }
    warn_region_one(a, beta, r.warnings);
    if (kPi * beta > std::sqrt(shape.area))
        r.warnings.push_back("pi*beta exceeds sqrt(A); the small-beta expansion is not leading");
    r.warnings.push_back("O(1/beta) remainder not included");
    return r;
}

ThermalResult combined_force_em(double a, const CrossSection& shape, const ThermalState& t) {
    ThermalResult r = thermal_force_general(a, shape, std::numeric_limits<double>::infinity(), t, Field::EM);
    r.value += force_asymptotic_em(a, shape).total;
    return r;
}

double total_force(const PistonGeometry& g, const ThermalState& t, Field field, const Accuracy& acc) {
    g.validate();
    if (!g.infinite()) throw DomainError("total_force needs h = infinity");
    const double casimir = field == Field::EM ? force_em(g, acc).total : force_scalar(g, field, acc).total;
    return casimir + thermal_force(g, t, field, acc).value;
}

double low_temp_asymptote(const PistonGeometry& g, const ThermalState& t) {
    check_finite_h(g);
    return (g.h - g.a) * low_temp_asymptote_force(g, t);
}

double low_temp_asymptote_force(const PistonGeometry& g, const ThermalState& t) {
    g.validate();
    t.validate();
    const double beta = t.beta;
    return -(std::exp(-kPi * beta / g.b) / std::sqrt(g.b) + std::exp(-kPi * beta / g.c) / std::sqrt(g.c)) /
           (std::sqrt(2.0) * std::pow(beta, 1.5));
}

double low_temp_asymptote_force(const PistonGeometry& g, const ThermalState& t, Field field) {
    if (field == Field::EM) return low_temp_asymptote_force(g, t);
    if (field == Field::Neumann) throw DomainError("Neumann thermal force has no exponential low-temperature asymptote");
    g.validate();
    t.validate();
    const double mu = kPi * std::hypot(1.0 / g.b, 1.0 / g.c);
    return -std::sqrt(mu / (2.0 * kPi * std::pow(t.beta, 3))) * std::exp(-t.beta * mu);
}

}  // namespace casimir
