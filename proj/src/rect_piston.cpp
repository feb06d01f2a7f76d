#include "casimir/rect_piston.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "casimir/epstein.hpp"
#include "casimir/error.hpp"
#include "casimir/special_functions.hpp"
#include "series.hpp"

namespace casimir {

namespace {

using detail::choose_cut;

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 2.220446049250313e-16;

double zeta2() { return kPi * kPi / 6.0; }
double zeta3() { return 1.2020569031595942854; }
double zeta4() { return kPi * kPi * kPi * kPi / 90.0; }

void require_scalar(Field f, const char* who) {
    if (f == Field::EM) throw DomainError(std::string(who) + ": needs a scalar field (Dirichlet or Neumann)");
}

void check_box(double a, double b, double c) {
    for (double v : {a, b, c})
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("box sides must be positive and finite");
}

struct SeriesSum {
    double value = 0.0;
    double bound = 0.0;
};

// sum_{m,n >= 1} n^2 K_0(beta m n)
SeriesSum k0_series(double beta, double tol, long long cap) {
    SeriesSum out;
    auto w = [&](long long nn) {
        const double z = beta * nn;
        return 2.0 * std::pow(double(nn), 2.5) * bessel_k(0.0, z);
    };
    const long long cut = choose_cut(w, beta, tol, cap, &out.bound);
    for (long long m = 1; m <= cut; ++m)
        for (long long n = 1; m * n <= cut; ++n) out.value += double(n) * n * bessel_k(0.0, beta * m * n);
    return out;
}

// coth f / (f sinh^2 f), stable for large f
double coth_weight(double f) {
    const double q = std::exp(-2.0 * f);
    const double om = -std::expm1(-2.0 * f);
    return 4.0 * q * (1.0 + q) / (f * om * om * om);
}

// sum over (m,n) != 0 of coth_weight(pi sqrt((m x)^2 + (n y)^2))
SeriesSum coth_series(double x, double y, double tol, long long cap) {
    SeriesSum out;
    const double gamma = kPi * std::min(x, y);
    auto w = [&](long long k) { return 8.0 * k * coth_weight(k * gamma); };
    const long long cut = choose_cut(w, 2.0 * gamma, tol, cap, &out.bound);
    for (long long m = 0; m <= cut; ++m)
        for (long long n = 0; n <= cut; ++n) {
            if (m == 0 && n == 0) continue;
            const double wt = (m ? 2.0 : 1.0) * (n ? 2.0 : 1.0);
            const double f = kPi * std::hypot(m * x, n * y);
            out.value += wt * coth_weight(f);
        }
    return out;
}

// Force from one transverse mode of mass mu on a partition at distance a
// from a base, the other side open.
double mode_force(double mu, double a) {
    double sum = 0.0;
    for (int n = 1; n < 100000; ++n) {
        const double z = 2.0 * n * mu * a;
        const auto kp = bessel_k_pair_scaled(0.0, z);
        const double e = std::exp(-z);
        const double t = (kp.k_nu + kp.k_nu1 / z) * e;
        sum += t;
        if (t <= 1e-18 * sum || e == 0.0) break;
    }
    return -mu * mu / kPi * sum;
}

// Sum over the transverse spectrum of the (b, c) rectangle.
SeriesSum waveguide_series(const PistonGeometry& g, bool dirichlet, bool neumann, double tol, long long cap) {
    SeriesSum out;
    const double bmax = std::max(g.b, g.c);
    auto mu_of = [&](long long m, long long l) { return kPi * std::hypot(m / g.b, l / g.c); };
    auto shell_bound = [&](long long k) {
        const double mu = kPi * k / bmax;
        const double modes = (dirichlet ? 2.0 * k - 1.0 : 0.0) + (neumann ? 2.0 * k + 1.0 : 0.0);
        return modes * std::fabs(mode_force(mu, g.a));
    };
    const long long monotone_from = static_cast<long long>(std::ceil(bmax / (kPi * g.a))) + 1;
    const long long cut0 = choose_cut(shell_bound, 2.0 * kPi * g.a / bmax, tol, cap, &out.bound);
    const long long cut = std::max(cut0, monotone_from);
    for (long long m = 0; m <= cut; ++m)
        for (long long l = 0; l <= cut; ++l) {
            if (m == 0 && l == 0) continue;
            const bool interior = m > 0 && l > 0;
            const double count = (dirichlet && interior ? 1.0 : 0.0) + (neumann ? 1.0 : 0.0);
            if (count == 0.0) continue;
            out.value += count * mode_force(mu_of(m, l), g.a);
        }
    return out;
}

long long term_cap(const Accuracy& acc) { return 64LL * acc.max_terms; }

struct Closed {
    double pp, per, edge, regj, one_dim;
    double scale() const { return std::fabs(pp) + std::fabs(per) + std::fabs(edge) + std::fabs(regj) + std::fabs(one_dim); }
};

Closed closed_terms(const PistonGeometry& g, Field field, const Accuracy& acc) {
    const double a = g.a, A = g.area(), P = g.perimeter();
    const double jv = j_factor(g.b / g.c, field, acc);
    if (field == Field::EM)
        return {-3.0 * zeta4() * A / (8.0 * kPi * kPi * std::pow(a, 4)), 0.0,
                -zeta2() / (8.0 * kPi * a * a), -jv / (32.0 * kPi * kPi * A), zeta2() / (4.0 * kPi * a * a)};
    const double e = eta(field);
    return {-3.0 * zeta4() * A / (16.0 * kPi * kPi * std::pow(a, 4)), -e * zeta3() * P / (32.0 * kPi * a * a * a),
            -zeta2() / (16.0 * kPi * a * a), -jv / (32.0 * kPi * kPi * A), 0.0};
}

ForceResult infinite_force(const PistonGeometry& g, Field field, const Accuracy& acc, Representation rep) {
    g.validate();
    acc.validate();
    if (!g.infinite()) throw DomainError("closed-form piston force needs h = infinity; use force_finite_h");
    if (rep == Representation::Auto)
        rep = g.a > std::max(g.b, g.c) ? Representation::WaveguideModes : Representation::ClosedSeries;

    const Closed cl = closed_terms(g, field, acc);
    const double fixed = cl.pp + cl.per + cl.edge + cl.regj + cl.one_dim;
    const double a = g.a, A = g.area();

    ForceResult r;
    r.representation = rep;
    double series = 0.0;
    double direct_total = 0.0;  // waveguide route: summed directly, never via fixed + series
    auto evaluate_series = [&](double tol_abs) {
        if (rep == Representation::WaveguideModes) {
            const bool d = field != Field::Neumann, n = field != Field::Dirichlet;
            SeriesSum w = waveguide_series(g, d, n, tol_abs, term_cap(acc));
            if (field == Field::Neumann) w.value += -zeta2() / (4.0 * kPi * a * a);
            // Reported as a correction to the closed terms; the total is the mode sum itself.
            direct_total = w.value;
            series = w.value - fixed;
            r.series_bound = w.bound;
            return;
        }
        const double pre = kPi * kPi * A / std::pow(a, 4) / (field == Field::EM ? 16.0 : 32.0);
        const SeriesSum cs = coth_series(g.b / a, g.c / a, tol_abs / pre, term_cap(acc));
        series = pre * cs.value;
        r.series_bound = pre * cs.bound;
        if (field != Field::EM) {
            const double kpre = eta(field) * kPi / (2.0 * a * a * a);
            const SeriesSum kb = k0_series(2.0 * kPi * g.b / a, 0.5 * tol_abs / (std::fabs(kpre) * g.b), term_cap(acc));
            const SeriesSum kc = k0_series(2.0 * kPi * g.c / a, 0.5 * tol_abs / (std::fabs(kpre) * g.c), term_cap(acc));
            series += kpre * (g.b * kb.value + g.c * kc.value);
            r.series_bound += std::fabs(kpre) * (g.b * kb.bound + g.c * kc.bound);
        }
    };
    const bool direct = rep == Representation::WaveguideModes;
    evaluate_series(0.25 * acc.rel_tol * cl.scale());
    double total = direct ? direct_total : fixed + series;
    if (r.series_bound > acc.rel_tol * std::fabs(total)) {
        const double floor = direct ? 1e-300 : 8.0 * kEps * cl.scale();
        evaluate_series(0.25 * acc.rel_tol * std::max(std::fabs(total), floor));
        total = direct ? direct_total : fixed + series;
    }
    r.terms = {{"parallel_plate", cl.pp}, {"perimeter", cl.per}, {"edge", cl.edge},
               {"region_II_J", cl.regj},  {"exp_series", series}, {"one_dim_EM", cl.one_dim}};
    r.total = total;
    return r;
}

}  // namespace

double eta(Field f) {
    switch (f) {
        case Field::Dirichlet: return -1.0;
        case Field::Neumann: return 1.0;
        case Field::EM: break;
    }
    throw DomainError("eta is undefined for the EM field");
}

const char* field_name(Field f) {
    switch (f) {
        case Field::Dirichlet: return "dirichlet";
        case Field::Neumann: return "neumann";
        case Field::EM: return "em";
    }
    return "?";
}

Field parse_field(const std::string& name) {
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (s == "dirichlet" || s == "d") return Field::Dirichlet;
    if (s == "neumann" || s == "n") return Field::Neumann;
    if (s == "em" || s == "electromagnetic") return Field::EM;
    throw DomainError("unknown field '" + name + "' (expected dirichlet, neumann or em)");
}

void PistonGeometry::validate() const {
    check_box(a, b, c);
    if (std::isnan(h) || !(h > 0.0)) throw DomainError("piston height h must be positive or infinite");
    if (!std::isinf(h) && !(a < h)) throw DomainError("partition position a must satisfy a < h");
}

double tilde_energy(double a, double b, double c, Field field, const Accuracy& acc) {
    require_scalar(field, "tilde_energy");
    check_box(a, b, c);
    const double e = eta(field);
    const double z3 = epstein_z({{a, b, c}}, 4.0, acc).value;
    const double zab = epstein_z({{a, b}}, 3.0, acc).value;
    const double zac = epstein_z({{a, c}}, 3.0, acc).value;
    const double zbc = epstein_z({{b, c}}, 3.0, acc).value;
    return -(a * b * c) / (32.0 * kPi * kPi) * z3 - e / (64.0 * kPi) * (a * b * zab + a * c * zac + b * c * zbc) -
           zeta2() / (16.0 * kPi) * (1.0 / a + 1.0 / b + 1.0 / c);
}

double tilde_energy_da(double a, double b, double c, Field field, const Accuracy& acc) {
    require_scalar(field, "tilde_energy_da");
    check_box(a, b, c);
    const double e = eta(field);
    const auto z3 = epstein_z_gradient({{a, b, c}}, 4.0, acc);
    const auto zab = epstein_z_gradient({{a, b}}, 3.0, acc);
    const auto zac = epstein_z_gradient({{a, c}}, 3.0, acc);
    return -(b * c) / (32.0 * kPi * kPi) * (z3.value + a * z3.gradient[0]) -
           e / (64.0 * kPi) *
               (b * zab.value + a * b * zab.gradient[0] + c * zac.value + a * c * zac.gradient[0]) +
           zeta2() / (16.0 * kPi * a * a);
}

ForceResult force_scalar(const PistonGeometry& g, Field field, const Accuracy& acc, Representation rep) {
    require_scalar(field, "force_scalar");
    return infinite_force(g, field, acc, rep);
}

ForceResult force_em(const PistonGeometry& g, const Accuracy& acc, Representation rep) {
    return infinite_force(g, Field::EM, acc, rep);
}

FiniteForce force_finite_h(const PistonGeometry& g, Field field, const Accuracy& acc) {
    g.validate();
    if (g.infinite()) throw DomainError("force_finite_h needs a finite h");
    const double l = g.h - g.a;
    const double wide = std::max(g.b, g.c);
    FiniteForce f;
    if (field == Field::EM) {
        const FiniteForce d = force_finite_h(g, Field::Dirichlet, acc);
        const FiniteForce n = force_finite_h(g, Field::Neumann, acc);
        f.region_I = d.region_I + n.region_I;
        f.region_II = d.region_II + n.region_II;
        f.one_dim_EM = zeta2() / (4.0 * kPi) * (1.0 / (g.a * g.a) - 1.0 / (l * l));
        f.total = f.region_I + f.region_II + f.one_dim_EM;
        if (g.a > wide && l > wide) {
            // Both regions long: difference the EM mode sums directly.
            const PistonGeometry gi{g.a, g.b, g.c}, gii{l, g.b, g.c};
            const double wi = force_em(gi, acc, Representation::WaveguideModes).total;
            const double wii = force_em(gii, acc, Representation::WaveguideModes).total;
            f.total = wi - wii;
            f.series_bound = acc.rel_tol * (std::fabs(wi) + std::fabs(wii));
            return f;
        }
        f.series_bound = d.series_bound + n.series_bound;
        return f;
    }
    // Per region: -dE/da = (mode sum at that length) + J/(32 pi^2 A) exactly, so
    // long regions switch to the mode sum, which keeps full relative accuracy.
    const double jterm = j_factor(g.b / g.c, field, acc) / (32.0 * kPi * kPi * g.area());
    auto wave = [&](double len) {
        return force_scalar({len, g.b, g.c}, field, acc, Representation::WaveguideModes).total;
    };
    const bool wave_i = g.a > wide, wave_ii = l > wide;
    const double wi = wave_i ? wave(g.a) : 0.0;
    const double wii = wave_ii ? wave(l) : 0.0;
    f.region_I = wave_i ? wi + jterm : -tilde_energy_da(g.a, g.b, g.c, field, acc);
    f.region_II = wave_ii ? -wii - jterm : tilde_energy_da(l, g.b, g.c, field, acc);
    const bool both = wave_i && wave_ii;
    f.total = both ? wi - wii : f.region_I + f.region_II;
    f.series_bound = acc.rel_tol * (both ? std::fabs(wi) + std::fabs(wii) : std::fabs(f.region_I) + std::fabs(f.region_II));
    return f;
}

double piston_force(const PistonGeometry& g, Field field, const Accuracy& acc) {
    g.validate();
    if (!g.infinite()) return force_finite_h(g, field, acc).total;
    return field == Field::EM ? force_em(g, acc).total : force_scalar(g, field, acc).total;
}

double force_box(const PistonGeometry& g, Field field, const Accuracy& acc) {
    g.validate();
    if (!g.infinite()) throw DomainError("force_box needs h = infinity");
    const ForceResult r = field == Field::EM ? force_em(g, acc) : force_scalar(g, field, acc);
    return r.total - r.terms.at("region_II_J");
}

double j_factor(double x, Field field, const Accuracy& acc) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("j_factor: aspect ratio must be positive and finite");
    const double r = std::sqrt(x);
    const double z = epstein_z({{r, 1.0 / r}}, 4.0, acc).value;
    if (field == Field::EM) return 2.0 * z;
    return z + kPi * eta(field) * (x + 1.0 / x) * zeta3();
}

double force_em_asymptote(const PistonGeometry& g) {
    check_box(g.a, g.b, g.c);
    const double a = g.a, b = g.b, c = g.c;
    return -0.5 * kPi *
           (std::exp(-2.0 * kPi * a / b) / std::sqrt(a * b * b * b) + std::exp(-2.0 * kPi * a / c) / std::sqrt(a * c * c * c));
}

}  // namespace casimir
