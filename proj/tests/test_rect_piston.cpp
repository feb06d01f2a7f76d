#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <numbers>

#include "casimir/error.hpp"
#include "casimir/rect_piston.hpp"
#include "casimir/special_functions.hpp"

using namespace casimir;

namespace {

constexpr double kPi = std::numbers::pi;
const double kZ2 = kPi * kPi / 6;
const double kZ4 = std::pow(kPi, 4) / 90;
constexpr Field kAll[] = {Field::Dirichlet, Field::Neumann, Field::EM};

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

ForceResult inf_force(double a, double b, double c, Field f, Representation rep = Representation::Auto) {
    const PistonGeometry g{a, b, c};
    return f == Field::EM ? force_em(g, {}, rep) : force_scalar(g, f, {}, rep);
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("J constants for the square cross section") {
    CHECK(std::fabs(j_factor(1, Field::Dirichlet) + 1.5259) < 0.0005);
    CHECK(std::fabs(j_factor(1, Field::Neumann) - 13.579) < 0.001);
    CHECK(std::fabs(j_factor(1, Field::EM) - 12.053) < 0.001);
    for (double x : {0.3, 1.0, 2.7}) {
        CHECK(rel(j_factor(x, Field::EM), j_factor(x, Field::Dirichlet) + j_factor(x, Field::Neumann)) < 1e-14);
        for (Field f : kAll) CHECK(rel(j_factor(x, f), j_factor(1 / x, f)) < 1e-12);
    }
}

TEST_CASE("tilde_energy symmetry and thin-box limit") {
    for (Field f : {Field::Dirichlet, Field::Neumann})
        CHECK(rel(tilde_energy(1, 2, 3, f), tilde_energy(3, 1, 2, f)) < 1e-12);
    // Thin box a = 0.1, b = c = 1: volume, perimeter and edge terms; the volume term dominates.
    const double a = 0.1;
    const double e = tilde_energy(a, 1, 1, Field::Dirichlet);
    const double lead = -kZ4 / (16 * kPi * kPi * a * a * a);
    const double perimeter = riemann_zeta(3) * 2 / (32 * kPi * a * a);
    const double edge = -kZ2 / (16 * kPi * a);
    CHECK(rel(e, lead + perimeter + edge) < 0.02);
    CHECK(std::fabs(lead) > std::fabs(perimeter) + std::fabs(edge));
}

TEST_CASE("tilde_energy_da matches a Richardson central difference") {
    for (Field f : {Field::Dirichlet, Field::Neumann}) {
        const double a = 0.7, b = 1.1, c = 0.9;
        auto d = [&](double h) { return (tilde_energy(a + h, b, c, f) - tilde_energy(a - h, b, c, f)) / (2 * h); };
        const double fd = (4 * d(5e-4) - d(1e-3)) / 3;
        CHECK(rel(tilde_energy_da(a, b, c, f), fd) < 1e-8);
    }
}

TEST_CASE("closed series and waveguide modes agree") {
    for (Field f : kAll)
        for (double a : {0.4, 0.8, 1.2})
            for (double c : {1.0, 1.6}) {
                const auto cl = inf_force(a, 1.0, c, f, Representation::ClosedSeries);
                const auto wg = inf_force(a, 1.0, c, f, Representation::WaveguideModes);
                CAPTURE(field_name(f));
                CAPTURE(a);
                CHECK(rel(cl.total, wg.total) < 1e-9);
            }
}

TEST_CASE("force terms sum to the total with a certified bound") {
    for (Field f : kAll)
        for (double a : {0.05, 0.5, 0.9}) {
            const auto r = inf_force(a, 1.0, 1.0, f);
            double sum = 0;
            for (const auto& [k, v] : r.terms) sum += v;
            CHECK(r.terms.size() == 6);
            CHECK(rel(sum, r.total) < 1e-13);
            CHECK(r.series_bound < 1e-12 * std::fabs(r.total));
        }
}

TEST_CASE("EM composition") {
    for (double a : {0.3, 1.0, 2.5}) {
        const double em = inf_force(a, 1, 1.4, Field::EM).total;
        const double d = inf_force(a, 1, 1.4, Field::Dirichlet).total;
        const double n = inf_force(a, 1, 1.4, Field::Neumann).total;
        CHECK(std::fabs(em - d - n - kZ2 / (4 * kPi * a * a)) < 1e-12 * std::fabs(n));
    }
    const PistonGeometry g{0.8, 1.0, 0.6, 3.0};
    const double l = g.h - g.a;
    const double em = force_finite_h(g, Field::EM).total;
    const double d = force_finite_h(g, Field::Dirichlet).total;
    const double n = force_finite_h(g, Field::Neumann).total;
    CHECK(std::fabs(em - d - n - kZ2 / (4 * kPi * g.a * g.a) + kZ2 / (4 * kPi * l * l)) < 1e-14);
}

TEST_CASE("attraction toward the nearer base") {
    int checked = 0;
    for (Field f : kAll)
        for (double h : {2.0, 5.0, 20.0})
            for (double b : {0.5, 1.0, 2.0})
                for (double c : {0.5, 1.0, 2.0})
                    for (double frac : {0.1, 0.2, 0.3, 0.4, 0.45}) {
                        const PistonGeometry lo{frac * h, b, c, h};
                        const PistonGeometry hi{(1 - frac) * h, b, c, h};
                        const double fl = force_finite_h(lo, f).total;
                        const double fh = force_finite_h(hi, f).total;
                        CHECK(fl < 0);
                        CHECK(fh > 0);
                        CHECK(std::fabs(fl + fh) <= 1e-10 * std::fabs(fl));
                        ++checked;
                    }
    CHECK(checked == 405);
    for (Field f : kAll) CHECK(force_finite_h({1.5, 1, 1, 3.0}, f).total == 0.0);
}

TEST_CASE("finite-h force with a Richardson reference") {
    // h = 4, b = c = 1, a = 1, Dirichlet.
    const double h = 4, a = 1;
    auto e = [&](double x) { return tilde_energy(x, 1, 1, Field::Dirichlet) + tilde_energy(h - x, 1, 1, Field::Dirichlet); };
    auto d = [&](double s) { return -(e(a + s) - e(a - s)) / (2 * s); };
    const double step = 1e-4 * a;
    const double ref = (4 * d(step / 2) - d(step)) / 3;
    const double f = force_finite_h({a, 1, 1, h}, Field::Dirichlet).total;
    CHECK(rel(f, ref) < 1e-7);
    CHECK(rel(f, -4.12515125e-04) < 1e-7);  // frozen Richardson reference
}

TEST_CASE("large h recovers the h = infinity force") {
    for (Field f : kAll)
        for (double a : {0.3, 1.0, 2.0}) {
            const double h = 1e3 * std::max(a, 1.3);
            const double inf = inf_force(a, 1.0, 1.3, f).total;
            double fin = force_finite_h({a, 1.0, 1.3, h}, f).total;
            // The h = infinity Neumann force omits the region-II zeta(2)/(4 pi L^2) term.
            if (f == Field::Neumann) fin -= kZ2 / (4 * kPi * (h - a) * (h - a));
            CAPTURE(field_name(f));
            CAPTURE(a);
            CHECK(rel(fin, inf) < 1e-6);
        }
}

TEST_CASE("parallel-plate recovery") {
    const double a = 0.01;
    const double scalar_pp = -3 * kZ4 / (16 * kPi * kPi);
    CHECK(rel(std::pow(a, 4) * inf_force(a, 1, 1, Field::EM).total, -3 * kZ4 / (8 * kPi * kPi)) < 1e-3);
    // Scalar fields keep a relative O(a/b) perimeter shift, 2.3% at a/b = 0.01.
    const double zeta3 = riemann_zeta(3);
    for (Field f : {Field::Dirichlet, Field::Neumann}) {
        double prev = INFINITY;
        for (double x : {1e-2, 1e-3, 1e-4}) {
            const double r = std::pow(x, 4) * inf_force(x, 1, 1, f).total / scalar_pp;
            const double perimeter_shift = eta(f) * zeta3 * 4 * kPi * x / (6 * kZ4);
            CHECK(std::fabs(r - 1) < prev);
            CHECK(std::fabs(r - 1 - perimeter_shift) < 0.02 * std::fabs(perimeter_shift));
            prev = std::fabs(r - 1);
        }
        CHECK(prev < 1e-3);
    }
}

TEST_CASE("force vanishes at large separation") {
    for (Field f : kAll) {
        double prev = INFINITY;
        for (double a : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            const double v = std::fabs(inf_force(a, 1, 1, f).total);
            CHECK(v < prev);
            prev = v;
        }
        CHECK(prev < 1e-3);
    }
}

TEST_CASE("single-box force crossovers") {
    auto n = [](double a) { return force_box({a, 1, 1}, Field::Neumann); };
    auto em = [](double a) { return force_box({a, 1, 1}, Field::EM); };
    CHECK(std::fabs(bisect(n, 1.0, 3.0) - 1.745) < 0.005);
    CHECK(std::fabs(bisect(em, 0.3, 1.5) - 0.785) < 0.005);
    for (double a = 0.05; a <= 10.0; a *= 1.2) CHECK(force_box({a, 1, 1}, Field::Dirichlet) < 0);
}

TEST_CASE("EM large-separation asymptote") {
    const PistonGeometry g{5, 1, 1};
    CHECK(force_em_asymptote(g) == force_em_asymptote({5, 1, 1}));
    CHECK(force_em_asymptote({5, 1, 2}) == doctest::Approx(force_em_asymptote({5, 2, 1})).epsilon(1e-15));
    // The exact force carries a relative O(b/a) correction to the two-exponential form.
    double prev = INFINITY;
    for (double a : {5.0, 8.0, 20.0}) {
        const double r = force_em({a, 1, 1}).total / force_em_asymptote({a, 1, 1});
        CAPTURE(a);
        CHECK(r > 1.0);
        CHECK(r < prev);
        CHECK((r - 1) * a == doctest::Approx(0.14).epsilon(0.1));
        prev = r;
    }
    // Decay constant: fit ln|F| = c0 + p ln a - k a over a in [4, 8].
    double sxx[3][3] = {}, sxy[3] = {};
    for (double a = 4; a <= 8.0001; a += 0.25) {
        const double x[3] = {1, std::log(a), -a};
        const double y = std::log(std::fabs(force_em({a, 1, 1}).total));
        for (int i = 0; i < 3; ++i) {
            sxy[i] += x[i] * y;
            for (int j = 0; j < 3; ++j) sxx[i][j] += x[i] * x[j];
        }
    }
    for (int i = 0; i < 3; ++i)
        for (int k = i + 1; k < 3; ++k) {
            const double m = sxx[k][i] / sxx[i][i];
            for (int j = 0; j < 3; ++j) sxx[k][j] -= m * sxx[i][j];
            sxy[k] -= m * sxy[i];
        }
    double coef[3];
    for (int i = 2; i >= 0; --i) {
        double s = sxy[i];
        for (int j = i + 1; j < 3; ++j) s -= sxx[i][j] * coef[j];
        coef[i] = s / sxx[i][i];
    }
    CHECK(rel(coef[2], 2 * kPi) < 0.01);
}

TEST_CASE("rect-piston errors") {
    CHECK_THROWS_AS(force_scalar({1, 1, 1}, Field::EM), DomainError);
    CHECK_THROWS_AS(force_scalar({1, 1, 1, 3}, Field::Dirichlet), DomainError);
    CHECK_THROWS_AS(force_finite_h({1, 1, 1}, Field::Dirichlet), DomainError);
    CHECK_THROWS_AS(force_finite_h({3, 1, 1, 3}, Field::Dirichlet), DomainError);
    CHECK_THROWS_AS(force_box({1, 1, 1, 5}, Field::Neumann), DomainError);
    CHECK_THROWS_AS(tilde_energy(1, 1, 1, Field::EM), DomainError);
    CHECK_THROWS_AS(j_factor(0, Field::Dirichlet), DomainError);
    CHECK_THROWS_AS(eta(Field::EM), DomainError);
    CHECK_THROWS_AS(parse_field("maxwell"), DomainError);
    CHECK(parse_field("EM") == Field::EM);
    CHECK_THROWS_AS(force_em({-1, 1, 1}), DomainError);
}
