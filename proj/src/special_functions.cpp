#include "casimir/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "casimir/error.hpp"

namespace casimir {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEuler = std::numbers::egamma;
constexpr double kEps = 1e-17;

// Returns 2*nu as an integer after checking the order grid.
int twice_order(double nu) {
    if (!std::isfinite(nu)) throw UnsupportedOrder("bessel_k: order is not finite");
    const double t = 2.0 * std::fabs(nu);
    const double r = std::round(t);
    if (std::fabs(t - r) > 1e-12 * (1.0 + t))
        throw UnsupportedOrder("bessel_k: order " + std::to_string(nu) +
                               " is not an integer or half-integer");
    if (r > 2.0 * kMaxBesselOrder)
        throw UnsupportedOrder("bessel_k: |order| exceeds " + std::to_string(kMaxBesselOrder));
    return static_cast<int>(r);
}

void check_argument(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw DomainError("bessel_k: argument must be positive and finite");
}

// e^x K_0(x), e^x K_1(x) for 0 < x <= 2 from the ascending series.
BesselPair k01_series_scaled(double x) {
    const double y = 0.25 * x * x;
    const double lg = std::log(0.5 * x);
    double i0 = 0.0, i1 = 0.0, s0 = 0.0, s1 = 0.0;
    double t0 = 1.0;  // y^k / (k!)^2
    double t1 = 1.0;  // y^k / (k! (k+1)!)
    double hk = 0.0;  // harmonic number H_k
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            t0 *= y / (double(k) * k);
            t1 *= y / (double(k) * (k + 1));
            hk += 1.0 / k;
        }
        const double psi1 = hk - kEuler;
        const double psi2 = hk + 1.0 / (k + 1) - kEuler;
        i0 += t0;
        i1 += t1;
        s0 += hk * t0;
        s1 += (psi1 + psi2) * t1;
        if (t0 < kEps * i0 && t1 < kEps * i1 && k > 2) break;
    }
    i1 *= 0.5 * x;
    const double k0 = -(lg + kEuler) * i0 + s0;
    const double k1 = 1.0 / x + lg * i1 - 0.25 * x * s1;
    const double ex = std::exp(x);
    return {k0 * ex, k1 * ex};
}

// e^x K_0(x), e^x K_1(x) for x > 2 from Steed's continued fraction.
BesselPair k01_cf2_scaled(double x) {
    const double a1 = 0.25;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i < 10000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::fabs(dels / s) < kEps) break;
    }
    h *= a1;
    const double k0 = std::sqrt(kPi / (2.0 * x)) / s;
    const double k1 = k0 * (x + 0.5 - h) / x;
    return {k0, k1};
}

// Upward recurrence K_{v+1} = K_{v-1} + (2v/x) K_v, starting from (K_v0, K_v0+1).
BesselPair recur_to(BesselPair start, double nu0, int steps, double x) {
    double km = start.k_nu, kc = start.k_nu1;
    double v = nu0 + 1.0;
    for (int i = 0; i < steps; ++i) {
        const double kn = km + (2.0 * v / x) * kc;
        km = kc;
        kc = kn;
        v += 1.0;
    }
    return {km, kc};
}

}  // namespace

BesselPair bessel_k_pair_scaled(double nu, double x) {
    const int t = twice_order(nu);
    check_argument(x);
    BesselPair base;
    double nu0;
    if (t % 2 == 1) {
        const double k12 = std::sqrt(kPi / (2.0 * x));
        base = {k12, k12 * (1.0 + 1.0 / x)};
        nu0 = 0.5;
    } else {
        base = x <= 2.0 ? k01_series_scaled(x) : k01_cf2_scaled(x);
        nu0 = 0.0;
    }
    return recur_to(base, nu0, static_cast<int>((t - (t % 2)) / 2), x);
}

double bessel_k_scaled(double nu, double x) { return bessel_k_pair_scaled(nu, x).k_nu; }

double bessel_k(double nu, double x) {
    const double s = bessel_k_scaled(nu, x);
    return x > 700.0 ? std::exp(std::log(s) - x) : s * std::exp(-x);
}

double riemann_zeta(double s, const Accuracy& acc) {
    acc.validate();
    if (!(s > 1.0) || !std::isfinite(s))
        throw DomainError("riemann_zeta: requires finite s > 1");
    constexpr double pi2 = kPi * kPi;
    if (s == 2.0) return pi2 / 6.0;
    if (s == 4.0) return pi2 * pi2 / 90.0;
    if (s == 6.0) return pi2 * pi2 * pi2 / 945.0;
    if (s == 8.0) return pi2 * pi2 * pi2 * pi2 / 9450.0;
    if (s > 64.0) return 1.0 + std::pow(2.0, -s) + std::pow(3.0, -s);

    // Euler-Maclaurin with N terms summed directly.
    constexpr int n = 24;
    static constexpr double b2k[] = {1.0 / 6,         -1.0 / 30,  1.0 / 42,        -1.0 / 30,
                                     5.0 / 66,        -691.0 / 2730, 7.0 / 6,       -3617.0 / 510,
                                     43867.0 / 798,   -174611.0 / 330};
    double sum = 0.0;
    for (int k = n - 1; k >= 1; --k) sum += std::pow(double(k), -s);
    const double nn = n;
    double tail = std::pow(nn, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(nn, -s);
    // rising = s (s+1) ... (s+2k-2) / (2k)!, power = N^{-s-2k+1}
    double rising = s, fact = 2.0, power = std::pow(nn, -s - 1.0);
    for (int k = 1; k <= 10; ++k) {
        const double term = b2k[k - 1] / fact * rising * power;
        tail += term;
        if (std::fabs(term) < 1e-18 * sum) break;
        rising *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
        power /= nn * nn;
    }
    return sum + tail;
}

}  // namespace casimir
