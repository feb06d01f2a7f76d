#include "casimir/epstein.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "casimir/error.hpp"
#include "casimir/parallel.hpp"
#include "casimir/special_functions.hpp"

namespace casimir {

void LatticeLengths::validate() const {
    if (lengths.empty() || lengths.size() > 3)
        throw DomainError("lattice: dimension must be 1, 2 or 3");
    for (double a : lengths)
        if (!(a > 0.0) || !std::isfinite(a))
            throw DomainError("lattice: lengths must be positive and finite");
}

namespace {

constexpr double kPi = std::numbers::pi;

void check(const LatticeLengths& lat, double s) {
    lat.validate();
    if (!std::isfinite(s) || !(s > lat.dim()))
        throw DomainError("epstein: requires s > d (got s = " + std::to_string(s) + ")");
}

struct Eval {
    double value = 0.0;
    double bound = 0.0;
    std::vector<double> grad;
    double grad_bound = 0.0;
    long long terms = 0;
};

struct Tail {
    double t0 = 0.0;  // bounds the value terms
    double t1 = 0.0;  // bounds the derivative terms
};

// Largest possible single term at Bessel order nu, pivot index n and
// transverse max-norm k (all such vectors have r >= k * aomin).
Tail term_bound(double nu, double ap, double aomin, long long n, long long k) {
    const double r = k * aomin;
    const double z = 2.0 * kPi * n * r / ap;
    const double e = std::exp(-z);
    if (e == 0.0) return {};
    const auto kp = bessel_k_pair_scaled(nu, z);
    const double pre = std::pow(n * ap / r, nu);
    return {pre * kp.k_nu * e, pre * z * kp.k_nu1 * e};
}

Tail tail_outside_box(int dm1, double nu, double ap, double aomin, long long box) {
    Tail total;
    for (long long n = 1;; ++n) {
        Tail row;
        for (long long k = n > box ? 1 : box + 1;; ++k) {
            const Tail t = term_bound(nu, ap, aomin, n, k);
            const double w = dm1 == 1 ? 2.0 : 8.0 * k;
            row.t0 += w * t.t0;
            row.t1 += w * t.t1;
            if (w * t.t1 <= 1e-20 * row.t1 || t.t1 == 0.0) break;
        }
        total.t0 += row.t0;
        total.t1 += row.t1;
        if (n > box && (row.t1 <= 1e-20 * total.t1 || row.t1 == 0.0)) break;
    }
    return total;
}

Eval evaluate(const std::vector<double>& a, double s, bool want_grad, double tol, int max_terms) {
    const int d = static_cast<int>(a.size());
    Eval out;
    if (d == 1) {
        out.value = 2.0 * riemann_zeta(s) * std::pow(a[0], -s);
        out.grad = {-s * out.value / a[0]};
        out.terms = 1;
        return out;
    }

    const int p = static_cast<int>(std::min_element(a.begin(), a.end()) - a.begin());
    const double ap = a[p];
    std::vector<double> ao;
    std::vector<int> oidx;
    for (int i = 0; i < d; ++i)
        if (i != p) {
            ao.push_back(a[i]);
            oidx.push_back(i);
        }
    const double aomin = *std::min_element(ao.begin(), ao.end());
    const int dm1 = d - 1;

    const double nu = 0.5 * (s - 1.0);
    const double lead = 2.0 * riemann_zeta(s) * std::pow(ap, -s);
    const Eval sub = evaluate(ao, s - 1.0, want_grad, 0.5 * tol, max_terms);
    const double c1 = std::tgamma(nu) * std::sqrt(kPi) / std::tgamma(0.5 * s);
    const double pf = 4.0 * std::pow(kPi, 0.5 * s) / (std::tgamma(0.5 * s) * std::pow(ap, s));

    long long box = 1;
    double vbound = 0.0, gbound = 0.0;
    for (;; ++box) {
        if (box > max_terms)
            throw ConvergenceError("epstein_z: tail bound not met within max_terms shells");
        const Tail t = tail_outside_box(dm1, nu, ap, aomin, box);
        vbound = pf * t.t0;
        gbound = pf * std::max(s / ap * t.t0 + t.t1 / ap, t.t1 / aomin);
        if (vbound <= 0.5 * tol * lead && (!want_grad || gbound <= 0.5 * tol * s * lead / ap)) break;
    }

    double s0 = 0.0, s1 = 0.0;
    double sj[2] = {0.0, 0.0};
    long long count = 0;
    auto add = [&](long long n, long long m0, long long m1) {
        const double x0 = m0 * ao[0];
        const double x1 = dm1 == 2 ? m1 * ao[1] : 0.0;
        const double r2 = x0 * x0 + x1 * x1;
        const double r = std::sqrt(r2);
        const double z = 2.0 * kPi * n * r / ap;
        ++count;
        const double e = std::exp(-z);
        if (e == 0.0) return;
        const auto kp = bessel_k_pair_scaled(nu, z);
        const double pre = 2.0 * std::pow(n * ap / r, nu) * e;  // 2: the -m partner
        const double t1 = pre * z * kp.k_nu1;
        s0 += pre * kp.k_nu;
        s1 += t1;
        sj[0] += t1 * ao[0] * double(m0) * double(m0) / r2;
        if (dm1 == 2) sj[1] += t1 * ao[1] * double(m1) * double(m1) / r2;
    };
    for (long long n = 1; n <= box; ++n) {
        if (dm1 == 1) {
            for (long long m = 1; m <= box; ++m) add(n, m, 0);
        } else {
            for (long long m = 1; m <= box; ++m) add(n, 0, m);
            for (long long m0 = 1; m0 <= box; ++m0)
                for (long long m1 = -box; m1 <= box; ++m1) add(n, m0, m1);
        }
    }

    out.value = lead + c1 / ap * sub.value + pf * s0;
    out.bound = c1 / ap * sub.bound + vbound;
    out.terms = sub.terms + count;
    if (want_grad) {
        out.grad.assign(d, 0.0);
        out.grad[p] = -s * lead / ap - c1 / (ap * ap) * sub.value - s / ap * pf * s0 + pf / ap * s1;
        for (int j = 0; j < dm1; ++j) out.grad[oidx[j]] = c1 / ap * sub.grad[j] - pf * sj[j];
        out.grad_bound = c1 / ap * sub.grad_bound + c1 / (ap * ap) * sub.bound + gbound;
    }
    return out;
}

// Window w(u) = erfc((u - u0)/sigma)/2 switches the direct sum off near u = 1;
// the complementary part is integrated analytically as a continuum.
constexpr double kU0 = 0.55;
constexpr double kSigma = 0.065;
constexpr double kInnerCut = 0.1;
constexpr double kOuterCut = 1.2;

struct Windowed {
    double value;
    long long terms;
};

Windowed windowed_sum(const std::vector<double>& a, double s, double rho) {
    const int d = static_cast<int>(a.size());
    const double rho2 = rho * rho;
    std::vector<long long> lim(d);
    for (int i = 0; i < d; ++i) lim[i] = static_cast<long long>(std::floor(rho / a[i]));

    const std::size_t slabs = static_cast<std::size_t>(2 * lim[0] + 1);
    std::vector<double> part(slabs, 0.0), comp(slabs, 0.0);
    std::vector<long long> cnt(slabs, 0);
    parallel_for(slabs, [&](std::size_t idx) {
        const long long n0 = static_cast<long long>(idx) - lim[0];
        double sum = 0.0, c = 0.0;
        long long k = 0;
        auto accumulate = [&](double q) {
            if (q == 0.0 || q > rho2) return;
            const double u = std::sqrt(q) / rho;
            const double term = std::pow(q, -0.5 * s) * 0.5 * std::erfc((u - kU0) / kSigma);
            const double t = sum + term;
            c += std::fabs(sum) >= std::fabs(term) ? (sum - t) + term : (term - t) + sum;
            sum = t;
            ++k;
        };
        const double q0 = (n0 * a[0]) * (n0 * a[0]);
        if (d == 1) {
            accumulate(q0);
        } else {
            const long long l1 = static_cast<long long>(std::floor(std::sqrt(std::max(0.0, rho2 - q0)) / a[1]));
            for (long long n1 = -l1; n1 <= l1; ++n1) {
                const double q1 = q0 + (n1 * a[1]) * (n1 * a[1]);
                if (d == 2) {
                    accumulate(q1);
                    continue;
                }
                const long long l2 =
                    static_cast<long long>(std::floor(std::sqrt(std::max(0.0, rho2 - q1)) / a[2]));
                for (long long n2 = -l2; n2 <= l2; ++n2) accumulate(q1 + (n2 * a[2]) * (n2 * a[2]));
            }
        }
        part[idx] = sum;
        comp[idx] = c;
        cnt[idx] = k;
    });
    double direct = 0.0, c = 0.0;
    long long terms = 0;
    for (std::size_t i = 0; i < slabs; ++i) {
        const double term = part[i] + comp[i];
        const double t = direct + term;
        c += std::fabs(direct) >= std::fabs(term) ? (direct - t) + term : (term - t) + direct;
        direct = t;
        terms += cnt[i];
    }
    direct += c;

    double cell = 1.0;
    for (double ai : a) cell *= ai;
    const double sphere = d == 1 ? 2.0 : (d == 2 ? 2.0 * kPi : 4.0 * kPi);
    auto integrand = [&](double v) {
        return std::pow(v, d - 1.0 - s) * 0.5 * std::erfc((kU0 - v) / kSigma);
    };
    const double inner =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, kInnerCut, kOuterCut, 10, 1e-14);
    const double outer = std::pow(kOuterCut, d - s) / (s - d);
    const double continuum = sphere / cell * std::pow(rho, d - s) * (inner + outer);
    return {direct + continuum, terms};
}

}  // namespace

EpsteinResult epstein_z(const LatticeLengths& lat, double s, const Accuracy& acc) {
    check(lat, s);
    acc.validate();
    const Eval e = evaluate(lat.lengths, s, false, acc.rel_tol, acc.max_terms);
    return {e.value, e.bound, e.terms};
}

EpsteinGradient epstein_z_gradient(const LatticeLengths& lat, double s, const Accuracy& acc) {
    check(lat, s);
    acc.validate();
    const Eval e = evaluate(lat.lengths, s, true, acc.rel_tol, acc.max_terms);
    EpsteinGradient g;
    g.value = e.value;
    g.truncation_bound = e.bound;
    g.terms_used = e.terms;
    g.gradient = e.grad;
    g.gradient_bound = e.grad_bound;
    return g;
}

EpsteinResult epstein_z_bruteforce(const LatticeLengths& lat, double s, int radius) {
    check(lat, s);
    if (radius < 10) throw DomainError("epstein_z_bruteforce: radius must be at least 10");
    const double amin = *std::min_element(lat.lengths.begin(), lat.lengths.end());
    const Windowed full = windowed_sum(lat.lengths, s, radius * amin);
    const Windowed coarse = windowed_sum(lat.lengths, s, 0.7 * radius * amin);
    const double eps = std::numeric_limits<double>::epsilon();
    const double bound =
        std::fabs(full.value - coarse.value) + 4.0 * eps * std::sqrt(double(full.terms)) * std::fabs(full.value);
    return {full.value, bound, full.terms + coarse.terms};
}

double small_leading_term(const LatticeLengths& lat, double s) {
    check(lat, s);
    return 2.0 * riemann_zeta(s) * std::pow(lat.lengths[0], -s);
}

}  // namespace casimir
