#include "casimir/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <string>

#include "casimir/error.hpp"
#include "casimir/parallel.hpp"

namespace casimir {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPowers[] = {4, 3, 2, 0, -2, -4, -6, -8};
constexpr int kModel = 8;
constexpr double kKmaxOverLambda = 44.0;
constexpr long double kPiWide = 3.141592653589793238462643383279502884L;

// Neumaier compensated sum in extended precision. The fit amplifies the
// last-bit rounding of E(lambda) by ~1e4, so sums keep more than double.
using Wide = long double;
struct Acc {
    Wide s = 0.0L, c = 0.0L;
    void add(Wide x) {
        const Wide t = s + x;
        c += std::fabs(s) >= std::fabs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    Wide value() const { return s + c; }
};

int mult(Field f, long long n, long long m, long long l) {
    const bool d = n > 0 && m > 0 && l > 0;
    const bool nm = n > 0 || m > 0 || l > 0;
    switch (f) {
        case Field::Dirichlet: return d;
        case Field::Neumann: return nm;
        case Field::EM: return int(d) + int(nm) - int(n > 0 && m == 0 && l == 0);
    }
    return 0;
}

void check_extent(const Box& box, double k_max) {
    box.validate();
    if (!(k_max > 0.0) || !std::isfinite(k_max)) throw DomainError("k_max must be positive and finite");
    const double extent = k_max * std::max({box.a, box.b, box.c}) / kPi;
    if (extent > kMaxLatticeExtent)
        throw CapacityError("lattice extent k_max*side/pi = " + std::to_string(extent) + " exceeds " +
                            std::to_string(kMaxLatticeExtent));
}

// Calls f(slab, omega, multiplicity) for every mode with omega <= k_max; slab is
// the index along a, and each slab is visited by one thread in increasing order.
template <class F>
void for_each_mode(const Box& box, Field field, double k_max, F&& f) {
    check_extent(box, k_max);
    const long long lo = field == Field::Dirichlet ? 1 : 0;
    const double kk = (k_max / kPi) * (k_max / kPi);
    const long long nmax = static_cast<long long>(std::floor(box.a * k_max / kPi));
    if (nmax < lo) return;
    parallel_for(static_cast<std::size_t>(nmax - lo + 1), [&](std::size_t i) {
        const long long n = lo + static_cast<long long>(i);
        const double qn = (n / box.a) * (n / box.a);
        for (long long m = lo;; ++m) {
            const double qm = qn + (m / box.b) * (m / box.b);
            if (qm > kk) break;
            const long long lmax = static_cast<long long>(std::floor(box.c * std::sqrt(kk - qm))) + 1;
            for (long long l = lo; l <= lmax; ++l) {
                const double q = qm + (l / box.c) * (l / box.c);
                if (q > kk) break;
                const int w = mult(field, n, m, l);
                if (!w) continue;
                const Wide lq = static_cast<Wide>(n) * n / (static_cast<Wide>(box.a) * box.a) +
                                static_cast<Wide>(m) * m / (static_cast<Wide>(box.b) * box.b) +
                                static_cast<Wide>(l) * l / (static_cast<Wide>(box.c) * box.c);
                f(i, kPiWide * std::sqrt(lq), w);
            }
        }
    });
}

std::size_t slab_count(const Box& box, Field field, double k_max) {
    const long long lo = field == Field::Dirichlet ? 1 : 0;
    const long long nmax = static_cast<long long>(std::floor(box.a * k_max / kPi));
    return nmax < lo ? 0 : static_cast<std::size_t>(nmax - lo + 1);
}

// Sums of g(omega) * multiplicity for several outputs, reduced in slab order.
template <class G>
std::vector<Wide> stream_sums(const Box& box, Field field, double k_max, int outputs, G&& g) {
    check_extent(box, k_max);
    const std::size_t slabs = slab_count(box, field, k_max);
    std::vector<Acc> acc(slabs * outputs);
    std::vector<std::vector<Wide>> scratch(slabs);
    for_each_mode(box, field, k_max, [&](std::size_t slab, Wide omega, int w) {
        auto& buf = scratch[slab];
        buf.resize(outputs);
        g(omega, buf.data());
        for (int k = 0; k < outputs; ++k) acc[slab * outputs + k].add(w * buf[k]);
    });
    std::vector<Wide> out(outputs, 0.0L);
    for (int k = 0; k < outputs; ++k) {
        Acc total;
        for (std::size_t s = 0; s < slabs; ++s) {
            total.add(acc[s * outputs + k].s);
            total.add(acc[s * outputs + k].c);
        }
        out[k] = total.value();
    }
    return out;
}

double lowest_omega(const Box& box, Field field) {
    if (field == Field::Dirichlet)
        return kPi * std::sqrt(1.0 / (box.a * box.a) + 1.0 / (box.b * box.b) + 1.0 / (box.c * box.c));
    return kPi / std::max({box.a, box.b, box.c});
}

// Bound on sum_{omega > K} -(1/beta) ln(1 - e^{-beta omega}) from the lattice
// box count N(k) <= w prod(k s_i / pi + 1).
double thermal_tail(const Box& box, Field field, double beta, double K) {
    const double w = field == Field::EM ? 2.0 : 1.0;
    double p[4] = {1.0, 0.0, 0.0, 0.0};
    for (double s : {box.a, box.b, box.c}) {
        const double r = s / kPi;
        for (int j = 3; j >= 1; --j) p[j] = p[j] + r * p[j - 1];
    }
    // int_K^inf k^j e^{-beta k} dk = e^{-beta K} sum_{i<=j} j!/i! K^i / beta^{j-i+1}
    double integral = 0.0;
    for (int j = 0; j <= 3; ++j) {
        double term = 0.0, fact = 1.0;
        for (int i = j; i >= 0; --i) {
            term += fact * std::pow(K, i) / std::pow(beta, j - i + 1);
            fact *= i;
        }
        integral += p[j] * term;
    }
    return w * std::exp(-beta * K) * integral / -std::expm1(-beta * K);
}

double free_energy_fixed(const Box& box, Field field, double beta, double k_max) {
    return static_cast<double>(stream_sums(box, field, k_max, 1, [beta](Wide omega, Wide* out) {
        out[0] = std::log1p(-std::exp(-beta * omega)) / beta;
    })[0]);
}

double choose_thermal_kmax(const Box& box, Field field, double beta, double rel_tol, double* value, double* bound) {
    double K = lowest_omega(box, field) + 36.0 / beta;
    for (int it = 0; it < 200; ++it) {
        const double v = free_energy_fixed(box, field, beta, K);
        const double b = thermal_tail(box, field, beta, K);
        if (b <= rel_tol * std::fabs(v) || v == 0.0) {
            *value = v;
            *bound = b;
            return K;
        }
        K += 8.0 / beta;
    }
    throw ConvergenceError("free energy: mode sum tail did not reach the requested tolerance");
}

}  // namespace

void Box::validate() const {
    for (double s : {a, b, c})
        if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("box sides must be positive and finite");
}

std::int64_t ModeSpectrum::count() const {
    std::int64_t n = 0;
    for (const auto& line : frequencies) n += line.multiplicity;
    return n;
}

std::int64_t count_modes(const Box& box, Field boundary, double k) {
    std::vector<std::int64_t> per(slab_count(box, boundary, k), 0);
    for_each_mode(box, boundary, k, [&](std::size_t slab, Wide, int w) { per[slab] += w; });
    std::int64_t n = 0;
    for (auto v : per) n += v;
    return n;
}

ModeSpectrum enumerate_modes(const Box& box, Field boundary, double k_max) {
    check_extent(box, k_max);
    const double estimate = (kPi / 6.0) * (box.a * k_max / kPi + 1) * (box.b * k_max / kPi + 1) *
                            (box.c * k_max / kPi + 1) * (boundary == Field::EM ? 2 : 1);
    if (estimate > kMaxStoredModes)
        throw CapacityError("enumerate_modes: about " + std::to_string(static_cast<long long>(estimate)) +
                            " modes exceed the in-memory limit; use the streaming routines");
    std::vector<std::vector<SpectrumLine>> slabs(slab_count(box, boundary, k_max));
    for_each_mode(box, boundary, k_max,
                  [&](std::size_t slab, Wide omega, int w) {
                      slabs[slab].push_back({static_cast<double>(omega), w});
                  });
    ModeSpectrum spec;
    spec.k_max = k_max;
    spec.boundary = boundary;
    spec.box = box;
    for (auto& s : slabs) spec.frequencies.insert(spec.frequencies.end(), s.begin(), s.end());
    std::sort(spec.frequencies.begin(), spec.frequencies.end(),
              [](const SpectrumLine& x, const SpectrumLine& y) { return x.omega < y.omega; });
    std::vector<SpectrumLine> merged;
    for (const auto& line : spec.frequencies) {
        if (!merged.empty() && merged.back().omega == line.omega)
            merged.back().multiplicity += line.multiplicity;
        else
            merged.push_back(line);
    }
    spec.frequencies = std::move(merged);
    return spec;
}

double cutoff_energy(const ModeSpectrum& spec, double lambda) {
    if (!(lambda > 0.0) || lambda > spec.k_max / 8.0)
        throw DomainError("cutoff_energy: lambda must lie in (0, k_max/8]");
    Acc sum;
    for (const auto& line : spec.frequencies) sum.add(0.5 * line.multiplicity * line.omega * std::exp(-line.omega / lambda));
    return static_cast<double>(sum.value());
}

std::vector<double> default_lambda_grid(const Box& box, int points) {
    box.validate();
    if (points < 2) throw DomainError("lambda grid needs at least 2 points");
    const double hi = 4.7 / std::min({box.a, box.b, box.c});
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) grid[i] = hi / (2.0 - double(i) / (points - 1));
    return grid;
}

CutoffFit fit_cutoff_expansion(const Box& box, Field boundary, const std::vector<double>& lambda_grid) {
    box.validate();
    const int n = static_cast<int>(lambda_grid.size());
    for (double l : lambda_grid)
        if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("lambda grid values must be positive and finite");
    if (n < kModel + 2) throw IllConditioned("cutoff fit needs at least 10 grid points for the 8-term model");
    const auto [mn, mx] = std::minmax_element(lambda_grid.begin(), lambda_grid.end());
    const double lo = *mn, hi = *mx;
    if (hi < 2.0 * lo) throw IllConditioned("cutoff fit window must span at least a factor 2 in lambda");

    CutoffFit fit;
    fit.lambdas = lambda_grid;
    fit.k_max = kKmaxOverLambda * hi;
    std::vector<Wide> inv(n);
    for (int i = 0; i < n; ++i) inv[i] = 1.0L / lambda_grid[i];
    // Grids equally spaced in 1/lambda need two exponentials per mode.
    bool uniform = true;
    const Wide step = n > 1 ? inv[1] - inv[0] : 0.0L;
    for (int i = 1; i < n; ++i)
        if (std::fabs(inv[i] - inv[i - 1] - step) > 1e-12L * std::fabs(inv[0])) uniform = false;
    const std::vector<Wide> e = stream_sums(box, boundary, fit.k_max, n, [&](Wide omega, Wide* out) {
        if (uniform) {
            const Wide r = std::exp(-omega * step);
            Wide t = 0.5L * omega * std::exp(-omega * inv[0]);
            for (int i = 0; i < n; ++i, t *= r) out[i] = t;
        } else {
            for (int i = 0; i < n; ++i) out[i] = 0.5L * omega * std::exp(-omega * inv[i]);
        }
    });

    using Mat = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Wide, Eigen::Dynamic, 1>;
    Mat X(n, kModel);
    Vec y(n);
    for (int i = 0; i < n; ++i) {
        const Wide s = static_cast<Wide>(lambda_grid[i]) / hi;
        for (int j = 0; j < kModel; ++j) X(i, j) = std::pow(s, kPowers[j]);
        y(i) = e[i];
        fit.energies.push_back(static_cast<double>(e[i]));
    }
    const Eigen::ColPivHouseholderQR<Mat> qr(X);
    const Wide rmax = std::fabs(qr.matrixR()(0, 0));
    const Wide rmin = std::fabs(qr.matrixR()(kModel - 1, kModel - 1));
    if (!(rmin > 1e-13L * rmax)) throw IllConditioned("cutoff fit design matrix is numerically singular");
    const Vec coef = qr.solve(y);
    fit.residual = static_cast<double>(std::sqrt((X * coef - y).squaredNorm() / n));
    fit.c4 = static_cast<double>(coef(0)) / std::pow(hi, 4);
    fit.c3 = static_cast<double>(coef(1)) / std::pow(hi, 3);
    fit.c2 = static_cast<double>(coef(2)) / std::pow(hi, 2);
    fit.E_tilde = static_cast<double>(coef(3));
    for (int j = 4; j < kModel; ++j) fit.corrections.push_back(static_cast<double>(coef(j)) / std::pow(hi, kPowers[j]));
    if (!(fit.residual < 1e-3 * std::fabs(fit.E_tilde)))
        throw IllConditioned("cutoff fit residual is not small against the finite part");
    return fit;
}

DirectSum free_energy_direct(const ModeSpectrum& spec, const ThermalState& t) {
    t.validate();
    if (!spec.frequencies.empty() && t.beta * spec.frequencies.front().omega < 1e-8)
        throw DomainError("free_energy_direct: beta*omega_min below 1e-8 (zero mode not excluded)");
    Acc sum;
    for (const auto& line : spec.frequencies)
        sum.add(line.multiplicity * std::log1p(-std::exp(-t.beta * line.omega)) / t.beta);
    return {static_cast<double>(sum.value()), thermal_tail(spec.box, spec.boundary, t.beta, spec.k_max), spec.k_max};
}

DirectSum free_energy_box(const Box& box, Field boundary, const ThermalState& t, double rel_tol) {
    box.validate();
    t.validate();
    if (!(rel_tol > 0.0)) throw DomainError("rel_tol must be positive");
    DirectSum d;
    d.k_max = choose_thermal_kmax(box, boundary, t.beta, rel_tol, &d.value, &d.truncation_bound);
    return d;
}

NumericForce force_numeric(const std::function<double(double)>& energy, double a, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("force_numeric: step must be positive");
    if (a != 0.0 && step > 1e-3 * std::fabs(a)) throw DomainError("force_numeric: step must not exceed 1e-3*|a|");
    const double d1 = (energy(a - step) - energy(a + step)) / (2.0 * step);
    const double d2 = (energy(a - 0.5 * step) - energy(a + 0.5 * step)) / step;
    const double r = (4.0 * d2 - d1) / 3.0;
    return {r, std::fabs(r - d2)};
}

NumericForce oracle_force(const PistonGeometry& g, Field field, const OracleOptions& opt) {
    g.validate();
    if (g.infinite()) throw DomainError("oracle_force needs a finite h");
    const Box one{g.a, g.b, g.c}, two{g.h - g.a, g.b, g.c};
    auto grid = [&](const Box& box) {
        std::vector<double> v = default_lambda_grid(box, opt.points);
        const double scale = opt.lambda_scale / 4.7;
        for (double& l : v) l *= scale;
        return v;
    };
    const std::vector<double> g1 = grid(one), g2 = grid(two);
    auto energy = [&](double x) {
        return fit_cutoff_expansion({x, g.b, g.c}, field, g1).E_tilde +
               fit_cutoff_expansion({g.h - x, g.b, g.c}, field, g2).E_tilde;
    };
    return force_numeric(energy, g.a, opt.rel_step * g.a);
}

DirectSum oracle_free_energy(const PistonGeometry& g, const ThermalState& t, Field field) {
    g.validate();
    if (g.infinite()) throw DomainError("oracle_free_energy needs a finite h");
    const DirectSum one = free_energy_box({g.a, g.b, g.c}, field, t);
    const DirectSum two = free_energy_box({g.h - g.a, g.b, g.c}, field, t);
    return {one.value + two.value, one.truncation_bound + two.truncation_bound, std::max(one.k_max, two.k_max)};
}

NumericForce oracle_thermal_force(const PistonGeometry& g, const ThermalState& t, Field field) {
    g.validate();
    t.validate();
    if (g.infinite()) throw DomainError("oracle_thermal_force needs a finite h");
    // Fix k_max at the centre so all stencil points share one truncation.
    const DirectSum one = free_energy_box({g.a, g.b, g.c}, field, t);
    const DirectSum two = free_energy_box({g.h - g.a, g.b, g.c}, field, t);
    const double k1 = one.k_max * 1.01, k2 = two.k_max * 1.01;
    auto energy = [&](double x) {
        return free_energy_fixed({x, g.b, g.c}, field, t.beta, k1) +
               free_energy_fixed({g.h - x, g.b, g.c}, field, t.beta, k2);
    };
    NumericForce f = force_numeric(energy, g.a, 5e-4 * g.a);
    f.error += (one.truncation_bound + two.truncation_bound) / (5e-4 * g.a);
    return f;
}

void write_spectrum(const ModeSpectrum& spec, std::ostream& out) {
    const auto old = out.precision(17);
    for (const auto& line : spec.frequencies) out << line.omega << ' ' << line.multiplicity << '\n';
    out.precision(old);
}

}  // namespace casimir
