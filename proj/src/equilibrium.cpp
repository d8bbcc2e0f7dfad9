#include "riesz_lake/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "riesz_lake/error.hpp"
#include "riesz_lake/numeric.hpp"
#include "riesz_lake/potential.hpp"

namespace riesz_lake {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kRobinSamples = 32;

const std::string kRegular = "every boundary point of the support is a regular point";

// Deterministic interior points: radii spread over (0, 0.8 R), directions
// from golden-angle / Fibonacci-sphere sequences; torus points from an
// additive recurrence.
std::vector<double> interior_points(const BackgroundDensity& mu, int count) {
    const int d = mu.dim();
    std::vector<double> pts(static_cast<std::size_t>(count) * d, 0.0);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    if (mu.periodic()) {
        const double L = mu.support().L;
        const double alpha[3] = {0.6180339887498949, 0.4142135623730951, 0.7320508075688772};
        for (int j = 0; j < count; ++j)
            for (int a = 0; a < d; ++a) {
                const double t = (j + 0.5) * alpha[a];
                pts[j * d + a] = L * (t - std::floor(t));
            }
        return pts;
    }
    const double R = mu.support().radius;
    for (int j = 0; j < count; ++j) {
        const double r = 0.8 * R * (j + 0.5) / count;
        double* p = &pts[static_cast<std::size_t>(j) * d];
        if (d == 1) {
            p[0] = (j % 2 == 0) ? r : -r;
        } else if (d == 2) {
            p[0] = r * std::cos(j * golden);
            p[1] = r * std::sin(j * golden);
        } else {
            const double z = 1.0 - 2.0 * (j + 0.5) / count;
            const double rho = std::sqrt(1.0 - z * z);
            p[0] = r * rho * std::cos(j * golden);
            p[1] = r * rho * std::sin(j * golden);
            p[2] = r * z;
        }
    }
    return pts;
}

double hv(const Confinement& V, const BackgroundDensity& mu, const Kernel& kernel, std::span<const double> x) {
    return potential_at(kernel, mu, x) + V.value(x);
}

double norm(std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return std::sqrt(r2);
}

}  // namespace

std::vector<std::string> equilibrium_case_ids() {
    return {"oned_coulomb_quadratic", "twod_coulomb_quadratic", "threed_coulomb_quadratic", "torus_uniform"};
}

EquilibriumCase equilibrium_case(const std::string& id) {
    if (id == "oned_coulomb_quadratic") {
        EquilibriumCase c{id, Kernel::one_d_coulomb(), Confinement::quadratic(1, 1.0),
                          BackgroundDensity::uniform_ball(1, 1.0), {kRegular}};
        c.mu.set_robin_constant(-1.0);
        return c;
    }
    if (id == "twod_coulomb_quadratic") {
        const double R = 1.0 / std::sqrt(2.0);
        EquilibriumCase c{id, Kernel::log(2), Confinement::quadratic(2, 1.0), BackgroundDensity::uniform_ball(2, R),
                          {kRegular}};
        c.mu.set_robin_constant(0.5 + 0.5 * std::log(2.0));
        return c;
    }
    if (id == "threed_coulomb_quadratic") {
        const double R = std::cbrt(0.5);
        EquilibriumCase c{id, Kernel::riesz(1.0, 3), Confinement::quadratic(3, 1.0),
                          BackgroundDensity::uniform_ball(3, R), {kRegular}};
        c.mu.set_robin_constant(1.5 / R);
        return c;
    }
    if (id == "torus_uniform") {
        EquilibriumCase c{id, Kernel::torus_riesz(0.0, 1, 1.0, 16), Confinement::zero(1),
                          BackgroundDensity::torus_uniform(1, 1.0), {"full support: no boundary"}};
        c.mu.set_robin_constant(0.0);
        return c;
    }
    throw UnsupportedError("unknown equilibrium case '" + id + "'");
}

BackgroundDensity closed_form_equilibrium(const std::string& id) { return equilibrium_case(id).mu; }

RobinEstimate estimate_robin(const Confinement& V, const BackgroundDensity& mu, const Kernel& kernel) {
    const int d = mu.dim();
    const auto pts = interior_points(mu, kRobinSamples);
    std::vector<double> vals(kRobinSamples);
    parallel_for(kRobinSamples, [&](std::size_t j) { vals[j] = hv(V, mu, kernel, std::span(pts).subspan(j * d, d)); });
    RobinEstimate est;
    est.samples = kRobinSamples;
    est.c = compensated_sum(vals) / kRobinSamples;
    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    est.spread = *hi - *lo;
    return est;
}

double robin_constant(const Confinement& V, const BackgroundDensity& mu, const Kernel& kernel, double tol) {
    if (const auto c = mu.robin_constant()) return *c;
    const auto est = estimate_robin(V, mu, kernel);
    if (est.spread >= 10.0 * tol)
        throw AccuracyError("Robin constant: h + V is not constant on the support interior", est.spread);
    mu.set_robin_constant(est.c);
    return est.c;
}

double zeta(const Confinement& V, const BackgroundDensity& mu, const Kernel& kernel, std::span<const double> x) {
    return hv(V, mu, kernel, x) - robin_constant(V, mu, kernel);
}

std::vector<double> zeta_gradient(const Confinement& V, const BackgroundDensity& mu, const Kernel& kernel,
                                  std::span<const double> x) {
    auto g = potential_gradient(kernel, mu, x);
    std::vector<double> gv(mu.dim());
    V.gradient(x, gv);
    for (int a = 0; a < mu.dim(); ++a) g[a] += gv[a];
    return g;
}

FrostmanReport verify_frostman(const Confinement& V, const BackgroundDensity& mu, const Kernel& kernel, double tol,
                               std::string case_id, double collar) {
    const int d = mu.dim();
    FrostmanReport rep;
    rep.case_id = std::move(case_id);
    if (const auto c = mu.robin_constant())
        rep.c = *c;
    else
        rep.c = estimate_robin(V, mu, kernel).c;

    std::vector<double> pts;
    if (mu.periodic()) {
        const int per_axis = d == 1 ? 1000 : (d == 2 ? 32 : 10);
        const GridSpec spec{d, per_axis, mu.support().L};
        for (std::size_t f = 0; f < spec.size(); ++f) {
            const auto xc = spec.coordinates(f);
            pts.insert(pts.end(), xc.begin(), xc.begin() + d);
        }
    } else {
        const double R = mu.support().radius;
        const double half = R + (collar >= 0.0 ? collar : mu.support().diameter());
        const int per_axis = d == 1 ? 1001 : (d == 2 ? 41 : 11);
        std::size_t total = 1;
        for (int a = 0; a < d; ++a) total *= per_axis;
        for (std::size_t f = 0; f < total; ++f) {
            std::size_t rem = f;
            std::array<double, 3> x{};
            for (int a = d - 1; a >= 0; --a) {
                const int j = static_cast<int>(rem % per_axis);
                rem /= per_axis;
                x[a] = -half + 2.0 * half * j / (per_axis - 1);
            }
            pts.insert(pts.end(), x.begin(), x.begin() + d);
        }
    }
    const std::size_t n = pts.size() / d;
    std::vector<double> z(n);
    parallel_for(n, [&](std::size_t i) { z[i] = hv(V, mu, kernel, std::span(pts).subspan(i * d, d)) - rep.c; });

    rep.min_zeta_off_support = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (mu.support().contains(std::span(pts).subspan(i * d, d))) {
            rep.max_abs_zeta_on_support = std::max(rep.max_abs_zeta_on_support, std::abs(z[i]));
            ++rep.samples_on;
        } else {
            rep.min_zeta_off_support = std::min(rep.min_zeta_off_support, z[i]);
            ++rep.samples_off;
        }
    }
    rep.pass = rep.max_abs_zeta_on_support <= tol && rep.min_zeta_off_support >= -tol;
    return rep;
}

double noflux_inequality_ratio(const TestVectorField& v, const Confinement& V, const BackgroundDensity& mu,
                               const Kernel& kernel, std::span<const double> points) {
    const int d = mu.dim();
    if (v.dim != d) throw PreconditionError("noflux: vector field dimension differs from the background");
    if (points.size() % d != 0) throw PreconditionError("noflux: ragged point list");
    const std::size_t n = points.size() / d;
    std::vector<double> ratio(n, 0.0);
    std::vector<double> z(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        const auto x = points.subspan(i * d, d);
        z[i] = zeta(V, mu, kernel, x);
        if (z[i] <= 0.0) return;
        const auto vx = v.value(x);
        const auto gz = zeta_gradient(V, mu, kernel, x);
        double dot = 0.0;
        for (int a = 0; a < d; ++a) dot += vx[a] * gz[a];
        ratio[i] = v.w1inf > 0.0 ? std::abs(dot) / (v.w1inf * z[i]) : 0.0;
    });
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (z[i] <= 0.0)
            throw DomainError("noflux: zeta = " + std::to_string(z[i]) + " <= 0 at grid point " + std::to_string(i) +
                              " (grid invades the support)");
        sup = std::max(sup, ratio[i]);
    }
    return sup;
}

GrowthFit noflux_growth_exponent(const TestVectorField& v, const Confinement& V, const BackgroundDensity& mu,
                                 const Kernel& kernel, int shells) {
    if (mu.periodic()) throw UnsupportedError("noflux growth: the torus support has no boundary");
    const int d = mu.dim();
    const double R = mu.support().radius;
    const double diam = mu.support().diameter();
    const int directions = d == 1 ? 2 : 16;
    GrowthFit fit;
    for (int j = 1; j <= shells; ++j) {
        // shells start at diam/16 so the fit sees the near-boundary regime
        const double delta = diam * std::ldexp(1.0, -(j + 3));
        std::vector<double> pts;
        for (int q = 0; q < directions; ++q) {
            std::array<double, 3> dir{};
            if (d == 1) {
                dir[0] = q == 0 ? 1.0 : -1.0;
            } else if (d == 2) {
                dir[0] = std::cos(2.0 * kPi * q / directions);
                dir[1] = std::sin(2.0 * kPi * q / directions);
            } else {
                const double zc = 1.0 - 2.0 * (q + 0.5) / directions;
                const double rho = std::sqrt(1.0 - zc * zc);
                const double ang = q * kPi * (3.0 - std::sqrt(5.0));
                dir = {rho * std::cos(ang), rho * std::sin(ang), zc};
            }
            for (int a = 0; a < d; ++a) pts.push_back((R + delta) * dir[a] / norm(std::span(dir).first(d)));
        }
        fit.distances.push_back(delta);
        fit.ratios.push_back(noflux_inequality_ratio(v, V, mu, kernel, pts));
    }
    // Least squares on (log delta, log ratio), skipping zero ratios.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (std::size_t j = 0; j < fit.distances.size(); ++j) {
        if (!(fit.ratios[j] > 0.0)) continue;
        const double lx = std::log(fit.distances[j]);
        const double ly = std::log(fit.ratios[j]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m >= 2) fit.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return fit;
}

}  // namespace riesz_lake
