#include "riesz_lake/potential.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>

#include <cmath>
#include <numbers>

#include "riesz_lake/error.hpp"
#include "riesz_lake/numeric.hpp"

namespace riesz_lake {

namespace {

using boost::math::quadrature::tanh_sinh;

constexpr double kPi = std::numbers::pi;

double norm(std::span<const double> x, int dim) {
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) r2 += x[a] * x[a];
    return std::sqrt(r2);
}

double sphere_area(int dim) {
    switch (dim) {
        case 1:
            return 2.0;
        case 2:
            return 2.0 * kPi;
        default:
            return 4.0 * kPi;
    }
}

enum class Closed { None, Interval1D, Disc2DLog, Disc2DRiesz1, Ball3DRiesz1, TorusZero };

Closed classify(const Kernel& kernel, const BackgroundDensity& mu) {
    if (kernel.min_distance() > 0.0) return Closed::None;
    if (mu.kind() == BackgroundDensity::Kind::TorusUniform && kernel.periodic()) return Closed::TorusZero;
    if (mu.kind() != BackgroundDensity::Kind::UniformBall) return Closed::None;
    const int d = mu.dim();
    if (kernel.dim() != d) return Closed::None;
    switch (kernel.family()) {
        case KernelFamily::OneDCoulomb:
            return Closed::Interval1D;
        case KernelFamily::Log:
            return d == 2 ? Closed::Disc2DLog : Closed::None;
        case KernelFamily::Riesz:
            if (kernel.s() != 1.0) return Closed::None;
            if (d == 2) return Closed::Disc2DRiesz1;
            if (d == 3) return Closed::Ball3DRiesz1;
            return Closed::None;
        default:
            return Closed::None;
    }
}

double closed_potential(Closed c, const BackgroundDensity& mu, double r) {
    const double R = mu.support().radius;
    switch (c) {
        case Closed::Interval1D:
            return r <= R ? -(r * r + R * R) / R : -2.0 * r;
        case Closed::Disc2DLog:
            return r <= R ? -std::log(R) + (R * R - r * r) / (2.0 * R * R) : -std::log(r);
        case Closed::Disc2DRiesz1: {
            if (r <= R) return 4.0 * boost::math::ellint_2(r / R) / (kPi * R);
            const double k = R / r;
            return 4.0 * r * (boost::math::ellint_2(k) - (1.0 - k * k) * boost::math::ellint_1(k)) / (kPi * R * R);
        }
        case Closed::Ball3DRiesz1:
            return r <= R ? (3.0 * R * R - r * r) / (2.0 * R * R * R) : 1.0 / r;
        case Closed::TorusZero:
            return 0.0;
        case Closed::None:
            break;
    }
    throw UnsupportedError("no closed-form potential registered");
}

// Radial derivative dh/dr, where available analytically.
std::optional<double> closed_radial_derivative(Closed c, const BackgroundDensity& mu, double r) {
    const double R = mu.support().radius;
    switch (c) {
        case Closed::Interval1D:
            return r <= R ? -2.0 * r / R : -2.0;
        case Closed::Disc2DLog:
            return r <= R ? -r / (R * R) : -1.0 / r;
        case Closed::Ball3DRiesz1:
            return r <= R ? -r / (R * R * R) : -1.0 / (r * r);
        case Closed::TorusZero:
            return 0.0;
        default:
            return std::nullopt;
    }
}

double closed_self_energy(Closed c, const BackgroundDensity& mu) {
    const double R = mu.support().radius;
    switch (c) {
        case Closed::Interval1D:
            return -4.0 * R / 3.0;
        case Closed::Disc2DLog:
            return -std::log(R) + 0.25;
        case Closed::Disc2DRiesz1:
            return 16.0 / (3.0 * kPi * R);
        case Closed::Ball3DRiesz1:
            return 6.0 / (5.0 * R);
        case Closed::TorusZero:
            return 0.0;
        case Closed::None:
            break;
    }
    throw UnsupportedError("no closed-form self energy registered");
}

// Average of g(x - y) over the sphere |y| = rho, for |x| = r. The optional gap
// is |r - rho| when the caller knows it more accurately than the subtraction.
class ShellAverage {
public:
    explicit ShellAverage(const Kernel& k) : kernel_(k), d_(k.dim()) {
        if (k.family() == KernelFamily::Riesz) s_ = k.s();
    }

    double operator()(double r, double rho, double gap = -1.0) const {
        if (gap < 0.0) gap = std::abs(r - rho);
        switch (kernel_.family()) {
            case KernelFamily::OneDCoulomb:
                return -(gap + (r + rho));
            case KernelFamily::Log:
                if (d_ == 2) return -std::log(std::max(r, rho));
                return -0.5 * (safe_log(gap) + safe_log(r + rho));
            case KernelFamily::Riesz:
                return riesz(r, rho, gap);
            default:
                throw UnsupportedError("shell average: torus kernels use the spectral route");
        }
    }

private:
    static double safe_log(double x) { return x > 0.0 ? std::log(x) : 0.0; }

    // K(lo/hi), with the logarithmic expansion near lo = hi where ellint_1 loses accuracy.
    static double elliptic_k(double lo, double hi, double gap) {
        const double k = lo / hi;
        if (k < 1.0 - 1e-6) return boost::math::ellint_1(k);
        const double kp2 = (gap / hi) * ((hi + lo) / hi);
        if (kp2 <= 0.0) return 0.0;
        const double L = std::log(4.0 / std::sqrt(kp2));
        return L + 0.25 * kp2 * (L - 1.0) + 9.0 / 64.0 * kp2 * kp2 * (L - 7.0 / 6.0);
    }
    double g(double r) const { return r > 0.0 ? std::pow(r, -s_) / s_ : 0.0; }

    double riesz(double r, double rho, double gap) const {
        const double hi = std::max(r, rho);
        const double lo = std::min(r, rho);
        if (d_ == 1) return 0.5 * (g(gap) + g(hi + lo));
        if (lo <= 1e-14 * hi) return g(hi);
        if (d_ == 3) {
            if (s_ == 2.0) return std::log((hi + lo) / gap) / (4.0 * r * rho);
            // (hi + lo)^p - (hi - lo)^p without cancellation when lo << hi
            const double p = 2.0 - s_;
            const double k = lo / hi;
            const double up = p * std::log1p(k);
            const double down = p * (k < 0.5 ? std::log1p(-k) : std::log(gap / hi));
            const double diff = std::exp(down) * std::expm1(up - down);
            return std::pow(hi, p - 1.0) * diff / (2.0 * lo * s_ * p);
        }
        // d == 2
        if (s_ == 1.0) return 2.0 / (kPi * hi) * elliptic_k(lo, hi, gap);
        tanh_sinh<double> ts;
        const double a2 = r * r + rho * rho;
        const double val = ts.integrate(
            [&](double th) {
                const double q = std::max(a2 - 2.0 * r * rho * std::cos(th), 0.0);
                return q > 0.0 ? std::pow(q, -0.5 * s_) / s_ : 0.0;
            },
            0.0, kPi, 1e-12);
        return val / kPi;
    }

    const Kernel& kernel_;
    int d_;
    double s_ = 0.0;
};

double quadrature_potential(const Kernel& kernel, const BackgroundDensity& mu, double r) {
    if (mu.kind() != BackgroundDensity::Kind::UniformBall && mu.kind() != BackgroundDensity::Kind::Radial)
        throw UnsupportedError("quadrature potential requires a radial background");
    if (kernel.periodic()) throw UnsupportedError("quadrature potential requires a whole-space kernel");
    const int d = mu.dim();
    const double R = mu.support().radius;
    const double area = sphere_area(d);
    const ShellAverage avg(kernel);
    // the potential is smooth at the centre; this avoids underflow in the shell averages
    if (r < 1e-12 * R) r = 0.0;
    tanh_sinh<double> ts(15);
    double total = 0.0;
    double err_total = 0.0;
    auto piece = [&](double a, double b) {
        if (!(b > a)) return;
        // xc is the signed distance to the nearer endpoint, exact near the singular one
        auto integrand = [&](double rho, double xc) {
            double gap = -1.0;
            if (xc != 0.0 && ((rho < 0.5 * (a + b) && a == r) || (rho >= 0.5 * (a + b) && b == r)))
                gap = std::abs(xc);
            return area * mu.radial_density(rho) * std::pow(rho, d - 1) * avg(r, rho, gap);
        };
        double err = 0.0;
        double l1 = 0.0;
        total += ts.integrate(integrand, a, b, kPotentialQuadratureTolerance, &err, &l1);
        // on very short pieces the estimate can exceed the integral itself
        err_total += std::min(err, l1);
    };
    if (r > 0.0 && r < R) {
        piece(0.0, r);
        piece(r, R);
    } else {
        piece(0.0, R);
    }
    if (err_total > 1e-8 * std::max(1.0, std::abs(total)))
        throw AccuracyError("potential quadrature did not converge", err_total);
    return total;
}

// L^-d sum over modes of ghat(k) mu-check(k) e^{ik.x}, stored per half mode.
struct TorusCoefficients {
    std::vector<std::array<double, 3>> k;
    std::vector<Complex> c;
};

TorusCoefficients torus_coefficients(const Kernel& kernel, const BackgroundDensity& mu) {
    if (!mu.periodic()) throw UnsupportedError("torus kernel requires a torus background");
    if (std::abs(mu.support().L - kernel.period()) > 1e-12 * kernel.period())
        throw GridMismatchError("torus kernel and background have different periods");
    TorusCoefficients out;
    const int d = kernel.dim();
    const double base = 2.0 * kPi / kernel.period();
    const double vol = std::pow(kernel.period(), d);
    for (const auto& mode : kernel.half_modes()) {
        std::array<double, 3> k{0.0, 0.0, 0.0};
        for (int a = 0; a < d; ++a) k[a] = base * mode.m[a];
        const Complex muk = mu.fourier(std::span<const double>(k.data(), d));
        if (muk == 0.0) continue;
        out.k.push_back(k);
        out.c.push_back(2.0 * mode.value * muk / vol);
    }
    return out;
}

double torus_value(const TorusCoefficients& tc, std::span<const double> x, int d) {
    CompensatedSum acc;
    for (std::size_t q = 0; q < tc.k.size(); ++q) {
        double phase = 0.0;
        for (int a = 0; a < d; ++a) phase += tc.k[q][a] * x[a];
        acc += (tc.c[q] * std::polar(1.0, phase)).real();
    }
    return acc.value();
}

}  // namespace

bool has_closed_form_potential(const Kernel& kernel, const BackgroundDensity& mu) {
    return classify(kernel, mu) != Closed::None;
}

double potential_at(const Kernel& kernel, const BackgroundDensity& mu, std::span<const double> x,
                    PotentialMethod method) {
    const int d = mu.dim();
    if (kernel.dim() != d) throw PreconditionError("potential: kernel and background dimensions differ");
    const Closed c = classify(kernel, mu);
    if (method == PotentialMethod::ClosedForm || (method == PotentialMethod::Auto && c != Closed::None))
        return closed_potential(c, mu, norm(x, d));
    if (kernel.periodic() && method == PotentialMethod::Auto) {
        const auto tc = torus_coefficients(kernel, mu);
        return torus_value(tc, x, d);
    }
    return quadrature_potential(kernel, mu, norm(x, d));
}

std::vector<double> potential_of_density(const Kernel& kernel, const BackgroundDensity& mu,
                                         std::span<const double> query_points, PotentialMethod method) {
    const int d = mu.dim();
    if (query_points.size() % d != 0) throw PreconditionError("potential_of_density: ragged point list");
    const std::size_t n = query_points.size() / d;
    std::vector<double> out(n);
    if (kernel.periodic() && method == PotentialMethod::Auto && classify(kernel, mu) == Closed::None) {
        const auto tc = torus_coefficients(kernel, mu);
        parallel_for(n, [&](std::size_t i) { out[i] = torus_value(tc, query_points.subspan(i * d, d), d); });
        return out;
    }
    parallel_for(n, [&](std::size_t i) { out[i] = potential_at(kernel, mu, query_points.subspan(i * d, d), method); });
    return out;
}

std::vector<double> potential_gradient(const Kernel& kernel, const BackgroundDensity& mu, std::span<const double> x) {
    const int d = mu.dim();
    std::vector<double> grad(d, 0.0);
    const Closed c = classify(kernel, mu);
    const double r = norm(x, d);
    if (c != Closed::None) {
        if (const auto dr = closed_radial_derivative(c, mu, r)) {
            if (r > 0.0)
                for (int a = 0; a < d; ++a) grad[a] = *dr * x[a] / r;
            return grad;
        }
    } else if (kernel.periodic()) {
        const auto tc = torus_coefficients(kernel, mu);
        for (std::size_t q = 0; q < tc.k.size(); ++q) {
            double phase = 0.0;
            for (int a = 0; a < d; ++a) phase += tc.k[q][a] * x[a];
            const double im = (tc.c[q] * std::polar(1.0, phase)).imag();
            for (int a = 0; a < d; ++a) grad[a] -= tc.k[q][a] * im;
        }
        return grad;
    }
    const double step = 1e-5 * std::max(1.0, r);
    std::vector<double> xp(x.begin(), x.begin() + d);
    for (int a = 0; a < d; ++a) {
        const double keep = xp[a];
        xp[a] = keep + step;
        const double fp = potential_at(kernel, mu, xp);
        xp[a] = keep - step;
        const double fm = potential_at(kernel, mu, xp);
        xp[a] = keep;
        grad[a] = (fp - fm) / (2.0 * step);
    }
    return grad;
}

double self_energy(const Kernel& kernel, const BackgroundDensity& mu, PotentialMethod method) {
    const Closed c = classify(kernel, mu);
    if (method == PotentialMethod::ClosedForm || (method == PotentialMethod::Auto && c != Closed::None))
        return closed_self_energy(c, mu);
    if (kernel.periodic()) {
        if (!mu.periodic()) throw UnsupportedError("torus kernel requires a torus background");
        const int d = kernel.dim();
        const double base = 2.0 * kPi / kernel.period();
        CompensatedSum acc;
        for (const auto& mode : kernel.half_modes()) {
            std::array<double, 3> k{0.0, 0.0, 0.0};
            for (int a = 0; a < d; ++a) k[a] = base * mode.m[a];
            acc += 2.0 * mode.value * std::norm(mu.fourier(std::span<const double>(k.data(), d)));
        }
        return acc.value() / std::pow(kernel.period(), d);
    }
    if (mu.kind() != BackgroundDensity::Kind::UniformBall && mu.kind() != BackgroundDensity::Kind::Radial)
        throw UnsupportedError("self energy requires a radial or torus background");
    const int d = mu.dim();
    const double area = sphere_area(d);
    tanh_sinh<double> ts(12);
    double err = 0.0;
    const double val = ts.integrate(
        [&](double r) {
            return area * mu.radial_density(r) * std::pow(r, d - 1) * quadrature_potential(kernel, mu, r);
        },
        0.0, mu.support().radius, 1e-9, &err);
    if (err > 1e-8 * std::max(1.0, std::abs(val))) throw AccuracyError("self-energy quadrature did not converge", err);
    return val;
}

}  // namespace riesz_lake
