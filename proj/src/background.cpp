#include "riesz_lake/background.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

#include "riesz_lake/error.hpp"

namespace riesz_lake {

namespace {

using boost::math::quadrature::gauss_kronrod;

double ball_volume(int dim, double r) {
    switch (dim) {
        case 1:
            return 2.0 * r;
        case 2:
            return std::numbers::pi * r * r;
        case 3:
            return 4.0 / 3.0 * std::numbers::pi * r * r * r;
        default:
            throw UnsupportedError("ball volume: dimension must be 1, 2 or 3");
    }
}

// Surface measure of the unit sphere, with the 1D "sphere" {-1, 1} counted as 2.
double sphere_area(int dim) {
    switch (dim) {
        case 1:
            return 2.0;
        case 2:
            return 2.0 * std::numbers::pi;
        case 3:
            return 4.0 * std::numbers::pi;
        default:
            throw UnsupportedError("sphere area: dimension must be 1, 2 or 3");
    }
}

double norm(std::span<const double> x, int dim) {
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) r2 += x[a] * x[a];
    return std::sqrt(r2);
}

// Radial Fourier kernel: average of e^{-ik.x} over the sphere |x| = r.
double sphere_average_phase(int dim, double kr) {
    if (kr < 1e-8) return 1.0;
    switch (dim) {
        case 1:
            return std::cos(kr);
        case 2:
            return std::cyl_bessel_j(0.0, kr);
        default:
            return std::sin(kr) / kr;
    }
}

}  // namespace

bool Support::contains(std::span<const double> x) const {
    if (kind == Kind::Torus) return true;
    return norm(x, dim) <= radius;
}

double Support::diameter() const {
    if (kind == Kind::Torus) return L * std::sqrt(static_cast<double>(dim));
    return 2.0 * radius;
}

BackgroundDensity BackgroundDensity::uniform_ball(int dim, double radius) {
    if (!(radius > 0.0)) throw PreconditionError("uniform_ball: radius must be positive");
    BackgroundDensity mu;
    mu.kind_ = Kind::UniformBall;
    mu.name_ = "uniform_ball";
    mu.support_ = {Support::Kind::Ball, dim, radius, 1.0};
    mu.sup_ = 1.0 / ball_volume(dim, radius);
    return mu;
}

BackgroundDensity BackgroundDensity::radial(int dim, double radius, std::function<double(double)> profile,
                                            std::string name) {
    if (!(radius > 0.0)) throw PreconditionError("radial: radius must be positive");
    BackgroundDensity mu;
    mu.kind_ = Kind::Radial;
    mu.name_ = std::move(name);
    mu.support_ = {Support::Kind::Ball, dim, radius, 1.0};
    mu.profile_ = std::move(profile);
    const double area = sphere_area(dim);
    const auto& prof = mu.profile_;
    const double mass = gauss_kronrod<double, 61>::integrate(
        [&](double r) { return area * prof(r) * std::pow(r, dim - 1); }, 0.0, radius, 15, 1e-13);
    if (!(mass > 0.0)) throw PreconditionError("radial: profile has no mass");
    mu.norm_ = 1.0 / mass;
    double sup = 0.0;
    for (int i = 0; i <= 2000; ++i) sup = std::max(sup, std::abs(prof(radius * i / 2000.0)));
    mu.sup_ = sup * mu.norm_;
    return mu;
}

BackgroundDensity BackgroundDensity::torus_uniform(int dim, double L) {
    if (!(L > 0.0)) throw PreconditionError("torus_uniform: side must be positive");
    BackgroundDensity mu;
    mu.kind_ = Kind::TorusUniform;
    mu.name_ = "torus_uniform";
    mu.support_ = {Support::Kind::Torus, dim, 0.0, L};
    mu.sup_ = 1.0 / std::pow(L, dim);
    return mu;
}

BackgroundDensity BackgroundDensity::torus_gridded(GridField density, std::string name) {
    const double mass = density.integral();
    if (std::abs(mass - 1.0) > 1e-8)
        throw PreconditionError("torus_gridded: total mass " + std::to_string(mass) + " differs from 1");
    BackgroundDensity mu;
    mu.kind_ = Kind::TorusGridded;
    mu.name_ = std::move(name);
    mu.support_ = {Support::Kind::Torus, density.spec.dim, 0.0, density.spec.L};
    mu.sup_ = density.max_abs();
    mu.interp_ = std::make_shared<TrigInterpolant>(density);
    mu.spectrum_ = std::make_shared<const Spectrum>(fft_forward(density));
    mu.grid_ = std::make_shared<const GridField>(std::move(density));
    return mu;
}

double BackgroundDensity::radial_density(double r) const {
    switch (kind_) {
        case Kind::UniformBall:
            return r <= support_.radius ? sup_ : 0.0;
        case Kind::Radial:
            return r <= support_.radius ? norm_ * profile_(r) : 0.0;
        default:
            throw UnsupportedError("radial_density: background is not radial");
    }
}

double BackgroundDensity::density(std::span<const double> x) const {
    switch (kind_) {
        case Kind::UniformBall:
        case Kind::Radial:
            return radial_density(norm(x, dim()));
        case Kind::TorusUniform:
            return sup_;
        case Kind::TorusGridded:
            return interp_->value(x);
    }
    return 0.0;
}

double BackgroundDensity::sup_norm() const { return sup_; }

double BackgroundDensity::total_mass() const {
    switch (kind_) {
        case Kind::UniformBall:
        case Kind::TorusUniform:
            return 1.0;
        case Kind::Radial: {
            const double area = sphere_area(dim());
            return gauss_kronrod<double, 61>::integrate(
                [&](double r) { return area * radial_density(r) * std::pow(r, dim() - 1); }, 0.0, support_.radius,
                15, 1e-13);
        }
        case Kind::TorusGridded:
            return grid_->integral();
    }
    return 0.0;
}

std::complex<double> BackgroundDensity::fourier(std::span<const double> k) const {
    const int d = dim();
    double k2 = 0.0;
    for (int a = 0; a < d; ++a) k2 += k[a] * k[a];
    const double kn = std::sqrt(k2);
    switch (kind_) {
        case Kind::UniformBall: {
            const double x = kn * support_.radius;
            if (x < 1e-6) return 1.0;
            if (d == 1) return std::sin(x) / x;
            if (d == 2) return 2.0 * std::cyl_bessel_j(1.0, x) / x;
            return 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
        }
        case Kind::Radial: {
            const double area = sphere_area(d);
            return gauss_kronrod<double, 61>::integrate(
                [&](double r) { return area * radial_density(r) * std::pow(r, d - 1) * sphere_average_phase(d, kn * r); },
                0.0, support_.radius, 15, 1e-12);
        }
        case Kind::TorusUniform:
            return kn == 0.0 ? 1.0 : 0.0;
        case Kind::TorusGridded: {
            // Trapezoidal rule on the grid: index m is read modulo n.
            const GridSpec& spec = grid_->spec;
            const double base = 2.0 * std::numbers::pi / spec.L;
            std::size_t flat = 0;
            for (int a = 0; a < d; ++a) {
                const double q = k[a] / base;
                const long m = std::lround(q);
                if (std::abs(q - static_cast<double>(m)) > 1e-9) return 0.0;
                const long j = ((m % spec.n) + spec.n) % spec.n;
                flat = flat * spec.n + static_cast<std::size_t>(j);
            }
            return spectrum_->coeffs[flat] * spec.cell_volume();
        }
    }
    return 0.0;
}

GridField BackgroundDensity::on_grid(const GridSpec& spec) const {
    if (!periodic()) throw UnsupportedError("on_grid: background is not periodic");
    if (kind_ == Kind::TorusUniform) return GridField(spec, sup_);
    if (grid_->spec == spec) return *grid_;
    return GridField::from_function(spec, [&](std::span<const double> x) { return interp_->value(x); });
}

std::optional<double> BackgroundDensity::robin_constant() const { return *robin_; }

void BackgroundDensity::set_robin_constant(double c) const { *robin_ = c; }

Confinement Confinement::zero(int dim) {
    Confinement v;
    v.kind_ = Kind::Zero;
    v.dim_ = dim;
    v.name_ = "zero";
    return v;
}

Confinement Confinement::quadratic(int dim, double a) {
    if (a < 0.0) throw PreconditionError("quadratic confinement must be bounded below (a >= 0)");
    Confinement v;
    v.kind_ = Kind::Quadratic;
    v.dim_ = dim;
    v.a_ = a;
    v.name_ = "quadratic";
    return v;
}

Confinement Confinement::radial_polynomial(int dim, std::vector<double> coeffs) {
    if (coeffs.empty()) return zero(dim);
    // Bounded below: the leading nonzero coefficient must be positive.
    std::size_t top = coeffs.size();
    while (top > 0 && coeffs[top - 1] == 0.0) --top;
    if (top > 1 && coeffs[top - 1] < 0.0)
        throw PreconditionError("radial polynomial confinement must be bounded below");
    Confinement v;
    v.kind_ = Kind::RadialPolynomial;
    v.dim_ = dim;
    v.coeffs_ = std::move(coeffs);
    v.name_ = "radial_polynomial";
    return v;
}

Confinement Confinement::periodic(GridField values, std::string name) {
    Confinement v;
    v.kind_ = Kind::Periodic;
    v.dim_ = values.spec.dim;
    v.name_ = std::move(name);
    v.interp_ = std::make_shared<TrigInterpolant>(values);
    return v;
}

double Confinement::value(std::span<const double> x) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Quadratic: {
            double r2 = 0.0;
            for (int a = 0; a < dim_; ++a) r2 += x[a] * x[a];
            return a_ * r2;
        }
        case Kind::RadialPolynomial: {
            const double r = norm(x, dim_);
            double acc = 0.0;
            for (std::size_t p = coeffs_.size(); p-- > 0;) acc = acc * r + coeffs_[p];
            return acc;
        }
        case Kind::Periodic:
            return interp_->value(x);
    }
    return 0.0;
}

void Confinement::gradient(std::span<const double> x, std::span<double> out) const {
    switch (kind_) {
        case Kind::Zero:
            for (int a = 0; a < dim_; ++a) out[a] = 0.0;
            return;
        case Kind::Quadratic:
            for (int a = 0; a < dim_; ++a) out[a] = 2.0 * a_ * x[a];
            return;
        case Kind::RadialPolynomial: {
            const double r = norm(x, dim_);
            if (r == 0.0) {
                for (int a = 0; a < dim_; ++a) out[a] = 0.0;
                return;
            }
            double dv = 0.0;
            for (std::size_t p = coeffs_.size(); p-- > 1;) dv = dv * r + static_cast<double>(p) * coeffs_[p];
            for (int a = 0; a < dim_; ++a) out[a] = dv * x[a] / r;
            return;
        }
        case Kind::Periodic: {
            const auto g = interp_->gradient(x);
            for (int a = 0; a < dim_; ++a) out[a] = g[a];
            return;
        }
    }
}

std::optional<std::vector<double>> Confinement::minimizer() const {
    if (kind_ == Kind::Zero || kind_ == Kind::Quadratic) return std::vector<double>(dim_, 0.0);
    return std::nullopt;
}

}  // namespace riesz_lake
