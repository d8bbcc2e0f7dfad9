#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riesz_lake/grid.hpp"

namespace riesz_lake {

// Declared geometry of supp(mu). Free boundaries are never detected.
struct Support {
    enum class Kind { Ball, Torus };
    Kind kind = Kind::Ball;
    int dim = 1;
    double radius = 1.0;  // Ball: centered at the origin; 1D ball is [-r, r]
    double L = 1.0;       // Torus side

    bool contains(std::span<const double> x) const;
    double diameter() const;
};

// Background / equilibrium measure mu.
class BackgroundDensity {
public:
    enum class Kind { UniformBall, Radial, TorusUniform, TorusGridded };

    // Uniform probability density on the centered ball of `radius`.
    static BackgroundDensity uniform_ball(int dim, double radius);
    // Radial density proportional to profile(|x|) on the ball; normalized
    // numerically to unit mass.
    static BackgroundDensity radial(int dim, double radius, std::function<double(double)> profile, std::string name);
    // Uniform probability density 1/L^d on the torus.
    static BackgroundDensity torus_uniform(int dim, double L);
    // Gridded density on the torus. Signed densities are accepted; the total
    // mass must be 1 within 1e-8.
    static BackgroundDensity torus_gridded(GridField density, std::string name = "gridded");

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    int dim() const { return support_.dim; }
    const Support& support() const { return support_; }
    bool periodic() const { return support_.kind == Support::Kind::Torus; }

    double density(std::span<const double> x) const;
    double sup_norm() const;
    double total_mass() const;
    // mu-check(k) = int e^{-i k.x} dmu(x) at a physical wavevector.
    std::complex<double> fourier(std::span<const double> k) const;
    // Density sampled on a grid (torus backgrounds only).
    GridField on_grid(const GridSpec& spec) const;
    const GridField* grid() const { return grid_ ? grid_.get() : nullptr; }

    // Radial profile (normalized) for Radial and UniformBall kinds.
    double radial_density(double r) const;

    std::optional<double> robin_constant() const;
    void set_robin_constant(double c) const;

private:
    BackgroundDensity() = default;

    Kind kind_ = Kind::UniformBall;
    std::string name_;
    Support support_;
    std::function<double(double)> profile_;
    double norm_ = 1.0;
    double sup_ = 0.0;
    std::shared_ptr<const GridField> grid_;
    std::shared_ptr<const Spectrum> spectrum_;
    std::shared_ptr<TrigInterpolant> interp_;
    std::shared_ptr<std::optional<double>> robin_ = std::make_shared<std::optional<double>>();
};

// External confining potential V.
class Confinement {
public:
    enum class Kind { Zero, Quadratic, RadialPolynomial, Periodic };

    static Confinement zero(int dim);
    // V(x) = a |x|^2
    static Confinement quadratic(int dim, double a);
    // V(x) = sum_p coeffs[p] |x|^p
    static Confinement radial_polynomial(int dim, std::vector<double> coeffs);
    // Periodic confinement given on a torus grid (evaluated by trigonometric
    // interpolation).
    static Confinement periodic(GridField values, std::string name = "periodic");

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    const std::string& name() const { return name_; }
    double quadratic_coefficient() const { return a_; }
    const std::vector<double>& coefficients() const { return coeffs_; }

    double value(std::span<const double> x) const;
    void gradient(std::span<const double> x, std::span<double> out) const;
    // Point where V attains its minimum when known analytically.
    std::optional<std::vector<double>> minimizer() const;

private:
    Confinement() = default;

    Kind kind_ = Kind::Zero;
    int dim_ = 1;
    std::string name_ = "zero";
    double a_ = 0.0;
    std::vector<double> coeffs_;
    std::shared_ptr<TrigInterpolant> interp_;
};

}  // namespace riesz_lake
