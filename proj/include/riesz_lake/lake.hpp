#pragma once

#include <vector>

#include "riesz_lake/background.hpp"
#include "riesz_lake/grid.hpp"
#include "riesz_lake/kernel.hpp"

namespace riesz_lake {

// Modulating velocity field on a periodic grid together with its time
// derivative, pressure and the weight mu_V of the constraint div(mu_V u) = 0.
struct VelocityField {
    GridSpec spec;
    VectorGridField u;
    VectorGridField dtu;
    GridField p;
    BackgroundDensity mu_V;
    double gamma = 0.0;
    double t = 0.0;
    // max |grad u| at creation; stepping aborts when it grows tenfold.
    double grad_ref = 0.0;
    // Spatial mean of u (the zero mode is carried separately by the vorticity solver).
    std::vector<double> mean;

    // Builds a field with dtu = -gamma u - u.grad u - grad p and p from pressure_solve.
    static VelocityField from_velocity(VectorGridField u, const BackgroundDensity& mu_V, double gamma, double t = 0.0);
    static VelocityField zero(const GridSpec& spec, const BackgroundDensity& mu_V, double gamma = 0.0);

    // Samples u at arbitrary torus points (trigonometric interpolation).
    std::vector<TrigInterpolant> interpolants() const;
};

// Taylor-Green data A (sin kx cos ky, -cos kx sin ky), k = 2 pi / L, on a 2D
// grid with uniform mu_V; steady for gamma = 0 and self-similar otherwise.
VelocityField taylor_green(const GridSpec& spec, double amplitude = 1.0, double gamma = 0.0);
// Exact Taylor-Green pressure A^2 (cos 2kx + cos 2ky) / 4.
GridField taylor_green_pressure(const GridSpec& spec, double amplitude = 1.0);

// Smooth random divergence-free 2D field with modes 0 < |m| <= kmax.
VectorGridField random_solenoidal_2d(const GridSpec& spec, int kmax, double amplitude, unsigned seed);

// (u . grad) u with spectral derivatives; `dealias` applies the 2/3 rule to the product.
VectorGridField advection(const VectorGridField& u, bool dealias = true);
GridField dealias_two_thirds(const GridField& f);

// Solves -div(mu grad p) = div(mu (u . grad) u) with zero-mean p. Direct
// inversion for uniform mu, Fourier-preconditioned CG otherwise.
GridField pressure_solve(const BackgroundDensity& mu_V, const VectorGridField& u);

// Solves -div(mu grad p) = rhs (rhs zero-mean). Exposed for tests.
GridField weighted_poisson_solve(const GridField& mu, const GridField& rhs, double rel_tol = 1e-10,
                                 int max_iter = 1000);
// -div(mu grad p)
GridField weighted_laplacian(const GridField& mu, const GridField& p);

// Vorticity RK4 step (integrating factor for the friction, 2/3 dealiasing).
// Requires d = 2 and uniform mu_V.
VelocityField euler_step_2d(const VelocityField& field, double dt);

// Velocity-form RK4 step for variable mu_V; every stage is projected onto
// div(mu_V u) = 0. Uniform 2D data is delegated to euler_step_2d.
VelocityField lake_step(const VelocityField& field, double dt);

// Projects u onto {div(mu u) = 0} with a weighted Poisson solve.
VectorGridField weighted_projection(const GridField& mu, const VectorGridField& u);

struct LakeResidual {
    double momentum_residual = 0.0;
    double constraint_residual = 0.0;
};

LakeResidual lake_residual(const VelocityField& field);

// w = dtu + gamma u + (u . grad) u
VectorGridField lake_forcing(const VelocityField& field);

// ||grad h^U + w|| / ||w||, h^U = ghat(D) U; 0 when w = 0.
double verify_corrector_identity(const VelocityField& field, const GridField& corrector_field, const Kernel& kernel);

double max_gradient_norm(const VectorGridField& u);
double max_speed(const VectorGridField& u);

}  // namespace riesz_lake
