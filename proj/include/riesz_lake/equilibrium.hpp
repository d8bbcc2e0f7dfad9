#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "riesz_lake/background.hpp"
#include "riesz_lake/kernel.hpp"

namespace riesz_lake {

// A registered equilibrium problem: interaction, confinement and the closed
// form of the minimizing measure (Robin constant populated).
struct EquilibriumCase {
    std::string id;
    Kernel kernel;
    Confinement V;
    BackgroundDensity mu;
    // Hypotheses taken on faith for the case (not checked numerically).
    std::vector<std::string> assumptions;
};

// oned_coulomb_quadratic   g = -2|x|,    V = x^2,   mu = 1/2 on [-1, 1], c = -1
// twod_coulomb_quadratic   g = -log|x|,  V = |x|^2, mu = 2/pi on B(0, 1/sqrt 2)
// threed_coulomb_quadratic g = 1/|x|,    V = |x|^2, mu = 3/(2 pi) on B(0, 2^(-1/3))
// torus_uniform            zero-average torus kernel, V = 0, mu = 1 on [0,1), c = 0
std::vector<std::string> equilibrium_case_ids();
EquilibriumCase equilibrium_case(const std::string& id);
BackgroundDensity closed_form_equilibrium(const std::string& id);

struct RobinEstimate {
    double c = 0.0;
    double spread = 0.0;  // max - min of h + V over the samples
    std::size_t samples = 0;
};

// Mean of h^mu + V over 32 deterministic points in the interior of supp(mu).
RobinEstimate estimate_robin(const Confinement& V, const BackgroundDensity& mu, const Kernel& kernel);

// Robin constant of mu: the cached value, or the interior estimate (cached on
// first use). Throws AccuracyError when the estimate spread exceeds 10 * tol.
double robin_constant(const Confinement& V, const BackgroundDensity& mu, const Kernel& kernel, double tol = 1e-7);

// zeta(x) = h^mu(x) + V(x) - c
double zeta(const Confinement& V, const BackgroundDensity& mu, const Kernel& kernel, std::span<const double> x);
std::vector<double> zeta_gradient(const Confinement& V, const BackgroundDensity& mu, const Kernel& kernel,
                                  std::span<const double> x);

struct FrostmanReport {
    std::string case_id;
    double c = 0.0;
    double max_abs_zeta_on_support = 0.0;
    // +infinity when the sample grid has no off-support point (torus).
    double min_zeta_off_support = 0.0;
    std::size_t samples_on = 0;
    std::size_t samples_off = 0;
    bool pass = false;
};

// Samples supp(mu) and a collar around it (width defaults to one support
// diameter) on a deterministic grid of at least 1000 points. Failures are
// reported, never thrown. An unset Robin constant is estimated without the
// spread check so that wrong densities still produce a report.
FrostmanReport verify_frostman(const Confinement& V, const BackgroundDensity& mu, const Kernel& kernel, double tol,
                               std::string case_id = "", double collar = -1.0);

// Lipschitz test field for the no-flux diagnostic.
struct TestVectorField {
    int dim = 1;
    std::function<std::vector<double>(std::span<const double>)> value;
    // Row-major dim x dim Jacobian.
    std::function<std::vector<double>(std::span<const double>)> jacobian;
    // ||v||_{W^{1,inf}} over the region of interest.
    double w1inf = 0.0;
};

// sup over points of |v . grad zeta| / (||v||_{W^{1,inf}} zeta). Throws
// DomainError when zeta <= 0 at a point.
double noflux_inequality_ratio(const TestVectorField& v, const Confinement& V, const BackgroundDensity& mu,
                               const Kernel& kernel, std::span<const double> points);

struct GrowthFit {
    std::vector<double> distances;
    std::vector<double> ratios;
    double exponent = 0.0;  // least-squares slope of log ratio against log distance
};

// Ratio on dyadic shells at distance 2^-(j+3) * diameter from the ball support,
// j = 1..shells, with the fitted growth exponent.
GrowthFit noflux_growth_exponent(const TestVectorField& v, const Confinement& V, const BackgroundDensity& mu,
                                 const Kernel& kernel, int shells = 8);

}  // namespace riesz_lake
