#pragma once

#include <optional>
#include <span>
#include <vector>

#include "riesz_lake/background.hpp"
#include "riesz_lake/kernel.hpp"

namespace riesz_lake {

enum class PotentialMethod {
    Auto,        // closed form when registered, spectral on the torus, quadrature otherwise
    ClosedForm,  // throws UnsupportedError when no closed form is registered
    Quadrature,  // adaptive radial quadrature (whole space only)
};

// Absolute tolerance for the quadrature route.
inline constexpr double kPotentialQuadratureTolerance = 1e-10;

bool has_closed_form_potential(const Kernel& kernel, const BackgroundDensity& mu);

// h^mu(x) = (g * mu)(x).
double potential_at(const Kernel& kernel, const BackgroundDensity& mu, std::span<const double> x,
                     PotentialMethod method = PotentialMethod::Auto);

// h^mu at a flat list of points (length multiple of the kernel dimension).
std::vector<double> potential_of_density(const Kernel& kernel, const BackgroundDensity& mu,
                                         std::span<const double> query_points,
                                         PotentialMethod method = PotentialMethod::Auto);

// grad h^mu(x): analytic where registered or spectral on the torus, central
// differences of potential_at otherwise.
std::vector<double> potential_gradient(const Kernel& kernel, const BackgroundDensity& mu, std::span<const double> x);

// Double integral of g against mu (x) mu.
double self_energy(const Kernel& kernel, const BackgroundDensity& mu, PotentialMethod method = PotentialMethod::Auto);

}  // namespace riesz_lake
