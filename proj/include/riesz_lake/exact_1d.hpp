#pragma once

#include <vector>

#include "riesz_lake/background.hpp"
#include "riesz_lake/dynamics.hpp"
#include "riesz_lake/kernel.hpp"

namespace riesz_lake {

// Initial data for the solvable 1D Coulomb gas: g = -2|x|, V = x^2, gamma = 0.
struct ExactInit {
    int N = 1;
    double epsilon = 1.0;
    std::vector<double> x0;  // strictly increasing
    std::vector<double> v0;
};

// Ordered critical point c_i = (2i - 1 - N)/N, i = 1..N.
double critical_position(int i, int N);

ExactInit critical_point_init(int N, double epsilon);
// x_i = c_i + 1/N, v = 0: the oscillating data with no weak limit when eps N stays bounded.
ExactInit oscillating_init(int N, double epsilon);

// |v_{i+1} - v_i| + |x_{i+1} - x_i - 2/N| < 2/N for every adjacent pair.
bool order_preservation_check(const ExactInit& init);

// x_i(t) = (x_i - c_i) cos(w t) + (v_i / w) sin(w t) + c_i with w = sqrt(2)/eps.
// The velocity coefficient 1/w makes x'(0) = v_i. Throws PreconditionError
// when the ordering condition fails.
ParticleState exact_state(const ExactInit& init, double t);

struct ExactCurrent {
    double amplitude = 0.0;     // sqrt(2)/(N eps)
    double value_factor = 0.0;  // -sqrt(2) sin(sqrt(2) t/eps)/(N eps)
};

// Requires the oscillating data.
ExactCurrent exact_current(const ExactInit& init, double t);

// Amplitude sqrt(2)/(N eps) of the current for the oscillating data.
double exact_current_amplitude(int N, double epsilon);

Kernel exact_kernel();
Confinement exact_confinement();
// Rejects anything but g = -2|x|, V = x^2, gamma = 0.
void require_exact_setup(const Kernel& kernel, const Confinement& V, double gamma);

ParticleState to_state(const ExactInit& init);

// max_i |x_i - y_i| and max_i |v_i - w_i|.
struct StateError {
    double position = 0.0;
    double velocity = 0.0;
};
StateError state_error(const ParticleState& a, const ParticleState& b);

}  // namespace riesz_lake
