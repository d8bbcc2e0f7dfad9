#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "riesz_lake/background.hpp"
#include "riesz_lake/kernel.hpp"

namespace riesz_lake {

// Positions and velocities of N particles in R^d (or on the torus), stored
// row-major as N x d, with the physical parameters of the flow.
struct ParticleState {
    int N = 0;
    int d = 1;
    std::vector<double> x;
    std::vector<double> v;
    double t = 0.0;
    double epsilon = 1.0;
    double gamma = 0.0;

    ParticleState() = default;
    ParticleState(int n, int dim, double eps, double gam = 0.0);

    std::span<double> pos(int i) { return std::span(x).subspan(static_cast<std::size_t>(i) * d, d); }
    std::span<const double> pos(int i) const { return std::span(x).subspan(static_cast<std::size_t>(i) * d, d); }
    std::span<double> vel(int i) { return std::span(v).subspan(static_cast<std::size_t>(i) * d, d); }
    std::span<const double> vel(int i) const { return std::span(v).subspan(static_cast<std::size_t>(i) * d, d); }

    // Throws PreconditionError on inconsistent shapes or parameters.
    void validate() const;
};

enum class Scheme {
    VelocityVerlet,  // second order
    Yoshida4,        // fourth-order symmetric composition of VelocityVerlet
};

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct Trajectory {
    std::vector<double> times;
    std::vector<ParticleState> states;  // empty when states were not retained
    double dt = 0.0;
    Scheme scheme = Scheme::VelocityVerlet;
    std::size_t steps = 0;
};

// a_i = -(1/(eps^2 N)) sum_{j != i} grad g(x_i - x_j) - (1/eps^2) grad V(x_i).
// Pairs are visited in a fixed order with compensated per-particle sums, so
// serial and threaded evaluations agree bit for bit. Torus kernels use the
// structure factor instead of the pair loop.
std::vector<double> total_force(const ParticleState& state, const Kernel& kernel, const Confinement& V);

// One velocity-Verlet step of x'' = a(x) - gamma x' with exact damping:
// half-damp, half-kick, drift, half-kick, half-damp.
ParticleState step(const ParticleState& state, double dt, const Kernel& kernel, const Confinement& V);

// One step of the chosen scheme.
ParticleState step(const ParticleState& state, double dt, const Kernel& kernel, const Confinement& V, Scheme scheme);

struct SimulateOptions {
    int sample_every = 1;
    Scheme scheme = Scheme::Yoshida4;
    bool keep_states = true;
    // Called on every sample (including t = 0 and the final time).
    std::function<void(const ParticleState&)> on_sample;
    // Optional per-step hook; returning false stops the run early.
    std::function<bool(const ParticleState&)> on_step;
};

// Integrates to time T with ceil(T/dt) equal steps of size T/steps (<= dt).
Trajectory simulate(const ParticleState& init, double T, double dt, const Kernel& kernel, const Confinement& V,
                    const SimulateOptions& opts = {});

// E = (eps^2/2N) sum |v_i|^2 + (1/2N^2) sum_{i != j} g(x_i - x_j) + (1/N) sum V(x_i)
double micro_energy(const ParticleState& state, const Kernel& kernel, const Confinement& V);
// (1/2N^2) sum_{i != j} g(x_i - x_j)
double pair_energy(const ParticleState& state, const Kernel& kernel);

using VelocityFunction = std::function<void(std::span<const double> x, std::span<double> u)>;

// Positions iid from mu (rejection sampling, budget 1000 N proposals), then
// v_i uniform in the ball B(u0(x_i), r_N). Deterministic given the seed.
ParticleState sample_monokinetic_init(const BackgroundDensity& mu, const VelocityFunction& u0, int N, double r_N,
                                      std::uint64_t seed, double epsilon, double gamma = 0.0);

// BAOAB step with velocity noise sqrt(2/beta) dW. beta = +infinity runs step().
ParticleState langevin_step(const ParticleState& state, double dt, const Kernel& kernel, const Confinement& V,
                            double beta, std::mt19937_64& rng);

// Minimum pairwise distance (infinity for N < 2).
double min_pair_distance(const ParticleState& state);

}  // namespace riesz_lake
