#include "riesz_lake/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "riesz_lake/error.hpp"
#include "riesz_lake/numeric.hpp"

namespace riesz_lake {

namespace {

constexpr double kPi = std::numbers::pi;

bool coincide(std::span<const double> a, std::span<const double> b) {
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] != b[k]) return false;
    return true;
}

void pair_gradient(const Kernel& kernel, std::span<const double> xi, std::span<const double> xj, int i, int j,
                   std::span<double> out) {
    const int d = kernel.dim();
    double diff[3];
    for (int a = 0; a < d; ++a) diff[a] = xi[a] - xj[a];
    if (kernel.singular() && coincide(xi, xj))
        throw SingularityError("particles " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
    kernel.eval_grad(std::span<const double>(diff, d), out);
}

// (1/N) sum_j grad g(x_i - x_j) for every i, written to out (N x d).
void mean_field_gradient(const ParticleState& s, const Kernel& kernel, std::vector<double>& out) {
    const int N = s.N;
    const int d = s.d;
    out.assign(static_cast<std::size_t>(N) * d, 0.0);
    if (N < 2) return;
    if (kernel.periodic()) {
        // (1/N) sum_j grad g(x_i - x_j) = -(2/L^d) sum_half ghat k Im(e^{ik.x_i} S(k)).
        const auto S = structure_factor(kernel, s.x, d);
        const auto& modes = kernel.half_modes();
        const double base = 2.0 * kPi / kernel.period();
        const double vol = std::pow(kernel.period(), d);
        parallel_for(N, [&](std::size_t i) {
            std::array<CompensatedSum, 3> acc;
            for (std::size_t q = 0; q < modes.size(); ++q) {
                double phase = 0.0;
                for (int a = 0; a < d; ++a) phase += base * modes[q].m[a] * s.x[i * d + a];
                const double im = (std::polar(1.0, phase) * S[q]).imag();
                for (int a = 0; a < d; ++a) acc[a] += -2.0 * modes[q].value * base * modes[q].m[a] * im;
            }
            for (int a = 0; a < d; ++a) out[i * d + a] = acc[a].value() / vol;
        });
        return;
    }
    const double invN = 1.0 / N;
    if (thread_budget() <= 1) {
        // Antisymmetric i < j sweep: accumulator k still receives its terms in
        // increasing j order, matching the threaded branch exactly.
        std::vector<CompensatedSum> acc(static_cast<std::size_t>(N) * d);
        double g[3];
        for (int i = 0; i < N; ++i)
            for (int j = i + 1; j < N; ++j) {
                pair_gradient(kernel, s.pos(i), s.pos(j), i, j, std::span<double>(g, d));
                for (int a = 0; a < d; ++a) {
                    acc[static_cast<std::size_t>(i) * d + a] += g[a];
                    acc[static_cast<std::size_t>(j) * d + a] += -g[a];
                }
            }
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = acc[k].value() * invN;
        return;
    }
    parallel_for(N, [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        std::array<CompensatedSum, 3> acc;
        double g[3];
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            if (j < i) {
                pair_gradient(kernel, s.pos(j), s.pos(i), j, i, std::span<double>(g, d));
                for (int a = 0; a < d; ++a) acc[a] += -g[a];
            } else {
                pair_gradient(kernel, s.pos(i), s.pos(j), i, j, std::span<double>(g, d));
                for (int a = 0; a < d; ++a) acc[a] += g[a];
            }
        }
        for (int a = 0; a < d; ++a) out[ii * d + a] = acc[a].value() * invN;
    });
}

void acceleration(const ParticleState& s, const Kernel& kernel, const Confinement& V, std::vector<double>& a) {
    mean_field_gradient(s, kernel, a);
    const double inv_eps2 = 1.0 / (s.epsilon * s.epsilon);
    double gv[3];
    for (int i = 0; i < s.N; ++i) {
        V.gradient(s.pos(i), std::span<double>(gv, s.d));
        for (int c = 0; c < s.d; ++c) {
            const std::size_t k = static_cast<std::size_t>(i) * s.d + c;
            a[k] = -inv_eps2 * (a[k] + gv[c]);
        }
    }
}

// Friction-split velocity Verlet; `acc` holds a(x) on entry and a(x_new) on exit.
void verlet_substep(ParticleState& s, double h, const Kernel& kernel, const Confinement& V, std::vector<double>& acc) {
    const double damp = std::exp(-0.5 * s.gamma * h);
    for (std::size_t k = 0; k < s.v.size(); ++k) s.v[k] = damp * s.v[k] + 0.5 * h * acc[k];
    for (std::size_t k = 0; k < s.x.size(); ++k) s.x[k] += h * s.v[k];
    acceleration(s, kernel, V, acc);
    for (std::size_t k = 0; k < s.v.size(); ++k) s.v[k] = damp * (s.v[k] + 0.5 * h * acc[k]);
    s.t += h;
}

void advance(ParticleState& s, double dt, const Kernel& kernel, const Confinement& V, Scheme scheme,
             std::vector<double>& acc) {
    if (scheme == Scheme::VelocityVerlet) {
        verlet_substep(s, dt, kernel, V, acc);
        return;
    }
    const double cbrt2 = std::cbrt(2.0);
    const double w1 = 1.0 / (2.0 - cbrt2);
    const double w0 = -cbrt2 / (2.0 - cbrt2);
    const double t0 = s.t;
    verlet_substep(s, w1 * dt, kernel, V, acc);
    verlet_substep(s, w0 * dt, kernel, V, acc);
    verlet_substep(s, w1 * dt, kernel, V, acc);
    s.t = t0 + dt;
}

void check_kernel_dim(const ParticleState& s, const Kernel& kernel, const Confinement& V) {
    if (kernel.dim() != s.d || V.dim() != s.d)
        throw PreconditionError("state, kernel and confinement dimensions differ");
}

}  // namespace

ParticleState::ParticleState(int n, int dim, double eps, double gam)
    : N(n), d(dim), x(static_cast<std::size_t>(n) * dim, 0.0), v(static_cast<std::size_t>(n) * dim, 0.0),
      epsilon(eps), gamma(gam) {}

void ParticleState::validate() const {
    if (N < 0 || d < 1 || d > 3) throw PreconditionError("particle state: need N >= 0 and d in {1,2,3}");
    if (x.size() != static_cast<std::size_t>(N) * d || v.size() != x.size())
        throw PreconditionError("particle state: array shapes do not match N x d");
    if (!(epsilon > 0.0)) throw PreconditionError("particle state: epsilon must be positive");
    if (!(gamma >= 0.0)) throw PreconditionError("particle state: gamma must be nonnegative");
}

std::string to_string(Scheme s) { return s == Scheme::VelocityVerlet ? "velocity_verlet" : "yoshida4"; }

Scheme scheme_from_string(const std::string& s) {
    if (s == "velocity_verlet" || s == "verlet") return Scheme::VelocityVerlet;
    if (s == "yoshida4") return Scheme::Yoshida4;
    throw PreconditionError("unknown integration scheme '" + s + "'");
}

std::vector<double> total_force(const ParticleState& state, const Kernel& kernel, const Confinement& V) {
    state.validate();
    check_kernel_dim(state, kernel, V);
    std::vector<double> a;
    acceleration(state, kernel, V, a);
    return a;
}

ParticleState step(const ParticleState& state, double dt, const Kernel& kernel, const Confinement& V) {
    return step(state, dt, kernel, V, Scheme::VelocityVerlet);
}

ParticleState step(const ParticleState& state, double dt, const Kernel& kernel, const Confinement& V, Scheme scheme) {
    if (!(dt > 0.0)) throw PreconditionError("step: dt must be positive");
    state.validate();
    check_kernel_dim(state, kernel, V);
    ParticleState s = state;
    std::vector<double> acc;
    acceleration(s, kernel, V, acc);
    advance(s, dt, kernel, V, scheme, acc);
    return s;
}

Trajectory simulate(const ParticleState& init, double T, double dt, const Kernel& kernel, const Confinement& V,
                    const SimulateOptions& opts) {
    if (!(T >= 0.0)) throw PreconditionError("simulate: T must be nonnegative");
    if (!(dt > 0.0)) throw PreconditionError("simulate: dt must be positive");
    if (opts.sample_every < 1) throw PreconditionError("simulate: sample_every must be >= 1");
    init.validate();
    check_kernel_dim(init, kernel, V);

    Trajectory traj;
    traj.scheme = opts.scheme;
    const std::size_t steps = T == 0.0 ? 0 : static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    const double h = steps == 0 ? dt : T / static_cast<double>(steps);
    traj.dt = h;

    ParticleState s = init;
    const double t0 = init.t;
    auto sample = [&] {
        traj.times.push_back(s.t);
        if (opts.keep_states) traj.states.push_back(s);
        if (opts.on_sample) opts.on_sample(s);
    };
    sample();
    if (steps == 0) return traj;

    std::vector<double> acc;
    try {
        acceleration(s, kernel, V, acc);
    } catch (const SingularityError& e) {
        throw SingularityError(std::string(e.what()) + " at t=" + std::to_string(s.t));
    }
    for (std::size_t k = 1; k <= steps; ++k) {
        try {
            advance(s, h, kernel, V, opts.scheme, acc);
        } catch (const SingularityError& e) {
            throw SingularityError(std::string(e.what()) + " at t=" + std::to_string(s.t));
        }
        s.t = t0 + static_cast<double>(k) * h;
        traj.steps = k;
        const bool stop = opts.on_step && !opts.on_step(s);
        if (k % static_cast<std::size_t>(opts.sample_every) == 0 || k == steps || stop) sample();
        if (stop) break;
    }
    return traj;
}

double pair_energy(const ParticleState& state, const Kernel& kernel) {
    const int N = state.N;
    const int d = state.d;
    if (N < 2) return 0.0;
    if (kernel.periodic()) {
        // sum_{i != j} g = N^2 (2/L^d) sum_half ghat |S|^2 - N g(0)
        const auto S = structure_factor(kernel, state.x, d);
        CompensatedSum acc;
        const auto& modes = kernel.half_modes();
        for (std::size_t q = 0; q < modes.size(); ++q) acc += 2.0 * modes[q].value * std::norm(S[q]);
        const double full = static_cast<double>(N) * N * acc.value() / std::pow(kernel.period(), d);
        return (full - N * kernel.value_at_origin()) / (2.0 * N * N);
    }
    std::vector<double> row(N, 0.0);
    parallel_for(N, [&](std::size_t ii) {
        const int i = static_cast<int>(ii);
        CompensatedSum acc;
        double diff[3];
        for (int j = i + 1; j < N; ++j) {
            if (kernel.singular() && coincide(state.pos(i), state.pos(j)))
                throw SingularityError("particles " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
            for (int a = 0; a < d; ++a) diff[a] = state.x[ii * d + a] - state.x[static_cast<std::size_t>(j) * d + a];
            acc += kernel.eval(std::span<const double>(diff, d));
        }
        row[ii] = acc.value();
    });
    return compensated_sum(row) / (static_cast<double>(N) * N);
}

double micro_energy(const ParticleState& state, const Kernel& kernel, const Confinement& V) {
    state.validate();
    check_kernel_dim(state, kernel, V);
    if (state.N == 0) return 0.0;
    CompensatedSum kin;
    for (double v : state.v) kin += v * v;
    CompensatedSum pot;
    for (int i = 0; i < state.N; ++i) pot += V.value(state.pos(i));
    const double N = state.N;
    return state.epsilon * state.epsilon * kin.value() / (2.0 * N) + pair_energy(state, kernel) + pot.value() / N;
}

ParticleState sample_monokinetic_init(const BackgroundDensity& mu, const VelocityFunction& u0, int N, double r_N,
                                      std::uint64_t seed, double epsilon, double gamma) {
    if (N < 1) throw PreconditionError("sample_monokinetic_init: N must be positive");
    if (!(r_N >= 0.0)) throw PreconditionError("sample_monokinetic_init: r_N must be nonnegative");
    const int d = mu.dim();
    ParticleState s(N, d, epsilon, gamma);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const bool torus = mu.periodic();
    const double half = torus ? 0.5 * mu.support().L : mu.support().radius;
    const double sup = mu.sup_norm();
    const bool flat = mu.kind() == BackgroundDensity::Kind::UniformBall ||
                      mu.kind() == BackgroundDensity::Kind::TorusUniform;
    const std::size_t budget = 1000 * static_cast<std::size_t>(N);
    std::size_t proposals = 0;

    std::vector<double> u(d);
    double p[3];
    for (int i = 0; i < N; ++i) {
        for (;;) {
            if (++proposals > budget)
                throw SamplingError("rejection sampling exceeded " + std::to_string(budget) + " proposals");
            for (int a = 0; a < d; ++a) p[a] = torus ? 2.0 * half * unit(rng) : half * (2.0 * unit(rng) - 1.0);
            const std::span<const double> ps(p, d);
            if (!torus && !mu.support().contains(ps)) continue;
            if (flat) break;
            if (unit(rng) * sup <= mu.density(ps)) break;
        }
        std::copy(p, p + d, s.x.begin() + static_cast<std::ptrdiff_t>(i) * d);
        if (u0)
            u0(s.pos(i), u);
        else
            std::fill(u.begin(), u.end(), 0.0);
        if (r_N > 0.0) {
            double q[3];
            double q2;
            do {
                q2 = 0.0;
                for (int a = 0; a < d; ++a) {
                    q[a] = 2.0 * unit(rng) - 1.0;
                    q2 += q[a] * q[a];
                }
            } while (q2 > 1.0);
            for (int a = 0; a < d; ++a) u[a] += r_N * q[a];
        }
        std::copy(u.begin(), u.end(), s.v.begin() + static_cast<std::ptrdiff_t>(i) * d);
    }
    return s;
}

ParticleState langevin_step(const ParticleState& state, double dt, const Kernel& kernel, const Confinement& V,
                            double beta, std::mt19937_64& rng) {
    if (!(beta > 0.0)) throw PreconditionError("langevin_step: beta must be positive");
    if (std::isinf(beta)) return step(state, dt, kernel, V);
    if (!(dt > 0.0)) throw PreconditionError("langevin_step: dt must be positive");
    state.validate();
    check_kernel_dim(state, kernel, V);
    ParticleState s = state;
    std::vector<double> acc;
    acceleration(s, kernel, V, acc);
    // B
    for (std::size_t k = 0; k < s.v.size(); ++k) s.v[k] += 0.5 * dt * acc[k];
    // A
    for (std::size_t k = 0; k < s.x.size(); ++k) s.x[k] += 0.5 * dt * s.v[k];
    // O
    std::normal_distribution<double> normal(0.0, 1.0);
    const double c1 = std::exp(-s.gamma * dt);
    const double c2 = s.gamma > 0.0 ? std::sqrt((1.0 - std::exp(-2.0 * s.gamma * dt)) / (s.gamma * beta))
                                    : std::sqrt(2.0 * dt / beta);
    for (double& v : s.v) v = c1 * v + c2 * normal(rng);
    // A
    for (std::size_t k = 0; k < s.x.size(); ++k) s.x[k] += 0.5 * dt * s.v[k];
    // B
    acceleration(s, kernel, V, acc);
    for (std::size_t k = 0; k < s.v.size(); ++k) s.v[k] += 0.5 * dt * acc[k];
    s.t += dt;
    return s;
}

double min_pair_distance(const ParticleState& state) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < state.N; ++i)
        for (int j = i + 1; j < state.N; ++j) {
            double r2 = 0.0;
            for (int a = 0; a < state.d; ++a) {
                const double dx = state.x[static_cast<std::size_t>(i) * state.d + a] -
                                  state.x[static_cast<std::size_t>(j) * state.d + a];
                r2 += dx * dx;
            }
            best = std::min(best, std::sqrt(r2));
        }
    return best;
}

}  // namespace riesz_lake
