#include "riesz_lake/exact_1d.hpp"

#include <algorithm>
#include <cmath>

#include "riesz_lake/error.hpp"

namespace riesz_lake {

namespace {

void require_shape(const ExactInit& init) {
    if (init.N < 1) throw PreconditionError("exact_1d: N must be positive");
    if (!(init.epsilon > 0.0)) throw PreconditionError("exact_1d: epsilon must be positive");
    if (init.x0.size() != static_cast<std::size_t>(init.N) || init.v0.size() != init.x0.size())
        throw PreconditionError("exact_1d: x0 and v0 must have N entries");
    for (int i = 1; i < init.N; ++i)
        if (!(init.x0[i] > init.x0[i - 1])) throw PreconditionError("exact_1d: positions must be strictly increasing");
}

}  // namespace

double critical_position(int i, int N) { return (2.0 * i - 1.0 - N) / N; }

ExactInit critical_point_init(int N, double epsilon) {
    ExactInit init{N, epsilon, std::vector<double>(N), std::vector<double>(N, 0.0)};
    for (int i = 1; i <= N; ++i) init.x0[i - 1] = critical_position(i, N);
    return init;
}

ExactInit oscillating_init(int N, double epsilon) {
    ExactInit init = critical_point_init(N, epsilon);
    for (double& x : init.x0) x += 1.0 / N;
    return init;
}

bool order_preservation_check(const ExactInit& init) {
    require_shape(init);
    const double gap = 2.0 / init.N;
    for (int i = 0; i + 1 < init.N; ++i) {
        const double lhs = std::abs(init.v0[i + 1] - init.v0[i]) + std::abs(init.x0[i + 1] - init.x0[i] - gap);
        if (!(lhs < gap)) return false;
    }
    return true;
}

ParticleState to_state(const ExactInit& init) {
    ParticleState s(init.N, 1, init.epsilon, 0.0);
    s.x = init.x0;
    s.v = init.v0;
    return s;
}

ParticleState exact_state(const ExactInit& init, double t) {
    if (!order_preservation_check(init))
        throw PreconditionError("exact_state: initial data violate the order-preservation condition");
    if (t == 0.0) return to_state(init);
    const double w = std::sqrt(2.0) / init.epsilon;
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    ParticleState out(init.N, 1, init.epsilon, 0.0);
    out.t = t;
    for (int i = 0; i < init.N; ++i) {
        const double ci = critical_position(i + 1, init.N);
        const double a = init.x0[i] - ci;
        out.x[i] = a * c + init.v0[i] / w * s + ci;
        out.v[i] = -a * w * s + init.v0[i] * c;
    }
    return out;
}

double exact_current_amplitude(int N, double epsilon) { return std::sqrt(2.0) / (N * epsilon); }

ExactCurrent exact_current(const ExactInit& init, double t) {
    require_shape(init);
    for (int i = 0; i < init.N; ++i) {
        const double offset = init.x0[i] - critical_position(i + 1, init.N);
        if (std::abs(offset - 1.0 / init.N) > 1e-12 || init.v0[i] != 0.0)
            throw PreconditionError("exact_current: requires x_i = c_i + 1/N and v = 0");
    }
    const double amp = exact_current_amplitude(init.N, init.epsilon);
    return {amp, -amp * std::sin(std::sqrt(2.0) * t / init.epsilon)};
}

Kernel exact_kernel() { return Kernel::one_d_coulomb(); }

Confinement exact_confinement() { return Confinement::quadratic(1, 1.0); }

void require_exact_setup(const Kernel& kernel, const Confinement& V, double gamma) {
    const bool ok = kernel.family() == KernelFamily::OneDCoulomb && kernel.min_distance() == 0.0 &&
                    V.kind() == Confinement::Kind::Quadratic && V.dim() == 1 && V.quadratic_coefficient() == 1.0 &&
                    gamma == 0.0;
    if (!ok) throw UnsupportedError("exact 1D solution only covers g = -2|x|, V = x^2, gamma = 0");
}

StateError state_error(const ParticleState& a, const ParticleState& b) {
    if (a.x.size() != b.x.size()) throw PreconditionError("state_error: shapes differ");
    StateError e;
    for (std::size_t k = 0; k < a.x.size(); ++k) {
        e.position = std::max(e.position, std::abs(a.x[k] - b.x[k]));
        e.velocity = std::max(e.velocity, std::abs(a.v[k] - b.v[k]));
    }
    return e;
}

}  // namespace riesz_lake
