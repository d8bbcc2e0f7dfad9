#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "riesz_lake/dynamics.hpp"
#include "riesz_lake/error.hpp"
#include "riesz_lake/exact_1d.hpp"

using namespace riesz_lake;

namespace {
constexpr double pi = std::numbers::pi;

ParticleState random_state(int N, int d, double spread, std::uint64_t seed, double eps = 0.1) {
    ParticleState s(N, d, eps);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-spread, spread);
    for (double& x : s.x) x = u(rng);
    for (double& v : s.v) v = 0.1 * u(rng);
    return s;
}

struct ThreadEnv {
    explicit ThreadEnv(const char* n) { setenv("RIESZ_LAKE_THREADS", n, 1); }
    ~ThreadEnv() { unsetenv("RIESZ_LAKE_THREADS"); }
};
}  // namespace

TEST_CASE("two-particle 1D Coulomb force is repulsive with unit size") {
    ParticleState s(2, 1, 1.0);
    s.x = {-1.0, 1.0};
    const auto a = total_force(s, Kernel::one_d_coulomb(), Confinement::zero(1));
    CHECK(a[0] == doctest::Approx(-1.0));
    CHECK(a[1] == doctest::Approx(1.0));
}

TEST_CASE("force matches a direct pair sum") {
    const ParticleState s = random_state(12, 2, 1.0, 3, 0.5);
    const Kernel g = Kernel::riesz(1.0, 2);
    const Confinement V = Confinement::quadratic(2, 0.7);
    const auto a = total_force(s, g, V);
    for (int i = 0; i < s.N; ++i)
        for (int c = 0; c < 2; ++c) {
            double f = 0.0;
            for (int j = 0; j < s.N; ++j) {
                if (j == i) continue;
                const double dx[2] = {s.x[2 * i] - s.x[2 * j], s.x[2 * i + 1] - s.x[2 * j + 1]};
                f -= g.grad(dx)[c] / s.N;
            }
            f -= 2 * 0.7 * s.x[2 * i + c];
            CHECK(a[2 * i + c] == doctest::Approx(f / 0.25).epsilon(1e-12));
        }
}

TEST_CASE("torus force from the structure factor matches the pair sum") {
    const Kernel g = Kernel::torus_riesz(0.0, 2, 2 * pi, 6);
    ParticleState s = random_state(9, 2, pi, 11, 1.0);
    const auto a = total_force(s, g, Confinement::zero(2));
    for (int i = 0; i < s.N; ++i)
        for (int c = 0; c < 2; ++c) {
            double f = 0.0;
            for (int j = 0; j < s.N; ++j) {
                if (j == i) continue;
                const double dx[2] = {s.x[2 * i] - s.x[2 * j], s.x[2 * i + 1] - s.x[2 * j + 1]};
                f -= g.grad(dx)[c] / s.N;
            }
            CHECK(a[2 * i + c] == doctest::Approx(f).epsilon(1e-10));
        }
}

TEST_CASE("threaded forces are bit-identical to serial ones") {
    const ParticleState s = random_state(50, 3, 1.0, 17);
    const Kernel g = Kernel::riesz(1.0, 3);
    const Confinement V = Confinement::quadratic(3, 1.0);
    const auto serial = total_force(s, g, V);
    ThreadEnv env("4");
    const auto threaded = total_force(s, g, V);
    CHECK(serial == threaded);
}

TEST_CASE("coincident particles raise a singularity error") {
    ParticleState s(2, 2, 0.1);
    s.x = {0.5, 0.5, 0.5, 0.5};
    CHECK_THROWS_AS(total_force(s, Kernel::log(2), Confinement::zero(2)), SingularityError);
    SimulateOptions o;
    o.keep_states = false;
    CHECK_THROWS_AS(simulate(s, 0.1, 0.01, Kernel::log(2), Confinement::zero(2), o), SingularityError);
}

TEST_CASE("damped harmonic oscillator") {
    // N = 1: x'' = -gamma x' - 2 a x / eps^2
    const double a = 2.0, eps = 0.5, gamma = 0.3;
    ParticleState s(1, 1, eps, gamma);
    s.x = {1.0};
    s.v = {0.0};
    const double w2 = 2 * a / (eps * eps);
    const double wd = std::sqrt(w2 - gamma * gamma / 4);
    const double T = 2.0;
    const double expect = std::exp(-gamma * T / 2) * (std::cos(wd * T) + gamma / (2 * wd) * std::sin(wd * T));
    SimulateOptions o;
    o.keep_states = true;
    const auto tr = simulate(s, T, 1e-3, Kernel::one_d_coulomb(), Confinement::quadratic(1, a), o);
    CHECK(tr.states.back().x[0] == doctest::Approx(expect).epsilon(1e-9));
    o.scheme = Scheme::VelocityVerlet;
    const auto tv = simulate(s, T, 1e-3, Kernel::one_d_coulomb(), Confinement::quadratic(1, a), o);
    CHECK(tv.states.back().x[0] == doctest::Approx(expect).epsilon(1e-5));
}

TEST_CASE("integrator orders on the solvable 1D gas") {
    const ExactInit init = oscillating_init(8, 0.2);
    auto err = [&](double dt, Scheme sc) {
        SimulateOptions o;
        o.scheme = sc;
        const auto tr = simulate(to_state(init), 1.0, dt, exact_kernel(), exact_confinement(), o);
        return state_error(tr.states.back(), exact_state(init, 1.0)).position;
    };
    const double v1 = err(0.02, Scheme::VelocityVerlet), v2 = err(0.01, Scheme::VelocityVerlet);
    CHECK(std::log2(v1 / v2) == doctest::Approx(2.0).epsilon(0.05));
    const double y1 = err(0.02, Scheme::Yoshida4), y2 = err(0.01, Scheme::Yoshida4);
    CHECK(std::log2(y1 / y2) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("energy is conserved without friction") {
    const Kernel g = Kernel::log(2);
    const Confinement V = Confinement::quadratic(2, 1.0);
    auto drift = [&](const ParticleState& s, double dt) {
        const double e0 = micro_energy(s, g, V);
        double worst = 0.0;
        SimulateOptions o;
        o.keep_states = false;
        o.sample_every = 1;
        o.on_sample = [&](const ParticleState& st) {
            worst = std::max(worst, std::abs(micro_energy(st, g, V) - e0) / std::abs(e0));
        };
        simulate(s, 0.5, dt, g, V, o);
        return worst;
    };

    SUBCASE("well separated particles at the default step") {
        ParticleState s(20, 2, 0.3);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-0.1, 0.1);
        for (int i = 0; i < 20; ++i) {
            s.x[2 * i] = 0.4 * (i % 5 - 2) + u(rng);
            s.x[2 * i + 1] = 0.4 * (i / 5 - 1.5) + u(rng);
            s.v[2 * i] = 0.1 * u(rng);
            s.v[2 * i + 1] = 0.1 * u(rng);
        }
        CHECK(drift(s, 0.3 / 100) < 1e-6);
    }
    SUBCASE("random particles converge at fourth order") {
        // a close encounter (separation below 0.09) needs a smaller step
        const ParticleState s = random_state(20, 2, 1.0, 5, 0.3);
        const double a = drift(s, 0.3 / 400), b = drift(s, 0.3 / 800);
        CHECK(a / b > 8.0);
        CHECK(b < 1e-5);
    }
}

TEST_CASE("micro energy of two particles") {
    ParticleState s(2, 1, 0.5);
    s.x = {-0.5, 1.0};
    s.v = {1.0, 2.0};
    // eps^2/(2N) sum v^2 + (1/2N^2) 2 g(1.5) + (1/N) sum x^2
    const double expect = 0.25 / 4 * 5 + 0.25 * (-3.0) + 0.5 * 1.25;
    CHECK(micro_energy(s, Kernel::one_d_coulomb(), Confinement::quadratic(1, 1.0)) == doctest::Approx(expect));
    CHECK(pair_energy(s, Kernel::one_d_coulomb()) == doctest::Approx(-0.75));
}

TEST_CASE("simulate sampling and time grid") {
    ParticleState s(1, 1, 1.0);
    s.x = {0.1};
    SimulateOptions o;
    o.sample_every = 3;
    const auto tr = simulate(s, 1.0, 0.1, Kernel::one_d_coulomb(), Confinement::quadratic(1, 1.0), o);
    CHECK(tr.steps == 10);
    CHECK(tr.times.size() == 5);  // 0, 3, 6, 9, 10
    CHECK(tr.times.back() == doctest::Approx(1.0));
    const auto t0 = simulate(s, 0.0, 0.1, Kernel::one_d_coulomb(), Confinement::quadratic(1, 1.0), o);
    CHECK(t0.times.size() == 1);
    int calls = 0;
    o.on_step = [&](const ParticleState&) { return ++calls < 4; };
    const auto stopped = simulate(s, 1.0, 0.1, Kernel::one_d_coulomb(), Confinement::quadratic(1, 1.0), o);
    CHECK(stopped.steps == 4);
}

TEST_CASE("monokinetic sampling") {
    const auto mu = BackgroundDensity::uniform_ball(2, 0.7);
    VelocityFunction u0 = [](std::span<const double> x, std::span<double> out) {
        out[0] = -x[1];
        out[1] = x[0];
    };
    const auto a = sample_monokinetic_init(mu, u0, 200, 0.05, 42, 0.1);
    const auto b = sample_monokinetic_init(mu, u0, 200, 0.05, 42, 0.1);
    CHECK(a.x == b.x);
    CHECK(a.v == b.v);
    const auto c = sample_monokinetic_init(mu, u0, 200, 0.05, 43, 0.1);
    CHECK(a.x != c.x);
    for (int i = 0; i < a.N; ++i) {
        CHECK(mu.support().contains(a.pos(i)));
        const double dv = std::hypot(a.v[2 * i] + a.x[2 * i + 1], a.v[2 * i + 1] - a.x[2 * i]);
        CHECK(dv <= 0.05);
    }
}

TEST_CASE("Langevin step") {
    const Kernel g = Kernel::one_d_coulomb();
    const Confinement V = Confinement::quadratic(1, 0.5);
    ParticleState s(1, 1, 1.0, 1.0);
    s.x = {0.3};
    std::mt19937_64 rng(1);
    const auto a = langevin_step(s, 0.01, g, V, std::numeric_limits<double>::infinity(), rng);
    const auto b = step(s, 0.01, g, V);
    CHECK(a.x == b.x);
    CHECK(a.v == b.v);
    // stationary <v^2> = 1/(gamma beta)
    const double beta = 2.0;
    double acc = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        s = langevin_step(s, 0.05, g, V, beta, rng);
        acc += s.v[0] * s.v[0];
    }
    CHECK(acc / n == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("state validation and minimum distance") {
    ParticleState s(3, 1, 0.1);
    s.x = {0.0, 0.4, 1.0};
    CHECK(min_pair_distance(s) == doctest::Approx(0.4));
    s.epsilon = 0.0;
    CHECK_THROWS_AS(s.validate(), PreconditionError);
    CHECK(scheme_from_string("verlet") == Scheme::VelocityVerlet);
    CHECK(to_string(Scheme::Yoshida4) == "yoshida4");
}
