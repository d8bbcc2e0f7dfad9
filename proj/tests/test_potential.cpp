#include <doctest.h>

#include <cmath>
#include <numbers>

#include "riesz_lake/error.hpp"
#include "riesz_lake/potential.hpp"

using namespace riesz_lake;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("1D Coulomb potential of the uniform law on an interval") {
    // h(x) = int -2|x-y| dy/2 over [-1, 1]
    const Kernel g = Kernel::one_d_coulomb();
    const auto mu = BackgroundDensity::uniform_ball(1, 1.0);
    for (double x : {-0.8, 0.0, 0.3, 0.999}) {
        const double p[1] = {x};
        CHECK(potential_at(g, mu, p) == doctest::Approx(-(x * x + 1.0)).epsilon(1e-14));
    }
    for (double x : {1.5, -2.0, 7.0}) {
        const double p[1] = {x};
        CHECK(potential_at(g, mu, p) == doctest::Approx(-2.0 * std::abs(x)));
    }
    CHECK(self_energy(g, mu) == doctest::Approx(-4.0 / 3.0));
}

TEST_CASE("closed forms agree with radial quadrature") {
    struct Case {
        Kernel g;
        BackgroundDensity mu;
        std::vector<std::vector<double>> pts;
    };
    const std::vector<Case> cases = {
        {Kernel::one_d_coulomb(), BackgroundDensity::uniform_ball(1, 1.3), {{0.2}, {1.9}}},
        {Kernel::log(2), BackgroundDensity::uniform_ball(2, 0.7), {{0.1, 0.3}, {0.9, -0.4}, {0.0, 0.0}}},
        {Kernel::riesz(1.0, 2), BackgroundDensity::uniform_ball(2, 0.7), {{0.2, 0.1}, {1.2, 0.3}}},
        {Kernel::riesz(1.0, 3), BackgroundDensity::uniform_ball(3, 0.8), {{0.1, 0.2, 0.3}, {1.0, 0.5, 0.0}}},
    };
    for (const auto& c : cases) {
        REQUIRE(has_closed_form_potential(c.g, c.mu));
        for (const auto& p : c.pts) {
            const double closed = potential_at(c.g, c.mu, p, PotentialMethod::ClosedForm);
            const double quad = potential_at(c.g, c.mu, p, PotentialMethod::Quadrature);
            CHECK(closed == doctest::Approx(quad).epsilon(1e-8));
        }
        const double e_closed = self_energy(c.g, c.mu, PotentialMethod::ClosedForm);
        const double e_quad = self_energy(c.g, c.mu, PotentialMethod::Quadrature);
        CHECK(e_closed == doctest::Approx(e_quad).epsilon(1e-7));
    }
}

TEST_CASE("self energies of uniform balls") {
    CHECK(self_energy(Kernel::log(2), BackgroundDensity::uniform_ball(2, 0.5)) ==
          doctest::Approx(-std::log(0.5) + 0.25));
    CHECK(self_energy(Kernel::riesz(1.0, 3), BackgroundDensity::uniform_ball(3, 2.0)) == doctest::Approx(6.0 / 10.0));
    // 2D Riesz s = 1: 16 / (3 pi R), checked against the quadrature route above
    CHECK(self_energy(Kernel::riesz(1.0, 2), BackgroundDensity::uniform_ball(2, 1.0), PotentialMethod::Quadrature) ==
          doctest::Approx(16.0 / (3.0 * pi)).epsilon(1e-7));
}

TEST_CASE("3D Coulomb potential at the center") {
    const double z[3] = {0, 0, 0};
    CHECK(potential_at(Kernel::riesz(1.0, 3), BackgroundDensity::uniform_ball(3, 0.5), z) == doctest::Approx(3.0));
}

TEST_CASE("quadrature covers kernels without a closed form") {
    const Kernel g = Kernel::riesz(0.5, 2);
    const auto mu = BackgroundDensity::uniform_ball(2, 1.0);
    CHECK_FALSE(has_closed_form_potential(g, mu));
    const double p[2] = {0.0, 0.0};
    // h(0) = (1/pi) int_0^1 r^-1/2 / (1/2) 2 pi r dr = 4 * 2/3
    CHECK(potential_at(g, mu, p) == doctest::Approx(8.0 / 3.0).epsilon(1e-9));
    CHECK_THROWS_AS(potential_at(g, mu, p, PotentialMethod::ClosedForm), UnsupportedError);
}

TEST_CASE("torus uniform background has zero potential") {
    const Kernel g = Kernel::torus_riesz(0.0, 2, 2 * pi, 8);
    const auto mu = BackgroundDensity::torus_uniform(2, 2 * pi);
    const double p[2] = {1.0, 2.0};
    CHECK(std::abs(potential_at(g, mu, p)) < 1e-15);
    CHECK(std::abs(self_energy(g, mu)) < 1e-15);
}

TEST_CASE("potential gradients") {
    const Kernel g = Kernel::log(2);
    const auto mu = BackgroundDensity::uniform_ball(2, 1.0);
    for (auto p : {std::vector<double>{0.3, 0.4}, std::vector<double>{1.2, -0.9}}) {
        const auto grad = potential_gradient(g, mu, p);
        const double r2 = p[0] * p[0] + p[1] * p[1];
        const double f = r2 < 1.0 ? -1.0 : -1.0 / r2;
        CHECK(grad[0] == doctest::Approx(f * p[0]).epsilon(1e-9));
        CHECK(grad[1] == doctest::Approx(f * p[1]).epsilon(1e-9));
    }
    const auto vals = potential_of_density(g, mu, std::vector<double>{0.0, 0.5, 2.0, 0.0});
    REQUIRE(vals.size() == 2);
    CHECK(vals[0] == doctest::Approx(0.5 - 0.125).epsilon(1e-12));
    CHECK(vals[1] == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
}
