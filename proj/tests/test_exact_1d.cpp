#include <doctest.h>

#include <cmath>

#include "riesz_lake/dynamics.hpp"
#include "riesz_lake/error.hpp"
#include "riesz_lake/exact_1d.hpp"

using namespace riesz_lake;

TEST_CASE("critical positions") {
    CHECK(critical_position(1, 1) == 0.0);
    CHECK(critical_position(1, 4) == doctest::Approx(-0.75));
    CHECK(critical_position(4, 4) == doctest::Approx(0.75));
}

TEST_CASE("the critical point is an equilibrium of the flow") {
    const auto init = critical_point_init(17, 0.3);
    const auto a = total_force(to_state(init), exact_kernel(), exact_confinement());
    for (double v : a) CHECK(std::abs(v) < 1e-12);
    const auto later = exact_state(init, 2.5);
    CHECK(state_error(later, to_state(init)).position == 0.0);
}

TEST_CASE("exact state at t = 0 returns the data unchanged") {
    const auto init = oscillating_init(9, 0.1);
    const auto s = exact_state(init, 0.0);
    CHECK(s.x == init.x0);
    CHECK(s.v == init.v0);
}

TEST_CASE("exact trajectory solves the equations of motion") {
    ExactInit init = oscillating_init(6, 0.4);
    init.v0 = {0.05, -0.02, 0.0, 0.03, -0.04, 0.01};
    REQUIRE(order_preservation_check(init));
    const double t = 0.77, h = 1e-4;
    const auto sm = exact_state(init, t - h), s0 = exact_state(init, t), sp = exact_state(init, t + h);
    const auto a = total_force(s0, exact_kernel(), exact_confinement());
    for (int i = 0; i < 6; ++i) {
        CHECK((sp.x[i] - sm.x[i]) / (2 * h) == doctest::Approx(s0.v[i]).epsilon(1e-7));
        CHECK((sp.x[i] - 2 * s0.x[i] + sm.x[i]) / (h * h) == doctest::Approx(a[i]).epsilon(1e-5));
    }
    // initial velocity is reproduced
    const auto e = exact_state(init, 1e-7);
    CHECK((e.x[0] - init.x0[0]) / 1e-7 == doctest::Approx(init.v0[0]).epsilon(1e-4));
}

TEST_CASE("period of the oscillation") {
    const double eps = 0.2;
    const auto init = oscillating_init(5, eps);
    const double period = 2 * 3.141592653589793 * eps / std::sqrt(2.0);
    CHECK(state_error(exact_state(init, period), to_state(init)).position < 1e-14);
    const auto half = exact_state(init, period / 2);
    for (int i = 1; i <= 5; ++i) CHECK(half.x[i - 1] == doctest::Approx(critical_position(i, 5) - 0.2));
}

TEST_CASE("order preservation condition") {
    ExactInit init = oscillating_init(4, 0.1);
    CHECK(order_preservation_check(init));
    init.v0[1] = 1.0;
    CHECK_FALSE(order_preservation_check(init));
    CHECK_THROWS_AS(exact_state(init, 0.1), PreconditionError);
}

TEST_CASE("current amplitude dichotomy") {
    for (int N : {16, 64, 256, 1024}) {
        CHECK(exact_current_amplitude(N, 1.0 / N) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
        CHECK(exact_current_amplitude(N, 1.0 / std::sqrt(N)) ==
              doctest::Approx(std::sqrt(2.0) / std::sqrt(N)).epsilon(1e-14));
    }
    const auto init = oscillating_init(8, 0.5);
    const double t = 0.3;
    const auto c = exact_current(init, t);
    CHECK(c.amplitude == doctest::Approx(exact_current_amplitude(8, 0.5)));
    CHECK(c.value_factor == doctest::Approx(-c.amplitude * std::sin(std::sqrt(2.0) * t / 0.5)));
    CHECK_THROWS(exact_current(critical_point_init(8, 0.5), t));
}

TEST_CASE("setup checks") {
    CHECK_NOTHROW(require_exact_setup(exact_kernel(), exact_confinement(), 0.0));
    CHECK_THROWS(require_exact_setup(exact_kernel(), exact_confinement(), 0.1));
    CHECK_THROWS(require_exact_setup(Kernel::log(1), exact_confinement(), 0.0));
    CHECK_THROWS(require_exact_setup(exact_kernel(), Confinement::quadratic(1, 2.0), 0.0));
}
