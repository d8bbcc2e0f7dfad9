#include <doctest.h>

#include <cmath>
#include <numbers>

#include "riesz_lake/error.hpp"
#include "riesz_lake/kernel.hpp"

using namespace riesz_lake;

namespace {
constexpr double pi = std::numbers::pi;

void check_gradient(const Kernel& g, std::vector<double> x) {
    const auto grad = g.grad(x);
    for (std::size_t a = 0; a < x.size(); ++a) {
        auto xp = x, xm = x;
        const double h = 1e-6;
        xp[a] += h;
        xm[a] -= h;
        CHECK(grad[a] == doctest::Approx((g.eval(xp) - g.eval(xm)) / (2 * h)).epsilon(1e-7));
    }
}
}  // namespace

TEST_CASE("whole-space kernel values") {
    const double p2[2] = {3.0, 4.0};
    CHECK(Kernel::riesz(1.0, 2).eval(p2) == doctest::Approx(0.2));
    CHECK(Kernel::riesz(0.5, 2).eval(p2) == doctest::Approx(2.0 / std::sqrt(5.0)));
    CHECK(Kernel::log(2).eval(p2) == doctest::Approx(-std::log(5.0)));
    const double p1[1] = {-1.5};
    CHECK(Kernel::one_d_coulomb().eval(p1) == doctest::Approx(-3.0));
    const double p3[3] = {1.0, 2.0, 2.0};
    CHECK(Kernel::riesz(1.0, 3).eval(p3) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("kernel gradients match finite differences") {
    check_gradient(Kernel::riesz(1.0, 2), {0.7, -1.2});
    check_gradient(Kernel::riesz(1.0, 3), {0.3, 0.5, -0.4});
    check_gradient(Kernel::log(2), {-0.9, 0.2});
    check_gradient(Kernel::one_d_coulomb(), {0.8});
    check_gradient(Kernel::torus_riesz(0.0, 2, 2 * pi, 6), {1.1, 2.3});
}

TEST_CASE("singular kernels reject the origin") {
    const double z[2] = {0.0, 0.0};
    CHECK_THROWS_AS(Kernel::riesz(1.0, 2).eval(z), SingularityError);
    CHECK_THROWS_AS(Kernel::log(2).grad(z), SingularityError);
    const Kernel soft = Kernel::riesz(1.0, 2).with_min_distance(0.5);
    CHECK(soft.eval(z) == doctest::Approx(2.0));
    CHECK_FALSE(soft.singular());
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(Kernel::riesz(2.0, 2), InvalidKernelError);
    CHECK_THROWS_AS(Kernel::riesz(-0.5, 2), InvalidKernelError);
    CHECK_THROWS_AS(Kernel::torus_riesz(0.0, 2, 2 * pi, 0), InvalidKernelError);
    CHECK_THROWS_AS(Kernel::torus_spectral(1, 1.0, {{{1, 0, 0}, -1.0}}, 0.0), InvalidKernelError);
    CHECK_THROWS_AS(Kernel::torus_spectral(1, 1.0, {{{0, 0, 0}, 1.0}}, 0.0), InvalidKernelError);
    CHECK_THROWS_AS(Kernel::riesz(1.0, 2).with_min_distance(-1.0), InvalidKernelError);
}

TEST_CASE("torus Riesz multiplier is |k|^-(d-s)") {
    const Kernel g = Kernel::torus_riesz(0.0, 2, 2 * pi, 16);
    const double k[2] = {3.0, 4.0};
    CHECK(g.multiplier(k) == doctest::Approx(1.0 / 25.0));
    const double k0[2] = {0.0, 0.0};
    CHECK(g.multiplier(k0) == 0.0);
    const Kernel h = Kernel::torus_riesz(1.0, 3, 2 * pi, 4);
    const double k3[3] = {1.0, 2.0, 2.0};
    CHECK(h.multiplier(k3) == doctest::Approx(1.0 / 9.0));
    CHECK(g.riesz_exponent().value() == 0.0);
}

TEST_CASE("torus kernel evaluates its cosine series") {
    const double L = 3.0;
    const Kernel g = Kernel::torus_spectral(1, L, {{{1, 0, 0}, 2.0}, {{-1, 0, 0}, 2.0}, {{3, 0, 0}, 0.5}, {{-3, 0, 0}, 0.5}},
                                            0.0);
    const double x[1] = {0.37};
    const double expect = (2 * 2.0 * std::cos(2 * pi * x[0] / L) + 2 * 0.5 * std::cos(6 * pi * x[0] / L)) / L;
    CHECK(g.eval(x) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(g.value_at_origin() == doctest::Approx(5.0 / L));
    CHECK(g.coefficient({3, 0, 0}) == 0.5);
    CHECK(g.coefficient({2, 0, 0}) == 0.0);
    CHECK(g.half_modes().size() == 2);
}

TEST_CASE("torus kernel is periodic") {
    const Kernel g = Kernel::torus_riesz(0.5, 2, 2.0, 8);
    const double a[2] = {0.3, 0.45};
    const double b[2] = {2.3, -1.55};
    CHECK(g.eval(a) == doctest::Approx(g.eval(b)).epsilon(1e-12));
}

TEST_CASE("structure factor") {
    const Kernel g = Kernel::torus_riesz(0.0, 1, 2 * pi, 4);
    const std::vector<double> x{0.0, pi};
    const auto S = structure_factor(g, x, 1);
    REQUIRE(S.size() == g.half_modes().size());
    for (std::size_t q = 0; q < S.size(); ++q) {
        const int m = g.half_modes()[q].m[0];
        CHECK(S[q].real() == doctest::Approx((1.0 + std::cos(pi * m)) / 2.0));
        CHECK(std::abs(S[q].imag()) < 1e-15);
    }
}
