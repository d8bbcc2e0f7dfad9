#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "riesz_lake/grid.hpp"

using namespace riesz_lake;

namespace {
constexpr double pi = std::numbers::pi;

double max_diff(const GridField& a, const GridField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}
}  // namespace

TEST_CASE("fft round trip") {
    for (int dim = 1; dim <= 3; ++dim) {
        const GridSpec spec{dim, dim == 3 ? 8 : 16, 3.0};
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-1, 1);
        GridField f(spec);
        for (double& v : f.values) v = u(rng);
        const GridField g = fft_inverse(fft_forward(f));
        CHECK(max_diff(f, g) < 1e-14);
    }
}

TEST_CASE("spectral derivatives of trigonometric data are exact") {
    const GridSpec spec{2, 32, 2 * pi};
    const auto f = GridField::from_function(spec, [](auto x) { return std::sin(3 * x[0]) * std::cos(2 * x[1]); });
    const auto fx = GridField::from_function(spec, [](auto x) { return 3 * std::cos(3 * x[0]) * std::cos(2 * x[1]); });
    const auto fy = GridField::from_function(spec, [](auto x) { return -2 * std::sin(3 * x[0]) * std::sin(2 * x[1]); });
    CHECK(max_diff(derivative(f, 0), fx) < 1e-12);
    CHECK(max_diff(derivative(f, 1), fy) < 1e-12);
    const GridField lap = divergence(gradient(f));
    CHECK(max_diff(lap, -13.0 * f) < 1e-11);
}

TEST_CASE("derivative honours the period") {
    const GridSpec spec{1, 16, 4.0};
    const auto f = GridField::from_function(spec, [](auto x) { return std::sin(pi * x[0] / 2); });
    const auto df = GridField::from_function(spec, [](auto x) { return pi / 2 * std::cos(pi * x[0] / 2); });
    CHECK(max_diff(derivative(f, 0), df) < 1e-13);
}

TEST_CASE("Nyquist mode is dropped by the derivative") {
    const GridSpec spec{1, 8, 2 * pi};
    const auto f = GridField::from_function(spec, [](auto x) { return std::cos(4 * x[0]); });
    CHECK(derivative(f, 0).max_abs() < 1e-13);
}

TEST_CASE("inner products and norms") {
    const GridSpec spec{2, 16, 2 * pi};
    const auto s = GridField::from_function(spec, [](auto x) { return std::sin(x[0]); });
    CHECK(inner_product(s, s) == doctest::Approx(2 * pi * pi).epsilon(1e-13));
    CHECK(l2_norm(s) == doctest::Approx(std::sqrt(2.0) * pi).epsilon(1e-13));
    CHECK(s.integral() == doctest::Approx(0.0).epsilon(1e-13));
    const auto one = GridField(spec, 1.0);
    CHECK(one.integral() == doctest::Approx(4 * pi * pi));
}

TEST_CASE("fractional laplacian multiplies by |k|^(2 order)") {
    const GridSpec spec{1, 16, 2 * pi};
    const auto c = GridField::from_function(spec, [](auto x) { return std::cos(2 * x[0]); });
    CHECK(max_diff(fractional_laplacian_apply(1.0, c), 4.0 * c) < 1e-13);
    CHECK(max_diff(fractional_laplacian_apply(-0.5, c), 0.5 * c) < 1e-13);
}

TEST_CASE("trigonometric interpolant is exact for band-limited data") {
    const GridSpec spec{2, 16, 2 * pi};
    auto fn = [](double x, double y) { return 1.5 + std::cos(x - 2 * y) + 0.25 * std::sin(3 * y); };
    const auto f = GridField::from_function(spec, [&](auto x) { return fn(x[0], x[1]); });
    const TrigInterpolant I(f);
    const double p[2] = {0.3712, 5.1};
    CHECK(I.value(p) == doctest::Approx(fn(p[0], p[1])).epsilon(1e-13));
    const auto g = I.gradient(p);
    CHECK(g[0] == doctest::Approx(-std::sin(p[0] - 2 * p[1])).epsilon(1e-12));
    CHECK(g[1] == doctest::Approx(2 * std::sin(p[0] - 2 * p[1]) + 0.75 * std::cos(3 * p[1])).epsilon(1e-12));
}

TEST_CASE("wave indices and coordinates") {
    const GridSpec spec{2, 8, 2.0};
    CHECK(spec.wave_index(3) == 3);
    CHECK(spec.wave_index(5) == -3);
    CHECK(spec.is_nyquist(4));
    const std::size_t flat = 1 * 8 + 6;
    const auto k = spec.wavevector(flat);
    CHECK(k[0] == doctest::Approx(pi));
    CHECK(k[1] == doctest::Approx(-2 * pi));
    CHECK(spec.wavenumber_sq(flat) == doctest::Approx(5 * pi * pi));
    const auto x = spec.coordinates(flat);
    CHECK(x[0] == doctest::Approx(0.25));
    CHECK(x[1] == doctest::Approx(1.5));
}
