#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace riesz_lake {

using Complex = std::complex<double>;

// Uniform periodic grid on [0, L)^dim with n points per axis.
struct GridSpec {
    int dim = 2;
    int n = 64;
    double L = 6.283185307179586;

    std::size_t size() const;
    double spacing() const { return L / n; }
    double volume() const;
    double cell_volume() const;
    // Signed integer wave index along one axis for storage index j.
    int wave_index(int j) const { return j <= n / 2 ? j : j - n; }
    bool is_nyquist(int j) const { return n % 2 == 0 && j == n / 2; }
    // Storage indices (axis 0 slowest) of a flat offset.
    std::array<int, 3> unflatten(std::size_t flat) const;
    std::array<double, 3> coordinates(std::size_t flat) const;
    // Physical wavevector 2*pi*m/L of a flat spectral offset.
    std::array<double, 3> wavevector(std::size_t flat) const;
    double wavenumber_sq(std::size_t flat) const;
    // True when any axis sits on the Nyquist index.
    bool has_nyquist(std::size_t flat) const;

    bool operator==(const GridSpec& o) const { return dim == o.dim && n == o.n && L == o.L; }
};

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

// Real scalar values on a GridSpec.
struct GridField {
    GridSpec spec;
    std::vector<double> values;

    GridField() = default;
    explicit GridField(const GridSpec& s, double fill = 0.0) : spec(s), values(s.size(), fill) {}

    static GridField from_function(const GridSpec& s, const std::function<double(std::span<const double>)>& f);

    double mean() const;
    double max_abs() const;
    // Integral over the torus (trapezoidal, spectrally exact for band-limited data).
    double integral() const { return mean() * spec.volume(); }
};

using VectorGridField = std::vector<GridField>;

VectorGridField zero_vector_field(const GridSpec& s);

// Unnormalized discrete Fourier transform with the same storage layout as the
// grid: F[m] = sum_j f(x_j) exp(-i k_m . x_j).
struct Spectrum {
    GridSpec spec;
    std::vector<Complex> coeffs;
};

Spectrum fft_forward(const GridField& f);
// Inverse transform, normalized by 1/n^dim; the imaginary part is dropped.
GridField fft_inverse(const Spectrum& s);

// Multiplies Fourier mode k by |k|^(2*order). The zero mode is preserved only
// for order == 0; negative orders require a zero-mean field.
GridField fractional_laplacian_apply(double order, const GridField& field);

// Spectral partial derivative along `axis`; the Nyquist mode is dropped.
GridField derivative(const GridField& f, int axis);
VectorGridField gradient(const GridField& f);
GridField divergence(const VectorGridField& v);

// Sum_j a_j b_j * cell volume.
double inner_product(const GridField& a, const GridField& b);
double l2_norm(const GridField& f);
double l2_norm(const VectorGridField& v);

GridField operator+(const GridField& a, const GridField& b);
GridField operator-(const GridField& a, const GridField& b);
GridField operator*(double c, const GridField& a);
GridField pointwise_product(const GridField& a, const GridField& b);

// Band-limited trigonometric interpolant of a grid field, evaluable at
// arbitrary points of the torus. Negligible modes are skipped.
class TrigInterpolant {
public:
    TrigInterpolant() = default;
    explicit TrigInterpolant(const GridField& f);
    explicit TrigInterpolant(const Spectrum& s);

    double value(std::span<const double> x) const;
    std::array<double, 3> gradient(std::span<const double> x) const;
    const GridSpec& spec() const { return spec_; }
    bool empty() const { return modes_.empty(); }

private:
    struct Mode {
        std::array<int, 3> m;
        Complex c;
        std::array<bool, 3> nyquist;
    };
    void build(const Spectrum& s);
    void axis_tables(std::span<const double> x, std::array<std::vector<Complex>, 3>& tab) const;

    GridSpec spec_;
    std::vector<Mode> modes_;
};

}  // namespace riesz_lake
