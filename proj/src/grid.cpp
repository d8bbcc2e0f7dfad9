#include "riesz_lake/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "riesz_lake/error.hpp"

namespace riesz_lake {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void run_fft(const GridSpec& spec, std::vector<Complex>& data, int sign) {
    std::array<int, 3> dims{spec.n, spec.n, spec.n};
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft(spec.dim, dims.data(), buf, buf, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace

std::size_t GridSpec::size() const {
    std::size_t s = 1;
    for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(n);
    return s;
}

double GridSpec::volume() const { return std::pow(L, dim); }

double GridSpec::cell_volume() const { return std::pow(L / n, dim); }

std::array<int, 3> GridSpec::unflatten(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % n);
        flat /= n;
    }
    return idx;
}

std::array<double, 3> GridSpec::coordinates(std::size_t flat) const {
    const auto idx = unflatten(flat);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) x[a] = idx[a] * spacing();
    return x;
}

std::array<double, 3> GridSpec::wavevector(std::size_t flat) const {
    const auto idx = unflatten(flat);
    const double base = 2.0 * std::numbers::pi / L;
    std::array<double, 3> k{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) k[a] = base * wave_index(idx[a]);
    return k;
}

double GridSpec::wavenumber_sq(std::size_t flat) const {
    const auto k = wavevector(flat);
    return k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
}

bool GridSpec::has_nyquist(std::size_t flat) const {
    const auto idx = unflatten(flat);
    for (int a = 0; a < dim; ++a)
        if (is_nyquist(idx[a])) return true;
    return false;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b)) throw GridMismatchError(std::string(where) + ": grid specs differ");
}

GridField GridField::from_function(const GridSpec& s, const std::function<double(std::span<const double>)>& f) {
    GridField g(s);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const auto x = s.coordinates(i);
        g.values[i] = f(std::span<const double>(x.data(), static_cast<std::size_t>(s.dim)));
    }
    return g;
}

double GridField::mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return values.empty() ? 0.0 : s / static_cast<double>(values.size());
}

double GridField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

VectorGridField zero_vector_field(const GridSpec& s) { return VectorGridField(s.dim, GridField(s)); }

Spectrum fft_forward(const GridField& f) {
    Spectrum out{f.spec, std::vector<Complex>(f.values.begin(), f.values.end())};
    run_fft(f.spec, out.coeffs, FFTW_FORWARD);
    return out;
}

GridField fft_inverse(const Spectrum& s) {
    std::vector<Complex> data = s.coeffs;
    run_fft(s.spec, data, FFTW_BACKWARD);
    GridField out(s.spec);
    const double norm = 1.0 / static_cast<double>(s.spec.size());
    for (std::size_t i = 0; i < data.size(); ++i) out.values[i] = data[i].real() * norm;
    return out;
}

GridField fractional_laplacian_apply(double order, const GridField& field) {
    if (order < 0.0) {
        const double scale = std::max(field.max_abs(), 1e-300);
        if (std::abs(field.mean()) > 1e-12 * scale)
            throw IllPosedError("fractional_laplacian_apply: negative order needs a zero-mean field");
    }
    Spectrum s = fft_forward(field);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        const double k2 = field.spec.wavenumber_sq(i);
        if (k2 == 0.0) {
            if (order != 0.0) s.coeffs[i] = 0.0;
            continue;
        }
        s.coeffs[i] *= std::pow(k2, order);
    }
    return fft_inverse(s);
}

GridField derivative(const GridField& f, int axis) {
    Spectrum s = fft_forward(f);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        const auto idx = f.spec.unflatten(i);
        if (f.spec.is_nyquist(idx[axis])) {
            s.coeffs[i] = 0.0;
            continue;
        }
        const double k = 2.0 * std::numbers::pi / f.spec.L * f.spec.wave_index(idx[axis]);
        s.coeffs[i] *= Complex(0.0, k);
    }
    return fft_inverse(s);
}

VectorGridField gradient(const GridField& f) {
    VectorGridField g;
    g.reserve(f.spec.dim);
    for (int a = 0; a < f.spec.dim; ++a) g.push_back(derivative(f, a));
    return g;
}

GridField divergence(const VectorGridField& v) {
    GridField out(v.at(0).spec);
    for (std::size_t a = 0; a < v.size(); ++a) {
        require_same_grid(out.spec, v[a].spec, "divergence");
        out = out + derivative(v[a], static_cast<int>(a));
    }
    return out;
}

double inner_product(const GridField& a, const GridField& b) {
    require_same_grid(a.spec, b.spec, "inner_product");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * b.values[i];
    return s * a.spec.cell_volume();
}

double l2_norm(const GridField& f) { return std::sqrt(inner_product(f, f)); }

double l2_norm(const VectorGridField& v) {
    double s = 0.0;
    for (const auto& c : v) s += inner_product(c, c);
    return std::sqrt(s);
}

GridField operator+(const GridField& a, const GridField& b) {
    require_same_grid(a.spec, b.spec, "operator+");
    GridField out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += b.values[i];
    return out;
}

GridField operator-(const GridField& a, const GridField& b) {
    require_same_grid(a.spec, b.spec, "operator-");
    GridField out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= b.values[i];
    return out;
}

GridField operator*(double c, const GridField& a) {
    GridField out = a;
    for (double& v : out.values) v *= c;
    return out;
}

GridField pointwise_product(const GridField& a, const GridField& b) {
    require_same_grid(a.spec, b.spec, "pointwise_product");
    GridField out = a;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] *= b.values[i];
    return out;
}

TrigInterpolant::TrigInterpolant(const GridField& f) { build(fft_forward(f)); }

TrigInterpolant::TrigInterpolant(const Spectrum& s) { build(s); }

void TrigInterpolant::build(const Spectrum& s) {
    spec_ = s.spec;
    double cmax = 0.0;
    for (const auto& c : s.coeffs) cmax = std::max(cmax, std::abs(c));
    const double cut = 1e-15 * cmax;
    const double norm = 1.0 / static_cast<double>(s.spec.size());
    modes_.clear();
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        if (std::abs(s.coeffs[i]) <= cut || cmax == 0.0) continue;
        const auto idx = spec_.unflatten(i);
        Mode mode{{0, 0, 0}, s.coeffs[i] * norm, {false, false, false}};
        for (int a = 0; a < spec_.dim; ++a) {
            mode.m[a] = spec_.wave_index(idx[a]);
            mode.nyquist[a] = spec_.is_nyquist(idx[a]);
        }
        modes_.push_back(mode);
    }
}

void TrigInterpolant::axis_tables(std::span<const double> x, std::array<std::vector<Complex>, 3>& tab) const {
    const int half = spec_.n / 2;
    const double base = 2.0 * std::numbers::pi / spec_.L;
    for (int a = 0; a < spec_.dim; ++a) {
        tab[a].resize(static_cast<std::size_t>(2 * half + 1));
        for (int m = -half; m <= half; ++m) tab[a][m + half] = std::polar(1.0, base * m * x[a]);
    }
}

double TrigInterpolant::value(std::span<const double> x) const {
    std::array<std::vector<Complex>, 3> tab;
    axis_tables(x, tab);
    const int half = spec_.n / 2;
    double acc = 0.0;
    for (const auto& mode : modes_) {
        Complex e = mode.c;
        for (int a = 0; a < spec_.dim; ++a) e *= tab[a][mode.m[a] + half];
        acc += e.real();
    }
    return acc;
}

std::array<double, 3> TrigInterpolant::gradient(std::span<const double> x) const {
    std::array<std::vector<Complex>, 3> tab;
    axis_tables(x, tab);
    const int half = spec_.n / 2;
    const double base = 2.0 * std::numbers::pi / spec_.L;
    std::array<double, 3> g{0.0, 0.0, 0.0};
    for (const auto& mode : modes_) {
        Complex e = mode.c;
        for (int a = 0; a < spec_.dim; ++a) e *= tab[a][mode.m[a] + half];
        // d/dx_a of Re(e) = Re(i k_a e) = -k_a Im(e)
        for (int a = 0; a < spec_.dim; ++a)
            if (!mode.nyquist[a]) g[a] -= base * mode.m[a] * e.imag();
    }
    return g;
}

}  // namespace riesz_lake
