#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace riesz_lake {

enum class KernelFamily { Riesz, Log, OneDCoulomb, TorusSpectral };

// One Fourier coefficient of a torus kernel, indexed by integer wave index m
// (physical wavevector 2*pi*m/L).
struct WaveMode {
    std::array<int, 3> m{0, 0, 0};
    double value = 0.0;
};

// Pairwise interaction g.
//
// Whole-space families:
//   Riesz(s)     g(x) = |x|^-s / s,  d-2 <= s < d, s != 0
//   Log          g(x) = -log|x|      (the s = 0 member)
//   OneDCoulomb  g(x) = -2|x|        (d = 1, s = -1)
// Torus family:
//   TorusSpectral  g(x) = L^-d sum_k ghat(k) e^{i k.x}, a zero-average
//   truncated Fourier series; h^f = g * f then acts as the multiplier ghat(D).
//
// On periodic grids the whole-space Riesz family is represented by the
// multiplier |k|^-(d-s) (normalizing constant taken as 1).
class Kernel {
public:
    static Kernel riesz(double s, int dim);
    static Kernel log(int dim);
    static Kernel one_d_coulomb();
    // Explicit coefficients; they must be nonnegative, symmetric under
    // m -> -m and vanish at m = 0. `riesz_s` tags kernels that stand in for a
    // Riesz interaction (used by scaling laws and the corrector).
    static Kernel torus_spectral(int dim, double L, std::vector<WaveMode> coeffs, double kappa,
                                 std::optional<double> riesz_s = std::nullopt);
    // Riesz multiplier |k|^-(d-s) truncated to 0 < |m| <= k_max.
    static Kernel torus_riesz(double s, int dim, double L, int k_max);

    // Returns a copy evaluating singular kernels at max(|x|, r).
    Kernel with_min_distance(double r) const;

    KernelFamily family() const { return family_; }
    int dim() const { return dim_; }
    // Riesz exponent used for scaling laws, if the kernel has one.
    std::optional<double> riesz_exponent() const;
    double s() const;
    bool is_log_case() const;
    bool singular() const { return family_ != KernelFamily::TorusSpectral && min_distance_ == 0.0; }
    bool periodic() const { return family_ == KernelFamily::TorusSpectral; }
    double period() const { return L_; }
    double kappa() const { return kappa_; }
    double min_distance() const { return min_distance_; }
    int k_max() const { return k_max_; }

    double eval(std::span<const double> x) const;
    // Writes grad g(x) into out[0..dim).
    void eval_grad(std::span<const double> x, std::span<double> out) const;
    std::vector<double> grad(std::span<const double> x) const;

    // ghat at a physical wavevector (length dim). Zero at k = 0.
    double multiplier(std::span<const double> k) const;
    // TorusSpectral only: coefficient at integer wave index, 0 when absent.
    double coefficient(const std::array<int, 3>& m) const;
    // TorusSpectral only: one representative per {m, -m} pair.
    const std::vector<WaveMode>& half_modes() const { return half_modes_; }
    // TorusSpectral only: g(0) = L^-d sum_k ghat(k).
    double value_at_origin() const;

    std::string describe() const;

private:
    Kernel() = default;

    KernelFamily family_ = KernelFamily::Riesz;
    int dim_ = 1;
    double s_ = 0.0;
    double min_distance_ = 0.0;
    // torus data
    double L_ = 0.0;
    double kappa_ = 0.0;
    int k_max_ = 0;
    std::optional<double> torus_s_;
    std::vector<WaveMode> half_modes_;
};

// S(k) = (1/N) sum_j e^{-i k.x_j} over the kernel's half modes, in the same order.
std::vector<std::complex<double>> structure_factor(const Kernel& kernel, std::span<const double> positions,
                                                   int dim);

}  // namespace riesz_lake
