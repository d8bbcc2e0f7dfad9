#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riesz_lake/background.hpp"
#include "riesz_lake/dynamics.hpp"
#include "riesz_lake/grid.hpp"
#include "riesz_lake/kernel.hpp"
#include "riesz_lake/lake.hpp"

namespace riesz_lake {

// mu_V + eps^2 U: the equilibrium measure corrected by a zero-mean periodic
// field. Without a corrector this is just mu_V.
class EffectiveBackground {
public:
    explicit EffectiveBackground(BackgroundDensity base, double epsilon = 1.0,
                                 std::optional<GridField> corrector = std::nullopt);

    const BackgroundDensity& base() const { return base_; }
    double epsilon() const { return epsilon_; }
    const GridField* corrector() const { return corrector_ ? &*corrector_ : nullptr; }
    int dim() const { return base_.dim(); }

    double density(std::span<const double> x) const;
    // ||mu_V + eps^2 U||_inf (grid maximum when a corrector is present).
    double sup_norm() const;
    double total_mass() const;
    // Characteristic function of the combined measure at a physical wavevector.
    std::complex<double> fourier(std::span<const double> k) const;

    // Throws PreconditionError unless eps^2 < ||mu_V||_inf / (2 ||U||_inf).
    void check_smallness() const;

private:
    BackgroundDensity base_;
    double epsilon_;
    std::optional<GridField> corrector_;
    std::shared_ptr<const Spectrum> corrector_hat_;
};

struct DiagnosticsRecord {
    double t = 0.0;
    double kinetic_mod = 0.0;
    double F_N = 0.0;
    double zeta_sum = 0.0;
    double H_N = 0.0;
    double script_H = 0.0;
    double micro_E = 0.0;
    double hneg_kappa = 0.0;
    double log_correction = 0.0;
    // Sobolev penalty of the regular-kernel energy (0 for the confined energy).
    double penalty = 0.0;
};

// Modulated potential energy
//   (1/2N^2) sum_{i != j} g(x_i - x_j) - (1/N) sum h^mu(x_i) + (1/2) iint g dmu dmu.
// Torus kernels use (1/2L^d) sum_k ghat |S(k) - mu(k)|^2 - g(0)/(2N); with
// `with_diagonal` the g(0)/(2N) term is kept (smooth kernels only).
double f_n(std::span<const double> positions, int dim, const EffectiveBackground& mu, const Kernel& kernel,
           bool with_diagonal = false);

// U = (-Delta)^{(d-2-s)/2} div(dtu + gamma u + u . grad u) for Riesz-type
// kernels; for other torus kernels Uhat = (i k . what) / (|k|^2 ghat(k)).
GridField corrector(const VectorGridField& u, const VectorGridField& dtu, double gamma, const Kernel& kernel);
GridField corrector(const VelocityField& field, const Kernel& kernel);

// ( sum_{|m| <= K_max} (1 + |k|^2)^-kappa |muhat_N(k) - muhat(k)|^2 )^(1/2), k = 2 pi m / L.
double sobolev_neg_norm(std::span<const double> positions, int dim, const EffectiveBackground& mu, double kappa,
                        int K_max, double L);

// Lower-bound inequality F_N + log(N ||mu||)/(2dN) 1_{s=0} >= -C ||mu||^{s/d} N^{s/d-1}.
struct LowerBoundResult {
    bool passes = false;
    double margin = 0.0;
};

double lower_bound_scale(int N, double s, int d, double mu_sup);
double log_correction_term(int N, double s, int d, double mu_sup);
LowerBoundResult lower_bound_check(double F_N_value, int N, double s, int d, double mu_sup, bool log_corrected,
                                   double C);

// A kernel/background pair on which the constant C is calibrated.
struct CalibrationCase {
    std::string key;
    Kernel kernel;
    BackgroundDensity mu;
};

// Registered whole-space cases (d, s) in {(1,-1), (2,0), (2,1), (3,1)}.
CalibrationCase calibration_case(int d, double s);
// Torus Riesz case with uniform background.
CalibrationCase torus_calibration_case(int d, double s, double L, int k_max);
std::string calibration_key(const Kernel& kernel, const BackgroundDensity& mu);

// Random configurations: iid from mu, iid from a ball 1.5 times wider (or the
// whole torus), and jittered lattices. N drawn from [N_min, N_max].
std::vector<std::vector<double>> lower_bound_corpus(const CalibrationCase& c, int count, std::uint64_t seed,
                                                    int N_min = 2, int N_max = 64);

// Normalized deficit -(F_N + log term) / (||mu||^{s/d} N^{s/d-1}).
double lower_bound_deficit(double F, int N, double s, int d, double mu_sup);

struct CalibrationResult {
    double C = 0.0;
    double max_deficit = 0.0;
    int configurations = 0;
};

// Twice the largest deficit over the corpus, floored at 0.
CalibrationResult calibrate_lower_bound_constant(const CalibrationCase& c, int count = 1000,
                                                 std::uint64_t seed = 20240611);

// Frozen table value, if the key is registered.
std::optional<double> frozen_lower_bound_constant(const std::string& key);
// Frozen value when available, otherwise calibrated once and memoized.
double lower_bound_constant(const Kernel& kernel, const BackgroundDensity& mu);

struct DiagnosticsOptions {
    // Lower-bound constant; NaN selects lower_bound_constant().
    double C = std::numeric_limits<double>::quiet_NaN();
    // Sobolev exponent; NaN selects d - s + d/2 + 1.
    double kappa = std::numeric_limits<double>::quiet_NaN();
    int K_max = 16;
    // Box side for the Sobolev distance; NaN selects the torus period or twice the support diameter.
    double L = std::numeric_limits<double>::quiet_NaN();
    bool compute_micro_energy = true;
};

// Confined total modulated energy and the log-corrected quantity script_H.
DiagnosticsRecord total_modulated_energy(const ParticleState& state, const VelocityFunction& u,
                                         const EffectiveBackground& mu, const Confinement& V, const Kernel& kernel,
                                         const DiagnosticsOptions& opts = {});

// Smooth-kernel energy: kinetic + F_N(with diagonal)/eps^2 + ||mu_N - mu||^2_{H^{-kappa/2}} / (2 eps^2),
// the Sobolev term summed over |m| <= max(K_max, kernel k_max). script_H equals H_N.
DiagnosticsRecord regular_total_energy(const ParticleState& state, const VelocityFunction& u,
                                       const EffectiveBackground& mu, const Kernel& kernel, double kappa,
                                       int K_max = 0);

// Interpolated u at particle positions, for use as a VelocityFunction.
VelocityFunction velocity_function(const VelocityField& field);

}  // namespace riesz_lake
