#include "riesz_lake/modulated_energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "riesz_lake/equilibrium.hpp"
#include "riesz_lake/error.hpp"
#include "riesz_lake/numeric.hpp"
#include "riesz_lake/potential.hpp"

namespace riesz_lake {

namespace {

constexpr double kPi = std::numbers::pi;

// Integer wave indices with 0 < |m| <= K, one per {m, -m} pair.
std::vector<std::array<int, 3>> half_ball_modes(int d, int K) {
    std::vector<std::array<int, 3>> out;
    const int ymax = d >= 2 ? K : 0;
    const int zmax = d >= 3 ? K : 0;
    for (int i = -K; i <= K; ++i)
        for (int j = -ymax; j <= ymax; ++j)
            for (int l = -zmax; l <= zmax; ++l) {
                const int m2 = i * i + j * j + l * l;
                if (m2 == 0 || m2 > K * K) continue;
                const std::array<int, 3> m{i, j, l};
                bool canonical = false;
                for (int v : m)
                    if (v != 0) {
                        canonical = v > 0;
                        break;
                    }
                if (canonical) out.push_back(m);
            }
    return out;
}

// (1/N) sum_j e^{-i k.x_j} for k = 2 pi m / L over the given modes.
std::vector<Complex> empirical_transform(std::span<const double> x, int d, double L,
                                         const std::vector<std::array<int, 3>>& modes) {
    std::vector<Complex> S(modes.size(), 0.0);
    const std::size_t N = x.size() / d;
    if (N == 0) return S;
    int K = 0;
    for (const auto& m : modes)
        for (int a = 0; a < d; ++a) K = std::max(K, std::abs(m[a]));
    const double base = 2.0 * kPi / L;
    std::array<std::vector<Complex>, 3> tab;
    for (auto& t : tab) t.resize(2 * K + 1);
    std::vector<CompensatedSum> re(modes.size()), im(modes.size());
    for (std::size_t j = 0; j < N; ++j) {
        for (int a = 0; a < d; ++a)
            for (int m = -K; m <= K; ++m) tab[a][m + K] = std::polar(1.0, -base * m * x[j * d + a]);
        for (std::size_t q = 0; q < modes.size(); ++q) {
            Complex e = tab[0][modes[q][0] + K];
            for (int a = 1; a < d; ++a) e *= tab[a][modes[q][a] + K];
            re[q] += e.real();
            im[q] += e.imag();
        }
    }
    for (std::size_t q = 0; q < modes.size(); ++q)
        S[q] = Complex(re[q].value(), im[q].value()) / static_cast<double>(N);
    return S;
}

std::array<double, 3> physical(const std::array<int, 3>& m, int d, double L) {
    std::array<double, 3> k{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) k[a] = 2.0 * kPi / L * m[a];
    return k;
}

// Memo for whole-space self energies (quadrature can be slow).
double cached_self_energy(const Kernel& kernel, const BackgroundDensity& mu) {
    if (has_closed_form_potential(kernel, mu)) return self_energy(kernel, mu);
    static std::mutex m;
    static std::map<std::string, double> memo;
    char buf[64];
    std::snprintf(buf, sizeof buf, "|%.17g|%d", mu.support().radius, static_cast<int>(mu.kind()));
    const std::string key = kernel.describe() + mu.name() + buf;
    {
        std::lock_guard lock(m);
        if (const auto it = memo.find(key); it != memo.end()) return it->second;
    }
    const double v = self_energy(kernel, mu);
    std::lock_guard lock(m);
    memo[key] = v;
    return v;
}

double effective_s(const Kernel& kernel) { return kernel.riesz_exponent().value_or(0.0); }

}  // namespace

EffectiveBackground::EffectiveBackground(BackgroundDensity base, double epsilon, std::optional<GridField> corrector)
    : base_(std::move(base)), epsilon_(epsilon), corrector_(std::move(corrector)) {
    if (!(epsilon_ > 0.0)) throw PreconditionError("effective background: epsilon must be positive");
    if (corrector_) {
        if (!base_.periodic()) throw UnsupportedError("effective background: correctors live on the torus");
        if (corrector_->spec.dim != base_.dim() ||
            std::abs(corrector_->spec.L - base_.support().L) > 1e-12 * base_.support().L)
            throw GridMismatchError("effective background: corrector grid does not match the torus");
        const double m = corrector_->mean();
        if (std::abs(m) > 1e-10 * std::max(1.0, corrector_->max_abs()))
            throw PreconditionError("effective background: corrector mean " + std::to_string(m) + " is not zero");
        corrector_hat_ = std::make_shared<const Spectrum>(fft_forward(*corrector_));
    }
}

double EffectiveBackground::density(std::span<const double> x) const {
    double v = base_.density(x);
    if (corrector_) v += epsilon_ * epsilon_ * TrigInterpolant(*corrector_hat_).value(x);
    return v;
}

double EffectiveBackground::sup_norm() const {
    if (!corrector_) return base_.sup_norm();
    const GridField b = base_.on_grid(corrector_->spec);
    double m = 0.0;
    for (std::size_t i = 0; i < b.values.size(); ++i)
        m = std::max(m, std::abs(b.values[i] + epsilon_ * epsilon_ * corrector_->values[i]));
    return m;
}

double EffectiveBackground::total_mass() const {
    double m = base_.total_mass();
    if (corrector_) m += epsilon_ * epsilon_ * corrector_->integral();
    return m;
}

std::complex<double> EffectiveBackground::fourier(std::span<const double> k) const {
    Complex v = base_.fourier(k);
    if (!corrector_) return v;
    const GridSpec& spec = corrector_->spec;
    const double base = 2.0 * kPi / spec.L;
    std::size_t flat = 0;
    for (int a = 0; a < spec.dim; ++a) {
        const double q = k[a] / base;
        const long m = std::lround(q);
        if (std::abs(q - static_cast<double>(m)) > 1e-9) return v;
        // Modes outside the grid band (or on Nyquist) carry no corrector content.
        if (2 * std::abs(m) >= spec.n) return v;
        const long j = ((m % spec.n) + spec.n) % spec.n;
        flat = flat * spec.n + static_cast<std::size_t>(j);
    }
    return v + epsilon_ * epsilon_ * corrector_hat_->coeffs[flat] * spec.cell_volume();
}

void EffectiveBackground::check_smallness() const {
    if (!corrector_) return;
    const double u = corrector_->max_abs();
    if (u == 0.0) return;
    const double bound = base_.sup_norm() / (2.0 * u);
    if (!(epsilon_ * epsilon_ < bound))
        throw PreconditionError("smallness condition violated: eps^2 = " + std::to_string(epsilon_ * epsilon_) +
                                " >= ||mu_V||_inf / (2 ||U||_inf) = " + std::to_string(bound));
}

double f_n(std::span<const double> positions, int dim, const EffectiveBackground& mu, const Kernel& kernel,
           bool with_diagonal) {
    if (positions.size() % dim != 0) throw PreconditionError("f_n: ragged position list");
    const int N = static_cast<int>(positions.size() / dim);
    if (N == 0) throw PreconditionError("f_n: empty configuration");
    if (kernel.dim() != dim || mu.dim() != dim) throw PreconditionError("f_n: dimension mismatch");
    if (kernel.periodic()) {
        const auto& modes = kernel.half_modes();
        const auto S = structure_factor(kernel, positions, dim);
        const double base = 2.0 * kPi / kernel.period();
        CompensatedSum acc;
        for (std::size_t q = 0; q < modes.size(); ++q) {
            std::array<double, 3> k{0.0, 0.0, 0.0};
            for (int a = 0; a < dim; ++a) k[a] = base * modes[q].m[a];
            const Complex muk = mu.fourier(std::span<const double>(k.data(), dim));
            acc += 2.0 * modes[q].value * std::norm(S[q] - muk);
        }
        double F = acc.value() / (2.0 * std::pow(kernel.period(), dim));
        if (!with_diagonal) F -= kernel.value_at_origin() / (2.0 * N);
        return F;
    }
    if (with_diagonal) throw UnsupportedError("f_n: the diagonal can only be kept for smooth torus kernels");
    if (mu.corrector()) throw UnsupportedError("f_n: correctors require a torus kernel");
    ParticleState s(N, dim, 1.0);
    std::copy(positions.begin(), positions.end(), s.x.begin());
    const double pair = pair_energy(s, kernel);
    const auto h = potential_of_density(kernel, mu.base(), positions);
    return pair - compensated_sum(h) / N + 0.5 * cached_self_energy(kernel, mu.base());
}

GridField corrector(const VectorGridField& u, const VectorGridField& dtu, double gamma, const Kernel& kernel) {
    if (u.empty() || u.size() != dtu.size()) throw GridMismatchError("corrector: component counts differ");
    const GridSpec& spec = u[0].spec;
    for (std::size_t a = 0; a < u.size(); ++a) {
        require_same_grid(spec, u[a].spec, "corrector");
        require_same_grid(spec, dtu[a].spec, "corrector");
    }
    if (kernel.dim() != spec.dim) throw GridMismatchError("corrector: kernel dimension differs from the grid");
    const auto adv = advection(u);
    VectorGridField w(u.size(), GridField(spec));
    for (std::size_t a = 0; a < u.size(); ++a)
        for (std::size_t i = 0; i < w[a].values.size(); ++i)
            w[a].values[i] = dtu[a].values[i] + gamma * u[a].values[i] + adv[a].values[i];
    Spectrum s = fft_forward(divergence(w));
    const auto rs = kernel.riesz_exponent();
    const int d = spec.dim;
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        const double k2 = spec.wavenumber_sq(i);
        if (k2 == 0.0) {
            s.coeffs[i] = 0.0;
            continue;
        }
        if (rs) {
            s.coeffs[i] *= std::pow(k2, 0.5 * (d - 2.0 - *rs));
        } else {
            const auto k = spec.wavevector(i);
            const double gh = kernel.multiplier(std::span<const double>(k.data(), d));
            s.coeffs[i] = gh > 0.0 ? s.coeffs[i] / (k2 * gh) : 0.0;
        }
    }
    return fft_inverse(s);
}

GridField corrector(const VelocityField& field, const Kernel& kernel) {
    return corrector(field.u, field.dtu, field.gamma, kernel);
}

double sobolev_neg_norm(std::span<const double> positions, int dim, const EffectiveBackground& mu, double kappa,
                        int K_max, double L) {
    if (!(L > 0.0)) throw PreconditionError("sobolev_neg_norm: L must be positive");
    const auto modes = half_ball_modes(dim, K_max);
    const auto S = empirical_transform(positions, dim, L, modes);
    CompensatedSum acc;
    // m = 0: both measures have unit mass up to the background's mass error.
    const double zero[3] = {0.0, 0.0, 0.0};
    acc += std::norm(1.0 - mu.fourier(std::span<const double>(zero, dim)));
    for (std::size_t q = 0; q < modes.size(); ++q) {
        const auto k = physical(modes[q], dim, L);
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        const Complex muk = mu.fourier(std::span<const double>(k.data(), dim));
        acc += 2.0 * std::pow(1.0 + k2, -kappa) * std::norm(S[q] - muk);
    }
    return std::sqrt(std::max(acc.value(), 0.0));
}

double lower_bound_scale(int N, double s, int d, double mu_sup) {
    return std::pow(mu_sup, s / d) * std::pow(static_cast<double>(N), s / d - 1.0);
}

double log_correction_term(int N, double s, int d, double mu_sup) {
    if (s != 0.0) return 0.0;
    return std::log(N * mu_sup) / (2.0 * d * N);
}

LowerBoundResult lower_bound_check(double F_N_value, int N, double s, int d, double mu_sup, bool log_corrected,
                                   double C) {
    const double lhs = F_N_value + (log_corrected ? log_correction_term(N, s, d, mu_sup) : 0.0);
    const double margin = lhs + C * lower_bound_scale(N, s, d, mu_sup);
    // Diverging configurations (near-coincident particles) pass.
    if (std::isinf(lhs) && lhs > 0.0) return {true, lhs};
    return {margin >= -1e-12, margin};
}

double lower_bound_deficit(double F, int N, double s, int d, double mu_sup) {
    return -(F + log_correction_term(N, s, d, mu_sup)) / lower_bound_scale(N, s, d, mu_sup);
}

std::string calibration_key(const Kernel& kernel, const BackgroundDensity& mu) {
    char buf[160];
    const double s = effective_s(kernel);
    if (kernel.periodic()) {
        std::snprintf(buf, sizeof buf, "torus,d=%d,s=%g,L=%.6f,K=%d,mu=%s", kernel.dim(), s, kernel.period(),
                      kernel.k_max(), mu.name().c_str());
    } else {
        std::snprintf(buf, sizeof buf, "whole,d=%d,s=%g,mu=%s,R=%.6f", kernel.dim(), s, mu.name().c_str(),
                      mu.support().radius);
    }
    return buf;
}

CalibrationCase calibration_case(int d, double s) {
    auto make = [](Kernel k, BackgroundDensity mu) {
        std::string key = calibration_key(k, mu);
        return CalibrationCase{std::move(key), std::move(k), std::move(mu)};
    };
    if (d == 1 && s == -1.0) return make(Kernel::one_d_coulomb(), BackgroundDensity::uniform_ball(1, 1.0));
    if (d == 2 && s == 0.0) return make(Kernel::log(2), BackgroundDensity::uniform_ball(2, 1.0 / std::sqrt(2.0)));
    if (d == 2 && s == 1.0) return make(Kernel::riesz(1.0, 2), BackgroundDensity::uniform_ball(2, 1.0 / std::sqrt(2.0)));
    if (d == 3 && s == 1.0) return make(Kernel::riesz(1.0, 3), BackgroundDensity::uniform_ball(3, std::cbrt(0.5)));
    throw UnsupportedError("no calibration case registered for d=" + std::to_string(d) + ", s=" + std::to_string(s));
}

CalibrationCase torus_calibration_case(int d, double s, double L, int k_max) {
    Kernel k = Kernel::torus_riesz(s, d, L, k_max);
    BackgroundDensity mu = BackgroundDensity::torus_uniform(d, L);
    std::string key = calibration_key(k, mu);
    return CalibrationCase{std::move(key), std::move(k), std::move(mu)};
}

std::vector<std::vector<double>> lower_bound_corpus(const CalibrationCase& c, int count, std::uint64_t seed, int N_min,
                                                    int N_max) {
    const int d = c.mu.dim();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pickN(N_min, N_max);
    const bool torus = c.mu.periodic();
    const double L = torus ? c.mu.support().L : 0.0;
    const double R = torus ? 0.0 : c.mu.support().radius;

    auto in_ball = [&](double radius, double* p) {
        for (;;) {
            double r2 = 0.0;
            for (int a = 0; a < d; ++a) {
                p[a] = radius * (2.0 * unit(rng) - 1.0);
                r2 += p[a] * p[a];
            }
            if (r2 <= radius * radius) return;
        }
    };

    std::vector<std::vector<double>> corpus;
    corpus.reserve(count);
    for (int c_i = 0; c_i < count; ++c_i) {
        int N = pickN(rng);
        const int kind = c_i % 3;
        std::vector<double> x;
        double p[3];
        if (kind == 0) {
            // iid from mu (uniform backgrounds) or its support
            for (int i = 0; i < N; ++i) {
                if (torus)
                    for (int a = 0; a < d; ++a) p[a] = L * unit(rng);
                else
                    in_ball(R, p);
                x.insert(x.end(), p, p + d);
            }
        } else if (kind == 1) {
            // spread: wider ball, or a clustered half-box on the torus
            for (int i = 0; i < N; ++i) {
                if (torus)
                    for (int a = 0; a < d; ++a) p[a] = 0.5 * L * unit(rng);
                else
                    in_ball(1.5 * R, p);
                x.insert(x.end(), p, p + d);
            }
        } else {
            // jittered lattice; half of them snapped to a perfect n^d count
            int n = std::max(1, static_cast<int>(std::lround(std::pow(N, 1.0 / d))));
            if (unit(rng) < 0.5) N = std::max(N_min, static_cast<int>(std::pow(n, d)));
            const double jitter = unit(rng) < 0.25 ? 0.0 : 0.3 * unit(rng);
            if (torus) {
                n = static_cast<int>(std::ceil(std::pow(N, 1.0 / d) - 1e-12));
                const double h = L / n;
                for (int i = 0; i < N; ++i) {
                    int rem = i;
                    for (int a = d - 1; a >= 0; --a) {
                        p[a] = h * ((rem % n) + 0.5 + jitter * (2.0 * unit(rng) - 1.0));
                        rem /= n;
                    }
                    x.insert(x.end(), p, p + d);
                }
            } else if (d == 1) {
                for (int i = 1; i <= N; ++i) {
                    p[0] = R * ((2.0 * i - 1.0 - N) / N + jitter * (2.0 * unit(rng) - 1.0) / N);
                    x.push_back(p[0]);
                }
            } else {
                const double vol = d == 2 ? kPi * R * R : 4.0 / 3.0 * kPi * R * R * R;
                const double h = std::pow(vol / N, 1.0 / d);
                const int m = static_cast<int>(std::ceil(R / h)) + 1;
                std::vector<std::pair<double, std::array<double, 3>>> pts;
                const int zlo = d == 3 ? -m : 0, zhi = d == 3 ? m : 0;
                for (int i = -m; i <= m; ++i)
                    for (int j = -m; j <= m; ++j)
                        for (int l = zlo; l <= zhi; ++l) {
                            std::array<double, 3> q{h * (i + 0.5), h * (j + 0.5), d == 3 ? h * (l + 0.5) : 0.0};
                            pts.push_back({q[0] * q[0] + q[1] * q[1] + q[2] * q[2], q});
                        }
                std::stable_sort(pts.begin(), pts.end(),
                                 [](const auto& a, const auto& b) { return a.first < b.first; });
                for (int i = 0; i < N; ++i)
                    for (int a = 0; a < d; ++a) x.push_back(pts[i].second[a] + jitter * h * (2.0 * unit(rng) - 1.0));
            }
        }
        corpus.push_back(std::move(x));
    }
    return corpus;
}

CalibrationResult calibrate_lower_bound_constant(const CalibrationCase& c, int count, std::uint64_t seed) {
    const auto corpus = lower_bound_corpus(c, count, seed);
    const int d = c.mu.dim();
    const double s = effective_s(c.kernel);
    const EffectiveBackground mu(c.mu);
    const double sup = mu.sup_norm();
    std::vector<double> deficit(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) {
        const int N = static_cast<int>(corpus[i].size() / d);
        deficit[i] = lower_bound_deficit(f_n(corpus[i], d, mu, c.kernel), N, s, d, sup);
    });
    CalibrationResult r;
    r.configurations = static_cast<int>(corpus.size());
    r.max_deficit = deficit.empty() ? 0.0 : *std::max_element(deficit.begin(), deficit.end());
    r.C = std::max(0.0, 2.0 * r.max_deficit);
    return r;
}

std::optional<double> frozen_lower_bound_constant(const std::string& key) {
    // Produced by calibrate_lower_bound_constant(case, 1000, 20240611).
    static const std::map<std::string, double> table = {
        {"whole,d=1,s=-1,mu=uniform_ball,R=1.000000", 0.0},
        {"whole,d=2,s=0,mu=uniform_ball,R=0.707107", 1.2930886794658858},
        {"whole,d=2,s=1,mu=uniform_ball,R=0.707107", 3.940541646563156},
        {"whole,d=3,s=1,mu=uniform_ball,R=0.793701", 2.7679176445398723},
        {"torus,d=1,s=0,L=1.000000,K=16,mu=torus_uniform", 0.0},
        {"torus,d=2,s=0,L=6.283185,K=16,mu=torus_uniform", 1.5450635876492189},
        {"torus,d=2,s=1,L=6.283185,K=16,mu=torus_uniform", 0.5766726134444885},
    };
    if (const auto it = table.find(key); it != table.end()) return it->second;
    return std::nullopt;
}

double lower_bound_constant(const Kernel& kernel, const BackgroundDensity& mu) {
    const std::string key = calibration_key(kernel, mu);
    if (const auto c = frozen_lower_bound_constant(key)) return *c;
    static std::mutex m;
    static std::map<std::string, double> memo;
    {
        std::lock_guard lock(m);
        if (const auto it = memo.find(key); it != memo.end()) return it->second;
    }
    const double C = calibrate_lower_bound_constant(CalibrationCase{key, kernel, mu}).C;
    std::lock_guard lock(m);
    memo[key] = C;
    return C;
}

DiagnosticsRecord total_modulated_energy(const ParticleState& state, const VelocityFunction& u,
                                         const EffectiveBackground& mu, const Confinement& V, const Kernel& kernel,
                                         const DiagnosticsOptions& opts) {
    state.validate();
    const int N = state.N;
    const int d = state.d;
    if (N == 0) throw PreconditionError("total_modulated_energy: empty state");
    const double eps2 = state.epsilon * state.epsilon;
    DiagnosticsRecord rec;
    rec.t = state.t;

    CompensatedSum kin;
    std::vector<double> ux(d, 0.0);
    for (int i = 0; i < N; ++i) {
        if (u)
            u(state.pos(i), ux);
        else
            std::fill(ux.begin(), ux.end(), 0.0);
        for (int a = 0; a < d; ++a) {
            const double dv = state.v[static_cast<std::size_t>(i) * d + a] - ux[a];
            kin += dv * dv;
        }
    }
    rec.kinetic_mod = kin.value() / (2.0 * N);
    rec.F_N = f_n(state.x, d, mu, kernel);

    std::vector<double> z(N);
    parallel_for(N, [&](std::size_t i) { z[i] = zeta(V, mu.base(), kernel, state.pos(static_cast<int>(i))); });
    rec.zeta_sum = compensated_sum(z) / N;
    rec.H_N = rec.kinetic_mod + rec.F_N / eps2 + rec.zeta_sum / eps2;

    const auto rs = kernel.riesz_exponent();
    const double sup = mu.sup_norm();
    if (rs) {
        const double s = *rs;
        rec.log_correction = log_correction_term(N, s, d, sup) / eps2;
        const double C = std::isnan(opts.C) ? lower_bound_constant(kernel, mu.base()) : opts.C;
        rec.script_H = rec.H_N + rec.log_correction + C * lower_bound_scale(N, s, d, sup) / eps2;
    } else {
        rec.script_H = rec.H_N;
    }

    const double s = effective_s(kernel);
    const double kappa = std::isnan(opts.kappa) ? d - s + 0.5 * d + 1.0 : opts.kappa;
    double L = opts.L;
    if (std::isnan(L)) L = mu.base().periodic() ? mu.base().support().L : 2.0 * mu.base().support().diameter();
    rec.hneg_kappa = sobolev_neg_norm(state.x, d, mu, kappa, opts.K_max, L);
    if (opts.compute_micro_energy) rec.micro_E = micro_energy(state, kernel, V);
    return rec;
}

DiagnosticsRecord regular_total_energy(const ParticleState& state, const VelocityFunction& u,
                                       const EffectiveBackground& mu, const Kernel& kernel, double kappa, int K_max) {
    if (!kernel.periodic()) throw InvalidKernelError("regular_total_energy: needs a torus spectral kernel");
    for (const auto& m : kernel.half_modes())
        if (m.value < 0.0) throw InvalidKernelError("regular_total_energy: kernel is not positive definite");
    state.validate();
    const int N = state.N;
    const int d = state.d;
    const double eps2 = state.epsilon * state.epsilon;
    DiagnosticsRecord rec;
    rec.t = state.t;
    CompensatedSum kin;
    std::vector<double> ux(d, 0.0);
    for (int i = 0; i < N; ++i) {
        if (u)
            u(state.pos(i), ux);
        else
            std::fill(ux.begin(), ux.end(), 0.0);
        for (int a = 0; a < d; ++a) {
            const double dv = state.v[static_cast<std::size_t>(i) * d + a] - ux[a];
            kin += dv * dv;
        }
    }
    rec.kinetic_mod = kin.value() / (2.0 * N);
    rec.F_N = f_n(state.x, d, mu, kernel, true);

    // ||f||^2_{H^{-kappa/2}} = L^-d sum_k (1 + |k|^2)^{-kappa/2} |f(k)|^2
    const double L = kernel.period();
    const int K = std::max(K_max, kernel.k_max());
    const auto modes = half_ball_modes(d, K);
    const auto S = empirical_transform(state.x, d, L, modes);
    CompensatedSum acc;
    const double zero[3] = {0.0, 0.0, 0.0};
    acc += std::norm(1.0 - mu.fourier(std::span<const double>(zero, d)));
    for (std::size_t q = 0; q < modes.size(); ++q) {
        const auto k = physical(modes[q], d, L);
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        acc += 2.0 * std::pow(1.0 + k2, -0.5 * kappa) * std::norm(S[q] - mu.fourier(std::span<const double>(k.data(), d)));
    }
    const double norm2 = std::max(acc.value(), 0.0) / std::pow(L, d);
    rec.hneg_kappa = std::sqrt(norm2);
    rec.penalty = norm2 / (2.0 * eps2);
    rec.H_N = rec.kinetic_mod + rec.F_N / eps2 + rec.penalty;
    rec.script_H = rec.H_N;
    rec.micro_E = micro_energy(state, kernel, Confinement::zero(d));
    return rec;
}

VelocityFunction velocity_function(const VelocityField& field) {
    auto interp = std::make_shared<std::vector<TrigInterpolant>>(field.interpolants());
    return [interp](std::span<const double> x, std::span<double> out) {
        for (std::size_t a = 0; a < interp->size(); ++a) out[a] = (*interp)[a].value(x);
    };
}

}  // namespace riesz_lake
