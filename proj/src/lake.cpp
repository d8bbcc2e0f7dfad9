#include "riesz_lake/lake.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "riesz_lake/error.hpp"

namespace riesz_lake {

namespace {

constexpr double kPi = std::numbers::pi;

// Sum of k_a^2 over axes not sitting on the Nyquist index: the symbol of
// -sum_a D_a D_a with the derivative convention of derivative().
double laplace_symbol(const GridSpec& spec, std::size_t flat) {
    const auto idx = spec.unflatten(flat);
    const double base = 2.0 * kPi / spec.L;
    double s = 0.0;
    for (int a = 0; a < spec.dim; ++a) {
        if (spec.is_nyquist(idx[a])) continue;
        const double k = base * spec.wave_index(idx[a]);
        s += k * k;
    }
    return s;
}

bool keep_two_thirds(const GridSpec& spec, std::size_t flat) {
    const auto idx = spec.unflatten(flat);
    for (int a = 0; a < spec.dim; ++a)
        if (3 * std::abs(spec.wave_index(idx[a])) >= spec.n) return false;
    return true;
}

Complex ik(const GridSpec& spec, std::size_t flat, int axis) {
    const auto idx = spec.unflatten(flat);
    if (spec.is_nyquist(idx[axis])) return 0.0;
    return Complex(0.0, 2.0 * kPi / spec.L * spec.wave_index(idx[axis]));
}

bool uniform_density(const BackgroundDensity& mu) {
    if (mu.kind() == BackgroundDensity::Kind::TorusUniform) return true;
    const GridField* g = mu.grid();
    if (!g) return false;
    const auto [lo, hi] = std::minmax_element(g->values.begin(), g->values.end());
    return *hi - *lo <= 1e-14 * std::max(1.0, std::abs(*hi));
}

GridField mu_on(const BackgroundDensity& mu, const GridSpec& spec) {
    if (!mu.periodic()) throw UnsupportedError("lake solver: mu_V must live on the torus");
    if (std::abs(mu.support().L - spec.L) > 1e-12 * spec.L || mu.dim() != spec.dim)
        throw GridMismatchError("lake solver: mu_V and the velocity grid differ");
    return mu.on_grid(spec);
}

VectorGridField axpy(const VectorGridField& a, double c, const VectorGridField& b) {
    VectorGridField out = a;
    for (std::size_t k = 0; k < out.size(); ++k)
        for (std::size_t i = 0; i < out[k].values.size(); ++i) out[k].values[i] += c * b[k].values[i];
    return out;
}

VectorGridField scaled(double c, const VectorGridField& a) {
    VectorGridField out = a;
    for (auto& f : out)
        for (double& v : f.values) v *= c;
    return out;
}

// Computes p and dtu from u.
void complete_field(VelocityField& f) {
    f.p = pressure_solve(f.mu_V, f.u);
    const auto adv = advection(f.u);
    const auto gp = gradient(f.p);
    f.dtu.assign(f.spec.dim, GridField(f.spec));
    for (int a = 0; a < f.spec.dim; ++a)
        for (std::size_t i = 0; i < f.dtu[a].values.size(); ++i)
            f.dtu[a].values[i] = -f.gamma * f.u[a].values[i] - adv[a].values[i] - gp[a].values[i];
    f.mean.assign(f.spec.dim, 0.0);
    for (int a = 0; a < f.spec.dim; ++a) f.mean[a] = f.u[a].mean();
}

// Vorticity right-hand side -u . grad omega (dealiased) for the 2D solver.
Spectrum vorticity_rhs(const Spectrum& w, const std::vector<double>& mean) {
    const GridSpec& spec = w.spec;
    Spectrum u1{spec, w.coeffs}, u2{spec, w.coeffs}, wx{spec, w.coeffs}, wy{spec, w.coeffs};
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) {
        const double k2 = spec.wavenumber_sq(i);
        const Complex psi = k2 > 0.0 ? w.coeffs[i] / k2 : 0.0;
        u1.coeffs[i] = ik(spec, i, 1) * psi;
        u2.coeffs[i] = -ik(spec, i, 0) * psi;
        wx.coeffs[i] = ik(spec, i, 0) * w.coeffs[i];
        wy.coeffs[i] = ik(spec, i, 1) * w.coeffs[i];
    }
    const GridField a = fft_inverse(u1), b = fft_inverse(u2), c = fft_inverse(wx), e = fft_inverse(wy);
    GridField prod(spec);
    for (std::size_t i = 0; i < prod.values.size(); ++i)
        prod.values[i] = -((a.values[i] + mean[0]) * c.values[i] + (b.values[i] + mean[1]) * e.values[i]);
    Spectrum out = fft_forward(prod);
    for (std::size_t i = 0; i < out.coeffs.size(); ++i)
        if (!keep_two_thirds(spec, i)) out.coeffs[i] = 0.0;
    return out;
}

void check_cfl(const VelocityField& f, double dt) {
    const double c = max_speed(f.u) * dt * f.spec.n / f.spec.L;
    if (c > 0.5) throw StabilityError("CFL number " + std::to_string(c) + " exceeds 0.5");
}

void check_growth(const VelocityField& f) {
    if (f.grad_ref > 0.0 && max_gradient_norm(f.u) > 10.0 * f.grad_ref)
        throw StabilityError("max |grad u| grew more than tenfold; the smooth solution has likely broken down");
}

}  // namespace

VelocityField VelocityField::from_velocity(VectorGridField u, const BackgroundDensity& mu_V, double gamma, double t) {
    if (u.empty()) throw PreconditionError("velocity field needs at least one component");
    VelocityField f{u[0].spec, std::move(u), {}, GridField(), mu_V, gamma, t, 0.0, {}};
    if (static_cast<int>(f.u.size()) != f.spec.dim)
        throw PreconditionError("velocity field: component count differs from grid dimension");
    for (const auto& c : f.u) require_same_grid(f.spec, c.spec, "velocity field");
    mu_on(mu_V, f.spec);
    complete_field(f);
    f.grad_ref = max_gradient_norm(f.u);
    return f;
}

VelocityField VelocityField::zero(const GridSpec& spec, const BackgroundDensity& mu_V, double gamma) {
    return from_velocity(zero_vector_field(spec), mu_V, gamma);
}

std::vector<TrigInterpolant> VelocityField::interpolants() const {
    std::vector<TrigInterpolant> out;
    out.reserve(u.size());
    for (const auto& c : u) out.emplace_back(c);
    return out;
}

VelocityField taylor_green(const GridSpec& spec, double amplitude, double gamma) {
    if (spec.dim != 2) throw PreconditionError("taylor_green: grid must be two-dimensional");
    const double k = 2.0 * kPi / spec.L;
    VectorGridField u{
        GridField::from_function(spec, [&](auto x) { return amplitude * std::sin(k * x[0]) * std::cos(k * x[1]); }),
        GridField::from_function(spec, [&](auto x) { return -amplitude * std::cos(k * x[0]) * std::sin(k * x[1]); })};
    return VelocityField::from_velocity(std::move(u), BackgroundDensity::torus_uniform(2, spec.L), gamma);
}

GridField taylor_green_pressure(const GridSpec& spec, double amplitude) {
    const double k = 2.0 * kPi / spec.L;
    return GridField::from_function(spec, [&](auto x) {
        return amplitude * amplitude * (std::cos(2.0 * k * x[0]) + std::cos(2.0 * k * x[1])) / 4.0;
    });
}

VectorGridField random_solenoidal_2d(const GridSpec& spec, int kmax, double amplitude, unsigned seed) {
    if (spec.dim != 2) throw PreconditionError("random_solenoidal_2d: grid must be two-dimensional");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double base = 2.0 * kPi / spec.L;
    GridField psi(spec);
    for (int mx = -kmax; mx <= kmax; ++mx)
        for (int my = 0; my <= kmax; ++my) {
            if (mx * mx + my * my == 0 || mx * mx + my * my > kmax * kmax) continue;
            if (my == 0 && mx < 0) continue;
            const double a = unit(rng), b = unit(rng);
            const double decay = 1.0 / (mx * mx + my * my);
            for (std::size_t i = 0; i < psi.values.size(); ++i) {
                const auto x = spec.coordinates(i);
                const double ph = base * (mx * x[0] + my * x[1]);
                psi.values[i] += decay * (a * std::cos(ph) + b * std::sin(ph));
            }
        }
    VectorGridField u{derivative(psi, 1), -1.0 * derivative(psi, 0)};
    const double m = max_speed(u);
    return m > 0.0 ? scaled(amplitude / m, u) : u;
}

GridField dealias_two_thirds(const GridField& f) {
    Spectrum s = fft_forward(f);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i)
        if (!keep_two_thirds(f.spec, i)) s.coeffs[i] = 0.0;
    return fft_inverse(s);
}

VectorGridField advection(const VectorGridField& u, bool dealias) {
    const int d = static_cast<int>(u.size());
    std::vector<VectorGridField> grads;
    grads.reserve(d);
    for (int c = 0; c < d; ++c) grads.push_back(gradient(u[c]));
    VectorGridField out(d, GridField(u[0].spec));
    for (int c = 0; c < d; ++c) {
        for (std::size_t i = 0; i < out[c].values.size(); ++i) {
            double s = 0.0;
            for (int a = 0; a < d; ++a) s += u[a].values[i] * grads[c][a].values[i];
            out[c].values[i] = s;
        }
        if (dealias) out[c] = dealias_two_thirds(out[c]);
    }
    return out;
}

GridField weighted_laplacian(const GridField& mu, const GridField& p) {
    GridField out(p.spec);
    for (int a = 0; a < p.spec.dim; ++a) out = out - derivative(pointwise_product(mu, derivative(p, a)), a);
    return out;
}

GridField weighted_poisson_solve(const GridField& mu, const GridField& rhs, double rel_tol, int max_iter) {
    const GridSpec& spec = rhs.spec;
    require_same_grid(spec, mu.spec, "weighted_poisson_solve");
    const double mbar = mu.mean();
    if (!(mu.values.empty()) && *std::min_element(mu.values.begin(), mu.values.end()) <= 0.0)
        throw PreconditionError("weighted Poisson solve: mu must be positive");
    auto precondition = [&](const GridField& r) {
        Spectrum s = fft_forward(r);
        for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
            const double k2 = laplace_symbol(spec, i);
            s.coeffs[i] = k2 > 0.0 ? s.coeffs[i] / (mbar * k2) : 0.0;
        }
        return fft_inverse(s);
    };
    // Project the right-hand side onto the range (drop mean and null modes).
    Spectrum rs = fft_forward(rhs);
    for (std::size_t i = 0; i < rs.coeffs.size(); ++i)
        if (laplace_symbol(spec, i) == 0.0) rs.coeffs[i] = 0.0;
    const GridField b = fft_inverse(rs);
    const double bnorm = l2_norm(b);
    GridField x(spec);
    if (bnorm == 0.0) return x;

    GridField r = b;
    GridField z = precondition(r);
    GridField p = z;
    double rz = inner_product(r, z);
    double rel = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        const GridField Ap = weighted_laplacian(mu, p);
        const double alpha = rz / inner_product(p, Ap);
        x = x + alpha * p;
        r = r - alpha * Ap;
        rel = l2_norm(r) / bnorm;
        if (rel < rel_tol) {
            const double m = x.mean();
            for (double& v : x.values) v -= m;
            return x;
        }
        z = precondition(r);
        const double rz_new = inner_product(r, z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    throw SolverError("weighted Poisson solve did not converge in " + std::to_string(max_iter) + " iterations", rel);
}

GridField pressure_solve(const BackgroundDensity& mu_V, const VectorGridField& u) {
    const GridSpec& spec = u.at(0).spec;
    const GridField mu = mu_on(mu_V, spec);
    const auto adv = advection(u);
    VectorGridField flux;
    for (const auto& c : adv) flux.push_back(pointwise_product(mu, c));
    const GridField rhs = divergence(flux);
    if (uniform_density(mu_V)) {
        const double m = mu.values.at(0);
        Spectrum s = fft_forward(rhs);
        for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
            const double k2 = laplace_symbol(spec, i);
            s.coeffs[i] = k2 > 0.0 ? s.coeffs[i] / (m * k2) : 0.0;
        }
        return fft_inverse(s);
    }
    return weighted_poisson_solve(mu, rhs);
}

VectorGridField weighted_projection(const GridField& mu, const VectorGridField& u) {
    VectorGridField flux;
    for (const auto& c : u) flux.push_back(pointwise_product(mu, c));
    // div(mu (u - grad q)) = 0  <=>  -div(mu grad q) = -div(mu u)
    const GridField q = weighted_poisson_solve(mu, -1.0 * divergence(flux), 1e-12);
    const auto gq = gradient(q);
    VectorGridField out = u;
    for (std::size_t a = 0; a < out.size(); ++a) out[a] = out[a] - gq[a];
    return out;
}

VelocityField euler_step_2d(const VelocityField& field, double dt) {
    if (field.spec.dim != 2) throw PreconditionError("euler_step_2d: d must be 2");
    if (!uniform_density(field.mu_V)) throw PreconditionError("euler_step_2d: mu_V must be uniform");
    if (!(dt > 0.0)) throw PreconditionError("euler_step_2d: dt must be positive");
    check_cfl(field, dt);

    const GridSpec& spec = field.spec;
    const GridField omega = derivative(field.u[1], 0) - derivative(field.u[0], 1);
    const Spectrum w0 = fft_forward(omega);
    const double g = field.gamma;
    const double eh = std::exp(-0.5 * g * dt);
    const double e1 = std::exp(-g * dt);
    std::vector<double> m0 = field.mean;
    auto mean_at = [&](double f) { return std::vector<double>{m0[0] * f, m0[1] * f}; };
    auto combo = [&](const Spectrum& a, double c, const Spectrum& k, double scale) {
        Spectrum out{spec, a.coeffs};
        for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] = scale * (a.coeffs[i] + c * k.coeffs[i]);
        return out;
    };
    // Lawson RK4 in the variable v = e^{gamma (t - t_n)} omega.
    Spectrum k1 = vorticity_rhs(w0, mean_at(1.0));
    Spectrum k2 = vorticity_rhs(combo(w0, 0.5 * dt, k1, eh), mean_at(eh));
    for (auto& c : k2.coeffs) c /= eh;
    Spectrum k3 = vorticity_rhs(combo(w0, 0.5 * dt, k2, eh), mean_at(eh));
    for (auto& c : k3.coeffs) c /= eh;
    Spectrum k4 = vorticity_rhs(combo(w0, dt, k3, e1), mean_at(e1));
    for (auto& c : k4.coeffs) c /= e1;
    Spectrum w1{spec, w0.coeffs};
    for (std::size_t i = 0; i < w1.coeffs.size(); ++i)
        w1.coeffs[i] =
            e1 * (w0.coeffs[i] + dt / 6.0 * (k1.coeffs[i] + 2.0 * k2.coeffs[i] + 2.0 * k3.coeffs[i] + k4.coeffs[i]));

    Spectrum u1{spec, w1.coeffs}, u2{spec, w1.coeffs};
    for (std::size_t i = 0; i < w1.coeffs.size(); ++i) {
        const double k2s = spec.wavenumber_sq(i);
        const Complex psi = k2s > 0.0 ? w1.coeffs[i] / k2s : 0.0;
        u1.coeffs[i] = ik(spec, i, 1) * psi;
        u2.coeffs[i] = -ik(spec, i, 0) * psi;
    }
    const auto mean1 = mean_at(e1);
    VectorGridField u{fft_inverse(u1), fft_inverse(u2)};
    for (int a = 0; a < 2; ++a)
        for (double& v : u[a].values) v += mean1[a];

    VelocityField out = field;
    out.u = std::move(u);
    out.t = field.t + dt;
    complete_field(out);
    out.mean = mean1;
    check_growth(out);
    return out;
}

VelocityField lake_step(const VelocityField& field, double dt) {
    if (!(dt > 0.0)) throw PreconditionError("lake_step: dt must be positive");
    if (field.spec.dim == 2 && uniform_density(field.mu_V)) return euler_step_2d(field, dt);
    check_cfl(field, dt);
    const GridField mu = mu_on(field.mu_V, field.spec);
    auto rhs = [&](const VectorGridField& u) {
        const GridField p = pressure_solve(field.mu_V, u);
        const auto adv = advection(u);
        const auto gp = gradient(p);
        VectorGridField out(u.size(), GridField(field.spec));
        for (std::size_t a = 0; a < u.size(); ++a)
            for (std::size_t i = 0; i < out[a].values.size(); ++i)
                out[a].values[i] = -field.gamma * u[a].values[i] - adv[a].values[i] - gp[a].values[i];
        return out;
    };
    const auto& u0 = field.u;
    const auto k1 = rhs(u0);
    const auto k2 = rhs(weighted_projection(mu, axpy(u0, 0.5 * dt, k1)));
    const auto k3 = rhs(weighted_projection(mu, axpy(u0, 0.5 * dt, k2)));
    const auto k4 = rhs(weighted_projection(mu, axpy(u0, dt, k3)));
    VectorGridField u1 = u0;
    for (std::size_t a = 0; a < u1.size(); ++a)
        for (std::size_t i = 0; i < u1[a].values.size(); ++i)
            u1[a].values[i] += dt / 6.0 *
                               (k1[a].values[i] + 2.0 * k2[a].values[i] + 2.0 * k3[a].values[i] + k4[a].values[i]);
    VelocityField out = field;
    out.u = weighted_projection(mu, u1);
    out.t = field.t + dt;
    complete_field(out);
    check_growth(out);
    return out;
}

VectorGridField lake_forcing(const VelocityField& field) {
    const auto adv = advection(field.u);
    VectorGridField w(field.u.size(), GridField(field.spec));
    for (std::size_t a = 0; a < w.size(); ++a)
        for (std::size_t i = 0; i < w[a].values.size(); ++i)
            w[a].values[i] = field.dtu[a].values[i] + field.gamma * field.u[a].values[i] + adv[a].values[i];
    return w;
}

LakeResidual lake_residual(const VelocityField& field) {
    auto w = lake_forcing(field);
    const auto gp = gradient(field.p);
    for (std::size_t a = 0; a < w.size(); ++a) w[a] = w[a] + gp[a];
    const GridField mu = mu_on(field.mu_V, field.spec);
    VectorGridField flux;
    for (const auto& c : field.u) flux.push_back(pointwise_product(mu, c));
    return {l2_norm(w), l2_norm(divergence(flux))};
}

double verify_corrector_identity(const VelocityField& field, const GridField& corrector_field, const Kernel& kernel) {
    require_same_grid(field.spec, corrector_field.spec, "verify_corrector_identity");
    const auto w = lake_forcing(field);
    const double wn = l2_norm(w);
    if (wn == 0.0) return 0.0;
    Spectrum s = fft_forward(corrector_field);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        const auto k = field.spec.wavevector(i);
        s.coeffs[i] *= kernel.multiplier(std::span<const double>(k.data(), field.spec.dim));
    }
    const auto gh = gradient(fft_inverse(s));
    VectorGridField r = w;
    for (std::size_t a = 0; a < r.size(); ++a) r[a] = r[a] + gh[a];
    return l2_norm(r) / wn;
}

double max_gradient_norm(const VectorGridField& u) {
    // pointwise Frobenius norm of the Jacobian
    std::vector<double> sq(u.at(0).values.size(), 0.0);
    for (const auto& c : u)
        for (const auto& g : gradient(c))
            for (std::size_t i = 0; i < sq.size(); ++i) sq[i] += g.values[i] * g.values[i];
    return std::sqrt(*std::max_element(sq.begin(), sq.end()));
}

double max_speed(const VectorGridField& u) {
    double m = 0.0;
    for (std::size_t i = 0; i < u.at(0).values.size(); ++i) {
        double s = 0.0;
        for (const auto& c : u) s += c.values[i] * c.values[i];
        m = std::max(m, std::sqrt(s));
    }
    return m;
}

}  // namespace riesz_lake
