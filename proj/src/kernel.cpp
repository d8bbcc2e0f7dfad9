#include "riesz_lake/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "riesz_lake/error.hpp"

namespace riesz_lake {

namespace {

double norm(std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return std::sqrt(r2);
}

// Canonical representative of {m, -m}: first nonzero component positive.
bool is_canonical(const std::array<int, 3>& m) {
    for (int v : m) {
        if (v > 0) return true;
        if (v < 0) return false;
    }
    return false;
}

std::array<int, 3> negate(std::array<int, 3> m) {
    for (int& v : m) v = -v;
    return m;
}

}  // namespace

Kernel Kernel::riesz(double s, int dim) {
    if (dim < 1) throw InvalidKernelError("riesz: dimension must be positive");
    if (s == 0.0) return Kernel::log(dim);
    if (!(s >= dim - 2.0 && s < dim))
        throw InvalidKernelError("riesz: exponent s=" + std::to_string(s) + " outside [d-2, d) for d=" +
                                 std::to_string(dim));
    Kernel k;
    k.family_ = KernelFamily::Riesz;
    k.dim_ = dim;
    k.s_ = s;
    return k;
}

Kernel Kernel::log(int dim) {
    if (dim < 1 || dim > 2) throw InvalidKernelError("log kernel requires d in {1, 2}");
    Kernel k;
    k.family_ = KernelFamily::Log;
    k.dim_ = dim;
    k.s_ = 0.0;
    return k;
}

Kernel Kernel::one_d_coulomb() {
    Kernel k;
    k.family_ = KernelFamily::OneDCoulomb;
    k.dim_ = 1;
    k.s_ = -1.0;
    return k;
}

Kernel Kernel::torus_spectral(int dim, double L, std::vector<WaveMode> coeffs, double kappa,
                              std::optional<double> riesz_s) {
    if (dim < 1 || dim > 3) throw InvalidKernelError("torus_spectral: dimension must be 1, 2 or 3");
    if (!(L > 0.0)) throw InvalidKernelError("torus_spectral: period must be positive");
    std::map<std::array<int, 3>, double> table;
    for (const auto& mode : coeffs) {
        for (int a = dim; a < 3; ++a)
            if (mode.m[a] != 0) throw InvalidKernelError("torus_spectral: wave index beyond dimension");
        if (mode.value < 0.0 || !std::isfinite(mode.value))
            throw InvalidKernelError("torus_spectral: coefficients must be finite and nonnegative");
        if (mode.m == std::array<int, 3>{0, 0, 0}) {
            if (mode.value != 0.0) throw InvalidKernelError("torus_spectral: kernel must have zero average");
            continue;
        }
        table[mode.m] = mode.value;
    }
    Kernel k;
    k.family_ = KernelFamily::TorusSpectral;
    k.dim_ = dim;
    k.L_ = L;
    k.kappa_ = kappa;
    k.torus_s_ = riesz_s;
    k.s_ = riesz_s.value_or(0.0);
    for (const auto& [m, v] : table) {
        const auto it = table.find(negate(m));
        if (it == table.end() || std::abs(it->second - v) > 1e-14 * std::max(1.0, std::abs(v)))
            throw InvalidKernelError("torus_spectral: coefficients must be symmetric under k -> -k");
        if (!is_canonical(m) || v == 0.0) continue;
        k.half_modes_.push_back({m, v});
        for (int a = 0; a < dim; ++a) k.k_max_ = std::max(k.k_max_, std::abs(m[a]));
    }
    return k;
}

Kernel Kernel::torus_riesz(double s, int dim, double L, int k_max) {
    if (!(s >= dim - 2.0 && s < dim))
        throw InvalidKernelError("torus_riesz: exponent outside [d-2, d)");
    if (k_max < 1) throw InvalidKernelError("torus_riesz: k_max must be >= 1");
    std::vector<WaveMode> modes;
    const double base = 2.0 * std::numbers::pi / L;
    const int ymax = dim >= 2 ? k_max : 0;
    const int zmax = dim >= 3 ? k_max : 0;
    for (int i = -k_max; i <= k_max; ++i)
        for (int j = -ymax; j <= ymax; ++j)
            for (int l = -zmax; l <= zmax; ++l) {
                const int m2 = i * i + j * j + l * l;
                if (m2 == 0 || m2 > k_max * k_max) continue;
                const double k = base * std::sqrt(static_cast<double>(m2));
                modes.push_back({{i, j, l}, std::pow(k, -(dim - s))});
            }
    return torus_spectral(dim, L, std::move(modes), 0.0, s);
}

Kernel Kernel::with_min_distance(double r) const {
    if (r < 0.0) throw InvalidKernelError("min distance must be nonnegative");
    Kernel k = *this;
    k.min_distance_ = r;
    return k;
}

std::optional<double> Kernel::riesz_exponent() const {
    if (family_ == KernelFamily::TorusSpectral) return torus_s_;
    return s_;
}

double Kernel::s() const {
    const auto e = riesz_exponent();
    if (!e) throw UnsupportedError("kernel " + describe() + " has no Riesz exponent");
    return *e;
}

bool Kernel::is_log_case() const {
    const auto e = riesz_exponent();
    return e && *e == 0.0;
}

double Kernel::eval(std::span<const double> x) const {
    if (family_ == KernelFamily::TorusSpectral) {
        const double base = 2.0 * std::numbers::pi / L_;
        double acc = 0.0;
        for (const auto& mode : half_modes_) {
            double phase = 0.0;
            for (int a = 0; a < dim_; ++a) phase += mode.m[a] * x[a];
            acc += 2.0 * mode.value * std::cos(base * phase);
        }
        return acc / std::pow(L_, dim_);
    }
    double r = norm(x.first(dim_));
    if (r == 0.0 && min_distance_ == 0.0) {
        if (family_ == KernelFamily::OneDCoulomb) return 0.0;
        throw SingularityError("kernel " + describe() + " evaluated at the origin");
    }
    r = std::max(r, min_distance_);
    switch (family_) {
        case KernelFamily::Riesz:
            return std::pow(r, -s_) / s_;
        case KernelFamily::Log:
            return -std::log(r);
        case KernelFamily::OneDCoulomb:
            return -2.0 * r;
        default:
            return 0.0;
    }
}

void Kernel::eval_grad(std::span<const double> x, std::span<double> out) const {
    if (family_ == KernelFamily::TorusSpectral) {
        const double base = 2.0 * std::numbers::pi / L_;
        std::array<double, 3> acc{0.0, 0.0, 0.0};
        for (const auto& mode : half_modes_) {
            double phase = 0.0;
            for (int a = 0; a < dim_; ++a) phase += mode.m[a] * x[a];
            const double sn = std::sin(base * phase);
            for (int a = 0; a < dim_; ++a) acc[a] -= 2.0 * mode.value * base * mode.m[a] * sn;
        }
        const double vol = std::pow(L_, dim_);
        for (int a = 0; a < dim_; ++a) out[a] = acc[a] / vol;
        return;
    }
    const double r = norm(x.first(dim_));
    if (r == 0.0) {
        if (min_distance_ > 0.0) {
            for (int a = 0; a < dim_; ++a) out[a] = 0.0;
            return;
        }
        throw SingularityError("gradient of kernel " + describe() + " evaluated at the origin");
    }
    if (family_ == KernelFamily::OneDCoulomb) {
        out[0] = r < min_distance_ ? 0.0 : (x[0] > 0.0 ? -2.0 : 2.0);
        return;
    }
    if (r < min_distance_) {
        for (int a = 0; a < dim_; ++a) out[a] = 0.0;
        return;
    }
    // Riesz and Log share -x |x|^{-s-2}.
    const double factor = -std::pow(r, -s_ - 2.0);
    for (int a = 0; a < dim_; ++a) out[a] = factor * x[a];
}

std::vector<double> Kernel::grad(std::span<const double> x) const {
    std::vector<double> out(dim_);
    eval_grad(x, out);
    return out;
}

double Kernel::multiplier(std::span<const double> k) const {
    double k2 = 0.0;
    for (int a = 0; a < dim_; ++a) k2 += k[a] * k[a];
    if (k2 == 0.0) return 0.0;
    if (family_ == KernelFamily::TorusSpectral) {
        const double base = 2.0 * std::numbers::pi / L_;
        std::array<int, 3> m{0, 0, 0};
        for (int a = 0; a < dim_; ++a) {
            const double q = k[a] / base;
            m[a] = static_cast<int>(std::lround(q));
            if (std::abs(q - m[a]) > 1e-9) return 0.0;
        }
        return coefficient(m);
    }
    return std::pow(std::sqrt(k2), -(dim_ - s_));
}

double Kernel::coefficient(const std::array<int, 3>& m_in) const {
    if (family_ != KernelFamily::TorusSpectral) throw UnsupportedError("coefficient: torus kernels only");
    const std::array<int, 3> m = is_canonical(m_in) ? m_in : negate(m_in);
    const auto it = std::lower_bound(half_modes_.begin(), half_modes_.end(), m,
                                     [](const WaveMode& a, const std::array<int, 3>& b) { return a.m < b; });
    if (it != half_modes_.end() && it->m == m) return it->value;
    return 0.0;
}

double Kernel::value_at_origin() const {
    if (family_ != KernelFamily::TorusSpectral) throw UnsupportedError("value_at_origin: torus kernels only");
    double acc = 0.0;
    for (const auto& mode : half_modes_) acc += 2.0 * mode.value;
    return acc / std::pow(L_, dim_);
}

std::string Kernel::describe() const {
    std::ostringstream os;
    switch (family_) {
        case KernelFamily::Riesz:
            os << "riesz(s=" << s_ << ",d=" << dim_ << ")";
            break;
        case KernelFamily::Log:
            os << "log(d=" << dim_ << ")";
            break;
        case KernelFamily::OneDCoulomb:
            os << "one_d_coulomb";
            break;
        case KernelFamily::TorusSpectral:
            os << "torus_spectral(d=" << dim_ << ",L=" << L_ << ",modes=" << 2 * half_modes_.size();
            if (torus_s_) os << ",s=" << *torus_s_;
            os << ")";
            break;
    }
    return os.str();
}

std::vector<std::complex<double>> structure_factor(const Kernel& kernel, std::span<const double> positions,
                                                   int dim) {
    const auto& modes = kernel.half_modes();
    std::vector<std::complex<double>> S(modes.size(), 0.0);
    const std::size_t N = positions.size() / dim;
    if (N == 0) return S;
    const int K = kernel.k_max();
    const double base = 2.0 * std::numbers::pi / kernel.period();
    std::array<std::vector<std::complex<double>>, 3> tab;
    for (auto& t : tab) t.resize(2 * K + 1);
    for (std::size_t j = 0; j < N; ++j) {
        for (int a = 0; a < dim; ++a)
            for (int m = -K; m <= K; ++m) tab[a][m + K] = std::polar(1.0, -base * m * positions[j * dim + a]);
        for (std::size_t q = 0; q < modes.size(); ++q) {
            std::complex<double> e = tab[0][modes[q].m[0] + K];
            for (int a = 1; a < dim; ++a) e *= tab[a][modes[q].m[a] + K];
            S[q] += e;
        }
    }
    for (auto& v : S) v /= static_cast<double>(N);
    return S;
}

}  // namespace riesz_lake
