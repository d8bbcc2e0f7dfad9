#include "riesz_lake/harness.hpp"

#include <fftw3.h>

#include <boost/version.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "riesz_lake/error.hpp"
#include "riesz_lake/io.hpp"
#include "riesz_lake/lake.hpp"

namespace riesz_lake {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* kDiagnosticsHeader = "t,kinetic_mod,F_N,zeta_sum,H_N,script_H,micro_E,hneg_kappa,log_correction";

bool exact_init(const ScenarioConfig& cfg) {
    return cfg.init_kind == "exact_oscillating" || cfg.init_kind == "critical_point";
}

ExactInit exact_init_data(const ScenarioConfig& cfg) {
    return cfg.init_kind == "critical_point" ? critical_point_init(cfg.N, cfg.epsilon)
                                             : oscillating_init(cfg.N, cfg.epsilon);
}

// The modulating field, advanced lazily to each sample time.
class FieldTrack {
public:
    explicit FieldTrack(const ScenarioConfig& cfg) : kind_(cfg.field_kind), A_(cfg.field_amplitude), gamma_(cfg.gamma) {
        if (kind_ == "zero") return;
        spec_ = GridSpec{2, cfg.grid_n, cfg.L};
        if (kind_ == "taylor_green" || cfg.field_source == "taylor_green") {
            field_ = taylor_green(spec_, A_, gamma_);
        } else {
            auto u = random_solenoidal_2d(spec_, cfg.field_kmax, A_, static_cast<unsigned>(cfg.seed));
            field_ = VelocityField::from_velocity(std::move(u), BackgroundDensity::torus_uniform(2, cfg.L), gamma_);
        }
    }

    bool active() const { return field_.has_value(); }

    const VelocityField& at(double t) {
        if (kind_ == "taylor_green") {
            if (field_->t != t) {
                field_ = taylor_green(spec_, A_ * std::exp(-gamma_ * t), gamma_);
                field_->t = t;
            }
        } else {
            while (field_->t < t - 1e-14 * std::max(1.0, t)) {
                const double speed = std::max(max_speed(field_->u), 1e-12);
                const double h_max = 0.25 * spec_.spacing() / speed;
                const double remaining = t - field_->t;
                const double n = std::ceil(remaining / h_max - 1e-12);
                const double h = remaining / std::max(n, 1.0);
                const double target = field_->t + h;
                field_ = lake_step(*field_, h);
                field_->t = n <= 1.0 ? t : target;
            }
        }
        return *field_;
    }

    VelocityFunction velocity(double t) {
        if (!active()) return zero_velocity();
        return velocity_function(at(t));
    }

    static VelocityFunction zero_velocity() {
        return [](std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
    }

private:
    std::string kind_;
    double A_;
    double gamma_;
    GridSpec spec_;
    std::optional<VelocityField> field_;
};

ParticleState lattice_state(const ScenarioConfig& cfg, const VelocityFunction& u0) {
    const int d = cfg.dim;
    const int side = static_cast<int>(std::lround(std::pow(static_cast<double>(cfg.N), 1.0 / d)));
    long total = 1;
    for (int a = 0; a < d; ++a) total *= side;
    if (total != cfg.N) throw ConfigError("N", "lattice init needs N to be a perfect power of the dimension");
    const double h = cfg.L / side;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-0.5, 0.5);
    ParticleState s(cfg.N, d, cfg.epsilon, cfg.gamma);
    for (int i = 0; i < cfg.N; ++i) {
        int rest = i;
        for (int a = d - 1; a >= 0; --a) {
            const int idx = rest % side;
            rest /= side;
            double x = (idx + 0.5) * h + cfg.lattice_jitter * h * unit(rng);
            x -= cfg.L * std::floor(x / cfg.L);
            s.x[static_cast<std::size_t>(i) * d + a] = x;
        }
        u0(s.pos(i), s.vel(i));
    }
    return s;
}

std::string diagnostics_row(const DiagnosticsRecord& r) {
    const double vals[] = {r.t, r.kinetic_mod, r.F_N, r.zeta_sum, r.H_N, r.script_H, r.micro_E, r.hneg_kappa,
                           r.log_correction};
    std::string out;
    for (std::size_t j = 0; j < std::size(vals); ++j) {
        if (j) out += ',';
        out += format_double(vals[j]);
    }
    return out + '\n';
}

Json versions_json() {
    Json v;
    v["riesz_lake"] = kVersion;
    v["fftw"] = std::string(fftw_version);
    v["boost"] = BOOST_LIB_VERSION;
#if defined(__clang__)
    v["compiler"] = "clang " __clang_version__;
#elif defined(__GNUC__)
    v["compiler"] = "gcc " __VERSION__;
#endif
    return v;
}

double default_kappa(const Kernel& kernel, int d) {
    const double s = kernel.riesz_exponent().value_or(0.0);
    return d - s + 0.5 * d + 1.0;
}

}  // namespace

ParticleState initial_state(const ScenarioConfig& cfg) {
    if (exact_init(cfg)) {
        ParticleState s = to_state(exact_init_data(cfg));
        s.gamma = cfg.gamma;
        return s;
    }
    FieldTrack field(cfg);
    const VelocityFunction u0 = field.velocity(0.0);
    if (cfg.init_kind == "lattice") return lattice_state(cfg, u0);
    return sample_monokinetic_init(make_background(cfg), u0, cfg.N, cfg.r_N, cfg.seed, cfg.epsilon, cfg.gamma);
}

RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
    const Kernel kernel = make_kernel(cfg);
    const Confinement V = make_confinement(cfg);
    const BackgroundDensity mu = make_background(cfg);
    if (exact_init(cfg)) {
        try {
            require_exact_setup(kernel, V, cfg.gamma);
        } catch (const Error& e) {
            throw ConfigError("init.kind", e.what());
        }
    }

    RunResult res;
    res.output_dir = opts.output_dir.empty() ? std::filesystem::path(cfg.output_dir) : opts.output_dir;

    DiagnosticsOptions dopts;
    dopts.K_max = cfg.K_max;
    dopts.kappa = std::isnan(cfg.kappa) ? default_kappa(kernel, cfg.dim) : cfg.kappa;
    if (cfg.torus) dopts.L = cfg.L;
    if (kernel.riesz_exponent()) {
        res.C_key = calibration_key(kernel, mu);
        if (!std::isnan(cfg.C)) {
            res.C = cfg.C;
            res.C_source = "config";
        } else if (auto frozen = frozen_lower_bound_constant(res.C_key)) {
            res.C = *frozen;
            res.C_source = "frozen";
        } else {
            res.C = lower_bound_constant(kernel, mu);
            res.C_source = "calibrated";
        }
    } else {
        res.C_source = "unused";
    }
    dopts.C = res.C;

    FieldTrack field(cfg);
    try {
        res.initial = initial_state(cfg);
    } catch (const SamplingError& e) {
        throw ConfigError("init", e.what());
    }

    std::optional<ExactInit> exact;
    if (exact_init(cfg)) {
        exact = exact_init_data(cfg);
        res.err_vs_exact = StateError{};
    }

    std::string diag = std::string(kDiagnosticsHeader) + '\n';
    std::string traj;
    if (cfg.write_trajectory) {
        traj = "t,i";
        for (int a = 1; a <= cfg.dim; ++a) traj += ",x_" + std::to_string(a);
        for (int a = 1; a <= cfg.dim; ++a) traj += ",v_" + std::to_string(a);
        traj += '\n';
    }

    auto on_sample = [&](const ParticleState& s) {
        std::optional<GridField> U;
        VelocityFunction u = FieldTrack::zero_velocity();
        if (field.active()) {
            const VelocityField& f = field.at(s.t);
            U = corrector(f, kernel);
            u = velocity_function(f);
        }
        const EffectiveBackground eff(mu, cfg.epsilon, std::move(U));
        try {
            eff.check_smallness();
        } catch (const PreconditionError& e) {
            if (res.records.empty()) throw ConfigError("epsilon", e.what());
            throw PreconditionError(std::string(e.what()) + " at t=" + format_double(s.t));
        }
        DiagnosticsRecord rec = cfg.regular ? regular_total_energy(s, u, eff, kernel, dopts.kappa, cfg.K_max)
                                            : total_modulated_energy(s, u, eff, V, kernel, dopts);
        res.records.push_back(rec);
        diag += diagnostics_row(rec);
        if (exact) {
            const StateError e = state_error(s, exact_state(*exact, s.t));
            res.err_vs_exact->position = std::max(res.err_vs_exact->position, e.position);
            res.err_vs_exact->velocity = std::max(res.err_vs_exact->velocity, e.velocity);
        }
        if (cfg.write_trajectory) {
            for (int i = 0; i < s.N; ++i) {
                traj += format_double(s.t) + ',' + std::to_string(i);
                for (double x : s.pos(i)) traj += ',' + format_double(x);
                for (double v : s.vel(i)) traj += ',' + format_double(v);
                traj += '\n';
            }
        }
        res.final_state = s;
    };

    SimulateOptions sopts;
    sopts.sample_every = cfg.sample_every;
    sopts.scheme = cfg.scheme;
    sopts.keep_states = false;
    sopts.on_sample = on_sample;
    Trajectory tr;
    try {
        tr = simulate(res.initial, cfg.T, cfg.dt, kernel, V, sopts);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw Error("scenario '" + cfg.name + "': " + e.what());
    }
    res.dt = tr.dt;
    res.steps = tr.steps;

    Json meta;
    meta["name"] = cfg.name;
    meta["config"] = cfg.json;
    meta["versions"] = versions_json();
    meta["seed"] = cfg.seed;
    meta["N"] = cfg.N;
    meta["dim"] = cfg.dim;
    meta["epsilon"] = cfg.epsilon;
    meta["gamma"] = cfg.gamma;
    meta["T"] = cfg.T;
    meta["dt"] = res.dt;
    meta["steps"] = res.steps;
    meta["scheme"] = to_string(cfg.scheme);
    meta["samples"] = res.records.size();
    meta["kernel"] = kernel.describe();
    if (cfg.torus)
        meta["kernel_multiplier"] =
            "torus kernels use g = L^-d sum ghat(k) e^{ik.x}; torus_riesz has ghat(k) = |k|^-(d-s)";
    meta["lower_bound_constant"] = {{"C", res.C}, {"key", res.C_key}, {"source", res.C_source}};
    meta["kappa"] = dopts.kappa;
    meta["energy"] = cfg.regular ? "regular" : "confined";
    if (res.err_vs_exact) {
        meta["max_err_vs_exact"] = res.err_vs_exact->position;
        meta["max_velocity_err_vs_exact"] = res.err_vs_exact->velocity;
    }
    if (!res.records.empty()) {
        meta["script_H_0"] = res.records.front().script_H;
        meta["script_H_T"] = res.records.back().script_H;
    }
    res.meta = meta;

    if (opts.write_outputs) {
        const auto& dir = res.output_dir;
        write_file_atomic(dir / "diagnostics.csv", diag);
        if (cfg.write_trajectory) write_file_atomic(dir / "trajectory.csv", traj);
        write_file_atomic(dir / "meta.json", meta.dump(2) + '\n');
        if (cfg.write_plots) {
            PlotSeries sh{"script_H", {}, {}}, hn{"H_N", {}, {}}, hk{"hneg_kappa", {}, {}};
            for (const auto& r : res.records) {
                sh.x.push_back(r.t);
                sh.y.push_back(r.script_H);
                hn.x.push_back(r.t);
                hn.y.push_back(r.H_N);
                hk.x.push_back(r.t);
                hk.y.push_back(r.hneg_kappa);
            }
            write_file_atomic(dir / "energy.svg",
                              svg_line_plot({sh, hn}, {cfg.name + ": modulated energy", "t", "energy", false, false}));
            write_file_atomic(dir / "hneg.svg",
                              svg_line_plot({hk}, {cfg.name + ": negative Sobolev distance", "t", "norm", false, false}));
        }
    }
    return res;
}

CsvTable SweepResult::table() const {
    CsvTable t;
    t.header = {"N", "epsilon", "script_H_0", "script_H_T", "hneg_kappa_T", "amplitude_bound", "error"};
    for (const auto& r : rows)
        t.rows.push_back({std::to_string(r.N), format_double(r.epsilon), format_double(r.script_H_0),
                          format_double(r.script_H_T), format_double(r.hneg_kappa_T), format_double(r.amplitude_bound),
                          r.error});
    return t;
}

SweepResult scaling_sweep(const ScenarioConfig& cfg, const RunOptions& opts) {
    SweepResult out;
    const auto base_dir = opts.output_dir.empty() ? std::filesystem::path(cfg.output_dir) : opts.output_dir;
    const std::vector<std::string> rules = cfg.sweep_rules.empty() ? std::vector{cfg.epsilon_rule} : cfg.sweep_rules;
    const bool one_d_exact = cfg.dim == 1 && cfg.json["kernel"]["family"] == "one_d_coulomb";
    std::size_t cell = 0;
    for (const auto& rule : rules)
        for (int N : cfg.sweep_N) {
            SweepRow row;
            row.N = N;
            row.epsilon_rule = rule;
            row.epsilon = row.script_H_0 = row.script_H_T = row.hneg_kappa_T = row.amplitude_bound = kNaN;
            try {
                row.epsilon = eval_epsilon_rule(rule, N);
                if (one_d_exact) row.amplitude_bound = exact_current_amplitude(N, row.epsilon);
                Json doc = with_cell(cfg.json, N, rule);
                doc.erase("sweep");
                const ScenarioConfig cell_cfg = validate_config(doc);
                RunOptions ro;
                ro.write_outputs = opts.write_outputs;
                ro.output_dir = base_dir / "cells" / ("cell_" + std::to_string(cell) + "_N" + std::to_string(N));
                const RunResult r = run_scenario(cell_cfg, ro);
                row.script_H_0 = r.records.front().script_H;
                row.script_H_T = r.records.back().script_H;
                row.hneg_kappa_T = r.records.back().hneg_kappa;
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            out.rows.push_back(row);
            ++cell;
        }
    if (opts.write_outputs) {
        write_file_atomic(base_dir / "sweep.csv", out.table().to_string());
        if (cfg.write_plots) {
            std::vector<PlotSeries> series;
            for (const auto& rule : rules) {
                PlotSeries s{"script_H_T, eps = " + rule, {}, {}};
                for (const auto& r : out.rows)
                    if (r.epsilon_rule == rule) {
                        s.x.push_back(r.N);
                        s.y.push_back(r.script_H_T);
                    }
                series.push_back(std::move(s));
            }
            write_file_atomic(base_dir / "sweep.svg",
                              svg_line_plot(series, {cfg.name + ": final modulated energy", "N", "script_H(T)", true, true}));
        }
    }
    return out;
}

GronwallFit fit_gronwall(const std::vector<double>& t, const std::vector<double>& H) {
    if (t.size() != H.size()) throw PreconditionError("fit_gronwall: time and energy series differ in length");
    if (t.size() < 10)
        throw InsufficientSamplesError("fit_gronwall: need at least 10 samples, got " + std::to_string(t.size()));
    for (double h : H)
        if (!(h > 0.0)) throw DomainError("fit_gronwall: script_H must be positive, got " + format_double(h));
    GronwallFit f;
    f.samples = t.size();
    const double y0 = std::log(H[0] + 1e-14);
    double num = 0.0, den = 0.0, c = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double tau = t[i] - t[0];
        if (!(tau > 0.0)) throw PreconditionError("fit_gronwall: times must be increasing");
        const double dy = std::log(H[i] + 1e-14) - y0;
        c = std::max(c, dy / tau);
        num += tau * dy;
        den += tau * tau;
    }
    f.C_fit = c;
    f.ls_slope = num / den;
    f.slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double tau = t[i] - t[0];
        const double gap = y0 + c * tau - std::log(H[i] + 1e-14);
        f.max_violation = std::max(f.max_violation, -gap);
        f.slack = std::min(f.slack, gap);
    }
    return f;
}

GronwallFit fit_gronwall(const std::filesystem::path& csv) {
    const CsvTable t = read_csv(csv);
    return fit_gronwall(t.numeric_column("t"), t.numeric_column("script_H"));
}

Json to_json(const FrostmanReport& r) {
    Json j;
    j["case"] = r.case_id;
    j["robin_constant"] = r.c;
    j["max_abs_zeta_on_support"] = r.max_abs_zeta_on_support;
    if (std::isfinite(r.min_zeta_off_support))
        j["min_zeta_off_support"] = r.min_zeta_off_support;
    else
        j["min_zeta_off_support"] = nullptr;
    j["samples_on_support"] = r.samples_on;
    j["samples_off_support"] = r.samples_off;
    j["pass"] = r.pass;
    return j;
}

Json to_json(const GronwallFit& f) {
    return Json{{"C_fit", f.C_fit},   {"max_violation", f.max_violation}, {"slack", f.slack},
                {"ls_slope", f.ls_slope}, {"samples", f.samples}};
}

Oracle1D oracle_1d(int N, double epsilon, double T, Scheme scheme) {
    if (N < 1) throw PreconditionError("oracle_1d: N must be positive");
    if (!(epsilon > 0.0)) throw PreconditionError("oracle_1d: epsilon must be positive");
    const ExactInit init = oscillating_init(N, epsilon);
    Oracle1D o;
    o.N = N;
    o.epsilon = epsilon;
    o.T = T;
    SimulateOptions so;
    so.scheme = scheme;
    so.keep_states = false;
    so.sample_every = std::numeric_limits<int>::max();
    ParticleState last;
    so.on_sample = [&](const ParticleState& s) { last = s; };
    const Trajectory tr = simulate(to_state(init), T, epsilon / 100.0, exact_kernel(), exact_confinement(), so);
    o.dt = tr.dt;
    o.steps = tr.steps;
    o.error = state_error(last, exact_state(init, last.t));
    return o;
}

}  // namespace riesz_lake
