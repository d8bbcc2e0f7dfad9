#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "riesz_lake/config.hpp"
#include "riesz_lake/dynamics.hpp"
#include "riesz_lake/equilibrium.hpp"
#include "riesz_lake/exact_1d.hpp"
#include "riesz_lake/io.hpp"
#include "riesz_lake/modulated_energy.hpp"

namespace riesz_lake {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
    bool write_outputs = true;
    // Overrides cfg.output_dir when non-empty.
    std::filesystem::path output_dir;
};

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    ParticleState initial;
    ParticleState final_state;
    double C = 0.0;
    std::string C_key;
    std::string C_source;  // "config", "frozen" or "calibrated"
    double dt = 0.0;
    std::size_t steps = 0;
    // Exact 1D inits only: maxima over all samples.
    std::optional<StateError> err_vs_exact;
    std::filesystem::path output_dir;
    Json meta;
};

// Builds kernel, confinement, background, initial state and modulating field
// from the config, integrates with diagnostics every `sample_every` steps and
// writes diagnostics.csv, meta.json, optionally trajectory.csv and SVG plots.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});

// Initial particle state of a config (deterministic in the seed).
ParticleState initial_state(const ScenarioConfig& cfg);

struct SweepRow {
    int N = 0;
    double epsilon = 0.0;
    std::string epsilon_rule;
    double script_H_0 = 0.0;
    double script_H_T = 0.0;
    double hneg_kappa_T = 0.0;
    // sqrt(2)/(N eps) for the solvable 1D setup, NaN otherwise.
    double amplitude_bound = 0.0;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    CsvTable table() const;
};

// One independent run per (N, epsilon_rule) cell. Cell failures are recorded
// in the row and the sweep continues. Writes sweep.csv (and per-cell outputs
// under cells/) when `write_outputs` is set.
SweepResult scaling_sweep(const ScenarioConfig& cfg, const RunOptions& opts = {});

struct GronwallFit {
    // Smallest C >= 0 with log H(t) <= log H(0) + C t at every sample.
    double C_fit = 0.0;
    double max_violation = 0.0;
    // min over t > 0 of log H(0) + C_fit t - log H(t).
    double slack = 0.0;
    // Least-squares slope of log H(t) - log H(0) against t through the origin.
    double ls_slope = 0.0;
    std::size_t samples = 0;
};

// Needs at least 10 samples with script_H > 0.
GronwallFit fit_gronwall(const std::vector<double>& t, const std::vector<double>& script_H);
GronwallFit fit_gronwall(const std::filesystem::path& diagnostics_csv);

Json to_json(const FrostmanReport& r);
Json to_json(const GronwallFit& f);

// Oscillating exact data simulated to T and compared with the closed form.
struct Oracle1D {
    int N = 0;
    double epsilon = 0.0;
    double T = 0.0;
    double dt = 0.0;
    std::size_t steps = 0;
    StateError error;
};
Oracle1D oracle_1d(int N, double epsilon, double T, Scheme scheme = Scheme::Yoshida4);

}  // namespace riesz_lake
