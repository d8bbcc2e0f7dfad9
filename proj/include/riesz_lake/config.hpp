#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "riesz_lake/background.hpp"
#include "riesz_lake/dynamics.hpp"
#include "riesz_lake/kernel.hpp"

namespace riesz_lake {

using Json = nlohmann::ordered_json;

// Validated scenario. `json` is the normalized document with every default
// filled in; feeding it back through validate_config reproduces the run.
struct ScenarioConfig {
    Json json;

    std::string name;
    int dim = 1;
    bool torus = false;
    double L = 0.0;
    int grid_n = 64;

    int N = 1;
    double epsilon = 0.1;
    std::string epsilon_rule;
    double gamma = 0.0;
    double T = 0.0;
    double dt = 0.0;
    std::string dt_rule;
    Scheme scheme = Scheme::Yoshida4;
    std::uint64_t seed = 1;

    std::string init_kind;
    double r_N = 0.0;
    double lattice_jitter = 0.0;

    std::string field_kind;    // zero | taylor_green | solver
    std::string field_source;  // solver: taylor_green | random
    double field_amplitude = 1.0;
    int field_kmax = 4;

    int sample_every = 10;
    bool write_trajectory = false;
    bool write_plots = true;
    double kappa = 0.0;  // NaN: default
    int K_max = 16;
    double C = 0.0;      // NaN: calibrated table
    bool regular = false;

    std::string output_dir;

    std::vector<int> sweep_N;
    std::vector<std::string> sweep_rules;
};

// Reads TOML (.toml) or JSON. A meta.json produced by a run is accepted and
// its "config" member is used.
Json load_config_document(const std::filesystem::path& path);
Json parse_toml(const std::string& text);

// Throws ConfigError naming the offending field.
ScenarioConfig validate_config(const Json& doc);

// Copy of the document with N and the epsilon rule replaced (sweep cells).
Json with_cell(const Json& doc, int N, const std::string& epsilon_rule);

// "0.1", "N^-0.5", "2*N^-1", "1/N", "3/N^0.5"
double eval_epsilon_rule(const std::string& rule, int N);
// "epsilon/100", "0.01*epsilon", "1e-3"
double eval_dt_rule(const std::string& rule, double epsilon);

Kernel make_kernel(const ScenarioConfig& cfg);
Confinement make_confinement(const ScenarioConfig& cfg);
BackgroundDensity make_background(const ScenarioConfig& cfg);

}  // namespace riesz_lake
