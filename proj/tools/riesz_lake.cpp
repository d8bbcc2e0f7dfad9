#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "riesz_lake/config.hpp"
#include "riesz_lake/equilibrium.hpp"
#include "riesz_lake/error.hpp"
#include "riesz_lake/harness.hpp"

using namespace riesz_lake;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

int cmd_run(const std::string& path, const std::string& out_dir) {
    const ScenarioConfig cfg = validate_config(load_config_document(path));
    RunOptions opts;
    opts.output_dir = out_dir;
    const RunResult r = run_scenario(cfg, opts);
    Json summary;
    summary["output_dir"] = r.output_dir.string();
    summary["samples"] = r.records.size();
    summary["steps"] = r.steps;
    summary["dt"] = r.dt;
    if (!r.records.empty()) {
        summary["script_H_0"] = r.records.front().script_H;
        summary["script_H_T"] = r.records.back().script_H;
    }
    if (r.err_vs_exact) summary["max_err_vs_exact"] = r.err_vs_exact->position;
    std::cout << summary.dump(2) << '\n';
    return kOk;
}

int cmd_sweep(const std::string& path, const std::string& out_dir) {
    const ScenarioConfig cfg = validate_config(load_config_document(path));
    RunOptions opts;
    opts.output_dir = out_dir;
    const SweepResult r = scaling_sweep(cfg, opts);
    std::cout << r.table().to_string();
    return kOk;
}

int cmd_verify(const std::string& id, double tol) {
    const EquilibriumCase ec = [&] {
        try {
            return equilibrium_case(id);
        } catch (const Error& e) {
            throw ConfigError("case", e.what());
        }
    }();
    const FrostmanReport rep = verify_frostman(ec.V, ec.mu, ec.kernel, tol, id);
    std::cout << to_json(rep).dump(2) << '\n';
    return rep.pass ? kOk : kCheckFailed;
}

int cmd_oracle(int N, double eps, double T) {
    if (N < 1) throw ConfigError("N", "must be positive");
    if (!(eps > 0.0)) throw ConfigError("epsilon", "must be positive");
    if (!(T >= 0.0)) throw ConfigError("T", "must be nonnegative");
    const Oracle1D o = oracle_1d(N, eps, T);
    Json j{{"N", o.N},       {"epsilon", o.epsilon}, {"T", o.T}, {"dt", o.dt}, {"steps", o.steps},
           {"max_position_error", o.error.position}, {"max_velocity_error", o.error.velocity}};
    std::cout << j.dump(2) << '\n';
    return kOk;
}

int cmd_fit(const std::string& csv) {
    const GronwallFit f = fit_gronwall(std::filesystem::path(csv));
    std::cout << to_json(f).dump(2) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modulated-energy experiments for Riesz-type particle systems and lake equations"};
    app.require_subcommand(1);

    std::string config_path, out_dir, case_id, csv;
    double tol = 1e-6;
    int N = 0;
    double eps = 0.0, T = 0.0;

    auto* run = app.add_subcommand("run", "Run one scenario and write diagnostics");
    run->add_option("config", config_path, "TOML or JSON scenario (meta.json accepted)")->required();
    run->add_option("-o,--output", out_dir, "Override the output directory");

    auto* sweep = app.add_subcommand("sweep", "Run the [sweep] grid of a scenario and write sweep.csv");
    sweep->add_option("config", config_path, "TOML or JSON scenario")->required();
    sweep->add_option("-o,--output", out_dir, "Override the output directory");

    auto* verify = app.add_subcommand("verify-equilibrium", "Check the Frostman conditions of a closed-form case");
    verify->add_option("case", case_id, "Case id")->required();
    verify->add_option("--tol", tol, "Tolerance on |zeta| over the support");

    auto* oracle = app.add_subcommand("oracle-1d", "Compare the integrator with the solvable 1D Coulomb gas");
    oracle->add_option("N", N)->required();
    oracle->add_option("epsilon", eps)->required();
    oracle->add_option("T", T)->required();

    auto* fit = app.add_subcommand("fit-gronwall", "Fit the exponential growth bound to diagnostics.csv");
    fit->add_option("csv", csv)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfigError;
    }

    try {
        if (*run) return cmd_run(config_path, out_dir);
        if (*sweep) return cmd_sweep(config_path, out_dir);
        if (*verify) return cmd_verify(case_id, tol);
        if (*oracle) return cmd_oracle(N, eps, T);
        if (*fit) return cmd_fit(csv);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kOk;
}
