#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <sys/wait.h>

#include "riesz_lake/error.hpp"
#include "riesz_lake/harness.hpp"
#include "riesz_lake/io.hpp"

using namespace riesz_lake;
namespace fs = std::filesystem;

namespace {

const char* kOracle = R"(
name = "oracle"
N = 16
epsilon = 0.1
T = 1.0

[kernel]
family = "one_d_coulomb"

[confinement]
kind = "quadratic"
a = 1.0

[background]
kind = "equilibrium"
case = "oned_coulomb_quadratic"

[init]
kind = "exact_oscillating"

[diagnostics]
every = 50
)";

const char* kTorus = R"(
name = "torus"
N = 64
epsilon_rule = "N^-0.3"
T = 0.05
seed = 3

[kernel]
family = "torus_riesz"
s = 0.0
k_max = 8

[domain]
dim = 2
n = 32

[init]
kind = "monokinetic"
r_N = "N^-1"

[field]
kind = "taylor_green"
amplitude = 0.25

[diagnostics]
every = 1
trajectory = true
)";

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("riesz_lake_test_" + name);
    fs::remove_all(p);
    return p;
}

RunResult run(const std::string& toml, const fs::path& dir) {
    RunOptions o;
    o.output_dir = dir;
    return run_scenario(validate_config(parse_toml(toml)), o);
}

}  // namespace

TEST_CASE("oracle scenario matches the closed form") {
    const auto dir = scratch("oracle");
    const auto r = run(kOracle, dir);
    REQUIRE(r.err_vs_exact.has_value());
    CHECK(r.err_vs_exact->position < 1e-6);
    const Json meta = Json::parse(read_file(dir / "meta.json"));
    CHECK(meta["max_err_vs_exact"].get<double>() < 1e-6);
    CHECK(meta["seed"] == 1);
    CHECK(meta["lower_bound_constant"]["source"] == "frozen");
    CHECK(meta["versions"].contains("fftw"));
    const auto diag = read_csv(dir / "diagnostics.csv");
    CHECK(diag.header.size() == 9);
    CHECK(diag.rows.size() == r.records.size());
    CHECK(fs::exists(dir / "energy.svg"));
    CHECK_FALSE(fs::exists(dir / "trajectory.csv"));
    // with gamma = 0 and u = 0 the modulated energy is conserved
    CHECK(r.records.back().H_N == doctest::Approx(r.records.front().H_N).epsilon(1e-8));
}

TEST_CASE("T = 0 gives a single diagnostics row") {
    std::string doc = kOracle;
    doc.replace(doc.find("T = 1.0"), 7, "T = 0.0");
    const auto dir = scratch("t0");
    run(doc, dir);
    CHECK(read_csv(dir / "diagnostics.csv").rows.size() == 1);
}

TEST_CASE("runs are deterministic and meta.json reproduces them") {
    const auto a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
    run(kTorus, a);
    run(kTorus, b);
    const std::string da = read_file(a / "diagnostics.csv");
    CHECK(da == read_file(b / "diagnostics.csv"));
    CHECK(read_file(a / "trajectory.csv") == read_file(b / "trajectory.csv"));
    RunOptions o;
    o.output_dir = c;
    run_scenario(validate_config(load_config_document(a / "meta.json")), o);
    CHECK(da == read_file(c / "diagnostics.csv"));
    const auto traj = read_csv(a / "trajectory.csv");
    CHECK(traj.header == std::vector<std::string>{"t", "i", "x_1", "x_2", "v_1", "v_2"});
}

TEST_CASE("thread count does not change the diagnostics") {
    const auto a = scratch("thr_a"), b = scratch("thr_b");
    std::string doc = kOracle;
    run(doc, a);
    setenv("RIESZ_LAKE_THREADS", "3", 1);
    run(doc, b);
    unsetenv("RIESZ_LAKE_THREADS");
    CHECK(read_file(a / "diagnostics.csv") == read_file(b / "diagnostics.csv"));
}

TEST_CASE("smallness violation is reported against epsilon") {
    std::string doc = kTorus;
    doc.replace(doc.find("amplitude = 0.25"), 16, "amplitude = 40.0");
    try {
        run(doc, scratch("small"));
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "epsilon");
    }
}

TEST_CASE("solver-evolved field agrees with the analytic Taylor-Green flow") {
    std::string a = kTorus, b = kTorus;
    b.replace(b.find("kind = \"taylor_green\""), 21, "kind = \"solver\"");
    const auto ra = run(a, scratch("tg_a"));
    const auto rb = run(b, scratch("tg_b"));
    REQUIRE(ra.records.size() == rb.records.size());
    for (std::size_t i = 0; i < ra.records.size(); ++i)
        CHECK(rb.records[i].script_H == doctest::Approx(ra.records[i].script_H).epsilon(1e-9));
}

TEST_CASE("fit_gronwall") {
    std::vector<double> t, flat, grow, decay;
    for (int i = 0; i < 20; ++i) {
        t.push_back(0.05 * i);
        flat.push_back(0.3);
        grow.push_back(0.3 * std::exp(2.0 * t.back()));
        decay.push_back(0.3 * std::exp(-t.back()));
    }
    CHECK(fit_gronwall(t, flat).C_fit == 0.0);
    const auto g = fit_gronwall(t, grow);
    CHECK(g.C_fit == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(g.max_violation < 1e-12);
    const auto d = fit_gronwall(t, decay);
    CHECK(d.C_fit == 0.0);
    CHECK(d.slack > 0.0);
    CHECK(d.ls_slope == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK_THROWS_AS(fit_gronwall(std::vector<double>(t.begin(), t.begin() + 9),
                                 std::vector<double>(flat.begin(), flat.begin() + 9)),
                    InsufficientSamplesError);
}

TEST_CASE("fit_gronwall reads diagnostics.csv") {
    const auto dir = scratch("fit");
    run(kTorus, dir);
    const auto f = fit_gronwall(dir / "diagnostics.csv");
    CHECK(std::isfinite(f.C_fit));
    CHECK(f.samples >= 10);
    CHECK(f.max_violation < 1e-12);
}

TEST_CASE("sweeps") {
    std::string base = kOracle;
    base.replace(base.find("T = 1.0"), 7, "T = 0.05");

    SUBCASE("empty N list gives the header only") {
        const auto dir = scratch("sweep_empty");
        RunOptions o;
        o.output_dir = dir;
        scaling_sweep(validate_config(parse_toml(base + "\n[sweep]\nN = []\n")), o);
        CHECK(read_file(dir / "sweep.csv") == "N,epsilon,script_H_0,script_H_T,hneg_kappa_T,amplitude_bound,error\n");
    }
    SUBCASE("epsilon = 1/N keeps the current amplitude at sqrt 2") {
        RunOptions o;
        o.write_outputs = false;
        const auto r = scaling_sweep(
            validate_config(parse_toml(base + "\n[sweep]\nN = [16, 64, 256]\nepsilon_rule = \"1/N\"\n")), o);
        REQUIRE(r.rows.size() == 3);
        for (const auto& row : r.rows) {
            CHECK(row.error.empty());
            CHECK(row.amplitude_bound == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        }
    }
    SUBCASE("epsilon = N^-1/2 has decreasing final energy") {
        RunOptions o;
        o.write_outputs = false;
        const auto r = scaling_sweep(
            validate_config(parse_toml(base + "\n[sweep]\nN = [16, 64, 256, 1024]\nepsilon_rule = \"N^-0.5\"\n")), o);
        REQUIRE(r.rows.size() == 4);
        for (std::size_t i = 1; i < r.rows.size(); ++i) CHECK(r.rows[i].script_H_T < r.rows[i - 1].script_H_T);
    }
    SUBCASE("cell failures are recorded and the sweep continues") {
        RunOptions o;
        o.write_outputs = false;
        // at N = 16 the Taylor-Green corrector violates the smallness condition
        const auto r = scaling_sweep(validate_config(parse_toml(std::string(kTorus) + "\n[sweep]\nN = [16, 64]\n")), o);
        REQUIRE(r.rows.size() == 2);
        CHECK(r.rows[0].error.find("epsilon") != std::string::npos);
        CHECK(std::isnan(r.rows[0].script_H_T));
        CHECK(r.rows[1].error.empty());
        CHECK(std::isnan(r.rows[1].amplitude_bound));
    }
}

#ifdef RIESZ_LAKE_CLI
namespace {
int cli(const std::string& args, const fs::path& out) {
    const std::string cmd = std::string(RIESZ_LAKE_CLI) + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
}  // namespace

TEST_CASE("command line exit codes") {
    const auto dir = scratch("cli");
    fs::create_directories(dir);
    std::string no_kernel = kOracle;
    no_kernel.replace(no_kernel.find("[kernel]"), 33, "");
    write_file_atomic(dir / "bad.toml", no_kernel);
    CHECK(cli("run " + (dir / "bad.toml").string(), dir / "bad.log") == 2);
    CHECK(read_file(dir / "bad.log").find("kernel") != std::string::npos);

    write_file_atomic(dir / "good.toml", kOracle);
    CHECK(cli("run " + (dir / "good.toml").string() + " -o " + (dir / "out").string(), dir / "good.log") == 0);
    CHECK(fs::exists(dir / "out" / "meta.json"));
    CHECK(cli("fit-gronwall " + (dir / "out" / "diagnostics.csv").string(), dir / "fit.log") == 0);
    CHECK(cli("verify-equilibrium oned_coulomb_quadratic", dir / "v.log") == 0);
    CHECK(cli("verify-equilibrium nothing", dir / "v2.log") == 2);
    CHECK(cli("oracle-1d 8 0.1 0.5", dir / "o.log") == 0);
    CHECK(Json::parse(read_file(dir / "o.log"))["max_position_error"].get<double>() < 1e-6);
    CHECK(cli("fit-gronwall " + (dir / "missing.csv").string(), dir / "m.log") == 3);
}
#endif
