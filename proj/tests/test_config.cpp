#include <doctest.h>

#include <cmath>
#include <string>

#include "riesz_lake/config.hpp"
#include "riesz_lake/error.hpp"

using namespace riesz_lake;

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
)";

std::string field_of(const std::string& toml) {
    try {
        validate_config(parse_toml(toml));
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto p = s.find(from);
    REQUIRE(p != std::string::npos);
    return s.replace(p, from.size(), to);
}

}  // namespace

TEST_CASE("defaults are filled in") {
    const auto cfg = validate_config(parse_toml(kOracle));
    CHECK(cfg.dim == 1);
    CHECK_FALSE(cfg.torus);
    CHECK(cfg.dt == doctest::Approx(0.001));
    CHECK(cfg.dt_rule == "epsilon/100");
    CHECK(cfg.scheme == Scheme::Yoshida4);
    CHECK(cfg.gamma == 0.0);
    CHECK(cfg.sample_every == 10);
    CHECK(cfg.field_kind == "zero");
    CHECK(std::isnan(cfg.C));
    CHECK(cfg.output_dir == "out/oracle");
    CHECK(cfg.json["scheme"] == "yoshida4");
    CHECK(cfg.json["domain"]["dim"] == 1);
}

TEST_CASE("normalized documents are a fixed point") {
    const auto cfg = validate_config(parse_toml(kOracle));
    const auto again = validate_config(cfg.json);
    CHECK(again.json == cfg.json);
    CHECK(again.dt == cfg.dt);
    CHECK(again.epsilon == cfg.epsilon);
}

TEST_CASE("epsilon rules") {
    CHECK(eval_epsilon_rule("N^-0.5", 16) == doctest::Approx(0.25));
    CHECK(eval_epsilon_rule("2*N^-1", 8) == doctest::Approx(0.25));
    CHECK(eval_epsilon_rule("1/N", 64) == doctest::Approx(1.0 / 64));
    CHECK(eval_epsilon_rule("3/N^0.5", 9) == doctest::Approx(1.0));
    CHECK(eval_epsilon_rule("0.05", 1000) == doctest::Approx(0.05));
    CHECK(eval_epsilon_rule(" N ^ -0.3 ", 256) == doctest::Approx(std::pow(256.0, -0.3)));
    CHECK_THROWS_AS(eval_epsilon_rule("log(N)", 4), ConfigError);
    CHECK_THROWS_AS(eval_epsilon_rule("-1", 4), ConfigError);
}

TEST_CASE("dt rules") {
    CHECK(eval_dt_rule("epsilon/100", 0.5) == doctest::Approx(0.005));
    CHECK(eval_dt_rule("0.02*epsilon", 0.5) == doctest::Approx(0.01));
    CHECK(eval_dt_rule("epsilon*0.1", 0.5) == doctest::Approx(0.05));
    CHECK(eval_dt_rule("1e-3", 0.5) == doctest::Approx(0.001));
    CHECK_THROWS_AS(eval_dt_rule("epsilon^2", 0.5), ConfigError);
}

TEST_CASE("epsilon rule in the document") {
    const auto cfg = validate_config(parse_toml(replace(kOracle, "epsilon = 0.1", "epsilon_rule = \"1/N\"")));
    CHECK(cfg.epsilon == doctest::Approx(1.0 / 16));
    CHECK(cfg.dt == doctest::Approx(1.0 / 1600));
}

TEST_CASE("validation errors name the field") {
    CHECK(field_of(replace(kOracle, "[kernel]\nfamily = \"one_d_coulomb\"", "")) == "kernel");
    CHECK(field_of(replace(kOracle, "one_d_coulomb", "yukawa")) == "kernel.family");
    CHECK(field_of(replace(kOracle, "N = 16", "N = 0")) == "N");
    CHECK(field_of(replace(kOracle, "N = 16", "N = \"many\"")) == "N");
    CHECK(field_of(replace(kOracle, "epsilon = 0.1", "")) == "epsilon");
    CHECK(field_of(replace(kOracle, "epsilon = 0.1", "epsilon = -0.1")) == "epsilon");
    CHECK(field_of(replace(kOracle, "T = 1.0", "T = 1.0\nscheme = \"rk4\"")) == "scheme");
    CHECK(field_of(replace(kOracle, "case = \"oned_coulomb_quadratic\"", "case = \"nope\"")) == "background.case");
    CHECK(field_of(replace(kOracle, "exact_oscillating", "spiral")) == "init.kind");
    CHECK(field_of(replace(kOracle, "T = 1.0", "T = 1.0\n[field]\nkind = \"taylor_green\"")) == "field.kind");
    CHECK(field_of(replace(kOracle, "T = 1.0", "T = 1.0\n[domain]\nkind = \"torus\"")) == "domain.kind");
    CHECK(field_of(replace(kOracle, "T = 1.0", "T = 1.0\n[sweep]\nN = [4, -1]")) == "sweep.N");
}

TEST_CASE("missing kernel message mentions the kernel") {
    try {
        validate_config(parse_toml(replace(kOracle, "[kernel]\nfamily = \"one_d_coulomb\"", "")));
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("kernel") != std::string::npos);
    }
}

TEST_CASE("TOML syntax errors are config errors") {
    CHECK_THROWS_AS(parse_toml("N = = 3"), ConfigError);
}

TEST_CASE("builders") {
    const auto cfg = validate_config(parse_toml(kOracle));
    CHECK(make_kernel(cfg).describe() == Kernel::one_d_coulomb().describe());
    CHECK(make_confinement(cfg).quadratic_coefficient() == 1.0);
    CHECK(make_background(cfg).support().radius == 1.0);

    const char* torus = R"(
N = 64
epsilon_rule = "N^-0.3"
T = 0.1
[kernel]
family = "torus_riesz"
s = 0.0
k_max = 8
[domain]
dim = 2
L = 6.283185307179586
[init]
kind = "lattice"
[field]
kind = "taylor_green"
amplitude = 0.5
[sweep]
N = [16, 64]
epsilon_rule = ["N^-0.3", "N^-0.5"]
)";
    const auto t = validate_config(parse_toml(torus));
    CHECK(t.torus);
    CHECK(t.json["domain"]["kind"] == "torus");
    CHECK(t.json["background"]["kind"] == "torus_uniform");
    CHECK(make_kernel(t).k_max() == 8);
    CHECK(make_background(t).periodic());
    CHECK(t.sweep_N == std::vector<int>{16, 64});
    CHECK(t.sweep_rules.size() == 2);
    const auto cell = validate_config(with_cell(t.json, 16, "N^-0.5"));
    CHECK(cell.N == 16);
    CHECK(cell.epsilon == doctest::Approx(0.25));
}

TEST_CASE("torus spectral kernel from modes") {
    const char* doc = R"(
N = 8
epsilon = 0.5
T = 0.0
[kernel]
family = "torus_spectral"
modes = [ { m = [1], value = 1.0 }, { m = [-1], value = 1.0 } ]
[domain]
dim = 1
L = 1.0
)";
    const auto cfg = validate_config(parse_toml(doc));
    CHECK(make_kernel(cfg).coefficient({1, 0, 0}) == 1.0);
    CHECK(field_of(replace(doc, "value = 1.0 }, { m = [-1], value = 1.0", "value = 1.0")) == "kernel");
}
