#include "riesz_lake/config.hpp"

#include <toml.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <regex>
#include <sstream>

#include "riesz_lake/equilibrium.hpp"
#include "riesz_lake/error.hpp"

namespace riesz_lake {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Json from_toml_node(const toml::node& node) {
    if (const auto* t = node.as_table()) {
        Json out = Json::object();
        for (const auto& [k, v] : *t) out[std::string(k.str())] = from_toml_node(v);
        return out;
    }
    if (const auto* a = node.as_array()) {
        Json out = Json::array();
        for (const auto& v : *a) out.push_back(from_toml_node(v));
        return out;
    }
    if (const auto* v = node.as_string()) return v->get();
    if (const auto* v = node.as_integer()) return v->get();
    if (const auto* v = node.as_floating_point()) return v->get();
    if (const auto* v = node.as_boolean()) return v->get();
    throw ConfigError("<document>", "dates and times are not supported");
}

std::string join(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
}

const Json& section(const Json& doc, const std::string& name, bool required) {
    static const Json empty = Json::object();
    if (!doc.contains(name)) {
        if (required) throw ConfigError(name, "missing required table");
        return empty;
    }
    if (!doc[name].is_object()) throw ConfigError(name, "must be a table");
    return doc[name];
}

double get_number(const Json& t, const std::string& sec, const std::string& key, std::optional<double> fallback) {
    if (!t.contains(key)) {
        if (!fallback) throw ConfigError(join(sec, key), "missing required value");
        return *fallback;
    }
    if (!t[key].is_number()) throw ConfigError(join(sec, key), "must be a number");
    return t[key].get<double>();
}

long get_integer(const Json& t, const std::string& sec, const std::string& key, std::optional<long> fallback) {
    if (!t.contains(key)) {
        if (!fallback) throw ConfigError(join(sec, key), "missing required value");
        return *fallback;
    }
    if (t[key].is_number_integer()) return t[key].get<long>();
    if (t[key].is_number_float()) {
        const double v = t[key].get<double>();
        if (v == std::floor(v)) return static_cast<long>(v);
    }
    throw ConfigError(join(sec, key), "must be an integer");
}

std::string get_string(const Json& t, const std::string& sec, const std::string& key,
                       std::optional<std::string> fallback) {
    if (!t.contains(key)) {
        if (!fallback) throw ConfigError(join(sec, key), "missing required value");
        return *fallback;
    }
    if (!t[key].is_string()) throw ConfigError(join(sec, key), "must be a string");
    return t[key].get<std::string>();
}

bool get_bool(const Json& t, const std::string& sec, const std::string& key, bool fallback) {
    if (!t.contains(key)) return fallback;
    if (!t[key].is_boolean()) throw ConfigError(join(sec, key), "must be true or false");
    return t[key].get<bool>();
}

// Rule given either as a number or as a string expression in N.
std::string rule_text(const Json& v) {
    if (v.is_number()) {
        std::ostringstream os;
        os.precision(17);
        os << v.get<double>();
        return os.str();
    }
    if (v.is_string()) return v.get<std::string>();
    throw ConfigError("epsilon_rule", "must be a number or a string");
}

double parse_number(const std::string& s, const std::string& field) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw ConfigError(field, "cannot parse '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError(field, "cannot parse '" + s + "'");
    }
}

std::string strip(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    return s;
}

}  // namespace

Json parse_toml(const std::string& text) {
    try {
        return from_toml_node(toml::parse(text));
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << e.description() << " at line " << e.source().begin.line;
        throw ConfigError("<document>", os.str());
    }
}

Json load_config_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<path>", "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    Json doc;
    if (path.extension() == ".json") {
        try {
            doc = Json::parse(buf.str());
        } catch (const Json::parse_error& e) {
            throw ConfigError("<document>", e.what());
        }
        if (doc.contains("config") && doc["config"].is_object()) return doc["config"];
        return doc;
    }
    return parse_toml(buf.str());
}

double eval_epsilon_rule(const std::string& rule_in, int N) {
    const std::string rule = strip(rule_in);
    if (rule.empty()) throw ConfigError("epsilon_rule", "empty rule");
    static const std::regex power(R"(^(?:([0-9.eE+-]+)\*)?N\^\(?([+-]?[0-9.eE+-]+)\)?$)");
    static const std::regex over(R"(^([0-9.eE+-]+)/N(?:\^\(?([+-]?[0-9.eE+-]+)\)?)?$)");
    std::smatch m;
    double v;
    if (std::regex_match(rule, m, power)) {
        const double a = m[1].matched ? parse_number(m[1], "epsilon_rule") : 1.0;
        v = a * std::pow(static_cast<double>(N), parse_number(m[2], "epsilon_rule"));
    } else if (std::regex_match(rule, m, over)) {
        const double p = m[2].matched ? parse_number(m[2], "epsilon_rule") : 1.0;
        v = parse_number(m[1], "epsilon_rule") * std::pow(static_cast<double>(N), -p);
    } else if (rule == "N") {
        v = N;
    } else {
        v = parse_number(rule, "epsilon_rule");
    }
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("epsilon_rule", "rule '" + rule_in + "' is not positive");
    return v;
}

double eval_dt_rule(const std::string& rule_in, double epsilon) {
    const std::string rule = strip(rule_in);
    static const std::regex div(R"(^epsilon/([0-9.eE+-]+)$)");
    static const std::regex mul(R"(^([0-9.eE+-]+)\*epsilon$|^epsilon\*([0-9.eE+-]+)$)");
    std::smatch m;
    double v;
    if (std::regex_match(rule, m, div)) {
        v = epsilon / parse_number(m[1], "dt_rule");
    } else if (std::regex_match(rule, m, mul)) {
        v = epsilon * parse_number(m[1].matched ? m[1].str() : m[2].str(), "dt_rule");
    } else if (rule == "epsilon") {
        v = epsilon;
    } else {
        v = parse_number(rule, "dt_rule");
    }
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("dt_rule", "rule '" + rule_in + "' is not positive");
    return v;
}

Json with_cell(const Json& doc, int N, const std::string& epsilon_rule) {
    Json out = doc;
    out["N"] = N;
    out.erase("epsilon");
    out["epsilon_rule"] = epsilon_rule;
    return out;
}

ScenarioConfig validate_config(const Json& doc_in) {
    if (!doc_in.is_object()) throw ConfigError("<document>", "top level must be a table");
    Json doc = doc_in;
    ScenarioConfig c;
    c.name = get_string(doc, "", "name", "scenario");
    doc["name"] = c.name;

    // kernel
    const Json k = section(doc, "kernel", true);
    const std::string family = get_string(k, "kernel", "family", std::nullopt);
    static const std::vector<std::string> families = {"riesz", "log", "one_d_coulomb", "torus_riesz",
                                                      "torus_spectral"};
    if (std::find(families.begin(), families.end(), family) == families.end())
        throw ConfigError("kernel.family", "unknown family '" + family + "'");
    const bool torus_kernel = family == "torus_riesz" || family == "torus_spectral";

    // domain
    Json dom = section(doc, "domain", false);
    const std::string dkind = get_string(dom, "domain", "kind", torus_kernel ? "torus" : "whole_space");
    if (dkind != "torus" && dkind != "whole_space") throw ConfigError("domain.kind", "must be torus or whole_space");
    c.torus = dkind == "torus";
    if (c.torus != torus_kernel)
        throw ConfigError("domain.kind", "torus kernels need a torus domain and whole-space kernels need whole_space");
    const long dim = get_integer(dom, "domain", "dim", family == "one_d_coulomb" ? std::optional<long>(1) : std::nullopt);
    if (dim < 1 || dim > 3) throw ConfigError("domain.dim", "must be 1, 2 or 3");
    if (family == "one_d_coulomb" && dim != 1) throw ConfigError("domain.dim", "one_d_coulomb requires dim = 1");
    c.dim = static_cast<int>(dim);
    c.L = get_number(dom, "domain", "L", 2.0 * std::numbers::pi);
    if (!(c.L > 0.0)) throw ConfigError("domain.L", "must be positive");
    c.grid_n = static_cast<int>(get_integer(dom, "domain", "n", 64));
    if (c.grid_n < 4) throw ConfigError("domain.n", "must be at least 4");
    dom["kind"] = dkind;
    dom["dim"] = c.dim;
    if (c.torus) {
        dom["L"] = c.L;
        dom["n"] = c.grid_n;
    }
    doc["domain"] = dom;

    // Validate kernel parameters by building it once.
    Json kk = k;
    if (family == "riesz" || family == "torus_riesz") (void)get_number(k, "kernel", "s", std::nullopt);
    if (family == "torus_riesz" || family == "torus_spectral") kk["k_max"] = get_integer(k, "kernel", "k_max", 16);
    kk["min_distance"] = get_number(k, "kernel", "min_distance", 0.0);
    doc["kernel"] = kk;

    // particles and time
    c.N = static_cast<int>(get_integer(doc, "", "N", std::nullopt));
    if (c.N < 1) throw ConfigError("N", "must be at least 1");
    if (doc.contains("epsilon") && doc.contains("epsilon_rule"))
        throw ConfigError("epsilon", "give either epsilon or epsilon_rule, not both");
    if (doc.contains("epsilon")) {
        c.epsilon = get_number(doc, "", "epsilon", std::nullopt);
        if (!(c.epsilon > 0.0)) throw ConfigError("epsilon", "must be positive");
        c.epsilon_rule = rule_text(doc["epsilon"]);
    } else if (doc.contains("epsilon_rule")) {
        c.epsilon_rule = rule_text(doc["epsilon_rule"]);
        c.epsilon = eval_epsilon_rule(c.epsilon_rule, c.N);
    } else {
        throw ConfigError("epsilon", "missing: give epsilon or epsilon_rule");
    }
    c.gamma = get_number(doc, "", "gamma", 0.0);
    if (c.gamma < 0.0) throw ConfigError("gamma", "must be nonnegative");
    c.T = get_number(doc, "", "T", std::nullopt);
    if (c.T < 0.0) throw ConfigError("T", "must be nonnegative");
    if (doc.contains("dt")) {
        c.dt = get_number(doc, "", "dt", std::nullopt);
        if (!(c.dt > 0.0)) throw ConfigError("dt", "must be positive");
        c.dt_rule = rule_text(doc["dt"]);
    } else {
        c.dt_rule = get_string(doc, "", "dt_rule", "epsilon/100");
        c.dt = eval_dt_rule(c.dt_rule, c.epsilon);
        doc["dt_rule"] = c.dt_rule;
    }
    try {
        c.scheme = scheme_from_string(get_string(doc, "", "scheme", "yoshida4"));
    } catch (const PreconditionError& e) {
        throw ConfigError("scheme", e.what());
    }
    doc["scheme"] = to_string(c.scheme);
    const long seed = get_integer(doc, "", "seed", 1);
    if (seed < 0) throw ConfigError("seed", "must be nonnegative");
    c.seed = static_cast<std::uint64_t>(seed);
    doc["gamma"] = c.gamma;
    doc["seed"] = seed;

    // confinement
    Json conf = section(doc, "confinement", false);
    const std::string ckind = get_string(conf, "confinement", "kind", "zero");
    if (ckind == "quadratic") {
        conf["a"] = get_number(conf, "confinement", "a", 1.0);
    } else if (ckind == "radial_polynomial") {
        if (!conf.contains("coeffs") || !conf["coeffs"].is_array())
            throw ConfigError("confinement.coeffs", "must be an array of numbers");
    } else if (ckind != "zero") {
        throw ConfigError("confinement.kind", "unknown confinement '" + ckind + "'");
    }
    if (c.torus && ckind != "zero") throw ConfigError("confinement.kind", "torus scenarios use kind = \"zero\"");
    conf["kind"] = ckind;
    doc["confinement"] = conf;

    // background
    Json bg = section(doc, "background", false);
    const std::string bkind = get_string(bg, "background", "kind", c.torus ? std::optional<std::string>("torus_uniform")
                                                                           : std::nullopt);
    if (bkind == "equilibrium") {
        const std::string id = get_string(bg, "background", "case", std::nullopt);
        const auto ids = equilibrium_case_ids();
        if (std::find(ids.begin(), ids.end(), id) == ids.end())
            throw ConfigError("background.case", "unknown equilibrium case '" + id + "'");
        if (id == "torus_uniform") throw ConfigError("background.case", "use kind = \"torus_uniform\" instead");
    } else if (bkind == "uniform_ball") {
        bg["radius"] = get_number(bg, "background", "radius", 1.0);
    } else if (bkind == "torus_uniform") {
        if (!c.torus) throw ConfigError("background.kind", "torus_uniform needs a torus domain");
    } else {
        throw ConfigError("background.kind", "unknown background '" + bkind + "'");
    }
    if (c.torus && bkind != "torus_uniform") throw ConfigError("background.kind", "torus domains use torus_uniform");
    bg["kind"] = bkind;
    doc["background"] = bg;

    // init
    Json in = section(doc, "init", false);
    c.init_kind = get_string(in, "init", "kind", "monokinetic");
    static const std::vector<std::string> inits = {"monokinetic", "lattice", "critical_point", "exact_oscillating"};
    if (std::find(inits.begin(), inits.end(), c.init_kind) == inits.end())
        throw ConfigError("init.kind", "unknown init '" + c.init_kind + "'");
    if ((c.init_kind == "critical_point" || c.init_kind == "exact_oscillating") && c.dim != 1)
        throw ConfigError("init.kind", c.init_kind + " is only defined in one dimension");
    if (c.init_kind == "lattice" && !c.torus) throw ConfigError("init.kind", "lattice init needs a torus domain");
    if (in.contains("r_N")) {
        c.r_N = in["r_N"].is_number() ? in["r_N"].get<double>() : eval_epsilon_rule(rule_text(in["r_N"]), c.N);
        if (c.r_N < 0.0) throw ConfigError("init.r_N", "must be nonnegative");
    } else {
        in["r_N"] = 0.0;
    }
    c.lattice_jitter = get_number(in, "init", "jitter", 0.0);
    in["kind"] = c.init_kind;
    doc["init"] = in;

    // modulating field
    Json fld = section(doc, "field", false);
    c.field_kind = get_string(fld, "field", "kind", "zero");
    if (c.field_kind != "zero" && c.field_kind != "taylor_green" && c.field_kind != "solver")
        throw ConfigError("field.kind", "unknown field '" + c.field_kind + "'");
    if (c.field_kind != "zero" && (!c.torus || c.dim != 2))
        throw ConfigError("field.kind", "non-zero modulating fields need a two-dimensional torus");
    c.field_amplitude = get_number(fld, "field", "amplitude", 1.0);
    c.field_source = get_string(fld, "field", "source", "taylor_green");
    if (c.field_source != "taylor_green" && c.field_source != "random")
        throw ConfigError("field.source", "must be taylor_green or random");
    c.field_kmax = static_cast<int>(get_integer(fld, "field", "kmax", 4));
    fld["kind"] = c.field_kind;
    if (c.field_kind != "zero") {
        fld["amplitude"] = c.field_amplitude;
        if (c.field_kind == "solver") {
            fld["source"] = c.field_source;
            fld["kmax"] = c.field_kmax;
        }
    }
    doc["field"] = fld;

    // diagnostics
    Json dg = section(doc, "diagnostics", false);
    c.sample_every = static_cast<int>(get_integer(dg, "diagnostics", "every", 10));
    if (c.sample_every < 1) throw ConfigError("diagnostics.every", "must be at least 1");
    c.write_trajectory = get_bool(dg, "diagnostics", "trajectory", false);
    c.write_plots = get_bool(dg, "diagnostics", "plots", true);
    c.kappa = get_number(dg, "diagnostics", "kappa", kNaN);
    c.K_max = static_cast<int>(get_integer(dg, "diagnostics", "K_max", 16));
    c.C = get_number(dg, "diagnostics", "C", kNaN);
    c.regular = get_bool(dg, "diagnostics", "regular", false);
    if (c.regular && family != "torus_spectral" && family != "torus_riesz")
        throw ConfigError("diagnostics.regular", "the regular energy needs a torus kernel");
    dg["every"] = c.sample_every;
    dg["trajectory"] = c.write_trajectory;
    dg["plots"] = c.write_plots;
    dg["K_max"] = c.K_max;
    doc["diagnostics"] = dg;

    // output
    Json out = section(doc, "output", false);
    c.output_dir = get_string(out, "output", "dir", "out/" + c.name);
    out["dir"] = c.output_dir;
    doc["output"] = out;

    // sweep
    if (doc.contains("sweep")) {
        const Json& sw = section(doc, "sweep", false);
        if (sw.contains("N")) {
            if (!sw["N"].is_array()) throw ConfigError("sweep.N", "must be an array of integers");
            for (const auto& v : sw["N"]) {
                if (!v.is_number_integer() || v.get<long>() < 1)
                    throw ConfigError("sweep.N", "entries must be positive integers");
                c.sweep_N.push_back(v.get<int>());
            }
        }
        if (sw.contains("epsilon_rule")) {
            const Json& r = sw["epsilon_rule"];
            if (r.is_array())
                for (const auto& v : r) c.sweep_rules.push_back(rule_text(v));
            else
                c.sweep_rules.push_back(rule_text(r));
            for (const auto& rule : c.sweep_rules) (void)eval_epsilon_rule(rule, 1);
        } else {
            c.sweep_rules.push_back(c.epsilon_rule);
        }
    }

    c.json = doc;
    // Build the physics objects once so that parameter errors surface as config errors.
    try {
        (void)make_kernel(c);
        (void)make_confinement(c);
        (void)make_background(c);
    } catch (const InvalidKernelError& e) {
        throw ConfigError("kernel", e.what());
    } catch (const PreconditionError& e) {
        throw ConfigError("confinement", e.what());
    }
    return c;
}

Kernel make_kernel(const ScenarioConfig& cfg) {
    const Json& k = cfg.json.at("kernel");
    const std::string family = k.at("family").get<std::string>();
    Kernel out = [&]() {
        if (family == "riesz") return Kernel::riesz(get_number(k, "kernel", "s", std::nullopt), cfg.dim);
        if (family == "log") return Kernel::log(cfg.dim);
        if (family == "one_d_coulomb") return Kernel::one_d_coulomb();
        const int kmax = static_cast<int>(get_integer(k, "kernel", "k_max", 16));
        if (family == "torus_riesz")
            return Kernel::torus_riesz(get_number(k, "kernel", "s", std::nullopt), cfg.dim, cfg.L, kmax);
        // torus_spectral: modes = [{m = [1, 0], value = 1.0}, ...]
        if (!k.contains("modes") || !k["modes"].is_array())
            throw ConfigError("kernel.modes", "torus_spectral kernels need a modes array");
        std::vector<WaveMode> modes;
        for (const auto& e : k["modes"]) {
            if (!e.is_object() || !e.contains("m") || !e.contains("value") || !e["m"].is_array() ||
                static_cast<int>(e["m"].size()) != cfg.dim)
                throw ConfigError("kernel.modes", "each mode needs m (length dim) and value");
            WaveMode w;
            for (int a = 0; a < cfg.dim; ++a) w.m[a] = e["m"][a].get<int>();
            w.value = e["value"].get<double>();
            modes.push_back(w);
        }
        return Kernel::torus_spectral(cfg.dim, cfg.L, std::move(modes), get_number(k, "kernel", "kappa", 0.0));
    }();
    const double r = get_number(k, "kernel", "min_distance", 0.0);
    return r > 0.0 ? out.with_min_distance(r) : out;
}

Confinement make_confinement(const ScenarioConfig& cfg) {
    const Json& c = cfg.json.at("confinement");
    const std::string kind = c.at("kind").get<std::string>();
    if (kind == "quadratic") return Confinement::quadratic(cfg.dim, c.at("a").get<double>());
    if (kind == "radial_polynomial") {
        std::vector<double> coeffs;
        for (const auto& v : c.at("coeffs")) {
            if (!v.is_number()) throw ConfigError("confinement.coeffs", "entries must be numbers");
            coeffs.push_back(v.get<double>());
        }
        return Confinement::radial_polynomial(cfg.dim, std::move(coeffs));
    }
    return Confinement::zero(cfg.dim);
}

BackgroundDensity make_background(const ScenarioConfig& cfg) {
    const Json& b = cfg.json.at("background");
    const std::string kind = b.at("kind").get<std::string>();
    if (kind == "equilibrium") {
        const auto ec = equilibrium_case(b.at("case").get<std::string>());
        if (ec.mu.dim() != cfg.dim) throw ConfigError("background.case", "dimension differs from domain.dim");
        return ec.mu;
    }
    if (kind == "uniform_ball") return BackgroundDensity::uniform_ball(cfg.dim, b.at("radius").get<double>());
    return BackgroundDensity::torus_uniform(cfg.dim, cfg.L);
}

}  // namespace riesz_lake
