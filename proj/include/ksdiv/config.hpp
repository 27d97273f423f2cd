// config.hpp: Declarative run configuration: a sectioned key = value file
// with a versioned schema field, parsed with line/field diagnostics.

#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "rates.hpp"

namespace ksdiv::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ------------------------------- raw key-value -------------------------------

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
    mutable bool used = false;
};

struct RawConfig {
    std::string path;
    std::map<std::string, std::vector<ConfigEntry>> sections;

    const ConfigEntry* find(const std::string& section, const std::string& key) const {
        auto it = sections.find(section);
        if (it == sections.end()) return nullptr;
        for (const ConfigEntry& e : it->second)
            if (e.key == key) {
                e.used = true;
                return &e;
            }
        return nullptr;
    }

    [[noreturn]] void fail(const std::string& msg, int line = 0) const {
        std::ostringstream os;
        os << path << ":";
        if (line > 0) os << line << ":";
        os << " " << msg;
        throw ConfigError(os.str());
    }

    void fail_entry(const ConfigEntry& e, const std::string& msg) const {
        fail("field '" + e.key + "': " + msg, e.line);
    }

    // strictness: unknown fields are diagnosed, not silently ignored
    void check_all_used() const {
        for (const auto& [sec, entries] : sections)
            for (const ConfigEntry& e : entries)
                if (!e.used)
                    fail("unknown field '" + e.key + "' in section [" + sec + "]", e.line);
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace detail

inline RawConfig parse_config_text(const std::string& text, const std::string& path_label) {
    RawConfig cfg;
    cfg.path = path_label;
    std::istringstream in(text);
    std::string line;
    std::string section;  // top-level fields live in the unnamed section
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                cfg.fail("malformed section header '" + line + "'", lineno);
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section.empty()) cfg.fail("empty section name", lineno);
            cfg.sections[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            cfg.fail("expected 'key = value', got '" + line + "'", lineno);
        ConfigEntry e;
        e.key = detail::trim(line.substr(0, eq));
        e.value = detail::trim(line.substr(eq + 1));
        e.line = lineno;
        if (e.key.empty()) cfg.fail("empty key", lineno);
        if (e.value.empty()) cfg.fail("field '" + e.key + "': empty value", lineno);
        cfg.sections[section].push_back(e);
    }
    return cfg;
}

inline RawConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config_text(os.str(), path);
}

// ------------------------------ typed extraction -----------------------------

namespace detail {

inline double parse_double(const RawConfig& cfg, const ConfigEntry& e, const std::string& token) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(token, &pos);
        if (pos != token.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
        return v;
    } catch (const std::exception&) {
        cfg.fail_entry(e, "'" + token + "' is not a finite number");
    }
    return 0.0;  // unreachable
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

}  // namespace detail

enum class Model { PauliRates, AmplitudeDamping, CustomTransfer };

struct RunConfig {
    Model model = Model::PauliRates;
    double t_max = 5.0;
    int grid = 101;
    std::uint64_t seed = 42;
    std::uint64_t budget = 2000;
    double tie_tolerance = 1e-12;

    generators::RateFunctions rates;                      // pauli-rates
    bool has_rates = false;
    std::function<cplx(double)> damping_g;                // amplitude-damping
    std::optional<std::array<double, 16>> transfer;       // custom-transfer
    std::optional<std::array<double, 3>> map_q;           // witness targets
    std::optional<std::array<double, 4>> map_mixture;
    std::optional<std::string> map_builtin;
    std::optional<std::array<double, 3>> generator_rates;

    // region scan
    bool region_slice = true;
    int resolution = 201;
    bool out_csv = true;
    bool out_svg = true;
};

namespace detail {

inline generators::RateFunction parse_rate(const RawConfig& cfg, const ConfigEntry& e) {
    const auto tok = split_ws(e.value);
    if (tok.empty()) cfg.fail_entry(e, "empty rate specification");
    const std::string& kind = tok[0];
    if (kind == "constant") {
        if (tok.size() != 2) cfg.fail_entry(e, "constant takes 1 parameter: constant <c>");
        return generators::RateFunction::constant(parse_double(cfg, e, tok[1]));
    }
    if (kind == "tanh") {
        if (tok.size() != 3) cfg.fail_entry(e, "tanh takes 2 parameters: tanh <a> <b>");
        return generators::RateFunction::tanh_scaled(parse_double(cfg, e, tok[1]),
                                                     parse_double(cfg, e, tok[2]));
    }
    if (kind == "exp") {
        if (tok.size() != 3) cfg.fail_entry(e, "exp takes 2 parameters: exp <a> <b>");
        return generators::RateFunction::exponential(parse_double(cfg, e, tok[1]),
                                                     parse_double(cfg, e, tok[2]));
    }
    if (kind == "table") {
        if (tok.size() != 2) cfg.fail_entry(e, "table takes 1 parameter: table <csv-path>");
        std::ifstream in(tok[1]);
        if (!in) cfg.fail_entry(e, "cannot open rate table '" + tok[1] + "'");
        std::vector<double> ts, gs;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            line = trim(line);
            if (line.empty() || line.front() == '#') continue;
            for (char& c : line)
                if (c == ',') c = ' ';
            const auto cols = split_ws(line);
            if (lineno == 1 && !cols.empty() && !std::isdigit(static_cast<unsigned char>(cols[0][0])) &&
                cols[0][0] != '-' && cols[0][0] != '+' && cols[0][0] != '.')
                continue;  // header row
            if (cols.size() != 2)
                cfg.fail_entry(e, "rate table '" + tok[1] + "' line " + std::to_string(lineno) +
                                      ": expected 2 columns (t, gamma)");
            ts.push_back(parse_double(cfg, e, cols[0]));
            gs.push_back(parse_double(cfg, e, cols[1]));
        }
        try {
            return generators::RateFunction::tabulated(std::move(ts), std::move(gs));
        } catch (const std::invalid_argument& ex) {
            cfg.fail_entry(e, std::string("rate table '") + tok[1] + "': " + ex.what());
        }
    }
    cfg.fail_entry(e, "unknown rate kind '" + kind + "' (constant | tanh | exp | table)");
    return generators::RateFunction::constant(0.0);  // unreachable
}

template <std::size_t N>
std::array<double, N> parse_numbers(const RawConfig& cfg, const ConfigEntry& e) {
    const auto tok = split_ws(e.value);
    if (tok.size() != N)
        cfg.fail_entry(e, "expected " + std::to_string(N) + " numbers, got " +
                              std::to_string(tok.size()));
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) out[i] = parse_double(cfg, e, tok[i]);
    return out;
}

}  // namespace detail

inline RunConfig load_run_config(const RawConfig& raw) {
    RunConfig rc;

    const ConfigEntry* schema = raw.find("", "schema");
    if (!schema) raw.fail("missing required top-level field 'schema = 1'");
    if (schema->value != "1") raw.fail_entry(*schema, "unsupported schema version '" + schema->value + "'");

    if (const ConfigEntry* e = raw.find("run", "model")) {
        if (e->value == "pauli-rates")
            rc.model = Model::PauliRates;
        else if (e->value == "amplitude-damping")
            rc.model = Model::AmplitudeDamping;
        else if (e->value == "custom-transfer")
            rc.model = Model::CustomTransfer;
        else
            raw.fail_entry(*e, "unknown model (pauli-rates | amplitude-damping | custom-transfer)");
    }
    if (const ConfigEntry* e = raw.find("run", "t_max")) {
        rc.t_max = detail::parse_double(raw, *e, e->value);
        if (!(rc.t_max > 0.0)) raw.fail_entry(*e, "t_max must be positive");
    }
    if (const ConfigEntry* e = raw.find("run", "grid")) {
        rc.grid = static_cast<int>(detail::parse_double(raw, *e, e->value));
        if (rc.grid < 2) raw.fail_entry(*e, "grid must be at least 2");
    }
    if (const ConfigEntry* e = raw.find("run", "seed"))
        rc.seed = static_cast<std::uint64_t>(detail::parse_double(raw, *e, e->value));
    if (const ConfigEntry* e = raw.find("run", "budget")) {
        const double b = detail::parse_double(raw, *e, e->value);
        if (b < 1) raw.fail_entry(*e, "budget must be at least 1");
        rc.budget = static_cast<std::uint64_t>(b);
    }
    if (const ConfigEntry* e = raw.find("run", "tie_tolerance")) {
        rc.tie_tolerance = detail::parse_double(raw, *e, e->value);
        if (rc.tie_tolerance < 0.0) raw.fail_entry(*e, "tie_tolerance must be nonnegative");
    }

    if (rc.model == Model::PauliRates && raw.sections.count("rates")) {
        const char* names[3] = {"gamma1", "gamma2", "gamma3"};
        for (int k = 0; k < 3; ++k) {
            const ConfigEntry* e = raw.find("rates", names[k]);
            if (!e) raw.fail("section [rates] is missing field '" + std::string(names[k]) + "'");
            rc.rates.gamma[k] = detail::parse_rate(raw, *e);
        }
        rc.has_rates = true;
    }

    if (rc.model == Model::AmplitudeDamping) {
        const ConfigEntry* e = raw.find("damping", "G");
        if (!e) raw.fail("model amplitude-damping requires section [damping] with field 'G'");
        const auto tok = detail::split_ws(e->value);
        if (tok.size() == 2 && tok[0] == "exp") {
            const double b = detail::parse_double(raw, *e, tok[1]);
            rc.damping_g = [b](double t) { return cplx(std::exp(-b * t), 0.0); };
        } else if (tok.size() == 3 && tok[0] == "exp-osc") {
            // exp-osc <b> <w>: exp(-b t) * exp(-i w t / 2)
            const double b = detail::parse_double(raw, *e, tok[1]);
            const double w = detail::parse_double(raw, *e, tok[2]);
            rc.damping_g = [b, w](double t) {
                return std::exp(cplx(-b * t, -0.5 * w * t));
            };
        } else {
            raw.fail_entry(*e, "expected 'exp <b>' or 'exp-osc <b> <w>'");
        }
    }

    if (raw.sections.count("map")) {
        if (const ConfigEntry* e = raw.find("map", "q"))
            rc.map_q = detail::parse_numbers<3>(raw, *e);
        if (const ConfigEntry* e = raw.find("map", "mixture"))
            rc.map_mixture = detail::parse_numbers<4>(raw, *e);
        if (const ConfigEntry* e = raw.find("map", "transfer"))
            rc.transfer = detail::parse_numbers<16>(raw, *e);
        if (const ConfigEntry* e = raw.find("map", "builtin")) {
            if (e->value != "transposition" && e->value != "identity")
                raw.fail_entry(*e, "unknown builtin map (transposition | identity)");
            rc.map_builtin = e->value;
        }
        if (const ConfigEntry* e = raw.find("map", "generator_rates"))
            rc.generator_rates = detail::parse_numbers<3>(raw, *e);
    }

    if (raw.sections.count("region")) {
        if (const ConfigEntry* e = raw.find("region", "mode")) {
            if (e->value == "slice")
                rc.region_slice = true;
            else if (e->value == "cube")
                rc.region_slice = false;
            else
                raw.fail_entry(*e, "unknown mode (slice | cube)");
        }
        if (const ConfigEntry* e = raw.find("region", "resolution")) {
            rc.resolution = static_cast<int>(detail::parse_double(raw, *e, e->value));
            if (rc.resolution < 2) raw.fail_entry(*e, "resolution must be at least 2");
        }
        if (const ConfigEntry* e = raw.find("region", "outputs")) {
            rc.out_csv = rc.out_svg = false;
            for (const std::string& t : detail::split_ws(e->value)) {
                if (t == "csv")
                    rc.out_csv = true;
                else if (t == "svg")
                    rc.out_svg = true;
                else
                    raw.fail_entry(*e, "unknown output kind '" + t + "' (csv | svg)");
            }
        }
    }

    raw.check_all_used();
    return rc;
}

inline RunConfig load_run_config_file(const std::string& path) {
    return load_run_config(parse_config_file(path));
}

}  // namespace ksdiv::cli
