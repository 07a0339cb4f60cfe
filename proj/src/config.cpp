#include "colmod/config.hpp"

#include "colmod/errors.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace colmod {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    if (trim(value).empty()) return out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(fmt::format("{}: '{}' is not a number", key, text));
    }
    return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", key, text));
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, text));
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(to_double(key, item));
    return out;
}

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return fmt::format("{}", v);  // shortest round-trip representation
}

std::string fmt_doubles(const std::vector<double>& v) {
    std::vector<std::string> parts;
    for (double x : v) parts.push_back(fmt_double(x));
    return fmt::format("{}", fmt::join(parts, ", "));
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"experiment", [](auto& c, auto&, auto& v) { c.experiment = trim(v); }},
        {"seed", [](auto& c, auto& k, auto& v) { c.seed = to_uint(k, v); }},
        {"model.kind", [](auto& c, auto&, auto& v) { c.model = trim(v); }},
        {"model.h_s", [](auto& c, auto& k, auto& v) { c.h_s = to_double(k, v); }},
        {"model.fields", [](auto& c, auto& k, auto& v) { c.fields = to_doubles(k, v); }},
        {"model.couplings", [](auto& c, auto& k, auto& v) { c.couplings = to_doubles(k, v); }},
        {"model.J", [](auto& c, auto& k, auto& v) { c.J = to_double(k, v); }},
        {"schedule.tau_c", [](auto& c, auto& k, auto& v) { c.tau_c = to_double(k, v); }},
        {"schedule.tau_p", [](auto& c, auto& k, auto& v) { c.tau_p = to_double(k, v); }},
        {"schedule.count", [](auto& c, auto& k, auto& v) { c.count = to_uint(k, v); }},
        {"schedule.mode",
         [](auto& c, auto& k, auto& v) {
             try {
                 c.mode = parse_mode(trim(v));
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(fmt::format("{}: {}", k, e.what()));
             }
         }},
        {"bath.temperature_mK", [](auto& c, auto& k, auto& v) { c.temperature_mK = to_double(k, v); }},
        {"bath.g", [](auto& c, auto& k, auto& v) { c.g = to_double(k, v); }},
        {"bath.h_b", [](auto& c, auto& k, auto& v) { c.h_b = to_doubles(k, v); }},
        {"bath.sites",
         [](auto& c, auto& k, auto& v) {
             c.sites.clear();
             for (const auto& s : split_list(v)) c.sites.push_back(to_uint(k, s));
         }},
        {"initial.states", [](auto& c, auto&, auto& v) { c.states = split_list(v); }},
        {"sweep.h_b_min", [](auto& c, auto& k, auto& v) { c.h_b_min = to_double(k, v); }},
        {"sweep.h_b_max", [](auto& c, auto& k, auto& v) { c.h_b_max = to_double(k, v); }},
        {"sweep.steps", [](auto& c, auto& k, auto& v) { c.steps = to_uint(k, v); }},
        {"sweep.extra_h_b", [](auto& c, auto& k, auto& v) { c.extra_h_b = to_doubles(k, v); }},
        {"sweep.nulls", [](auto& c, auto& k, auto& v) { c.nulls = to_bool(k, v); }},
        {"engine.kind", [](auto& c, auto&, auto& v) { c.engine = trim(v); }},
        {"engine.dt", [](auto& c, auto& k, auto& v) { c.dt = to_double(k, v); }},
        {"analyze.include_zero_freq", [](auto& c, auto& k, auto& v) { c.include_zero_freq = to_bool(k, v); }},
        {"output.path", [](auto& c, auto&, auto& v) { c.out = trim(v); }},
        {"output.svg", [](auto& c, auto& k, auto& v) { c.svg = to_bool(k, v); }},
        {"output.threads", [](auto& c, auto& k, auto& v) { c.threads = to_uint(k, v); }},
    };
    return table;
}

}  // namespace

ExperimentConfig default_config(const std::string& experiment) {
    ExperimentConfig c;
    c.experiment = experiment;
    if (experiment == "sweep") {
        c.out = "sweep.csv";
    } else if (experiment == "ising2") {
        c.model = "ising";
        c.tau_c = c.tau_p = 400.0;
        c.count = 40;
        c.sites = {0, 1};
        c.states = {"infinite-temperature"};
        c.out = "ising2.csv";
    } else if (experiment == "xy") {
        c.model = "xydm";
        c.tau_c = c.tau_p = 400.0;
        c.count = 200;
        c.states = {"thermal(5)", "thermal(20)", "thermal(100)", "infinite-temperature", "basis(01)", "eigenstate(3)"};
        c.out = "xy.csv";
    } else if (experiment == "analyze") {
        c.model = "xydm";
        c.out = "analysis.txt";
    } else if (experiment == "crosscheck") {
        c.states = {"excited"};
        c.out = "crosscheck.csv";
    } else {
        throw ConfigError(fmt::format("unknown experiment '{}'", experiment));
    }
    return c;
}

std::map<std::string, std::string> parse_entries(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(fmt::format("line {}: malformed section header", lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(fmt::format("line {}: empty section name", lineno));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected 'key = value'", lineno));
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", lineno));
        const std::string full = section.empty() ? key : section + "." + key;
        if (!setters().contains(full)) throw ConfigError(fmt::format("line {}: unknown key '{}'", lineno, full));
        if (out.contains(full)) throw ConfigError(fmt::format("line {}: duplicate key '{}'", lineno, full));
        out[full] = trim(line.substr(eq + 1));
    }
    return out;
}

void apply_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(fmt::format("unknown key '{}'", key));
    it->second(cfg, key, value);
}

ExperimentConfig parse_config(const std::string& text, const std::string& experiment,
                              const std::vector<std::string>& overrides) {
    const auto entries = parse_entries(text);
    std::string kind = experiment;
    if (const auto it = entries.find("experiment"); it != entries.end()) {
        if (!kind.empty() && it->second != kind) {
            throw ConfigError(fmt::format("config is for experiment '{}', not '{}'", it->second, kind));
        }
        kind = it->second;
    }
    if (kind.empty()) throw ConfigError("no experiment given");

    ExperimentConfig cfg = default_config(kind);
    for (const auto& [k, v] : entries) apply_entry(cfg, k, v);
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("override '{}' is not KEY=VALUE", o));
        const std::string key = trim(o.substr(0, eq));
        if (key == "experiment") throw ConfigError("the experiment cannot be overridden");
        apply_entry(cfg, key, o.substr(eq + 1));
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::string& experiment,
                             const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path));
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), experiment, overrides);
}

std::string serialize(const ExperimentConfig& c) {
    std::string s;
    auto line = [&s](const std::string& k, const std::string& v) { s += fmt::format("{} = {}\n", k, v); };
    line("experiment", c.experiment);
    line("seed", std::to_string(c.seed));
    s += "\n[model]\n";
    line("kind", c.model);
    line("h_s", fmt_double(c.h_s));
    line("fields", fmt_doubles(c.fields));
    line("couplings", fmt_doubles(c.couplings));
    line("J", fmt_double(c.J));
    s += "\n[schedule]\n";
    line("tau_c", fmt_double(c.tau_c));
    line("tau_p", fmt_double(c.tau_p));
    line("count", std::to_string(c.count));
    line("mode", to_string(c.mode));
    s += "\n[bath]\n";
    line("temperature_mK", fmt_double(c.temperature_mK));
    line("g", fmt_double(c.g));
    line("h_b", fmt_doubles(c.h_b));
    line("sites", fmt::format("{}", fmt::join(c.sites, ", ")));
    s += "\n[initial]\n";
    line("states", fmt::format("{}", fmt::join(c.states, ", ")));
    s += "\n[sweep]\n";
    line("h_b_min", fmt_double(c.h_b_min));
    line("h_b_max", fmt_double(c.h_b_max));
    line("steps", std::to_string(c.steps));
    line("extra_h_b", fmt_doubles(c.extra_h_b));
    line("nulls", c.nulls ? "true" : "false");
    s += "\n[engine]\n";
    line("kind", c.engine);
    line("dt", fmt_double(c.dt));
    s += "\n[analyze]\n";
    line("include_zero_freq", c.include_zero_freq ? "true" : "false");
    s += "\n[output]\n";
    line("path", c.out);
    line("svg", c.svg ? "true" : "false");
    line("threads", std::to_string(c.threads));
    return s;
}

void validate(const ExperimentConfig& c) {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (c.experiment != "sweep" && c.experiment != "ising2" && c.experiment != "xy" && c.experiment != "analyze" &&
        c.experiment != "crosscheck") {
        fail(fmt::format("unknown experiment '{}'", c.experiment));
    }
    if (c.model != "tls" && c.model != "ising" && c.model != "xydm") fail(fmt::format("unknown model '{}'", c.model));
    if (!std::isfinite(c.h_s) || !std::isfinite(c.J)) fail("model parameters must be finite");
    for (double v : c.fields)
        if (!std::isfinite(v)) fail("model.fields must be finite");
    for (double v : c.couplings)
        if (!std::isfinite(v)) fail("model.couplings must be finite");
    if (!(c.tau_c > 0.0) || !std::isfinite(c.tau_c)) fail("schedule.tau_c must be > 0");
    if (!(c.tau_p >= c.tau_c) || !std::isfinite(c.tau_p)) fail("schedule.tau_p must be >= tau_c");
    if (c.count < 1) fail("schedule.count must be >= 1");
    if (!(c.temperature_mK > 0.0)) fail("bath.temperature_mK must be > 0");
    if (!(c.g >= 0.0) || !std::isfinite(c.g)) fail("bath.g must be finite and >= 0");
    for (double v : c.h_b)
        if (!(v > 0.0) || !std::isfinite(v)) fail("bath.h_b entries must be finite and > 0");
    if (!c.h_b.empty() && c.sites.size() != 1 && c.sites.size() != c.h_b.size()) {
        fail("bath.sites must hold one site or one site per bath.h_b entry");
    }
    if (c.sites.empty()) fail("bath.sites must not be empty");
    if (c.states.empty()) fail("initial.states must not be empty");
    if (!std::isfinite(c.h_b_min) || !std::isfinite(c.h_b_max) || !(c.h_b_min > 0.0) || !(c.h_b_max > c.h_b_min)) {
        fail("sweep grid bounds must be finite with 0 < h_b_min < h_b_max");
    }
    if (c.steps < 2) fail("sweep.steps must be >= 2");
    for (double v : c.extra_h_b)
        if (!(v > 0.0) || !std::isfinite(v)) fail("sweep.extra_h_b entries must be finite and > 0");
    if (c.engine != "collision" && c.engine != "master") fail(fmt::format("unknown engine '{}'", c.engine));
    if (!(c.dt >= 0.0) || !std::isfinite(c.dt)) fail("engine.dt must be finite and >= 0");
    if (c.out.empty()) fail("output.path must not be empty");
}

}  // namespace colmod
