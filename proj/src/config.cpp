#include "asep/config.hpp"

#include <fstream>
#include <sstream>

namespace asep {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        if (cfg.kv.count(key)) throw ConfigError("config: duplicate key " + key);
        cfg.kv[key] = val;
    }
    return cfg;
}

Config Config::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

std::string Config::get(const std::string& key) const {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("config: missing key " + key);
    return it->second;
}

std::string Config::get_or(const std::string& key, const std::string& fallback) const {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
    try {
        return std::stod(get(key));
    } catch (const std::invalid_argument&) {
        throw ConfigError("config: key " + key + " is not a number");
    }
}

std::vector<double> Config::get_double_list(const std::string& key) const {
    std::vector<double> out;
    std::istringstream in(get(key));
    std::string tok;
    while (std::getline(in, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::invalid_argument&) {
            throw ConfigError("config: key " + key + " is not a comma-separated number list");
        }
    }
    if (out.empty()) throw ConfigError("config: key " + key + " is empty");
    return out;
}

ParamsInput params_from_config(const Config& cfg) {
    const bool has_rates = cfg.has("alpha") || cfg.has("beta") || cfg.has("gamma") || cfg.has("delta");
    const bool has_fan = cfg.has("a") || cfg.has("b") || cfg.has("c") || cfg.has("d");
    if (has_rates == has_fan)
        throw ConfigError("config: give exactly one parameter group, {alpha,beta,gamma,delta,q} or {a,b,c,d,q}");
    ParamsInput out;
    if (has_rates) {
        for (const char* k : {"alpha", "beta", "gamma", "delta", "q"})
            if (!cfg.has(k)) throw ConfigError(std::string("config: missing key ") + k);
        BoundaryRates rates{cfg.get_double("alpha"), cfg.get_double("beta"), cfg.get_double("gamma"),
                            cfg.get_double("delta"), cfg.get_double("q")};
        try {
            rates.validate();
        } catch (const std::domain_error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        out.rates = rates;
        out.fan = to_fan(rates);
        for (const char* k : {"alpha", "beta", "gamma", "delta", "q"}) out.raw[k] = cfg.get(k);
    } else {
        for (const char* k : {"a", "b", "c", "d", "q"})
            if (!cfg.has(k)) throw ConfigError(std::string("config: missing key ") + k);
        RatFanParams rp;
        try {
            rp = rat_fan_params(cfg.get("a"), cfg.get("b"), cfg.get("c"), cfg.get("d"), cfg.get("q"));
        } catch (const std::domain_error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        out.exact = rp;
        out.fan = to_float(rp);
        for (const char* k : {"a", "b", "c", "d", "q"}) out.raw[k] = cfg.get(k);
    }
    return out;
}

std::optional<PiecewiseLinearProfile> profile_from_config(const Config& cfg) {
    if (!cfg.has("profile_breakpoints") && !cfg.has("profile_values")) return std::nullopt;
    auto xs = cfg.get_double_list("profile_breakpoints");
    auto ys = cfg.get_double_list("profile_values");
    if (xs.size() != ys.size()) throw ConfigError("config: profile lists must have equal length");
    try {
        return profile_from_points(std::move(xs), std::move(ys));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

}  // namespace asep
