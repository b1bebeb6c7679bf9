#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asep/params.hpp"
#include "asep/ratefn.hpp"

namespace asep {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// `key = value` lines, '#' comments. Values keep their raw spelling so the
/// exact backend can parse decimals losslessly and result headers can echo
/// the input verbatim.
struct Config {
    std::map<std::string, std::string> kv;

    static Config parse_file(const std::filesystem::path& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const { return kv.count(key) > 0; }
    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    std::vector<double> get_double_list(const std::string& key) const;
};

/// Model parameters from a config: exactly one of the groups
/// {alpha,beta,gamma,delta,q} or {a,b,c,d,q} must be present.
struct ParamsInput {
    FanParams fan;
    std::optional<RatFanParams> exact;        // available when given as (a,b,c,d,q)
    std::optional<BoundaryRates> rates;       // available when given as rates
    std::map<std::string, std::string> raw;   // the raw key/value group, echoed into result headers
};

ParamsInput params_from_config(const Config& cfg);

/// Optional profile input: profile_breakpoints / profile_values lists.
std::optional<PiecewiseLinearProfile> profile_from_config(const Config& cfg);

}  // namespace asep
