#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "wmlab/error.hpp"
#include "wmlab/scenario.hpp"
#include "wmlab/weights.hpp"

namespace wmlab {

/// Everything a CLI run needs. Stored on disk as flat `key = value` lines;
/// `#` starts a comment.
struct RunConfig {
    ExponentConfig exponents;
    SweepMode mode = SweepMode::standard;
    double eps_min = 0x1p-10;
    double eps_max = 0x1p-3;
    int steps = 8;
    ScenarioNumerics numerics;
    Tolerances tolerances;
    std::string out_csv;
    std::string out_json;

    std::vector<double> eps_list() const { return geometric_eps(eps_max, eps_min, steps); }
};

inline std::string format_real(double v) {
    if (std::isnan(v)) return "auto";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_real(const std::string& key, const std::string& v) {
    if (v == "auto" && key.rfind("alpha", 0) == 0) return std::numeric_limits<double>::quiet_NaN();
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
        fail(ErrorKind::config, "config key '" + key + "': not a real number: '" + v + "'");
    return out;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
    Int out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        fail(ErrorKind::config, "config key '" + key + "': not an integer: '" + v + "'");
    return out;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    if (v.empty()) return out;
    std::stringstream ss(v);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_real(key, trim(item)));
    return out;
}

inline std::string format_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_real(v[i]);
    return s;
}

inline SweepMode parse_mode(const std::string& v) {
    for (auto m : {SweepMode::standard, SweepMode::generalized, SweepMode::weak, SweepMode::contrast})
        if (v == to_string(m)) return m;
    fail(ErrorKind::config, "unknown mode '" + v + "' (standard, generalized, weak, contrast)");
}

struct Field {
    std::string key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
    bool integer = false;
};

#define WMLAB_REAL(name, member)                                                   \
    Field{name, [](const RunConfig& c) { return format_real(c.member); },         \
          [](RunConfig& c, const std::string& v) { c.member = parse_real(name, v); }}
#define WMLAB_INT(name, member)                                                                           \
    Field{name, [](const RunConfig& c) { return std::to_string(c.member); },                             \
          [](RunConfig& c, const std::string& v) { c.member = parse_int<decltype(c.member)>(name, v); }, true}
#define WMLAB_TEXT(name, member)                                        \
    Field{name, [](const RunConfig& c) { return c.member; },           \
          [](RunConfig& c, const std::string& v) { c.member = v; }}

inline const std::vector<Field>& fields() {
    static const std::vector<Field> f{
        WMLAB_INT("N", exponents.N),
        WMLAB_INT("n", exponents.n),
        Field{"mode", [](const RunConfig& c) { return std::string(to_string(c.mode)); },
              [](RunConfig& c, const std::string& v) { c.mode = parse_mode(v); }},
        WMLAB_REAL("s", exponents.s),
        Field{"s_vec", [](const RunConfig& c) { return format_list(c.exponents.s_vec); },
              [](RunConfig& c, const std::string& v) { c.exponents.s_vec = parse_list("s_vec", v); }},
        Field{"p", [](const RunConfig& c) { return format_list(c.exponents.p); },
              [](RunConfig& c, const std::string& v) { c.exponents.p = parse_list("p", v); }},
        WMLAB_REAL("alpha1", exponents.alpha1),
        WMLAB_REAL("alpha2", exponents.alpha2),
        WMLAB_INT("ell", exponents.ell),
        WMLAB_REAL("r", exponents.r),
        WMLAB_REAL("gamma", exponents.gamma),
        WMLAB_REAL("eps_min", eps_min),
        WMLAB_REAL("eps_max", eps_max),
        WMLAB_INT("steps", steps),
        WMLAB_REAL("L_box", numerics.bump_box),
        WMLAB_INT("M", numerics.bump_points),
        WMLAB_REAL("radial_step", numerics.radial_step),
        WMLAB_REAL("radial_extent", numerics.radial_extent),
        WMLAB_INT("quadrature_points", numerics.quadrature_points),
        WMLAB_INT("j_min", numerics.j_min),
        WMLAB_INT("j_max", numerics.j_max),
        WMLAB_REAL("floor_fraction", numerics.floor_fraction),
        WMLAB_INT("direct_points", numerics.direct_points),
        WMLAB_REAL("direct_box_scale", numerics.direct_box_scale),
        WMLAB_INT("jobs", numerics.jobs),
        WMLAB_REAL("tol_f1_slope", tolerances.f1_slope),
        WMLAB_REAL("tol_sobolev_slope", tolerances.sobolev_slope),
        WMLAB_REAL("tol_ratio_slope", tolerances.ratio_slope),
        WMLAB_REAL("tol_weak_slope_max", tolerances.weak_slope_max),
        WMLAB_REAL("tol_contrast_slope_min", tolerances.contrast_slope_min),
        WMLAB_REAL("tol_monotone_slack", tolerances.monotone_slack),
        WMLAB_REAL("tol_crosscheck_sobolev", tolerances.crosscheck_sobolev),
        WMLAB_REAL("tol_crosscheck_f1", tolerances.crosscheck_f1),
        WMLAB_REAL("tol_crosscheck_lhs", tolerances.crosscheck_lhs),
        WMLAB_REAL("tol_closed_form", tolerances.closed_form),
        WMLAB_INT("tol_exclude_largest", tolerances.exclude_largest),
        WMLAB_TEXT("out_csv", out_csv),
        WMLAB_TEXT("out_json", out_json),
    };
    return f;
}

#undef WMLAB_REAL
#undef WMLAB_INT
#undef WMLAB_TEXT

}  // namespace detail

/// Ordered (key, value) pairs covering every field.
inline std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& c) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : detail::fields()) out.emplace_back(f.key, f.get(c));
    return out;
}

inline void set_config_value(RunConfig& c, const std::string& key, const std::string& value) {
    for (const auto& f : detail::fields())
        if (f.key == key) {
            f.set(c, value);
            return;
        }
    fail(ErrorKind::config, "unknown config key '" + key + "'");
}

inline std::string serialize_config(const RunConfig& c) {
    std::string s;
    for (const auto& [k, v] : config_entries(c)) s += k + " = " + v + "\n";
    return s;
}

/// Unset keys keep their defaults; unknown or repeated keys are errors.
inline RunConfig parse_config(std::string_view text) {
    RunConfig c;
    std::set<std::string> seen;
    std::size_t lineno = 0;
    std::stringstream ss{std::string(text)};
    for (std::string line; std::getline(ss, line);) {
        ++lineno;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorKind::config, "config line " + std::to_string(lineno) + ": expected key = value");
        const auto key = detail::trim(std::string_view(line).substr(0, eq));
        const auto value = detail::trim(std::string_view(line).substr(eq + 1));
        if (!seen.insert(key).second) fail(ErrorKind::config, "config key '" + key + "' given twice");
        set_config_value(c, key, value);
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::config, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

inline void save_config(const RunConfig& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::config, "cannot write config file '" + path + "'");
    out << serialize_config(c);
}

}  // namespace wmlab
