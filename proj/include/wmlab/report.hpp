#pragma once

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "wmlab/config.hpp"
#include "wmlab/error.hpp"
#include "wmlab/scenario.hpp"

namespace wmlab {

inline constexpr const char* csv_header =
    "epsilon,lhs_strong,lhs_weak,sup_sobolev,f1_norm,rest_norm_product,ratio_strong,ratio_weak";

inline std::string sweep_csv(const SweepReport& rep) {
    std::string s = std::string(csv_header) + "\n";
    char buf[512];
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.epsilon, r.lhs_strong,
                      r.lhs_weak, r.sup_sobolev, r.f1_norm, r.rest_norm_product, r.ratio_strong, r.ratio_weak);
        s += buf;
    }
    return s;
}

/// Typed config echo: numbers stay numbers, lists become arrays.
inline nlohmann::ordered_json config_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    for (const auto& f : detail::fields()) {
        const auto v = f.get(c);
        if (f.key == "s_vec" || f.key == "p") {
            j[f.key] = f.key == "p" ? c.exponents.p : c.exponents.s_vec;
        } else if (f.key == "mode" || f.key == "out_csv" || f.key == "out_json" || v == "auto") {
            j[f.key] = v;
        } else if (f.integer) {
            j[f.key] = std::stoll(v);
        } else {
            j[f.key] = std::stod(v);
        }
    }
    return j;
}

inline nlohmann::ordered_json fits_json(const FitTable& fits) {
    nlohmann::ordered_json j;
    for (const char* k : {"f1", "sobolev", "lhs", "lhs_weak", "ratio_strong", "ratio_weak"})
        if (auto it = fits.find(k); it != fits.end()) j[k] = it->second.slope;
    return j;
}

inline nlohmann::ordered_json sweep_json(const RunConfig& cfg, const SweepReport& rep) {
    nlohmann::ordered_json j;
    j["config_echo"] = config_json(cfg);
    j["fitted_slopes"] = fits_json(rep.fits_excluded);
    j["fitted_slopes_all"] = fits_json(rep.fits_all);
    nlohmann::ordered_json r2;
    for (const auto& [k, f] : rep.fits_excluded) r2[k] = f.r_squared;
    j["r_squared"] = r2;
    j["predicted_slopes"] = {{"f1", rep.predicted.f1},
                             {"sobolev", rep.predicted.sobolev},
                             {"lhs", rep.predicted.lhs},
                             {"ratio_strong", rep.predicted.ratio},
                             {"ratio_weak", rep.predicted.ratio}};
    j["radius"] = {{"R", rep.radius.R}, {"c_floor", rep.radius.c_floor}, {"nodes", rep.radius.nodes}};
    j["phiphi0"] = rep.phiphi0;
    j["relative_tail"] = {{"phi", rep.tail_phi}, {"psi", rep.tail_psi}};
    auto skipped = nlohmann::ordered_json::array();
    for (const auto& s : rep.skipped) skipped.push_back({{"epsilon", s.epsilon}, {"reason", s.reason}});
    j["skipped"] = skipped;
    auto checks = nlohmann::ordered_json::array();
    for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["checks"] = checks;
    j["pass"] = rep.pass;
    return j;
}

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::config, "cannot write '" + path + "'");
    out << text;
}

/// gnuplot script plotting every CSV column against eps on log-log axes.
inline std::string plot_script(const std::string& csv_path) {
    std::string s = "set datafile separator ','\nset logscale xy\nset key left top\nset xlabel 'epsilon'\n";
    s += "set terminal pngcairo size 900,600\nset output '" + csv_path + ".png'\n";
    s += "plot '" + csv_path + "' using 1:2 skip 1 with linespoints title 'lhs_strong'";
    const char* cols[] = {"lhs_weak", "sup_sobolev", "f1_norm", "rest_norm_product", "ratio_strong", "ratio_weak"};
    for (int k = 0; k < 6; ++k)
        s += ", \\\n     '' using 1:" + std::to_string(k + 3) + " skip 1 with linespoints title '" + cols[k] + "'";
    return s + "\n";
}

}  // namespace wmlab
