// wmlab: command-line driver for the weighted multiplier counterexample lab.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wmlab/wmlab.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace wmlab;

constexpr int exit_infeasible = 2;
constexpr int exit_check_failed = 3;

struct CommonFlags {
    std::string config;
    std::string out_csv, out_json, plot_script;
    std::optional<double> eps_min, eps_max;
    std::optional<int> steps, jobs;
    std::string mode;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "flat key = value configuration file");
    cmd->add_option("--out-csv", f.out_csv, "CSV output path");
    cmd->add_option("--out-json", f.out_json, "JSON output path");
    cmd->add_option("--eps-min", f.eps_min, "smallest epsilon");
    cmd->add_option("--eps-max", f.eps_max, "largest epsilon");
    cmd->add_option("--steps", f.steps, "number of geometric epsilon steps");
    cmd->add_option("--mode", f.mode, "standard | generalized | weak | contrast");
    cmd->add_option("--plot-script", f.plot_script, "write a gnuplot script for the CSV");
    cmd->add_option("--jobs", f.jobs, "worker threads for sweep rows");
}

RunConfig load(const CommonFlags& f) {
    RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
    if (!f.out_csv.empty()) c.out_csv = f.out_csv;
    if (!f.out_json.empty()) c.out_json = f.out_json;
    if (f.eps_min) c.eps_min = *f.eps_min;
    if (f.eps_max) c.eps_max = *f.eps_max;
    if (f.steps) c.steps = *f.steps;
    if (f.jobs) c.numerics.jobs = *f.jobs;
    if (!f.mode.empty()) set_config_value(c, "mode", f.mode);
    return c;
}

/// The config with exponents resolved for the run's mode; what gets echoed.
RunConfig resolved(RunConfig c) {
    c.exponents = effective_config(c.exponents, c.mode);
    return c;
}

void emit_json(const json& j, const std::string& path) {
    const std::string text = j.dump(2) + "\n";
    if (!path.empty()) write_text(path, text);
    std::cout << text;
}

int cmd_bump(const CommonFlags& f) {
    const auto rc = resolved(load(f));
    const auto t = make_tables(rc.exponents, rc.numerics);
    const auto& b = t->bump();
    json j;
    j["r"] = b.r();
    j["ell"] = b.ell();
    j["moment_residual"] = check_moments(b);
    j["moment_normalization"] = moment_normalization(b);
    j["phiphi0"] = b.phiphi0();
    j["support_radius_measured"] = measured_support_radius(b);
    emit_json(j, rc.out_json);
    return 0;
}

int cmd_weights_check(const CommonFlags& f, int K) {
    const auto rc = resolved(load(f));
    const auto& c = rc.exponents;
    CubeFamily fam;
    fam.dim = c.n;
    fam.K = K;
    const auto w = PowerWeightVector::from(c);
    const auto q = c.class_exponents();
    std::vector<double> Q(c.p.size());
    for (std::size_t k = 0; k < Q.size(); ++k) Q[k] = c.q_divisor(static_cast<int>(k));
    const double ml = multilinear_constant(w, q, fam);
    const double ml_refined = multilinear_constant(w, q, fam.refined());
    const double ml_origin = multilinear_constant(w, q, fam.origin());
    const double pq = pq_class_constant(w, c.p, Q, fam);
    const auto ap = ap_constant(c.alpha1, q[0], fam.origin());
    const auto lem = verify_two_case_bound(c, fam);
    json j;
    j["alpha1"] = c.alpha1;
    j["alpha2"] = c.alpha2;
    j["class_exponents"] = q;
    j["multilinear_constant"] = ml;
    j["multilinear_constant_refined"] = ml_refined;
    j["multilinear_constant_origin"] = ml_origin;
    j["pq_constant"] = pq;
    j["single_weight_divergent"] = ap.divergent;
    j["single_weight_levels"] = ap.levels;
    j["single_weight_growth"] = ap.growth;
    j["two_case_bound"] = {{"off_origin_max", lem.off_origin_max},
                    {"origin_max", lem.origin_max},
                    {"off_origin_levels", lem.off_origin_levels},
                    {"origin_levels", lem.origin_levels},
                    {"bounded", lem.bounded}};
    emit_json(j, rc.out_json);
    return lem.bounded ? 0 : exit_check_failed;
}

int cmd_exponents(const CommonFlags& f) {
    const auto rc = resolved(load(f));
    const auto& c = rc.exponents;
    const auto pr = predicted_slopes(c);
    std::printf("mode = %s\n", to_string(rc.mode));
    std::printf("alpha1 = %s\nalpha2 = %s\n", format_real(c.alpha1).c_str(), format_real(c.alpha2).c_str());
    std::printf("a_nu = %s\n", format_real(c.a_nu()).c_str());
    std::printf("ell_min = %d\n", minimal_ell(c));
    std::printf("class_exponents = %s\n", detail::format_list(c.class_exponents()).c_str());
    std::printf("predicted_f1_slope = %s\n", format_real(pr.f1).c_str());
    std::printf("predicted_sobolev_slope = %s\n", format_real(pr.sobolev).c_str());
    std::printf("predicted_lhs_slope = %s\n", format_real(pr.lhs).c_str());
    std::printf("predicted_ratio_slope = %s\n", format_real(pr.ratio).c_str());
    return 0;
}

int cmd_sweep(const CommonFlags& f) {
    const auto rc = resolved(load(f));
    const auto t = make_tables(rc.exponents, rc.numerics);
    const auto rep = sweep(t, rc.eps_list(), rc.mode, rc.tolerances);
    for (const auto& s : rep.skipped) std::cerr << "skipped eps = " << format_real(s.epsilon) << ": " << s.reason << "\n";
    for (const auto& c : rep.checks) std::cerr << (c.passed ? "ok   " : "FAIL ") << c.name << ": " << c.detail << "\n";
    const auto csv = sweep_csv(rep);
    if (!rc.out_csv.empty()) write_text(rc.out_csv, csv);
    else std::cout << csv;
    if (!f.plot_script.empty())
        write_text(f.plot_script, plot_script(rc.out_csv.empty() ? "sweep.csv" : rc.out_csv));
    const auto j = sweep_json(rc, rep);
    if (!rc.out_json.empty()) write_text(rc.out_json, j.dump(2) + "\n");
    else std::cout << j.dump(2) << "\n";
    return rep.pass ? 0 : exit_check_failed;
}

/// Fits every CSV column against the first one.
int cmd_fit(const std::string& csv_path, int exclude, const std::string& out_json) {
    std::ifstream in(csv_path);
    if (!in) fail(ErrorKind::config, "cannot open '" + csv_path + "'");
    std::string line;
    std::getline(in, line);
    std::vector<std::string> names;
    {
        std::stringstream ss(line);
        for (std::string h; std::getline(ss, h, ',');) names.push_back(h);
    }
    require(names.size() >= 2, ErrorKind::config, "fit: CSV needs at least two columns");
    std::vector<std::vector<double>> cols(names.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::size_t k = 0;
        for (std::string v; std::getline(ss, v, ',') && k < cols.size(); ++k) cols[k].push_back(std::stod(v));
        require(k == cols.size(), ErrorKind::config, "fit: ragged CSV row");
    }
    // largest-x rows are dropped first
    std::vector<std::size_t> order(cols[0].size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return cols[0][a] > cols[0][b]; });
    const std::size_t skip = std::min<std::size_t>(static_cast<std::size_t>(std::max(exclude, 0)), order.size());
    json j;
    for (std::size_t k = 1; k < cols.size(); ++k) {
        std::vector<double> xs, ys;
        for (std::size_t i = skip; i < order.size(); ++i) {
            xs.push_back(cols[0][order[i]]);
            ys.push_back(cols[k][order[i]]);
        }
        const auto fit = fit_power_law(xs, ys);
        j[names[k]] = {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}};
    }
    emit_json(j, out_json);
    return 0;
}

int cmd_crosscheck(const CommonFlags& f, std::vector<double> eps) {
    const auto rc = resolved(load(f));
    if (eps.empty()) eps = {0.25, 0.125};
    const auto t = make_tables(rc.exponents, rc.numerics);
    const auto& tol = rc.tolerances;
    const double eps_ref = *std::max_element(eps.begin(), eps.end());
    bool ok = true;
    json rows = json::array();
    for (double e : eps) {
        const auto cc = crosscheck(t, e, eps_ref);
        const bool pass = cc.rel(cc.sobolev_direct, cc.sobolev_fast) <= tol.crosscheck_sobolev &&
                          cc.rel(cc.f1_direct, cc.f1_fast) <= tol.crosscheck_f1 &&
                          cc.rel(cc.lhs_direct, cc.lhs_fast) <= tol.crosscheck_lhs &&
                          cc.closed_form_error <= tol.closed_form;
        ok = ok && pass;
        rows.push_back({{"epsilon", e},
                        {"box_length", cc.box_length},
                        {"points", cc.points},
                        {"sobolev", {{"direct", cc.sobolev_direct}, {"fast", cc.sobolev_fast}}},
                        {"f1_norm", {{"direct", cc.f1_direct}, {"fast", cc.f1_fast}}},
                        {"lhs_strong", {{"direct", cc.lhs_direct}, {"fast", cc.lhs_fast}}},
                        {"lhs_weak", {{"direct", cc.lhs_weak_direct}, {"fast", cc.lhs_weak_fast}}},
                        {"closed_form_error", cc.closed_form_error},
                        {"pass", pass}});
    }
    json j;
    j["config_echo"] = config_json(rc);
    j["rows"] = rows;
    j["pass"] = ok;
    emit_json(j, rc.out_json);
    return ok ? 0 : exit_check_failed;
}

int cmd_table1(const CommonFlags& f) {
    const auto rc = load(f);
    const auto rep = table1_probe(rc.exponents, rc.numerics, rc.eps_list(), rc.tolerances);
    json cells = json::array();
    for (const auto& c : rep.cells)
        cells.push_back({{"norm", c.norm},
                         {"weight_class", c.weight_class},
                         {"fitted_ratio_slope", c.fitted_ratio_slope},
                         {"predicted_ratio_slope", c.predicted_ratio_slope},
                         {"diverges", c.diverges},
                         {"expected_divergence", c.expected_divergence}});
    json j;
    j["config_echo"] = config_json(resolved(rc));
    j["cells"] = cells;
    j["pass"] = rep.pass;
    emit_json(j, rc.out_json);
    return rep.pass ? 0 : exit_check_failed;
}

int exit_code(ErrorKind k) {
    return k == ErrorKind::infeasible || k == ErrorKind::config ? exit_infeasible : exit_check_failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wmlab: weighted multilinear multiplier counterexample lab"};
    app.require_subcommand(1);

    CommonFlags bump_f, weights_f, exp_f, sweep_f, cc_f, t1_f;
    auto* bump = app.add_subcommand("bump", "moment-vanishing bump diagnostics (JSON)");
    add_common(bump, bump_f);

    auto* weights = app.add_subcommand("weights", "weight-class computations");
    weights->require_subcommand(1);
    auto* check = weights->add_subcommand("check", "class constants and the two-case certificate (JSON)");
    add_common(check, weights_f);
    int K = 12;
    check->add_option("--K", K, "dyadic side range 2^-K..2^K");

    auto* expo = app.add_subcommand("exponents", "resolved exponents and predicted slopes");
    add_common(expo, exp_f);

    auto* sw = app.add_subcommand("sweep", "epsilon sweep with slope fits (CSV + JSON)");
    add_common(sw, sweep_f);

    auto* fit = app.add_subcommand("fit", "log-log fits of CSV columns against the first column");
    std::string fit_csv, fit_json;
    int exclude = 0;
    fit->add_option("csv", fit_csv, "input CSV")->required();
    fit->add_option("--exclude-largest", exclude, "drop this many largest-x rows");
    fit->add_option("--out-json", fit_json, "JSON output path");

    auto* cc = app.add_subcommand("crosscheck", "direct grid evaluation against the fast path (JSON)");
    add_common(cc, cc_f);
    std::vector<double> cc_eps;
    cc->add_option("--eps", cc_eps, "epsilon values (default 1/4 1/8)");

    auto* t1 = app.add_subcommand("table1", "four-cell norm / weight-class probe (JSON)");
    add_common(t1, t1_f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : exit_infeasible;
    }

    try {
        if (*bump) return cmd_bump(bump_f);
        if (*check) return cmd_weights_check(weights_f, K);
        if (*expo) return cmd_exponents(exp_f);
        if (*sw) return cmd_sweep(sweep_f);
        if (*fit) return cmd_fit(fit_csv, exclude, fit_json);
        if (*cc) return cmd_crosscheck(cc_f, cc_eps);
        if (*t1) return cmd_table1(t1_f);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_check_failed;
    }
    return 0;
}
