#include <cmath>
#include <cstdio>
#include <filesystem>

#include <gtest/gtest.h>

#include "wmlab/report.hpp"

using namespace wmlab;

namespace {

ErrorKind kind_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::contract;  // no error: callers expect config
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
    const RunConfig c;
    const auto text = serialize_config(c);
    EXPECT_EQ(serialize_config(parse_config(text)), text);
    EXPECT_NE(text.find("alpha1 = auto\n"), std::string::npos);
}

TEST(Config, NonDefaultValuesRoundTrip) {
    RunConfig c;
    set_config_value(c, "s", "1.7");
    set_config_value(c, "p", "2.5, 3.25");
    set_config_value(c, "alpha1", "-2.4375");
    set_config_value(c, "mode", "generalized");
    set_config_value(c, "s_vec", "0.9,0.8");
    set_config_value(c, "gamma", "0.1");
    set_config_value(c, "eps_min", "0.001");
    set_config_value(c, "out_csv", "runs/a.csv");
    c.tolerances.ratio_slope = 1.0 / 3.0;
    const auto back = parse_config(serialize_config(c));
    EXPECT_EQ(serialize_config(back), serialize_config(c));
    EXPECT_EQ(back.exponents.s, 1.7);
    EXPECT_EQ(back.exponents.p, (std::vector<double>{2.5, 3.25}));
    EXPECT_EQ(back.tolerances.ratio_slope, 1.0 / 3.0);
    EXPECT_EQ(back.mode, SweepMode::generalized);
    EXPECT_EQ(back.out_csv, "runs/a.csv");
    EXPECT_TRUE(std::isnan(back.exponents.alpha2));
}

TEST(Config, FileRoundTrip) {
    const auto path = (std::filesystem::temp_directory_path() / "wmlab_config_test.cfg").string();
    RunConfig c;
    c.steps = 5;
    c.numerics.jobs = 4;
    save_config(c, path);
    EXPECT_EQ(serialize_config(load_config(path)), serialize_config(c));
    std::remove(path.c_str());
    EXPECT_THROW(load_config(path), Error);
}

TEST(Config, CommentsAndBlankLines) {
    const auto c = parse_config("# header\n\n  N = 2   # trailing\nsteps=4\n");
    EXPECT_EQ(c.exponents.N, 2);
    EXPECT_EQ(c.steps, 4);
}

TEST(Config, Rejections) {
    EXPECT_EQ(kind_of("bogus = 1\n"), ErrorKind::config);
    EXPECT_EQ(kind_of("N = 2\nN = 3\n"), ErrorKind::config);
    EXPECT_EQ(kind_of("s = two\n"), ErrorKind::config);
    EXPECT_EQ(kind_of("s = auto\n"), ErrorKind::config);
    EXPECT_EQ(kind_of("N = 2.5\n"), ErrorKind::config);
    EXPECT_EQ(kind_of("mode = sideways\n"), ErrorKind::config);
    EXPECT_EQ(kind_of("just words\n"), ErrorKind::config);
    EXPECT_EQ(kind_of("gamma = inf\n"), ErrorKind::config);
}

TEST(Config, ShippedConfigsParse) {
    for (const char* name : {"default", "generalized", "weak", "contrast", "invalid_s1"}) {
        const auto c = load_config(std::string(WMLAB_CONFIG_DIR) + "/" + name + ".cfg");
        EXPECT_EQ(c.eps_list().size(), static_cast<std::size_t>(c.steps)) << name;
    }
}

TEST(Report, CsvHeaderAndRows) {
    EXPECT_STREQ(csv_header, "epsilon,lhs_strong,lhs_weak,sup_sobolev,f1_norm,rest_norm_product,ratio_strong,ratio_weak");
    SweepReport rep;
    SweepRow r;
    r.epsilon = 0.125;
    r.lhs_strong = 1.0 / 3.0;
    rep.rows.push_back(r);
    const auto csv = sweep_csv(rep);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), csv_header);
    EXPECT_NE(csv.find("\n0.125,0.33333333333333331,0,0,0,0,0,0\n"), std::string::npos);
}

TEST(Report, JsonKeysAndTypes) {
    RunConfig c;
    SweepReport rep;
    rep.pass = true;
    rep.fits_excluded["f1"] = {1.125, 0.0, 1.0};
    rep.checks.push_back({"f1_slope", true, "ok"});
    const auto j = sweep_json(c, rep);
    for (const char* k : {"config_echo", "fitted_slopes", "predicted_slopes", "pass", "checks", "radius"})
        EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["fitted_slopes"]["f1"].get<double>(), 1.125);
    const auto& e = j["config_echo"];
    EXPECT_TRUE(e["N"].is_number_integer());
    EXPECT_TRUE(e["s"].is_number_float());
    EXPECT_TRUE(e["p"].is_array());
    EXPECT_EQ(e["alpha1"].get<std::string>(), "auto");
    EXPECT_EQ(e["mode"].get<std::string>(), "standard");
    for (const char* k : {"f1", "sobolev", "lhs", "ratio_strong", "ratio_weak"}) EXPECT_TRUE(j["predicted_slopes"].contains(k));
}

TEST(Report, PlotScriptReferencesCsv) {
    const auto s = plot_script("out/run.csv");
    EXPECT_NE(s.find("'out/run.csv'"), std::string::npos);
    EXPECT_NE(s.find("ratio_weak"), std::string::npos);
}
