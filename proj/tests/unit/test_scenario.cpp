#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpwqed/errors.hpp"
#include "cpwqed/scenario.hpp"

using namespace cpwqed;

namespace {

std::string render(const ScenarioResult& r, OutputFormat f) {
    std::ostringstream out;
    write_result(out, r, f);
    return out.str();
}

}  // namespace

TEST(Settings, ParsesCommentsAndWhitespace) {
    const Settings s = parse_settings("# header\n  regime.f = 20  # trailing\n\nregime.kind=ddi\n");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].first, "regime.f");
    EXPECT_EQ(s[0].second, "20");
    EXPECT_EQ(s[1].second, "ddi");
}

TEST(Settings, MalformedLineNamesSourceAndLine) {
    try {
        parse_settings("regime.f = 2\nnot a setting\n", "my.conf");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("my.conf:2"), std::string::npos);
    }
}

TEST(Settings, UnknownKeyAndBadValues) {
    ScenarioConfig cfg;
    EXPECT_THROW(apply_setting(cfg, "regime.frequency", "1"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "regime.f", "ten"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "regime.f", "0.5"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "scenario", "dance"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "integrator.method", "euler"), ConfigError);
    EXPECT_THROW(apply_setting(cfg, "decay.kappa", "-1"), ConfigError);
}

TEST(Settings, TwoPiShorthandAndLists) {
    ScenarioConfig cfg;
    apply_setting(cfg, "blockade.D", "2pi*1e6");
    EXPECT_DOUBLE_EQ(cfg.blockade.D, 2.0 * std::numbers::pi * 1e6);
    apply_setting(cfg, "sweep.f", "10, 20,40");
    EXPECT_EQ(cfg.sweep_f, (std::vector<double>{10.0, 20.0, 40.0}));
    apply_setting(cfg, "decay.gamma", "1e-5");
    EXPECT_EQ(cfg.decays.gamma_r, 1e-5);
    EXPECT_EQ(cfg.decays.gamma_a, 1e-5);
    EXPECT_EQ(cfg.decays.gamma_b, 1e-5);
}

TEST(Settings, EveryKeyIsAccepted) {
    const auto& keys = config_keys();
    EXPECT_GT(keys.size(), 40u);
    EXPECT_NE(std::find(keys.begin(), keys.end(), "integrator.rel_tol"), keys.end());
}

TEST(Presets, ShippedNamesParse) {
    const auto names = preset_names();
    for (const char* required : {"fig2-ddi-f10", "fig2-ddi-f20", "fig2-vdw-f10", "fig2-vdw-f20", "paper-device"})
        EXPECT_NE(std::find(names.begin(), names.end(), required), names.end()) << required;
    for (auto n : names) EXPECT_NO_THROW(load_config(n, std::nullopt, {})) << n;
    EXPECT_THROW(preset_text("nope"), ConfigError);
}

TEST(Presets, Fig2ConstantsAndPrecedence) {
    ScenarioConfig cfg = load_config("fig2-vdw-f10", std::nullopt, {});
    EXPECT_EQ(cfg.regime.kind, RegimeKind::Vdw);
    EXPECT_EQ(cfg.regime.f, 10.0);
    EXPECT_EQ(cfg.decays.kappa, 3e-3);
    EXPECT_NEAR(cfg.decays.gamma_r, 1e3 / (2.0 * std::numbers::pi * 1e7), 1e-18);

    const auto dir = std::filesystem::temp_directory_path() / "cpwqed_scenario_test";
    std::filesystem::create_directories(dir);
    const auto file = dir / "override.conf";
    std::ofstream(file) << "regime.f = 15\nregime.kind = ddi\n";
    cfg = load_config("fig2-vdw-f10", file.string(), {{"regime.f", "12"}});
    EXPECT_EQ(cfg.regime.kind, RegimeKind::Ddi);  // file over preset
    EXPECT_EQ(cfg.regime.f, 12.0);                // --set over file
    EXPECT_THROW(load_config(std::nullopt, (dir / "missing.conf").string(), {}), ConfigError);
}

TEST(Run, EffectiveCsvHeaderAndDeterminism) {
    ScenarioConfig cfg = load_config("fig2-ddi-f10", std::nullopt, {{"scenario", "simulate-effective"}});
    const std::string a = render(run_scenario(cfg), OutputFormat::Csv);
    const std::string b = render(run_scenario(cfg), OutputFormat::Csv);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.substr(0, a.find('\n')), "t,t_seconds,p_rr,p_ba,p_ab,phi_rr,trace,sink_pop,purity");
}

TEST(Run, FullSimulationIsByteIdentical) {
    ScenarioConfig cfg = load_config("fig2-ddi-f10", std::nullopt, {{"integrator.t_max", "5"}});
    const ScenarioResult r = run_scenario(cfg);
    ASSERT_TRUE(r.trajectory);
    EXPECT_EQ(resolved_format(cfg, r), OutputFormat::Csv);
    EXPECT_EQ(render(r, OutputFormat::Csv), render(run_scenario(cfg), OutputFormat::Csv));
    EXPECT_NEAR(r.trajectory->t.back(), 5.0, 1e-12);
}

TEST(Run, ParamsReport) {
    const ScenarioConfig cfg = load_config("paper-device", std::nullopt, {});
    const ScenarioResult r = run_scenario(cfg);
    EXPECT_NEAR(r.report.number("V_c"), 1.41e-11, 0.01e-11);
    EXPECT_EQ(resolved_format(cfg, r), OutputFormat::Text);
    EXPECT_NE(render(r, OutputFormat::Text).find("V_c = 1.41"), std::string::npos);
}

TEST(Run, SweepMarksFailedRowsAndKeepsOrder) {
    ScenarioConfig cfg;
    apply_settings(cfg, {{"scenario", "sweep"},
                         {"regime.kind", "ddi"},
                         {"sweep.f", "5,0.5,6"},
                         {"integrator.t_max", "2"},
                         {"sweep.threads", "2"}});
    const ScenarioResult r = run_scenario(cfg);
    ASSERT_TRUE(r.table);
    ASSERT_EQ(r.table->rows.size(), 3u);
    EXPECT_EQ(r.table->rows[0][0], "5");
    EXPECT_EQ(r.table->rows[1][0], "0.5");
    EXPECT_EQ(r.table->rows[2][0], "6");
    EXPECT_EQ(r.table->rows[0].back(), "ok");
    EXPECT_EQ(r.table->rows[1].back().rfind("failed: ", 0), 0u);
    EXPECT_EQ(r.report.number("failed_rows"), 1.0);

    cfg.sweep_f.clear();
    EXPECT_THROW(run_scenario(cfg), ConfigError);
}

TEST(Run, SingleRowSweepMatchesSimulate) {
    ScenarioConfig cfg = load_config("fig2-ddi-f10", std::nullopt, {{"integrator.t_max", "4"}});
    const ScenarioResult sim = run_scenario(cfg);
    apply_settings(cfg, {{"scenario", "sweep"}, {"sweep.f", "10"}});
    const ScenarioResult sw = run_scenario(cfg);
    ASSERT_TRUE(sw.table);
    EXPECT_EQ(std::stod(sw.table->rows[0][6]), sim.trajectory->p_rr.back());
}

TEST(Output, EnvironmentDirectory) {
    ScenarioConfig cfg;
    ::unsetenv("CPWQED_OUTPUT_DIR");
    EXPECT_EQ(resolved_output_path(cfg, OutputFormat::Csv), "");
    ::setenv("CPWQED_OUTPUT_DIR", "/tmp/out", 1);
    EXPECT_EQ(resolved_output_path(cfg, OutputFormat::Csv), "/tmp/out/simulate-full.csv");
    cfg.output_path = "x.txt";
    EXPECT_EQ(resolved_output_path(cfg, OutputFormat::Text), "x.txt");
    ::unsetenv("CPWQED_OUTPUT_DIR");
}

TEST(Output, TextTableRows) {
    ScenarioResult r;
    r.table = Table{{"a", "b"}, {{"1", "2"}}};
    r.report.add("rows", 1);
    EXPECT_EQ(render(r, OutputFormat::Csv), "a,b\n1,2\n");
    EXPECT_NE(render(r, OutputFormat::Text).find("row0.b = 2"), std::string::npos);
}
