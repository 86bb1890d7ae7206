// Command-line front end: one subcommand per scenario.
//
//   cpwqed simulate --preset fig2-vdw-f10 --output vdw10.csv
//   cpwqed params --preset paper-device
//   cpwqed sweep --preset sweep-ddi --set sweep.threads=2
//
// Exit codes: 0 ok, 2 configuration error, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpwqed/errors.hpp"
#include "cpwqed/scenario.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct CommonArgs {
    std::string preset;
    std::string config;
    std::vector<std::string> set;
    std::string output;
    std::string format;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-p,--preset", args.preset, "named preset (see `cpwqed presets`)");
    cmd->add_option("-c,--config", args.config, "key = value config file");
    cmd->add_option("-s,--set", args.set, "override, key=value (repeatable, applied last)");
    cmd->add_option("-o,--output", args.output, "output file (default: stdout or $CPWQED_OUTPUT_DIR)");
    cmd->add_option("-f,--format", args.format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
}

cpwqed::Settings overrides_from(const CommonArgs& args) {
    cpwqed::Settings out;
    for (const auto& kv : args.set) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw cpwqed::ConfigError("--set expects key=value, got '" + kv + "'");
        out.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!args.output.empty()) out.emplace_back("output.path", args.output);
    if (!args.format.empty()) out.emplace_back("output.format", args.format);
    return out;
}

int run(const CommonArgs& args, std::optional<cpwqed::ScenarioKind> kind) {
    using namespace cpwqed;
    std::optional<std::string_view> preset;
    if (!args.preset.empty()) preset = args.preset;
    std::optional<std::string> file;
    if (!args.config.empty()) file = args.config;

    ScenarioConfig cfg = load_config(preset, file, overrides_from(args));
    if (kind) cfg.scenario = *kind;

    const ScenarioResult result = run_scenario(cfg);
    const OutputFormat format = resolved_format(cfg, result);
    const std::string path = resolved_output_path(cfg, format);
    if (path.empty()) {
        write_result(std::cout, result, format);
        return 0;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    write_result(out, result, format);
    if (result.trajectory || result.table) result.report.write(std::cerr);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cavity-mediated Rydberg interactions: dynamics, device numbers and protocol budgets", "cpwqed"};
    app.require_subcommand(0, 1);

    struct Entry {
        const char* name;
        const char* help;
        std::optional<cpwqed::ScenarioKind> kind;
    };
    const std::vector<Entry> entries = {
        {"simulate", "full master-equation run", cpwqed::ScenarioKind::SimulateFull},
        {"simulate-effective", "reduced second/fourth-order model", cpwqed::ScenarioKind::SimulateEffective},
        {"params", "device pipeline report", cpwqed::ScenarioKind::Params},
        {"blockade", "single-excitation preparation budget", cpwqed::ScenarioKind::Blockade},
        {"entangle", "two-ensemble entanglement budget", cpwqed::ScenarioKind::Entangle},
        {"gate-fidelity", "ensemble CPHASE at T_pi", cpwqed::ScenarioKind::GateFidelity},
        {"eit-phase", "photonic CPHASE via EIT", cpwqed::ScenarioKind::EitPhase},
        {"sweep", "f sweep table", cpwqed::ScenarioKind::Sweep},
        {"run", "scenario taken from the config's `scenario` key", std::nullopt},
    };

    std::vector<CommonArgs> args(entries.size());
    std::vector<CLI::App*> cmds;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        cmds.push_back(app.add_subcommand(entries[k].name, entries[k].help));
        add_common(cmds.back(), args[k]);
    }
    auto* presets = app.add_subcommand("presets", "list shipped presets");
    std::string show;
    presets->add_option("name", show, "print this preset's settings");
    auto* keys = app.add_subcommand("keys", "list accepted configuration keys");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*presets) {
            if (show.empty()) {
                for (auto name : cpwqed::preset_names()) std::cout << name << '\n';
            } else {
                std::cout << cpwqed::preset_text(show);
            }
            return 0;
        }
        if (*keys) {
            for (auto key : cpwqed::config_keys()) std::cout << key << '\n';
            return 0;
        }
        for (std::size_t k = 0; k < entries.size(); ++k)
            if (*cmds[k]) return run(args[k], entries[k].kind);
    } catch (const cpwqed::ConfigError& e) {
        std::cerr << "cpwqed: configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const cpwqed::InvalidArgument& e) {
        std::cerr << "cpwqed: invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const cpwqed::Error& e) {
        std::cerr << "cpwqed: numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }

    std::cerr << app.help();
    return kExitConfig;
}
