#pragma once

// Scenario layer behind the command-line tool: flat `key = value`
// configuration, the shipped presets, and result emission.

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cpwqed/cavity_model.hpp"
#include "cpwqed/device_params.hpp"
#include "cpwqed/protocols.hpp"
#include "cpwqed/report.hpp"
#include "cpwqed/trajectory.hpp"

namespace cpwqed {

enum class ScenarioKind { SimulateFull, SimulateEffective, Params, Blockade, Entangle, GateFidelity, EitPhase, Sweep };
enum class OutputFormat { Csv, Text };
enum class DecaySource { Explicit, Device };

std::string_view to_string(ScenarioKind k);
ScenarioKind parse_scenario_kind(std::string_view text);

/// Integrator options whose time window and sampling are picked per regime.
inline IntegratorOpts auto_window_integrator() {
    IntegratorOpts o;
    o.t_max = 0.0;
    o.sample_interval = 0.0;
    return o;
}

/// Which W drives the reduced VdWI model.
enum class EffectiveW { Formula, Shorthand, Spectral };

struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::SimulateFull;
    RegimeRecipe regime;
    Decays decays;  // units of g_r
    DecaySource decay_source = DecaySource::Explicit;
    std::optional<DeviceParams> device;
    IntegratorOpts integrator = auto_window_integrator();  // t_max, sample_interval <= 0: regime defaults
    int n_max = 2;
    EffectiveW effective_w = EffectiveW::Formula;

    std::vector<double> sweep_f;
    int sweep_threads = 0;  // 0: hardware concurrency

    EnsembleParams ensemble;
    BlockadeInputs blockade;
    std::optional<double> blockade_omega_gr;  // unset: optimal value
    std::optional<double> entangle_N_B;       // unset: same as blockade.N

    double eit_omega_d = 2.0 * std::numbers::pi * 1.1e6;
    double eit_W = 2.0 * std::numbers::pi * 40e3;
    GroupVelocityForm eit_form = GroupVelocityForm::Density;
    double eit_target_phase = std::numbers::pi;

    std::string output_path;  // empty: stdout, or $CPWQED_OUTPUT_DIR/<scenario>.<ext>
    std::optional<OutputFormat> format;  // unset: csv for trajectories and tables, text otherwise
};

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Parses `key = value` lines; '#' starts a comment. Throws ConfigError with
/// `source:line` context on malformed lines.
Settings parse_settings(std::string_view text, std::string_view source = "config");

/// Applies one setting; unknown keys and bad values throw ConfigError.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);
void apply_settings(ScenarioConfig& cfg, const Settings& settings);

/// Every accepted configuration key.
const std::vector<std::string_view>& config_keys();

std::vector<std::string_view> preset_names();
/// Raw preset text; throws ConfigError for unknown names.
std::string_view preset_text(std::string_view name);

/// preset, then file, then `--set` overrides (later wins).
ScenarioConfig load_config(std::optional<std::string_view> preset, std::optional<std::string> file,
                           const Settings& overrides);

/// Plain table for sweeps.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct ScenarioResult {
    std::optional<Trajectory> trajectory;
    std::optional<Table> table;
    Report report;
};

/// Effective integrator options for a regime run (defaults filled in).
IntegratorOpts resolved_integrator(const ScenarioConfig& cfg);
/// SystemParams for the configured regime, decays and truncation.
SystemParams resolved_system(const ScenarioConfig& cfg);

ScenarioResult run_scenario(const ScenarioConfig& cfg);

OutputFormat resolved_format(const ScenarioConfig& cfg, const ScenarioResult& result);
void write_result(std::ostream& out, const ScenarioResult& result, OutputFormat format);

/// Output destination after applying $CPWQED_OUTPUT_DIR; empty means stdout.
std::string resolved_output_path(const ScenarioConfig& cfg, OutputFormat format);

}  // namespace cpwqed
