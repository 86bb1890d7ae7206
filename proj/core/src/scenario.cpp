#include "cpwqed/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "cpwqed/effective_models.hpp"
#include "cpwqed/errors.hpp"
#include "cpwqed/preset_table.hpp"

namespace cpwqed {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key) + " (expected " +
                      std::string(expected) + ")");
}

// Plain numbers plus the "2pi*X" shorthand used for angular frequencies.
double parse_double(std::string_view key, std::string_view value) {
    std::string_view v = trim(value);
    double scale = 1.0;
    if (v.starts_with("2pi*")) {
        scale = 2.0 * kPi;
        v.remove_prefix(4);
    }
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
        bad_value(key, value, "a finite number, optionally written 2pi*X");
    return scale * out;
}

int parse_int(std::string_view key, std::string_view value) {
    const std::string_view v = trim(value);
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, value, "an integer");
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    const std::string_view v = trim(value);
    if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
    if (v == "false" || v == "no" || v == "0" || v == "off") return false;
    bad_value(key, value, "true or false");
}

std::vector<double> parse_list(std::string_view key, std::string_view value) {
    std::vector<double> out;
    std::string_view rest = trim(value);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        out.push_back(parse_double(key, rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    if (out.empty()) bad_value(key, value, "a comma-separated list of numbers");
    return out;
}

template <class Fn>
auto rethrow_as_config(std::string_view key, std::string_view value, Fn&& fn) {
    try {
        return fn();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string(key) + " = " + std::string(value) + ": " + e.what());
    }
}

DeviceParams& device(ScenarioConfig& cfg) {
    if (!cfg.device) cfg.device.emplace();
    return *cfg.device;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view key, std::string_view value)>;

#define CPWQED_DOUBLE(field) [](ScenarioConfig& c, std::string_view k, std::string_view v) { field = parse_double(k, v); }
#define CPWQED_RATE(field) [](ScenarioConfig& c, std::string_view k, std::string_view v) { field = parse_rate(k, v); }

double parse_rate(std::string_view key, std::string_view value) {
    const double r = parse_double(key, value);
    if (r < 0.0) bad_value(key, value, "a rate >= 0");
    return r;
}

const std::vector<std::pair<std::string_view, Setter>>& setters() {
    static const std::vector<std::pair<std::string_view, Setter>> table = {
        {"scenario",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             c.scenario = rethrow_as_config(k, v, [&] { return parse_scenario_kind(trim(v)); });
         }},
        {"regime.kind",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             c.regime.kind = rethrow_as_config(k, v, [&] { return parse_regime_kind(trim(v)); });
         }},
        {"regime.f",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             const double f = parse_double(k, v);
             if (!(f > 1.0)) bad_value(k, v, "f > 1");
             c.regime.f = f;
         }},
        {"decay.source",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             const auto t = trim(v);
             if (t == "explicit") c.decay_source = DecaySource::Explicit;
             else if (t == "device") c.decay_source = DecaySource::Device;
             else bad_value(k, v, "explicit or device");
         }},
        {"decay.kappa", CPWQED_RATE(c.decays.kappa)},
        {"decay.gamma_r", CPWQED_RATE(c.decays.gamma_r)},
        {"decay.gamma_a", CPWQED_RATE(c.decays.gamma_a)},
        {"decay.gamma_b", CPWQED_RATE(c.decays.gamma_b)},
        {"decay.gamma",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             c.decays.gamma_r = c.decays.gamma_a = c.decays.gamma_b = parse_rate(k, v);
         }},
        {"model.n_max", [](ScenarioConfig& c, std::string_view k, std::string_view v) { c.n_max = parse_int(k, v); }},
        {"model.effective_w",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             const auto t = trim(v);
             if (t == "formula") c.effective_w = EffectiveW::Formula;
             else if (t == "shorthand") c.effective_w = EffectiveW::Shorthand;
             else if (t == "spectral") c.effective_w = EffectiveW::Spectral;
             else bad_value(k, v, "formula, shorthand or spectral");
         }},
        {"device.enabled",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             if (parse_bool(k, v)) device(c);
             else c.device.reset();
         }},
        {"device.L", CPWQED_DOUBLE(device(c).L)},
        {"device.d", CPWQED_DOUBLE(device(c).d)},
        {"device.eps_r", CPWQED_DOUBLE(device(c).eps_r)},
        {"device.m", [](ScenarioConfig& c, std::string_view k, std::string_view v) { device(c).m = parse_int(k, v); }},
        {"device.Q", CPWQED_DOUBLE(device(c).Q)},
        {"device.n_principal",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) { device(c).n_principal = parse_int(k, v); }},
        {"device.gamma_r", CPWQED_DOUBLE(device(c).gamma_r.value)},
        {"device.gamma_r_convention",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             device(c).gamma_r.convention = rethrow_as_config(k, v, [&] { return parse_rate_convention(trim(v)); });
         }},
        {"device.g_r",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             const auto t = trim(v);
             if (t == "estimate") device(c).g_r_override.reset();
             else device(c).g_r_override = parse_double(k, v);
         }},
        {"integrator.method",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             const auto t = trim(v);
             if (t == "rk45") c.integrator.method = Method::AdaptiveRk45;
             else if (t == "rk4") c.integrator.method = Method::FixedRk4;
             else bad_value(k, v, "rk45 or rk4");
         }},
        {"integrator.dt", CPWQED_DOUBLE(c.integrator.dt)},
        {"integrator.rel_tol", CPWQED_DOUBLE(c.integrator.rel_tol)},
        {"integrator.abs_tol", CPWQED_DOUBLE(c.integrator.abs_tol)},
        {"integrator.t_max", CPWQED_DOUBLE(c.integrator.t_max)},
        {"integrator.sample_interval", CPWQED_DOUBLE(c.integrator.sample_interval)},
        {"integrator.min_dt", CPWQED_DOUBLE(c.integrator.min_dt)},
        {"integrator.max_steps",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             const int n = parse_int(k, v);
             if (n <= 0) bad_value(k, v, "a positive integer");
             c.integrator.max_steps = static_cast<std::size_t>(n);
         }},
        {"integrator.track_positivity",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             c.integrator.track_positivity = parse_bool(k, v);
         }},
        {"sweep.f", [](ScenarioConfig& c, std::string_view k, std::string_view v) { c.sweep_f = parse_list(k, v); }},
        {"sweep.threads",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) { c.sweep_threads = parse_int(k, v); }},
        {"ensemble.N", CPWQED_DOUBLE(c.ensemble.N)},
        {"ensemble.rho0", CPWQED_DOUBLE(c.ensemble.rho0)},
        {"ensemble.L_a", CPWQED_DOUBLE(c.ensemble.L_a)},
        {"ensemble.sigma0", CPWQED_DOUBLE(c.ensemble.sigma0)},
        {"ensemble.gamma_ge", CPWQED_DOUBLE(c.ensemble.gamma_ge.value)},
        {"ensemble.gamma_ge_convention",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             c.ensemble.gamma_ge.convention = rethrow_as_config(k, v, [&] { return parse_rate_convention(trim(v)); });
         }},
        {"ensemble.V_a", CPWQED_DOUBLE(c.ensemble.V_a)},
        {"blockade.N", CPWQED_DOUBLE(c.blockade.N)},
        {"blockade.D", CPWQED_DOUBLE(c.blockade.D)},
        {"blockade.decay", CPWQED_DOUBLE(c.blockade.decay)},
        {"blockade.omega_sr", CPWQED_DOUBLE(c.blockade.omega_sr)},
        {"blockade.omega_gr",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             if (trim(v) == "optimal") c.blockade_omega_gr.reset();
             else c.blockade_omega_gr = parse_double(k, v);
         }},
        {"entangle.N_B", [](ScenarioConfig& c, std::string_view k, std::string_view v) { c.entangle_N_B = parse_double(k, v); }},
        {"eit.omega_d", CPWQED_DOUBLE(c.eit_omega_d)},
        {"eit.W", CPWQED_DOUBLE(c.eit_W)},
        {"eit.target_phase", CPWQED_DOUBLE(c.eit_target_phase)},
        {"eit.group_velocity",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             const auto t = trim(v);
             if (t == "density") c.eit_form = GroupVelocityForm::Density;
             else if (t == "mixing-angle") c.eit_form = GroupVelocityForm::MixingAngle;
             else bad_value(k, v, "density or mixing-angle");
         }},
        {"output.path", [](ScenarioConfig& c, std::string_view, std::string_view v) { c.output_path = std::string(trim(v)); }},
        {"output.format",
         [](ScenarioConfig& c, std::string_view k, std::string_view v) {
             const auto t = trim(v);
             if (t == "csv") c.format = OutputFormat::Csv;
             else if (t == "text") c.format = OutputFormat::Text;
             else bad_value(k, v, "csv or text");
         }},
    };
    return table;
}

#undef CPWQED_DOUBLE
#undef CPWQED_RATE

std::string num(double v) { return format_number(v); }

Report stats_report(const EvolutionStats& s) {
    Report r;
    r.add("steps", s.steps);
    r.add("rejected", s.rejected);
    r.add("rhs_evals", s.rhs_evals);
    r.add("max_trace_drift", s.max_trace_drift);
    r.add("max_hermiticity_defect", s.max_hermiticity_defect);
    r.add("min_eigenvalue", s.min_eigenvalue);
    return r;
}

std::optional<double> device_g_r(const ScenarioConfig& cfg) {
    if (!cfg.device) return std::nullopt;
    return derive(*cfg.device).g_r;
}

double effective_w(const ScenarioConfig& cfg, const SystemParams& p) {
    switch (cfg.effective_w) {
        case EffectiveW::Formula: return fourth_order(p).w_ij;
        case EffectiveW::Shorthand: return fourth_order(p).w_shorthand;
        case EffectiveW::Spectral: return interaction_shift_spectral(p);
    }
    return kNaN;
}

Trajectory effective_trajectory(const ScenarioConfig& cfg, const SystemParams& p, const std::vector<double>& times) {
    if (cfg.regime.kind == RegimeKind::Ddi) return ddi_effective_model(ddi_inputs(p), times);
    return vdw_effective_model(effective_w(cfg, p), vdw_effective_decay(p), times);
}

Report regime_summary(const ScenarioConfig& cfg, const SystemParams& p) {
    Report r;
    r.add("regime.kind", std::string(to_string(cfg.regime.kind)));
    r.add("regime.f", cfg.regime.f);
    r.add("system.delta_a", p.delta_a);
    r.add("system.delta_b", p.delta_b);
    r.add("system.kappa", p.kappa);
    r.add("system.gamma_r", p.gamma_r);
    r.add("system.gamma_a", p.gamma_a);
    r.add("system.gamma_b", p.gamma_b);
    r.add("system.n_max", p.n_max);
    const auto q2 = second_order(p);
    r.add("d_ij", q2.d_ij);
    r.add("s_r", q2.s_r[0]);
    r.add("s_r_exact", q2.s_r_exact[0]);
    r.add("gamma_r_induced", q2.gamma_r_induced[0]);
    if (cfg.regime.kind == RegimeKind::Vdw) {
        const auto q4 = fourth_order(p);
        r.add("w_formula", q4.w_ij);
        r.add("w_shorthand", q4.w_shorthand);
        const double w = interaction_shift_spectral(p);
        r.add("w_spectral", w);
        r.add("t_pi", kPi / w);
    }
    const auto rr = validate_regime(p);
    r.add("regime.detuning_ratio", rr.detuning_ratio);
    r.add("regime.quality", std::string(to_string(rr.quality)));
    r.add("regime.decay_condition", rr.decay_condition);
    r.add("regime.cavity_condition", rr.cavity_condition);
    r.add("regime.f_max", rr.f_max);
    return r;
}

ScenarioResult run_simulate_full(const ScenarioConfig& cfg) {
    const SystemParams p = resolved_system(cfg);
    const IntegratorOpts opts = resolved_integrator(cfg);
    Trajectory traj = run_full_model(p, opts);
    if (const auto g = device_g_r(cfg)) traj.seconds_per_unit = 1.0 / *g;

    ScenarioResult res;
    res.report = regime_summary(cfg, p);
    res.report.add("t_end", traj.t.back());
    if (traj.seconds_per_unit) res.report.add("t_end_seconds", traj.t.back() * *traj.seconds_per_unit);
    res.report.add("p_rr_end", traj.p_rr.back());
    res.report.add("phi_rr_end", traj.phi_rr.back());
    res.report.add("samples", traj.size());
    res.report.append(stats_report(traj.stats), "stats.");
    res.trajectory = std::move(traj);
    return res;
}

ScenarioResult run_simulate_effective(const ScenarioConfig& cfg) {
    const SystemParams p = resolved_system(cfg);
    const IntegratorOpts opts = resolved_integrator(cfg);
    Trajectory traj = effective_trajectory(cfg, p, uniform_times(opts.t_max, opts.sample_interval));
    if (const auto g = device_g_r(cfg)) traj.seconds_per_unit = 1.0 / *g;

    ScenarioResult res;
    res.report = regime_summary(cfg, p);
    if (cfg.regime.kind == RegimeKind::Vdw) {
        res.report.add("effective.w", effective_w(cfg, p));
        res.report.add("effective.decay", vdw_effective_decay(p));
    } else {
        const auto in = ddi_inputs(p);
        res.report.add("effective.offset_ba", in.offset_ba);
        res.report.add("effective.width_rr", in.width_rr);
        res.report.add("effective.width_ba", in.width_ba);
    }
    res.report.add("t_end", traj.t.back());
    res.report.add("p_rr_end", traj.p_rr.back());
    res.report.add("phi_rr_end", traj.phi_rr.back());
    res.trajectory = std::move(traj);
    return res;
}

ScenarioResult run_params(const ScenarioConfig& cfg) {
    const DeviceParams dev = cfg.device.value_or(DeviceParams{});
    const DerivedDevice out = derive(dev);
    ScenarioResult res;
    res.report = device_report(dev, out);

    const ScaledSystem scaled = to_system_params(out, cfg.regime, cfg.n_max);
    res.report.append(regime_summary(cfg, scaled.params));
    const auto nodes = antinode_positions(dev.L, dev.m);
    res.report.add("mode.antinode_count", nodes.size());
    res.report.add("mode.antinode_spacing", nodes.size() > 1 ? nodes[1] - nodes[0] : kNaN);
    const double d_cavity = second_order(scaled.params).d_ij * out.g_r;
    res.report.add("ddi.cavity_rate", d_cavity);
    res.report.add("ddi.cavity_rate_over_2pi", d_cavity / (2.0 * kPi));
    res.report.add("ddi.direct_crossover_radius", ddi_crossover(out.dipole, out.dipole, d_cavity));
    res.report.add("ensemble.optical_depth", optical_depth(cfg.ensemble));
    return res;
}

double blockade_omega(const ScenarioConfig& cfg) {
    return cfg.blockade_omega_gr.value_or(optimal_omega(cfg.blockade.N, cfg.blockade.D, cfg.blockade.decay).omega);
}

Report budget_report(const BlockadeBudget& b) {
    Report r;
    r.add("N", b.N);
    r.add("omega_gr", b.omega_gr);
    r.add("omega_gr_over_2pi", b.omega_gr / (2.0 * kPi));
    r.add("T1", b.T1);
    r.add("T2", b.T2);
    r.add("total_time", b.total_time());
    r.add("p_double", b.p_double);
    r.add("p_decay", b.p_decay);
    r.add("p_total_raw", b.p_total_raw);
    r.add("fidelity", b.fidelity);
    r.add("blockade_ok", b.blockade_ok);
    return r;
}

ScenarioResult run_blockade(const ScenarioConfig& cfg) {
    const auto opt = optimal_omega(cfg.blockade.N, cfg.blockade.D, cfg.blockade.decay);
    ScenarioResult res;
    res.report.add("optimal_omega_gr", opt.omega);
    res.report.add("optimal_omega_gr_over_2pi", opt.omega / (2.0 * kPi));
    res.report.add("optimal_total_error", opt.total_error);
    res.report.append(budget_report(blockade_budget(cfg.blockade, blockade_omega(cfg))));
    res.report.add("p_decay_note", "upper bound evaluated as equality");
    return res;
}

ScenarioResult run_entangle(const ScenarioConfig& cfg) {
    const double omega = blockade_omega(cfg);
    const auto& in = cfg.blockade;
    const BlockadeBudget single = blockade_budget(in, omega);
    const BlockadeBudget pair =
        two_ensemble_entanglement(in.N, cfg.entangle_N_B.value_or(in.N), omega, in.D, in.decay, in.omega_sr);
    ScenarioResult res;
    res.report.append(budget_report(pair), "pair.");
    res.report.append(budget_report(single), "single.");
    res.report.add("fidelity_ratio", pair.fidelity / single.fidelity);
    return res;
}

ScenarioResult run_gate_fidelity(const ScenarioConfig& cfg) {
    const SystemParams p = resolved_system(cfg);
    IntegratorOpts opts = cfg.integrator;
    const Decays decays{p.kappa, p.gamma_r, p.gamma_a, p.gamma_b};
    ScenarioResult res;
    res.report = cphase_report(ensemble_cphase(cfg.regime, decays, opts, device_g_r(cfg)));
    return res;
}

ScenarioResult run_eit(const ScenarioConfig& cfg) {
    const EnsembleParams& ens = cfg.ensemble;
    const PolaritonState pol = polariton(ens, cfg.eit_omega_d);
    ScenarioResult res;
    Report& r = res.report;
    const double od = optical_depth(ens);
    r.add("optical_depth", od);
    r.add("optical_depth_ok", od >= kMinOpticalDepth);
    r.add("gamma_ge", ens.gamma_ge.angular());
    r.add("gamma_ge_convention", std::string(to_string(ens.gamma_ge.convention)));
    r.add("omega_d", cfg.eit_omega_d);
    r.add("W", cfg.eit_W);
    r.add("g_ge", pol.g_ge);
    r.add("theta", pol.theta);
    r.add("compression", pol.compression);
    r.add("v_g_mixing_angle", pol.v_g);
    r.add("v_g_density", pol.v_g_density);
    r.add("v_g_ratio", pol.v_g / pol.v_g_density);
    r.add("group_velocity_form", cfg.eit_form == GroupVelocityForm::Density ? "density" : "mixing-angle");
    r.add("phi", photonic_cphase(ens, pol, cfg.eit_W, cfg.eit_form));

    EnsembleParams other = ens;
    other.gamma_ge.convention =
        ens.gamma_ge.convention == RateConvention::Angular ? RateConvention::Ordinary : RateConvention::Angular;
    r.add("phi_other_gamma_convention", photonic_cphase(other, polariton(other, cfg.eit_omega_d), cfg.eit_W, cfg.eit_form));
    r.add("target_phase", cfg.eit_target_phase);
    const double solved = solve_drive_for_phase(ens, cfg.eit_W, cfg.eit_target_phase, {}, cfg.eit_form);
    r.add("omega_d_for_target", solved);
    r.add("omega_d_for_target_over_2pi", solved / (2.0 * kPi));
    return res;
}

struct SweepRow {
    std::vector<std::string> cells;
};

const std::vector<std::string> kSweepHeader = {"f",     "kind",       "interaction", "w_formula", "w_shorthand",
                                               "t_end", "p_rr_end",   "phase_error", "max_dev_effective",
                                               "status"};

SweepRow sweep_row(const ScenarioConfig& base, double f) {
    SweepRow row;
    try {
        ScenarioConfig cfg = base;
        cfg.regime.f = f;
        const SystemParams p = resolved_system(cfg);
        const IntegratorOpts opts = resolved_integrator(cfg);
        const Trajectory full = run_full_model(p, opts);
        const Trajectory eff = effective_trajectory(cfg, p, full.t);
        const bool vdw = cfg.regime.kind == RegimeKind::Vdw;
        const auto q2 = second_order(p);
        double interaction = q2.d_ij, w_formula = kNaN, w_short = kNaN, phase_error = kNaN, window = opts.t_max;
        if (vdw) {
            const auto q4 = fourth_order(p);
            interaction = interaction_shift_spectral(p);
            w_formula = q4.w_ij;
            w_short = q4.w_shorthand;
            phase_error = std::abs(full.phi_rr.back() - kPi);
        } else {
            window = kPi / (std::numbers::sqrt2 * q2.d_ij);  // one exchange period
        }
        row.cells = {num(f),       std::string(to_string(cfg.regime.kind)),
                     num(interaction), num(w_formula), num(w_short), num(full.t.back()), num(full.p_rr.back()),
                     num(phase_error), num(max_abs_deviation(full, eff, "p_rr", window)), "ok"};
    } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), ',', ';');
        row.cells = {num(f), std::string(to_string(base.regime.kind)), "nan", "nan", "nan", "nan", "nan", "nan",
                     "nan", "failed: " + msg};
    }
    return row;
}

ScenarioResult run_sweep(const ScenarioConfig& cfg) {
    if (cfg.sweep_f.empty()) throw ConfigError("sweep: sweep.f must list at least one f value");
    std::vector<SweepRow> rows(cfg.sweep_f.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers =
        std::min<std::size_t>(rows.size(), cfg.sweep_threads > 0 ? static_cast<std::size_t>(cfg.sweep_threads) : hw);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < rows.size(); k = next++) rows[k] = sweep_row(cfg, cfg.sweep_f[k]);
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    ScenarioResult res;
    Table table;
    table.header = kSweepHeader;
    std::size_t failed = 0;
    for (auto& r : rows) {
        if (r.cells.back() != "ok") ++failed;
        table.rows.push_back(std::move(r.cells));
    }
    res.report.add("regime.kind", std::string(to_string(cfg.regime.kind)));
    res.report.add("rows", table.rows.size());
    res.report.add("failed_rows", failed);
    res.table = std::move(table);
    return res;
}

}  // namespace

std::string_view to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::SimulateFull: return "simulate-full";
        case ScenarioKind::SimulateEffective: return "simulate-effective";
        case ScenarioKind::Params: return "params";
        case ScenarioKind::Blockade: return "blockade";
        case ScenarioKind::Entangle: return "entangle";
        case ScenarioKind::GateFidelity: return "gate-fidelity";
        case ScenarioKind::EitPhase: return "eit-phase";
        case ScenarioKind::Sweep: return "sweep";
    }
    return "simulate-full";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
    for (auto k : {ScenarioKind::SimulateFull, ScenarioKind::SimulateEffective, ScenarioKind::Params,
                   ScenarioKind::Blockade, ScenarioKind::Entangle, ScenarioKind::GateFidelity, ScenarioKind::EitPhase,
                   ScenarioKind::Sweep})
        if (to_string(k) == text) return k;
    if (text == "simulate") return ScenarioKind::SimulateFull;
    throw InvalidArgument("unknown scenario '" + std::string(text) + "'");
}

Settings parse_settings(std::string_view text, std::string_view source) {
    Settings out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos || trim(line.substr(0, eq)).empty())
            throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": expected 'key = value'");
        out.emplace_back(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))));
    }
    return out;
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
    for (const auto& [name, set] : setters()) {
        if (name == key) {
            set(cfg, key, value);
            return;
        }
    }
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

void apply_settings(ScenarioConfig& cfg, const Settings& settings) {
    for (const auto& [k, v] : settings) apply_setting(cfg, k, v);
}

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys = [] {
        std::vector<std::string_view> out;
        for (const auto& [name, set] : setters()) out.push_back(name);
        return out;
    }();
    return keys;
}

std::vector<std::string_view> preset_names() {
    std::vector<std::string_view> out;
    for (const auto& [name, text] : detail::kPresetTable) out.push_back(name);
    return out;
}

std::string_view preset_text(std::string_view name) {
    for (const auto& [n, text] : detail::kPresetTable)
        if (n == name) return text;
    std::string known;
    for (auto n : preset_names()) known += (known.empty() ? "" : ", ") + std::string(n);
    throw ConfigError("unknown preset '" + std::string(name) + "' (available: " + known + ")");
}

ScenarioConfig load_config(std::optional<std::string_view> preset, std::optional<std::string> file,
                           const Settings& overrides) {
    ScenarioConfig cfg;
    if (preset) apply_settings(cfg, parse_settings(preset_text(*preset), "preset " + std::string(*preset)));
    if (file) {
        std::ifstream in(*file);
        if (!in) throw ConfigError("cannot open config file '" + *file + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        apply_settings(cfg, parse_settings(buf.str(), *file));
    }
    apply_settings(cfg, overrides);
    return cfg;
}

IntegratorOpts resolved_integrator(const ScenarioConfig& cfg) {
    IntegratorOpts o = cfg.integrator;
    if (o.t_max <= 0.0) o.t_max = regime_window(cfg.regime);
    if (o.sample_interval <= 0.0) o.sample_interval = regime_sample_interval(cfg.regime);
    rethrow_as_config("integrator", "", [&] { o.validate(); });
    return o;
}

SystemParams resolved_system(const ScenarioConfig& cfg) {
    return rethrow_as_config("regime", to_string(cfg.regime.kind), [&] {
        if (cfg.decay_source == DecaySource::Device) {
            if (!cfg.device) throw InvalidArgument("decay.source = device needs a device block");
            return to_system_params(derive(*cfg.device), cfg.regime, cfg.n_max).params;
        }
        return apply_recipe(cfg.regime, cfg.decays, cfg.n_max);
    });
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    switch (cfg.scenario) {
        case ScenarioKind::SimulateFull: return run_simulate_full(cfg);
        case ScenarioKind::SimulateEffective: return run_simulate_effective(cfg);
        case ScenarioKind::Params: return run_params(cfg);
        case ScenarioKind::Blockade: return run_blockade(cfg);
        case ScenarioKind::Entangle: return run_entangle(cfg);
        case ScenarioKind::GateFidelity: return run_gate_fidelity(cfg);
        case ScenarioKind::EitPhase: return run_eit(cfg);
        case ScenarioKind::Sweep: return run_sweep(cfg);
    }
    throw ConfigError("unhandled scenario");
}

OutputFormat resolved_format(const ScenarioConfig& cfg, const ScenarioResult& result) {
    if (cfg.format) return *cfg.format;
    return result.trajectory || result.table ? OutputFormat::Csv : OutputFormat::Text;
}

void write_result(std::ostream& out, const ScenarioResult& result, OutputFormat format) {
    if (format == OutputFormat::Text) {
        result.report.write(out);
        if (result.table) {
            const Table& t = *result.table;
            for (std::size_t r = 0; r < t.rows.size(); ++r)
                for (std::size_t c = 0; c < t.header.size(); ++c)
                    out << "row" << r << '.' << t.header[c] << " = " << t.rows[r][c] << '\n';
        }
        return;
    }
    if (result.trajectory) {
        write_csv(out, *result.trajectory);
    } else if (result.table) {
        const Table& t = *result.table;
        for (std::size_t c = 0; c < t.header.size(); ++c) out << (c ? "," : "") << t.header[c];
        out << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
            out << '\n';
        }
    } else {
        out << "key,value\n";
        for (const auto& [k, v] : result.report.entries()) out << k << ',' << v << '\n';
    }
}

std::string resolved_output_path(const ScenarioConfig& cfg, OutputFormat format) {
    if (!cfg.output_path.empty()) return cfg.output_path;
    const char* dir = std::getenv("CPWQED_OUTPUT_DIR");
    if (dir == nullptr || *dir == '\0') return {};
    std::string path(dir);
    if (path.back() != '/') path += '/';
    return path + std::string(to_string(cfg.scenario)) + (format == OutputFormat::Csv ? ".csv" : ".txt");
}

}  // namespace cpwqed
