#pragma once

// Exact rotating-frame model of two Rydberg atoms (levels b < r < a) coupled
// to one cavity mode:
//
//   H = sum_l [ Δ_a σ_aa^l - Δ_b σ_bb^l
//               + (g_br^l c† σ_br^l + g_ar^l c σ_ar^l + h.c.) ]
//
// Every quantity is dimensionless: energies and rates in units of g_r, time in
// units of 1/g_r.

#include <string_view>
#include <vector>

#include "cpwqed/lindblad.hpp"
#include "cpwqed/qops.hpp"
#include "cpwqed/trajectory.hpp"

namespace cpwqed {

struct SystemParams {
    double g_br_i = 1.0;
    double g_ar_i = 1.0;
    double g_br_j = 1.0;
    double g_ar_j = 1.0;
    double delta_a = 0.0;
    double delta_b = 0.0;
    double kappa = 0.0;
    double gamma_r = 0.0;
    double gamma_a = 0.0;
    double gamma_b = 0.0;
    int n_max = 2;

    /// Rates and couplings non-negative and finite, n_max >= 2.
    void validate() const;
    BasisSpec basis() const { return BasisSpec({"sink", "b", "r", "a"}, n_max); }
    /// Same system with atoms i and j exchanged.
    SystemParams swapped() const;
};

/// Cavity linewidth and intrinsic Rydberg decay rates (units of g_r).
struct Decays {
    double kappa = 0.0;
    double gamma_r = 0.0;
    double gamma_a = 0.0;
    double gamma_b = 0.0;
};

enum class RegimeKind { Ddi, Vdw };

std::string_view to_string(RegimeKind kind);
RegimeKind parse_regime_kind(std::string_view text);

struct RegimeRecipe {
    RegimeKind kind = RegimeKind::Vdw;
    double f = 10.0;  // Δ_b / g_r

    void validate() const;
};

/// Detunings for the resonant-exchange (DDI: Δ_b = f, Δ_a = f + 1/f) or
/// fourth-order (VdWI: Δ_b = f, Δ_a = f - 1) regime with all couplings equal to 1.
SystemParams apply_recipe(const RegimeRecipe& recipe);
SystemParams apply_recipe(const RegimeRecipe& recipe, const Decays& decays, int n_max = 2);

Operator build_hamiltonian(const SystemParams& p);

/// √κ c and √Γ_μ |sink><μ| for μ = r, a, b on each atom; zero rates are skipped.
std::vector<Operator> collapse_operators(const SystemParams& p);

/// Exact dressed energy of |r, 0_c> for a single atom coupled to |b, 1_c>,
/// adiabatically connected to 0 as g -> 0. Equals √(g² + Δ_b²/4) - Δ_b/2 for Δ_b > 0.
double stark_shift_exact(double g_br, double delta_b);

/// Pair interaction realised by the exact Hamiltonian: energy of the dressed
/// eigenstate with the largest |r r 0> weight minus both single-atom Stark shifts.
double interaction_shift_spectral(const SystemParams& p);

enum class RegimeQuality { Good, Marginal, Poor };
std::string_view to_string(RegimeQuality q);

struct RegimeReport {
    double f = 0.0;                // min(|Δ_a|, |Δ_b|) / max coupling
    double detuning_ratio = 0.0;   // min(|Δ_a|, |Δ_b|) / max(coupling, κ)
    RegimeQuality quality = RegimeQuality::Poor;  // >= 10 good, >= 5 marginal
    bool decay_condition = false;  // g_r > Γ_r f^3
    bool cavity_condition = false; // g_r > κ f
    double f_max = 0.0;            // min(∛(g_r/Γ_r), g_r/κ)

    bool strong_coupling() const { return decay_condition && cavity_condition; }
};

/// f_max = min(∛(g_r/Γ_r), g_r/κ) in any consistent unit system; +inf if both rates vanish.
double strong_coupling_f_max(double g_r, double kappa, double gamma_r);

RegimeReport validate_regime(const SystemParams& p);

enum class InitialState {
    /// (|sink sink 0> + |r r 0>)/√2: the decoupled sink component is a phase
    /// reference for |r r>; populations are rescaled by 2.
    PhaseReference,
    /// |r r 0>; phi_rr is reported as NaN.
    Pure,
};

/// Master-equation run of the exact model starting from |r r 0>.
Trajectory run_full_model(const SystemParams& p, const IntegratorOpts& opts,
                          InitialState initial = InitialState::PhaseReference);

/// Default time window: three exchange periods π/(√2 D) for DDI, T_π = π/W
/// (W from interaction_shift_spectral) for VdWI.
double regime_window(const RegimeRecipe& recipe);
double regime_sample_interval(const RegimeRecipe& recipe);

/// run_full_model over the default window; opts.t_max / sample_interval <= 0
/// pick the defaults above.
Trajectory run_regime_window(const RegimeRecipe& recipe, const Decays& decays, const IntegratorOpts& opts,
                             int n_max = 2);

}  // namespace cpwqed
