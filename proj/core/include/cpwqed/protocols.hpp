#pragma once

// Quantum-information protocols built on the cavity-mediated interactions:
// blockade single-excitation preparation, two-ensemble entanglement, the
// ensemble CPHASE gate and the photonic CPHASE via EIT. SI units (rad/s, s, m).

#include <numbers>
#include <optional>

#include "cpwqed/cavity_model.hpp"
#include "cpwqed/device_params.hpp"
#include "cpwqed/report.hpp"

namespace cpwqed {

struct EnsembleParams {
    double N = 1e6;
    double rho0 = 2e19;      // m⁻³ (2e13 cm⁻³)
    double L_a = 2e-4;       // m (λ_c/20)
    double sigma0 = 1e-14;   // m² (1e-10 cm²)
    Rate gamma_ge{1.5e7, RateConvention::Angular};  // "γ_ge ≃ 15 MHz"
    double V_a = 4.5e-14;    // m³ (d x d x λ_c/20)

    void validate() const;
};

/// 2 σ₀ ρ₀ L_a.
double optical_depth(const EnsembleParams& ens);
inline constexpr double kMinOpticalDepth = 10.0;

struct BlockadeBudget {
    double N = 0.0;          // atoms driven collectively
    double omega_gr = 0.0;
    double T1 = 0.0;         // π/(2√N Ω_gr)
    double T2 = 0.0;         // π/(2 Ω_sr)
    double p_double = 0.0;   // N Ω²/(2 D²), clipped to [0, 1]
    double p_decay = 0.0;    // (Γ_r + γ_r) T1 (upper bound taken as equality), clipped
    double p_total_raw = 0.0;  // unclipped sum
    double fidelity = 0.0;   // 1 - p_double - p_decay, clipped to [0, 1]
    bool blockade_ok = false;  // Ω_gr < D

    double total_time() const { return T1 + T2; }
};

struct BlockadeInputs {
    double N = 1e6;
    double D = 2.0 * std::numbers::pi * 1e6;  // cavity DDI, rad/s
    double decay = 3e3;                        // Γ_r + γ_r, s⁻¹
    double omega_sr = 2.0 * std::numbers::pi * 1e7;  // |r> -> |s> transfer Rabi frequency
};

/// Throws InvalidArgument for D <= 0, N < 2, Ω <= 0 or Ω_sr <= 0.
BlockadeBudget blockade_budget(double N, double omega_gr, double D, double decay, double omega_sr);
BlockadeBudget blockade_budget(const BlockadeInputs& in, double omega_gr);

struct OptimalOmega {
    double omega = 0.0;        // ∛(π (Γ_r + γ_r) D² / (2 N^{3/2}))
    double total_error = 0.0;  // p_double + p_decay at the optimum (unclipped)
};

OptimalOmega optimal_omega(double N, double D, double decay);

/// Pulse drives both ensembles (2N atoms). Requires N_A == N_B.
BlockadeBudget two_ensemble_entanglement(double N_A, double N_B, double omega_gr, double D, double decay,
                                         double omega_sr);

struct CphaseResult {
    RegimeRecipe recipe;
    double w_spectral = 0.0;   // interaction shift of the exact model
    double w_formula = 0.0;    // printed W_ij
    double w_shorthand = 0.0;  // 4 f⁻³
    double t_pi = 0.0;         // π / w_spectral, units 1/g_r
    double p_rr = 0.0;         // |11> branch survival at T_π
    double phi_rr = 0.0;       // background-subtracted phase of |11>
    double phi_conditional = 0.0;  // φ_11 - φ_10 - φ_01 from branch runs
    double amp_10 = 0.0;       // |<10|ψ(T_π)>| etc. (coherence with |00>)
    double amp_01 = 0.0;
    double amp_11 = 0.0;
    double max_p_rr_single_branches = 0.0;  // 0: at most one atom in |r> there
    double phase_error = 0.0;  // |φ_conditional - π|
    double process_fidelity = 0.0;  // |Tr(U_ideal† U)|²/16 with local phases removed
    double p_rr_analytic = 0.0;     // exp(-2(γ_r + Γ_r) T_π)
    double process_fidelity_analytic = 0.0;
    std::optional<double> seconds_per_unit;
};

/// Full-model |11> branch over T_π plus the |10>, |01> reference branches.
CphaseResult ensemble_cphase(const RegimeRecipe& recipe, const Decays& decays, const IntegratorOpts& opts,
                             std::optional<double> g_r = std::nullopt);
Report cphase_report(const CphaseResult& r);

struct ProbeTransition {
    double omega = 2.0 * std::numbers::pi * phys::c / 780.241e-9;  // optical angular frequency
    double dipole = 0.0;  // C·m; 0 means "derive from σ₀ and γ_ge"
};

/// ℘ from σ₀ = ℘² ω / (2 ε₀ ħ c γ_ge).
double dipole_from_cross_section(double sigma0, double omega, double gamma_ge);

struct PolaritonState {
    double theta = 0.0;          // tan θ = g_ge √N / Ω_d
    double v_g = 0.0;            // c cos²θ
    double v_g_density = 0.0;    // Ω_d² / (σ₀ ρ₀ γ_ge)
    double compression = 0.0;    // cos²θ
    double g_ge = 0.0;           // ℘ √(ω / (2 ħ ε₀ V_a))
    double omega_d = 0.0;
};

PolaritonState polariton(const EnsembleParams& ens, double omega_d, const ProbeTransition& probe = {});

enum class GroupVelocityForm { Density, MixingAngle };

/// φ = sin⁴θ W L_a / v_g. W = 0 gives 0; throws InvalidArgument for W < 0.
double photonic_cphase(const EnsembleParams& ens, const PolaritonState& pol, double W,
                       GroupVelocityForm form = GroupVelocityForm::Density);

/// Ω_d at which photonic_cphase equals `target` (bracketed root solve).
double solve_drive_for_phase(const EnsembleParams& ens, double W, double target,
                             const ProbeTransition& probe = {},
                             GroupVelocityForm form = GroupVelocityForm::Density);

}  // namespace cpwqed
