#pragma once

// Perturbative (second- and fourth-order) quantities and the reduced models
// they define. Units as in cavity_model.hpp.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "cpwqed/cavity_model.hpp"
#include "cpwqed/trajectory.hpp"

namespace cpwqed {

struct SecondOrderQuantities {
    std::array<double, 2> s_r{};           // |g_br|²/Δ_b per atom
    std::array<double, 2> s_r_exact{};     // √(|g_br|² + Δ_b²/4) - Δ_b/2
    std::array<double, 2> s_a{};           // |g_ar|²/Δ_b
    std::array<double, 2> gamma_r_induced{};  // κ|g_br|²/Δ_b²
    std::array<double, 2> gamma_a_induced{};  // κ|g_ar|²/Δ_b²
    double d_ba = 0.0;  // <b a|V|r r> = g_br^i g_ar^j / Δ_b
    double d_ab = 0.0;  // <a b|V|r r> = g_ar^i g_br^j / Δ_b
    double d_ij = 0.0;  // = d_ba, i.e. D_ij
    double delta_omega = 0.0;  // Δ_a - Δ_b
    double offset_ba = 0.0;    // δω + s_a^j - s_r^i - s_r^j
    double offset_ab = 0.0;    // δω + s_a^i - s_r^i - s_r^j
};

/// Throws ResonanceError if Δ_b == 0.
SecondOrderQuantities second_order(const SystemParams& p);

struct FourthOrderQuantities {
    /// 2|g_br^i|²|g_br^j|²/Δ_b³ - 2|g_br^i|²|g_ar^j|²/(δω Δ_b²), as printed.
    double w_ij = 0.0;
    /// 4 g_br^i g_br^j g_ar^i g_ar^j / Δ_b³, the recipe shorthand W = 4 g_r f⁻³.
    double w_shorthand = 0.0;
    double delta_omega = 0.0;
};

/// Throws ResonanceError if Δ_b == 0 or δω == 0.
FourthOrderQuantities fourth_order(const SystemParams& p);

struct TripletState {
    double energy = 0.0;
    Eigen::Vector3cd state;  // components on {|r r>, |b a>, |a b>}
};

/// Eigenpairs of the resonant DDI block, ascending in energy:
/// ψ⁰ = (|ba> - |ab>)/√2 at 0 and ψ± = |rr>/√2 ± (|ba> + |ab>)/2 at ±√2 d.
std::array<TripletState, 3> triplet(double d);

/// Hermitian 3x3 block on {|rr>, |ba>, |ab>} with exchange d_ba, d_ab and
/// diagonal offsets on |ba>, |ab>.
Eigen::Matrix3cd ddi_block_hamiltonian(double d_ba, double d_ab, double offset_ba, double offset_ab);

struct DdiEffectiveInputs {
    double d_ba = 0.0;
    double d_ab = 0.0;
    double offset_ba = 0.0;
    double offset_ab = 0.0;
    /// Population decay rates of each block state.
    double width_rr = 0.0;
    double width_ba = 0.0;
    double width_ab = 0.0;
};

/// Block inputs from the second-order formulas: |rr> decays at
/// Σ_l (γ_r^l + Γ_r), |ba> at Γ_b + Γ_a + γ_a^j, |ab> at Γ_a + γ_a^i + Γ_b.
DdiEffectiveInputs ddi_inputs(const SystemParams& p);

/// Reduced DDI dynamics, sampled at `times` (strictly increasing, from 0).
/// phi_rr is measured relative to the Stark background, like the full model.
Trajectory ddi_effective_model(const DdiEffectiveInputs& in, const std::vector<double>& times);

/// Single-amplitude VdWI model: p_rr = exp(-decay t), phi_rr = w t.
Trajectory vdw_effective_model(double w, double decay, const std::vector<double>& times);

/// 2(γ_r + Γ_r) for the recipe parameters (atom i values).
double vdw_effective_decay(const SystemParams& p);

/// Regular grid 0, dt, 2dt, ..., t_max (t_max always included).
std::vector<double> uniform_times(double t_max, double dt);

}  // namespace cpwqed
