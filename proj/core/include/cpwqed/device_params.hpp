#pragma once

// SI pipeline: coplanar-waveguide geometry and Rydberg constants -> the
// dimensionless SystemParams used by the dynamics. Angular frequencies are
// rad/s throughout.

#include <optional>
#include <string_view>
#include <vector>

#include "cpwqed/cavity_model.hpp"
#include "cpwqed/report.hpp"

namespace cpwqed {

namespace phys {
inline constexpr double c = 299792458.0;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double eps0 = 8.8541878128e-12;
inline constexpr double e = 1.602176634e-19;
inline constexpr double a0 = 5.29177210903e-11;
}  // namespace phys

/// How a bare rate such as "1 kHz" is read: already an angular rate in s⁻¹,
/// or an ordinary frequency that gets multiplied by 2π.
enum class RateConvention { Angular, Ordinary };

std::string_view to_string(RateConvention c);
RateConvention parse_rate_convention(std::string_view text);

struct Rate {
    double value = 0.0;
    RateConvention convention = RateConvention::Angular;

    /// Value in s⁻¹ (rad/s).
    double angular() const;
    /// The value under the other convention, for side-by-side reporting.
    double alternative() const;
};

struct DeviceParams {
    double L = 1e-2;        // strip-line length
    double d = 15e-6;       // electrode distance
    double eps_r = 6.0;     // effective dielectric constant
    int m = 5;              // mode index
    double Q = 1e6;
    int n_principal = 50;
    Rate gamma_r{1e3, RateConvention::Angular};  // "Γ_μ ≲ 1 kHz", applied to r, a and b
    /// Use this g_r (rad/s) instead of the ℘ε_c/ħ estimate.
    std::optional<double> g_r_override;

    void validate() const;
};

struct DerivedDevice {
    double lambda_c = 0.0;   // 2L/m
    double omega_c = 0.0;    // 2πc/(λ_c √ε_r)
    double V_c = 0.0;        // 2π d² L
    double eps_c = 0.0;      // √(ħω_c/(ε₀V_c)), field per photon
    double dipole = 0.0;     // n² a₀ e
    double g_estimate = 0.0; // ℘ ε_c / ħ
    double g_r = 0.0;        // override if given, otherwise g_estimate
    double kappa = 0.0;      // ω_c / Q
    double gamma_r = 0.0;    // s⁻¹ under the selected convention
    double gamma_r_alternative = 0.0;
    double f_max = 0.0;      // min(∛(g_r/Γ_r), g_r/κ)
    double f_max_alternative = 0.0;  // with the other Γ_r reading
};

DerivedDevice derive(const DeviceParams& dev);

/// Standing-wave profile: sin(mπz/L) for odd m, cos(mπz/L) for even m,
/// z in [-L/2, L/2] (InvalidArgument otherwise).
double mode_function(double z, double L, int m);

/// Positions of |u| = 1 in [-L/2, L/2]; there are m + 1 of them, spaced L/m = λ_c/2.
std::vector<double> antinode_positions(double L, int m);

/// ℘ ≈ n² a₀ e (C·m).
double rydberg_dipole(int n_principal);

/// D̄ = ℘_rb ℘_ra / (4π ε₀ ħ r³), rad/s.
double direct_ddi(double dipole_rb, double dipole_ra, double r);

/// Separation at which the direct DDI equals `d_cavity` (rad/s).
double ddi_crossover(double dipole_rb, double dipole_ra, double d_cavity);

struct ScaledSystem {
    SystemParams params;
    double g_r = 0.0;  // rad/s; one dimensionless time unit is 1/g_r seconds

    double seconds_per_unit() const { return 1.0 / g_r; }
};

/// κ/g_r, Γ/g_r (same Γ for r, a, b) and the recipe detunings.
ScaledSystem to_system_params(const DerivedDevice& dev, const RegimeRecipe& recipe, int n_max = 2);

/// Flat report of inputs and derived numbers, both Γ readings included.
Report device_report(const DeviceParams& dev, const DerivedDevice& derived);

}  // namespace cpwqed
