#include "cpwqed/device_params.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cpwqed/errors.hpp"

namespace cpwqed {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_positive(double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0)
        throw InvalidArgument(std::string("DeviceParams: ") + name + " must be finite and > 0");
}

}  // namespace

std::string_view to_string(RateConvention c) { return c == RateConvention::Angular ? "angular" : "ordinary"; }

RateConvention parse_rate_convention(std::string_view text) {
    if (text == "angular") return RateConvention::Angular;
    if (text == "ordinary") return RateConvention::Ordinary;
    throw InvalidArgument("unknown rate convention '" + std::string(text) + "' (expected angular or ordinary)");
}

double Rate::angular() const { return convention == RateConvention::Angular ? value : kTwoPi * value; }

double Rate::alternative() const { return convention == RateConvention::Angular ? kTwoPi * value : value; }

void DeviceParams::validate() const {
    require_positive(L, "L");
    require_positive(d, "d");
    require_positive(eps_r, "eps_r");
    require_positive(Q, "Q");
    if (m < 1) throw InvalidArgument("DeviceParams: mode index m must be >= 1");
    if (n_principal < 1) throw InvalidArgument("DeviceParams: n_principal must be >= 1");
    if (!std::isfinite(gamma_r.value) || gamma_r.value < 0.0)
        throw InvalidArgument("DeviceParams: gamma_r must be finite and >= 0");
    if (g_r_override) require_positive(*g_r_override, "g_r");
}

DerivedDevice derive(const DeviceParams& dev) {
    dev.validate();
    DerivedDevice out;
    out.lambda_c = 2.0 * dev.L / dev.m;
    out.omega_c = kTwoPi * phys::c / (out.lambda_c * std::sqrt(dev.eps_r));
    out.V_c = kTwoPi * dev.d * dev.d * dev.L;
    out.eps_c = std::sqrt(phys::hbar * out.omega_c / (phys::eps0 * out.V_c));
    out.dipole = rydberg_dipole(dev.n_principal);
    out.g_estimate = out.dipole * out.eps_c / phys::hbar;
    out.g_r = dev.g_r_override.value_or(out.g_estimate);
    out.kappa = out.omega_c / dev.Q;
    out.gamma_r = dev.gamma_r.angular();
    out.gamma_r_alternative = dev.gamma_r.alternative();
    out.f_max = strong_coupling_f_max(out.g_r, out.kappa, out.gamma_r);
    out.f_max_alternative = strong_coupling_f_max(out.g_r, out.kappa, out.gamma_r_alternative);
    return out;
}

double mode_function(double z, double L, int m) {
    if (!(L > 0.0) || m < 1) throw InvalidArgument("mode_function: need L > 0 and m >= 1");
    const double half = 0.5 * L;
    if (!(std::abs(z) <= half * (1.0 + 1e-12)))
        throw InvalidArgument("mode_function: z outside [-L/2, L/2]");
    const double arg = m * std::numbers::pi * z / L;
    return m % 2 == 1 ? std::sin(arg) : std::cos(arg);
}

std::vector<double> antinode_positions(double L, int m) {
    if (!(L > 0.0) || m < 1) throw InvalidArgument("antinode_positions: need L > 0 and m >= 1");
    // odd m: z = (k + 1/2) L/m; even m: z = k L/m; both give m + 1 points
    std::vector<double> out;
    const double offset = m % 2 == 1 ? 0.5 : 0.0;
    const int k_lo = static_cast<int>(std::ceil(-0.5 * m - offset - 1e-9));
    for (int k = k_lo; out.size() < static_cast<std::size_t>(m + 1); ++k)
        out.push_back((k + offset) * L / m);
    return out;
}

double rydberg_dipole(int n_principal) {
    if (n_principal < 1) throw InvalidArgument("rydberg_dipole: n must be >= 1");
    const double n = n_principal;
    return n * n * phys::a0 * phys::e;
}

double direct_ddi(double dipole_rb, double dipole_ra, double r) {
    if (!(r > 0.0)) throw InvalidArgument("direct_ddi: separation must be > 0");
    return dipole_rb * dipole_ra / (4.0 * std::numbers::pi * phys::eps0 * phys::hbar * r * r * r);
}

double ddi_crossover(double dipole_rb, double dipole_ra, double d_cavity) {
    if (!(d_cavity > 0.0)) throw InvalidArgument("ddi_crossover: cavity DDI rate must be > 0");
    return std::cbrt(dipole_rb * dipole_ra / (4.0 * std::numbers::pi * phys::eps0 * phys::hbar * d_cavity));
}

ScaledSystem to_system_params(const DerivedDevice& dev, const RegimeRecipe& recipe, int n_max) {
    if (!(dev.g_r > 0.0)) throw InvalidArgument("to_system_params: g_r must be > 0");
    const double gamma = dev.gamma_r / dev.g_r;
    const Decays decays{dev.kappa / dev.g_r, gamma, gamma, gamma};
    return {apply_recipe(recipe, decays, n_max), dev.g_r};
}

Report device_report(const DeviceParams& dev, const DerivedDevice& out) {
    Report r;
    r.add("device.L", dev.L);
    r.add("device.d", dev.d);
    r.add("device.eps_r", dev.eps_r);
    r.add("device.m", dev.m);
    r.add("device.Q", dev.Q);
    r.add("device.n_principal", dev.n_principal);
    r.add("device.gamma_r", dev.gamma_r.value);
    r.add("device.gamma_r_convention", std::string(to_string(dev.gamma_r.convention)));
    r.add("lambda_c", out.lambda_c);
    r.add("omega_c", out.omega_c);
    r.add("omega_c_over_2pi", out.omega_c / kTwoPi);
    r.add("V_c", out.V_c);
    r.add("eps_c", out.eps_c);
    r.add("dipole", out.dipole);
    r.add("g_estimate", out.g_estimate);
    r.add("g_estimate_over_2pi", out.g_estimate / kTwoPi);
    r.add("g_r", out.g_r);
    r.add("g_r_source", dev.g_r_override ? "override" : "estimate");
    r.add("kappa", out.kappa);
    r.add("kappa_over_2pi", out.kappa / kTwoPi);
    r.add("kappa_over_g_r", out.kappa / out.g_r);
    r.add("gamma_r_rate", out.gamma_r);
    r.add("gamma_r_rate_alternative", out.gamma_r_alternative);
    r.add("gamma_r_over_g_r", out.gamma_r / out.g_r);
    r.add("gamma_r_over_g_r_alternative", out.gamma_r_alternative / out.g_r);
    r.add("f_max", out.f_max);
    r.add("f_max_alternative", out.f_max_alternative);
    return r;
}

}  // namespace cpwqed
