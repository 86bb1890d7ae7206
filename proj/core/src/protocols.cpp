#include "cpwqed/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "cpwqed/effective_models.hpp"
#include "cpwqed/errors.hpp"

namespace cpwqed {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
    if (!std::isfinite(v) || v <= 0.0) throw InvalidArgument(std::string(what) + " must be finite and > 0");
}

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

struct BranchOutcome {
    double amplitude = 0.0;  // 2|rho(x, ss0)| at the final time
    double phase = 0.0;      // unwrapped -arg rho(x, ss0) minus the Stark background
    double p_pair = 0.0;     // population of the initial pair state (x2)
    double max_p_rr = 0.0;   // largest |r r> population seen
};

// (|sink sink 0> + |x>)/√2, tracking the coherence of |x> against the
// decoupled reference. The sink level doubles as the non-Rydberg state.
BranchOutcome run_branch(const SystemParams& p, const IntegratorOpts& opts, int level_i, int level_j) {
    const BasisSpec basis = p.basis();
    const LindbladGenerator gen(build_hamiltonian(p), collapse_operators(p));
    const int x = basis.index(level_i, level_j, 0);
    const int ref = basis.index(level::sink, level::sink, 0);
    Vector ket = Vector::Zero(basis.dim());
    ket(x) = 1.0;
    ket(ref) = 1.0;
    const Operator proj_rr = pair_projector(basis, level::r, level::r);
    const Operator proj_x = pair_projector(basis, level_i, level_j);

    BranchOutcome out;
    // backgrounds cancel in φ11 - φ10 - φ01; removing them keeps unwrapping safe
    const double background = (level_i == level::r ? stark_shift_exact(p.g_br_i, p.delta_b) : 0.0) +
                              (level_j == level::r ? stark_shift_exact(p.g_br_j, p.delta_b) : 0.0);
    PhaseUnwrapper unwrap;
    evolve(DensityMatrix::pure(basis, ket), gen, opts, [&](double t, const DensityMatrix& rho) {
        const Complex coh = rho.element(x, ref);
        out.amplitude = 2.0 * std::abs(coh);
        out.phase = unwrap(-std::arg(coh) - background * t);
        out.p_pair = 2.0 * rho.expectation(proj_x).real();
        out.max_p_rr = std::max(out.max_p_rr, 2.0 * rho.expectation(proj_rr).real());
    });
    return out;
}

double diagonal_gate_fidelity(double a10, double a01, double a11, double phi_c) {
    // U = diag(1, a10, a01, a11 e^{iφ}) against diag(1, 1, 1, -1)
    const Complex tr = 1.0 + a10 + a01 + a11 * std::polar(1.0, phi_c - kPi);
    return std::norm(tr) / 16.0;
}

}  // namespace

void EnsembleParams::validate() const {
    require_positive(N, "EnsembleParams.N");
    require_positive(rho0, "EnsembleParams.rho0");
    require_positive(L_a, "EnsembleParams.L_a");
    require_positive(sigma0, "EnsembleParams.sigma0");
    require_positive(gamma_ge.value, "EnsembleParams.gamma_ge");
    require_positive(V_a, "EnsembleParams.V_a");
}

double optical_depth(const EnsembleParams& ens) { return 2.0 * ens.sigma0 * ens.rho0 * ens.L_a; }

BlockadeBudget blockade_budget(double N, double omega_gr, double D, double decay, double omega_sr) {
    if (!(N >= 2.0)) throw InvalidArgument("blockade_budget: N must be >= 2");
    require_positive(D, "blockade_budget: D");
    require_positive(omega_gr, "blockade_budget: omega_gr");
    require_positive(omega_sr, "blockade_budget: omega_sr");
    if (!(decay >= 0.0)) throw InvalidArgument("blockade_budget: decay must be >= 0");

    BlockadeBudget b;
    b.N = N;
    b.omega_gr = omega_gr;
    b.T1 = kPi / (2.0 * std::sqrt(N) * omega_gr);
    b.T2 = kPi / (2.0 * omega_sr);
    const double p_double = N * omega_gr * omega_gr / (2.0 * D * D);
    const double p_decay = decay * b.T1;
    b.p_double = clip01(p_double);
    b.p_decay = clip01(p_decay);
    b.p_total_raw = p_double + p_decay;
    b.fidelity = clip01(1.0 - b.p_double - b.p_decay);
    b.blockade_ok = omega_gr < D;
    return b;
}

BlockadeBudget blockade_budget(const BlockadeInputs& in, double omega_gr) {
    return blockade_budget(in.N, omega_gr, in.D, in.decay, in.omega_sr);
}

OptimalOmega optimal_omega(double N, double D, double decay) {
    if (!(N >= 2.0)) throw InvalidArgument("optimal_omega: N must be >= 2");
    require_positive(D, "optimal_omega: D");
    require_positive(decay, "optimal_omega: decay");
    OptimalOmega o;
    o.omega = std::cbrt(kPi * decay * D * D / (2.0 * std::pow(N, 1.5)));
    o.total_error = N * o.omega * o.omega / (2.0 * D * D) + decay * kPi / (2.0 * std::sqrt(N) * o.omega);
    return o;
}

BlockadeBudget two_ensemble_entanglement(double N_A, double N_B, double omega_gr, double D, double decay,
                                         double omega_sr) {
    if (N_A != N_B) throw InvalidArgument("two_ensemble_entanglement: unequal ensembles are not supported");
    return blockade_budget(N_A + N_B, omega_gr, D, decay, omega_sr);
}

CphaseResult ensemble_cphase(const RegimeRecipe& recipe, const Decays& decays, const IntegratorOpts& opts,
                             std::optional<double> g_r) {
    if (recipe.kind != RegimeKind::Vdw) throw InvalidArgument("ensemble_cphase: needs the VdWI recipe");
    const SystemParams p = apply_recipe(recipe, decays);

    CphaseResult r;
    r.recipe = recipe;
    r.w_spectral = interaction_shift_spectral(p);
    const FourthOrderQuantities q4 = fourth_order(p);
    r.w_formula = q4.w_ij;
    r.w_shorthand = q4.w_shorthand;
    r.t_pi = kPi / r.w_spectral;
    if (g_r) r.seconds_per_unit = 1.0 / *g_r;

    IntegratorOpts o = opts;
    o.t_max = r.t_pi;
    if (o.sample_interval <= 0.0) o.sample_interval = regime_sample_interval(recipe);

    const Trajectory full = run_full_model(p, o);
    r.p_rr = full.p_rr.back();
    r.phi_rr = full.phi_rr.back();

    const BranchOutcome b11 = run_branch(p, o, level::r, level::r);
    const BranchOutcome b10 = run_branch(p, o, level::r, level::sink);
    const BranchOutcome b01 = run_branch(p, o, level::sink, level::r);
    r.amp_11 = b11.amplitude;
    r.amp_10 = b10.amplitude;
    r.amp_01 = b01.amplitude;
    r.max_p_rr_single_branches = std::max(b10.max_p_rr, b01.max_p_rr);
    r.phi_conditional = b11.phase - b10.phase - b01.phase;
    r.phase_error = std::abs(r.phi_conditional - kPi);
    r.process_fidelity = diagonal_gate_fidelity(r.amp_10, r.amp_01, r.amp_11, r.phi_conditional);

    const double decay_rr = vdw_effective_decay(p);
    r.p_rr_analytic = std::exp(-decay_rr * r.t_pi);
    const double a1 = std::exp(-0.25 * decay_rr * r.t_pi);  // one atom: half the pair rate, amplitude ^1/2
    r.process_fidelity_analytic = diagonal_gate_fidelity(a1, a1, std::sqrt(r.p_rr_analytic), kPi);
    return r;
}

Report cphase_report(const CphaseResult& r) {
    Report rep;
    rep.add("regime.kind", std::string(to_string(r.recipe.kind)));
    rep.add("regime.f", r.recipe.f);
    rep.add("w_spectral", r.w_spectral);
    rep.add("w_formula", r.w_formula);
    rep.add("w_shorthand", r.w_shorthand);
    rep.add("t_pi", r.t_pi);
    if (r.seconds_per_unit) rep.add("t_pi_seconds", r.t_pi * *r.seconds_per_unit);
    rep.add("p_rr", r.p_rr);
    rep.add("phi_rr", r.phi_rr);
    rep.add("phi_conditional", r.phi_conditional);
    rep.add("phase_error", r.phase_error);
    rep.add("amp_10", r.amp_10);
    rep.add("amp_01", r.amp_01);
    rep.add("amp_11", r.amp_11);
    rep.add("max_p_rr_single_branches", r.max_p_rr_single_branches);
    rep.add("process_fidelity", r.process_fidelity);
    rep.add("p_rr_analytic", r.p_rr_analytic);
    rep.add("process_fidelity_analytic", r.process_fidelity_analytic);
    return rep;
}

double dipole_from_cross_section(double sigma0, double omega, double gamma_ge) {
    require_positive(sigma0, "sigma0");
    require_positive(omega, "probe omega");
    require_positive(gamma_ge, "gamma_ge");
    return std::sqrt(2.0 * phys::eps0 * phys::hbar * phys::c * gamma_ge * sigma0 / omega);
}

PolaritonState polariton(const EnsembleParams& ens, double omega_d, const ProbeTransition& probe) {
    ens.validate();
    require_positive(omega_d, "polariton: Omega_d");
    const double gamma = ens.gamma_ge.angular();
    const double dipole =
        probe.dipole > 0.0 ? probe.dipole : dipole_from_cross_section(ens.sigma0, probe.omega, gamma);

    PolaritonState s;
    s.omega_d = omega_d;
    s.g_ge = dipole * std::sqrt(probe.omega / (2.0 * phys::hbar * phys::eps0 * ens.V_a));
    s.theta = std::atan2(s.g_ge * std::sqrt(ens.N), omega_d);
    const double cos_t = std::cos(s.theta);
    s.compression = cos_t * cos_t;
    s.v_g = phys::c * s.compression;
    s.v_g_density = omega_d * omega_d / (ens.sigma0 * ens.rho0 * gamma);
    return s;
}

double photonic_cphase(const EnsembleParams& ens, const PolaritonState& pol, double W, GroupVelocityForm form) {
    if (!(W >= 0.0) || !std::isfinite(W)) throw InvalidArgument("photonic_cphase: W must be finite and >= 0");
    if (W == 0.0) return 0.0;
    const double v = form == GroupVelocityForm::Density ? pol.v_g_density : pol.v_g;
    require_positive(v, "photonic_cphase: group velocity");
    const double s = std::sin(pol.theta);
    return s * s * s * s * W * ens.L_a / v;
}

double solve_drive_for_phase(const EnsembleParams& ens, double W, double target, const ProbeTransition& probe,
                             GroupVelocityForm form) {
    require_positive(target, "solve_drive_for_phase: target phase");
    // φ falls monotonically with Ω_d; solve in log Ω_d for a well-scaled bracket
    auto residual = [&](double log_omega) {
        return photonic_cphase(ens, polariton(ens, std::exp(log_omega), probe), W, form) - target;
    };
    double lo = std::log(2.0 * kPi * 1.0);
    double hi = std::log(2.0 * kPi * 1e12);
    const double f_lo = residual(lo);
    const double f_hi = residual(hi);
    if (!(f_lo > 0.0 && f_hi < 0.0))
        throw NumericError("solve_drive_for_phase: target phase not bracketed by Omega_d in [2π·1 Hz, 2π·1 THz]");
    std::uintmax_t max_iter = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(residual, lo, hi, f_lo, f_hi,
                                                          boost::math::tools::eps_tolerance<double>(48), max_iter);
    return std::exp(0.5 * (a + b));
}

}  // namespace cpwqed
