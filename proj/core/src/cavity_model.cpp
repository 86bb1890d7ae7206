#include "cpwqed/cavity_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cpwqed/errors.hpp"

namespace cpwqed {

namespace {

void require_rate(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0)
        throw InvalidArgument(std::string("SystemParams: ") + name + " must be finite and >= 0");
}

}  // namespace

void SystemParams::validate() const {
    require_rate(g_br_i, "g_br_i");
    require_rate(g_ar_i, "g_ar_i");
    require_rate(g_br_j, "g_br_j");
    require_rate(g_ar_j, "g_ar_j");
    require_rate(kappa, "kappa");
    require_rate(gamma_r, "gamma_r");
    require_rate(gamma_a, "gamma_a");
    require_rate(gamma_b, "gamma_b");
    if (!std::isfinite(delta_a) || !std::isfinite(delta_b))
        throw InvalidArgument("SystemParams: detunings must be finite");
    if (n_max < 2) throw InvalidArgument("SystemParams: n_max must be >= 2 (|b b 2_c> must fit)");
}

SystemParams SystemParams::swapped() const {
    SystemParams s = *this;
    std::swap(s.g_br_i, s.g_br_j);
    std::swap(s.g_ar_i, s.g_ar_j);
    return s;
}

std::string_view to_string(RegimeKind kind) { return kind == RegimeKind::Ddi ? "ddi" : "vdw"; }

RegimeKind parse_regime_kind(std::string_view text) {
    if (text == "ddi" || text == "DDI") return RegimeKind::Ddi;
    if (text == "vdw" || text == "vdwi" || text == "VdW" || text == "VdWI") return RegimeKind::Vdw;
    throw InvalidArgument("unknown regime kind '" + std::string(text) + "' (expected ddi or vdw)");
}

void RegimeRecipe::validate() const {
    if (!std::isfinite(f) || f <= 1.0) throw InvalidArgument("RegimeRecipe: f must be > 1");
}

SystemParams apply_recipe(const RegimeRecipe& recipe) { return apply_recipe(recipe, Decays{}); }

SystemParams apply_recipe(const RegimeRecipe& recipe, const Decays& decays, int n_max) {
    recipe.validate();
    SystemParams p;
    p.delta_b = recipe.f;
    // DDI: δω = Δ_a - Δ_b = 1/f = s_r makes |rr> <-> |ba>,|ab> resonant once the
    // Stark shifts (s_a - 2 s_r = -1/f) are included.
    p.delta_a = recipe.kind == RegimeKind::Ddi ? recipe.f + 1.0 / recipe.f : recipe.f - 1.0;
    p.kappa = decays.kappa;
    p.gamma_r = decays.gamma_r;
    p.gamma_a = decays.gamma_a;
    p.gamma_b = decays.gamma_b;
    p.n_max = n_max;
    p.validate();
    return p;
}

Operator build_hamiltonian(const SystemParams& p) {
    p.validate();
    const BasisSpec basis = p.basis();
    const Matrix id = atom_identity(basis);
    const Matrix idc = cavity_identity(p.n_max);
    const Matrix c = cavity_annihilation(p.n_max);
    const Matrix cdag = c.adjoint();

    const Matrix s_aa = atom_transition(basis, level::a, level::a);
    const Matrix s_bb = atom_transition(basis, level::b, level::b);
    const Matrix s_br = atom_transition(basis, level::b, level::r);
    const Matrix s_ar = atom_transition(basis, level::a, level::r);

    Operator h = Operator::zero(basis);
    const double g_br[2] = {p.g_br_i, p.g_br_j};
    const double g_ar[2] = {p.g_ar_i, p.g_ar_j};
    for (int atom = 0; atom < 2; ++atom) {
        const Matrix local = p.delta_a * s_aa - p.delta_b * s_bb;
        const Matrix emit_b = g_br[atom] * s_br;    // r -> b, photon created
        const Matrix absorb_a = g_ar[atom] * s_ar;  // r -> a, photon absorbed
        Operator coupling = atom == 0 ? kron3(basis, emit_b, id, cdag) + kron3(basis, absorb_a, id, c)
                                      : kron3(basis, id, emit_b, cdag) + kron3(basis, id, absorb_a, c);
        h += atom == 0 ? kron3(basis, local, id, idc) : kron3(basis, id, local, idc);
        h += coupling;
        h += coupling.adjoint();
    }
    return h;
}

std::vector<Operator> collapse_operators(const SystemParams& p) {
    p.validate();
    const BasisSpec basis = p.basis();
    std::vector<Operator> ops;
    if (p.kappa > 0.0)
        ops.push_back(kron3(basis, atom_identity(basis), atom_identity(basis),
                            std::sqrt(p.kappa) * cavity_annihilation(p.n_max)));
    const std::pair<int, double> channels[] = {
        {level::r, p.gamma_r}, {level::a, p.gamma_a}, {level::b, p.gamma_b}};
    for (const auto& [lvl, rate] : channels) {
        if (rate <= 0.0) continue;
        const Matrix jump = std::sqrt(rate) * atom_transition(basis, level::sink, lvl);
        ops.push_back(on_atom(basis, 0, jump));
        ops.push_back(on_atom(basis, 1, jump));
    }
    return ops;
}

double stark_shift_exact(double g_br, double delta_b) {
    const double root = std::sqrt(delta_b * delta_b + 4.0 * g_br * g_br);
    const double sign = delta_b < 0.0 ? -1.0 : 1.0;
    return 0.5 * (-delta_b + sign * root);
}

double interaction_shift_spectral(const SystemParams& p) {
    const Operator h = build_hamiltonian(p);
    const BasisSpec basis = p.basis();
    const int rr0 = basis.index(level::r, level::r, 0);
    const EigenSystem es = eig_hermitian(h);
    Eigen::Index best = 0;
    es.vectors.row(rr0).cwiseAbs2().maxCoeff(&best);
    return es.values(best) - stark_shift_exact(p.g_br_i, p.delta_b) - stark_shift_exact(p.g_br_j, p.delta_b);
}

std::string_view to_string(RegimeQuality q) {
    switch (q) {
        case RegimeQuality::Good: return "good";
        case RegimeQuality::Marginal: return "marginal";
        case RegimeQuality::Poor: return "poor";
    }
    return "poor";
}

double strong_coupling_f_max(double g_r, double kappa, double gamma_r) {
    const double inf = std::numeric_limits<double>::infinity();
    const double by_decay = gamma_r > 0.0 ? std::cbrt(g_r / gamma_r) : inf;
    const double by_cavity = kappa > 0.0 ? g_r / kappa : inf;
    return std::min(by_decay, by_cavity);
}

RegimeReport validate_regime(const SystemParams& p) {
    RegimeReport r;
    const double g = std::max({p.g_br_i, p.g_ar_i, p.g_br_j, p.g_ar_j});
    const double detuning = std::min(std::abs(p.delta_a), std::abs(p.delta_b));
    const double inf = std::numeric_limits<double>::infinity();
    r.f = g > 0.0 ? detuning / g : inf;
    const double scale = std::max(g, p.kappa);
    r.detuning_ratio = scale > 0.0 ? detuning / scale : inf;
    r.quality = r.detuning_ratio >= 10.0  ? RegimeQuality::Good
                : r.detuning_ratio >= 5.0 ? RegimeQuality::Marginal
                                          : RegimeQuality::Poor;
    r.decay_condition = g > p.gamma_r * r.f * r.f * r.f;
    r.cavity_condition = g > p.kappa * r.f;
    r.f_max = strong_coupling_f_max(g, p.kappa, p.gamma_r);
    return r;
}

Trajectory run_full_model(const SystemParams& p, const IntegratorOpts& opts, InitialState initial) {
    const BasisSpec basis = p.basis();
    const Operator h = build_hamiltonian(p);
    const LindbladGenerator gen(h, collapse_operators(p));

    const int rr0 = basis.index(level::r, level::r, 0);
    const int ss0 = basis.index(level::sink, level::sink, 0);
    Vector ket = Vector::Zero(basis.dim());
    ket(rr0) = 1.0;
    const bool reference = initial == InitialState::PhaseReference;
    if (reference) ket(ss0) = 1.0;
    const DensityMatrix rho0 = DensityMatrix::pure(basis, ket);

    const Operator proj_rr = pair_projector(basis, level::r, level::r);
    const Operator proj_ba = pair_projector(basis, level::b, level::a);
    const Operator proj_ab = pair_projector(basis, level::a, level::b);
    const Operator proj_sink = any_atom_projector(basis, level::sink);
    const double weight = reference ? 2.0 : 1.0;

    Trajectory traj;
    traj.phase_background = stark_shift_exact(p.g_br_i, p.delta_b) + stark_shift_exact(p.g_br_j, p.delta_b);
    PhaseUnwrapper unwrap;
    traj.stats = evolve(rho0, gen, opts, [&](double t, const DensityMatrix& rho) {
        traj.t.push_back(t);
        traj.p_rr.push_back(weight * rho.expectation(proj_rr).real());
        traj.p_ba.push_back(weight * rho.expectation(proj_ba).real());
        traj.p_ab.push_back(weight * rho.expectation(proj_ab).real());
        const double sink = rho.expectation(proj_sink).real();
        traj.sink_pop.push_back(reference ? weight * sink - 1.0 : sink);
        traj.trace.push_back(rho.trace().real());
        traj.purity.push_back(rho.purity());
        if (reference) {
            // rho_{rr0, ss0} ~ exp(-i E t): accumulated phase is -arg. Unwrap after
            // removing the fast Stark rotation so coarse sampling does not alias.
            traj.phi_rr.push_back(unwrap(-std::arg(rho.element(rr0, ss0)) - traj.phase_background * t));
        } else {
            traj.phi_rr.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    });
    return traj;
}

double regime_window(const RegimeRecipe& recipe) {
    recipe.validate();
    if (recipe.kind == RegimeKind::Ddi) {
        const double d = 1.0 / recipe.f;
        return 3.0 * std::numbers::pi / (std::numbers::sqrt2 * d);
    }
    return std::numbers::pi / interaction_shift_spectral(apply_recipe(recipe));
}

double regime_sample_interval(const RegimeRecipe& recipe) {
    // resolve the fast 2Δ_b wiggles in the populations
    const double fast_period = 2.0 * std::numbers::pi / (2.0 * recipe.f);
    return recipe.kind == RegimeKind::Ddi ? fast_period / 16.0 : fast_period / 4.0;
}

Trajectory run_regime_window(const RegimeRecipe& recipe, const Decays& decays, const IntegratorOpts& opts,
                             int n_max) {
    IntegratorOpts o = opts;
    if (o.t_max <= 0.0) o.t_max = regime_window(recipe);
    if (o.sample_interval <= 0.0) o.sample_interval = regime_sample_interval(recipe);
    return run_full_model(apply_recipe(recipe, decays, n_max), o, InitialState::PhaseReference);
}

}  // namespace cpwqed
