#include "cpwqed/effective_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "cpwqed/errors.hpp"

namespace cpwqed {

namespace {

void check_times(const std::vector<double>& times) {
    if (times.empty()) throw InvalidArgument("effective model: empty time grid");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw InvalidArgument("effective model: time grid not increasing");
}

}  // namespace

SecondOrderQuantities second_order(const SystemParams& p) {
    if (p.delta_b == 0.0) throw ResonanceError("second_order: Δ_b = 0, perturbative elimination undefined");
    const double db = p.delta_b;
    const std::array<double, 2> g_br{p.g_br_i, p.g_br_j};
    const std::array<double, 2> g_ar{p.g_ar_i, p.g_ar_j};

    SecondOrderQuantities q;
    for (int l = 0; l < 2; ++l) {
        q.s_r[l] = g_br[l] * g_br[l] / db;
        q.s_r_exact[l] = stark_shift_exact(g_br[l], db);
        q.s_a[l] = g_ar[l] * g_ar[l] / db;
        q.gamma_r_induced[l] = p.kappa * g_br[l] * g_br[l] / (db * db);
        q.gamma_a_induced[l] = p.kappa * g_ar[l] * g_ar[l] / (db * db);
    }
    q.d_ba = g_br[0] * g_ar[1] / db;
    q.d_ab = g_ar[0] * g_br[1] / db;
    q.d_ij = q.d_ba;
    q.delta_omega = p.delta_a - p.delta_b;
    q.offset_ba = q.delta_omega + q.s_a[1] - q.s_r[0] - q.s_r[1];
    q.offset_ab = q.delta_omega + q.s_a[0] - q.s_r[0] - q.s_r[1];
    return q;
}

FourthOrderQuantities fourth_order(const SystemParams& p) {
    if (p.delta_b == 0.0) throw ResonanceError("fourth_order: Δ_b = 0");
    const double dw = p.delta_a - p.delta_b;
    if (dw == 0.0) throw ResonanceError("fourth_order: δω = Δ_a - Δ_b = 0 (resonant exchange, use the DDI model)");
    const double db = p.delta_b;
    const double gi2 = p.g_br_i * p.g_br_i;
    FourthOrderQuantities q;
    q.delta_omega = dw;
    q.w_ij = 2.0 * gi2 * p.g_br_j * p.g_br_j / (db * db * db) - 2.0 * gi2 * p.g_ar_j * p.g_ar_j / (dw * db * db);
    q.w_shorthand = 4.0 * p.g_br_i * p.g_br_j * p.g_ar_i * p.g_ar_j / (db * db * db);
    return q;
}

std::array<TripletState, 3> triplet(double d) {
    const double s = std::numbers::sqrt2;
    std::array<TripletState, 3> out;
    out[0].energy = -s * d;
    out[0].state << 1.0 / s, -0.5, -0.5;
    out[1].energy = 0.0;
    out[1].state << 0.0, 1.0 / s, -1.0 / s;
    out[2].energy = s * d;
    out[2].state << 1.0 / s, 0.5, 0.5;
    if (d < 0.0) std::swap(out[0], out[2]);
    return out;
}

Eigen::Matrix3cd ddi_block_hamiltonian(double d_ba, double d_ab, double offset_ba, double offset_ab) {
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(0, 1) = h(1, 0) = d_ba;
    h(0, 2) = h(2, 0) = d_ab;
    h(1, 1) = offset_ba;
    h(2, 2) = offset_ab;
    return h;
}

DdiEffectiveInputs ddi_inputs(const SystemParams& p) {
    const SecondOrderQuantities q = second_order(p);
    DdiEffectiveInputs in;
    in.d_ba = q.d_ba;
    in.d_ab = q.d_ab;
    in.offset_ba = q.offset_ba;
    in.offset_ab = q.offset_ab;
    in.width_rr = q.gamma_r_induced[0] + q.gamma_r_induced[1] + 2.0 * p.gamma_r;
    in.width_ba = p.gamma_b + p.gamma_a + q.gamma_a_induced[1];
    in.width_ab = p.gamma_a + q.gamma_a_induced[0] + p.gamma_b;
    return in;
}

Trajectory ddi_effective_model(const DdiEffectiveInputs& in, const std::vector<double>& times) {
    check_times(times);
    Eigen::Matrix3cd h = ddi_block_hamiltonian(in.d_ba, in.d_ab, in.offset_ba, in.offset_ab);
    // amplitude decay is half the population rate
    h(0, 0) -= Complex(0.0, 0.5 * in.width_rr);
    h(1, 1) -= Complex(0.0, 0.5 * in.width_ba);
    h(2, 2) -= Complex(0.0, 0.5 * in.width_ab);

    Trajectory traj;
    traj.reserve(times.size());
    PhaseUnwrapper unwrap;
    const Eigen::Vector3cd psi0(1.0, 0.0, 0.0);
    for (double t : times) {
        const Eigen::Matrix3cd u = (Complex(0.0, -t) * h).exp();
        const Eigen::Vector3cd psi = u * psi0;
        const double prr = std::norm(psi(0));
        const double pba = std::norm(psi(1));
        const double pab = std::norm(psi(2));
        traj.t.push_back(t);
        traj.p_rr.push_back(prr);
        traj.p_ba.push_back(pba);
        traj.p_ab.push_back(pab);
        traj.phi_rr.push_back(unwrap(-std::arg(psi(0))));
        traj.trace.push_back(1.0);
        traj.sink_pop.push_back(1.0 - prr - pba - pab);
        traj.purity.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    return traj;
}

Trajectory vdw_effective_model(double w, double decay, const std::vector<double>& times) {
    check_times(times);
    if (decay < 0.0) throw InvalidArgument("vdw_effective_model: decay must be >= 0");
    Trajectory traj;
    traj.reserve(times.size());
    for (double t : times) {
        const double prr = std::exp(-decay * t);
        traj.t.push_back(t);
        traj.p_rr.push_back(prr);
        traj.p_ba.push_back(0.0);
        traj.p_ab.push_back(0.0);
        traj.phi_rr.push_back(w * t);
        traj.trace.push_back(1.0);
        traj.sink_pop.push_back(1.0 - prr);
        traj.purity.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    return traj;
}

double vdw_effective_decay(const SystemParams& p) {
    const SecondOrderQuantities q = second_order(p);
    return 2.0 * (q.gamma_r_induced[0] + p.gamma_r);
}

std::vector<double> uniform_times(double t_max, double dt) {
    if (!(t_max > 0.0) || !(dt > 0.0)) throw InvalidArgument("uniform_times: t_max and dt must be > 0");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor(t_max / dt));
    for (std::size_t k = 0; k <= n; ++k) out.push_back(dt * static_cast<double>(k));
    if (t_max - out.back() > 1e-12 * t_max) out.push_back(t_max);
    else out.back() = t_max;
    return out;
}

}  // namespace cpwqed
