#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cpwqed/effective_models.hpp"
#include "cpwqed/errors.hpp"
#include "oracles.hpp"

using namespace cpwqed;

TEST(SecondOrder, RecipeValuesAtF10) {
    SystemParams p = apply_recipe({RegimeKind::Vdw, 10.0});
    p.kappa = 3e-3;
    const auto q = second_order(p);
    EXPECT_NEAR(q.s_r[0], 0.1, 1e-15);
    EXPECT_NEAR(q.gamma_r_induced[0], 3e-3 / 100.0, 1e-18);
    EXPECT_NEAR(q.d_ij, 0.1, 1e-15);
    EXPECT_NEAR(q.delta_omega, -1.0, 1e-15);
}

TEST(SecondOrder, ExactShiftConvergesToPerturbative) {
    for (double db : {5.0, 10.0, 20.0, 40.0}) {
        SystemParams p;
        p.delta_b = db;
        const auto q = second_order(p);
        const double ratio = 1.0 / db;
        EXPECT_LE(std::abs(q.s_r[0] - q.s_r_exact[0]) / q.s_r_exact[0], 2.0 * ratio * ratio);
    }
}

TEST(SecondOrder, DdiOffsetsResonateWithRecipe) {
    const auto q = second_order(apply_recipe({RegimeKind::Ddi, 10.0}));
    EXPECT_NEAR(q.offset_ba, 0.0, 1e-15);
    EXPECT_NEAR(q.offset_ab, 0.0, 1e-15);
}

TEST(SecondOrder, ZeroDetuningRejected) {
    SystemParams p;
    p.delta_b = 0.0;
    EXPECT_THROW(second_order(p), ResonanceError);
    EXPECT_THROW(fourth_order(p), ResonanceError);
    p.delta_b = 5.0;
    p.delta_a = 5.0;
    EXPECT_THROW(fourth_order(p), ResonanceError);
}

TEST(FourthOrder, VerbatimAndShorthand) {
    SystemParams p;
    p.delta_b = 10.0;
    p.delta_a = 9.0;
    const auto q = fourth_order(p);
    EXPECT_NEAR(q.w_ij, 0.022, 1e-15);
    EXPECT_NEAR(q.w_shorthand, 0.004, 1e-15);
}

TEST(FourthOrder, ZeroCouplingGivesZero) {
    SystemParams p = apply_recipe({RegimeKind::Vdw, 10.0});
    p.g_br_i = 0.0;
    EXPECT_EQ(second_order(p).d_ij, 0.0);
    EXPECT_EQ(fourth_order(p).w_ij, 0.0);
    EXPECT_EQ(fourth_order(p).w_shorthand, 0.0);
}

TEST(Triplet, EnergiesOrthonormalityAndAntisymmetry) {
    for (double d : {1.0, 0.37, -2.0}) {
        const auto tr = triplet(d);
        EXPECT_NEAR(tr[0].energy, -std::numbers::sqrt2 * std::abs(d), 1e-15);
        EXPECT_EQ(tr[1].energy, 0.0);
        EXPECT_NEAR(tr[2].energy, std::numbers::sqrt2 * std::abs(d), 1e-15);
        EXPECT_EQ(tr[1].state(0), Complex(0.0));
        Eigen::Matrix3cd v;
        for (int k = 0; k < 3; ++k) v.col(k) = tr[k].state;
        EXPECT_LE((v.adjoint() * v - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff(), 1e-12);
        const Eigen::Matrix3cd h = ddi_block_hamiltonian(d, d, 0.0, 0.0);
        for (int k = 0; k < 3; ++k)
            EXPECT_LE((h * tr[k].state - tr[k].energy * tr[k].state).norm(), 1e-12);
    }
}

TEST(Triplet, AgreesWithNumericDiagonalisation) {
    const auto tr = triplet(1.0);
    const auto es = eig_hermitian(Matrix(ddi_block_hamiltonian(1.0, 1.0, 0.0, 0.0)));
    for (int k = 0; k < 3; ++k) {
        EXPECT_NEAR(es.values(k), tr[k].energy, 1e-12 * std::numbers::sqrt2);
        // eigenvectors agree up to a global phase
        const Complex overlap = es.vectors.col(k).dot(Vector(tr[k].state));
        EXPECT_NEAR(std::abs(overlap), 1.0, 1e-12);
    }
}

TEST(DdiEffective, ResonantNoDecayIsCosSquared) {
    DdiEffectiveInputs in;
    in.d_ba = in.d_ab = 0.1;
    const auto times = uniform_times(60.0, 0.5);
    const Trajectory t = ddi_effective_model(in, times);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double c = std::cos(std::numbers::sqrt2 * 0.1 * t.t[k]);
        EXPECT_NEAR(t.p_rr[k], c * c, 1e-12);
        EXPECT_NEAR(t.p_ba[k], t.p_ab[k], 1e-12);
    }
}

TEST(DdiEffective, NoExchangeIsPureDecay) {
    DdiEffectiveInputs in;
    in.width_rr = 0.02;
    const Trajectory t = ddi_effective_model(in, uniform_times(10.0, 1.0));
    for (std::size_t k = 0; k < t.size(); ++k) {
        EXPECT_NEAR(t.p_rr[k], std::exp(-0.02 * t.t[k]), 1e-12);
        EXPECT_EQ(t.p_ba[k], 0.0);
    }
}

TEST(DdiEffective, MatchesExpmOracleWithOffsetsAndWidths) {
    DdiEffectiveInputs in{0.1, 0.12, 0.03, -0.02, 0.01, 0.004, 0.006};
    const Trajectory t = ddi_effective_model(in, {0.0, 7.5, 31.0});
    Matrix h = Matrix(ddi_block_hamiltonian(in.d_ba, in.d_ab, in.offset_ba, in.offset_ab));
    h(0, 0) -= Complex(0.0, 0.005);
    h(1, 1) -= Complex(0.0, 0.002);
    h(2, 2) -= Complex(0.0, 0.003);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const Matrix u = oracle::expm_taylor(Complex(0.0, -t.t[k]) * h);
        EXPECT_NEAR(t.p_rr[k], std::norm(u(0, 0)), 1e-12);
        EXPECT_NEAR(t.p_ba[k], std::norm(u(1, 0)), 1e-12);
        EXPECT_NEAR(t.p_ab[k], std::norm(u(2, 0)), 1e-12);
    }
}

TEST(VdwEffective, PhaseAndDecay) {
    const double w = 4e-3;
    const double t_pi = std::numbers::pi / w;
    const Trajectory t = vdw_effective_model(w, 0.0, {0.0, t_pi});
    EXPECT_NEAR(t.phi_rr.back(), std::numbers::pi, 1e-14);
    EXPECT_EQ(t.p_rr.back(), 1.0);
    const Trajectory z = vdw_effective_model(0.0, 0.0, {0.0, 1e6});
    EXPECT_EQ(z.phi_rr.back(), 0.0);
    EXPECT_EQ(z.p_rr.back(), 1.0);
    EXPECT_THROW(vdw_effective_model(w, -1.0, {0.0, 1.0}), InvalidArgument);
}

TEST(VdwEffective, RecipeDecay) {
    const Decays d{3e-3, 1.6e-5, 1.6e-5, 1.6e-5};
    const SystemParams p = apply_recipe({RegimeKind::Vdw, 10.0}, d);
    EXPECT_NEAR(vdw_effective_decay(p), 2.0 * (3e-3 / 100.0 + 1.6e-5), 1e-18);
}

TEST(VdwEffective, SurvivalCloseToFullModelAtF10) {
    const Decays d{3e-3, 1.5915494309189535e-05, 1.5915494309189535e-05, 1.5915494309189535e-05};
    const SystemParams p = apply_recipe({RegimeKind::Vdw, 10.0}, d);
    const double w = interaction_shift_spectral(p);
    const double t_pi = std::numbers::pi / w;
    IntegratorOpts o;
    o.t_max = t_pi;
    o.sample_interval = t_pi / 4.0;
    const Trajectory full = run_full_model(p, o);
    const Trajectory eff = vdw_effective_model(w, vdw_effective_decay(p), full.t);
    EXPECT_NEAR(eff.p_rr.back(), full.p_rr.back(), 0.05);
}

TEST(TimeGrid, UniformTimes) {
    const auto t = uniform_times(1.05, 0.25);
    ASSERT_EQ(t.size(), 6u);
    EXPECT_EQ(t.back(), 1.05);
    EXPECT_EQ(uniform_times(1.0, 0.25).size(), 5u);
    EXPECT_THROW(uniform_times(0.0, 0.1), InvalidArgument);
    EXPECT_THROW(ddi_effective_model({}, {1.0, 0.5}), InvalidArgument);
}
