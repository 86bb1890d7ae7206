#include <gtest/gtest.h>

#include <cmath>

#include "cpwqed/errors.hpp"
#include "cpwqed/lindblad.hpp"
#include "oracles.hpp"

using namespace cpwqed;

namespace {

// two two-level atoms and a cavity with up to one photon: dim 8
BasisSpec small_basis() { return BasisSpec({"g", "e"}, 1); }

Operator random_h(const BasisSpec& b, unsigned seed) { return Operator(b, oracle::random_hermitian(b.dim(), seed)); }

DensityMatrix random_rho(const BasisSpec& b, unsigned seed) {
    return DensityMatrix(b, oracle::random_density(b.dim(), seed));
}

std::vector<Operator> some_collapse(const BasisSpec& b) {
    const Matrix c = cavity_annihilation(b.n_max());
    return {kron3(b, atom_identity(b), atom_identity(b), c) * Complex(std::sqrt(0.3)),
            on_atom(b, 0, atom_transition(b, 0, 1)) * Complex(std::sqrt(0.2))};
}

}  // namespace

TEST(LindbladRhs, ZeroGeneratorGivesZero) {
    const BasisSpec b = small_basis();
    const Matrix out = lindblad_rhs(Operator::zero(b), {}, random_rho(b, 4));
    EXPECT_LE(out.cwiseAbs().maxCoeff(), 0.0);
}

TEST(LindbladRhs, PhotonDecayRates) {
    const BasisSpec b;
    const double kappa = 0.7;
    const Operator l = kron3(b, atom_identity(b), atom_identity(b), cavity_annihilation(2)) * Complex(std::sqrt(kappa));
    const int one = b.index(0, 0, 1);
    const int zero = b.index(0, 0, 0);
    const Matrix d = lindblad_rhs(Operator::zero(b), {l}, DensityMatrix::basis_state(b, one));
    EXPECT_NEAR(d(one, one).real(), -kappa, 1e-15);
    EXPECT_NEAR(d(zero, zero).real(), kappa, 1e-15);
}

TEST(LindbladRhs, UnitaryRhsIsTraceless) {
    const BasisSpec b({"g", "e"}, 0);
    Matrix h = Matrix::Zero(4, 4);
    h(0, 2) = h(2, 0) = 0.5;  // Rabi drive on atom i
    const Matrix d = lindblad_rhs(Operator(b, h), {}, DensityMatrix::basis_state(b, 0));
    EXPECT_EQ(d.trace(), Complex(0.0));
}

TEST(LindbladRhs, HermitianAndTraceless) {
    const BasisSpec b = small_basis();
    const Matrix d = lindblad_rhs(random_h(b, 1), some_collapse(b), random_rho(b, 2));
    EXPECT_LE((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE(std::abs(d.trace()), 1e-12);
}

TEST(LindbladGeneratorTest, MatchesNaiveFormula) {
    const BasisSpec b = small_basis();
    const Operator h = random_h(b, 5);
    const auto ls = some_collapse(b);
    std::vector<Matrix> lm;
    for (const auto& l : ls) lm.push_back(l.matrix());
    const LindbladGenerator gen(h, ls);
    // Hermitian and non-Hermitian inputs take different paths
    for (unsigned seed : {6u, 7u}) {
        const Matrix rho = oracle::random_density(b.dim(), seed);
        EXPECT_LE((gen(rho) - oracle::naive_lindblad(h.matrix(), lm, rho)).cwiseAbs().maxCoeff(), 1e-12);
        const Matrix general = oracle::random_hermitian(b.dim(), seed) * Complex(0.3, 1.1) + rho;
        EXPECT_LE((gen(general) - oracle::naive_lindblad(h.matrix(), lm, general)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(LindbladGeneratorTest, Linearity) {
    const BasisSpec b = small_basis();
    const LindbladGenerator gen(random_h(b, 8), some_collapse(b));
    const Matrix r1 = oracle::random_density(b.dim(), 9);
    const Matrix r2 = oracle::random_density(b.dim(), 10);
    const Complex alpha(0.3, -0.2), beta(1.7, 0.4);
    const Matrix lhs = gen(alpha * r1 + beta * r2);
    const Matrix rhs = alpha * gen(r1) + beta * gen(r2);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(LindbladGeneratorTest, BasisMismatchThrows) {
    const BasisSpec b = small_basis();
    const BasisSpec other({"g", "e"}, 2);
    EXPECT_THROW(LindbladGenerator(Operator::zero(b), {Operator::zero(other)}), DimensionError);
    EXPECT_THROW(lindblad_rhs(Operator::zero(b), {}, random_rho(other, 1)), DimensionError);
}

TEST(Evolve, NoDynamicsKeepsState) {
    const BasisSpec b = small_basis();
    const DensityMatrix rho0 = random_rho(b, 11);
    IntegratorOpts o;
    o.t_max = 3.0;
    o.sample_interval = 1.0;
    const Evolution ev = evolve(rho0, Operator::zero(b), {}, o, {}, true);
    ASSERT_EQ(ev.t.size(), 4u);
    for (const auto& s : ev.states) EXPECT_LE((s.matrix() - rho0.matrix()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Evolve, SamplesAtMultiplesAndEnd) {
    const BasisSpec b = small_basis();
    IntegratorOpts o;
    o.t_max = 1.05;
    o.sample_interval = 0.25;
    const Evolution ev = evolve(random_rho(b, 3), random_h(b, 3), {}, o, {});
    const std::vector<double> expected = {0.0, 0.25, 0.5, 0.75, 1.0, 1.05};
    ASSERT_EQ(ev.t.size(), expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_NEAR(ev.t[k], expected[k], 1e-14);
}

TEST(Evolve, UnitaryMatchesExpmOracle) {
    const BasisSpec b = small_basis();
    const Operator h = random_h(b, 12);
    const DensityMatrix rho0 = random_rho(b, 13);
    IntegratorOpts o;
    o.t_max = 2.0;
    o.rel_tol = 1e-11;
    o.abs_tol = 1e-13;
    const Evolution ev = evolve(rho0, h, {}, o, {}, true);
    const Matrix ref = oracle::unitary_propagate(h.matrix(), rho0.matrix(), 2.0);
    EXPECT_LE((ev.states.back().matrix() - ref).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Evolve, FockStateDecaysExponentially) {
    const BasisSpec b;
    const double kappa = 0.5;
    const Operator l = kron3(b, atom_identity(b), atom_identity(b), cavity_annihilation(2)) * Complex(std::sqrt(kappa));
    const int one = b.index(0, 0, 1);
    Matrix m = Matrix::Zero(48, 48);
    m(one, one) = 1.0;
    const Operator proj(b, m);
    IntegratorOpts o;
    o.t_max = 4.0;
    o.sample_interval = 0.5;
    const Evolution ev = evolve(DensityMatrix::basis_state(b, one), Operator::zero(b), {l}, o, {proj});
    for (std::size_t k = 0; k < ev.t.size(); ++k)
        EXPECT_NEAR(ev.expectations[0][k].real(), std::exp(-kappa * ev.t[k]), 1e-6);
    EXPECT_LE(ev.stats.max_trace_drift, 1e-8);
}

TEST(Evolve, Rk4IsFourthOrder) {
    const BasisSpec b = small_basis();
    const Operator h = random_h(b, 14);
    const DensityMatrix rho0 = random_rho(b, 15);
    const Matrix ref = oracle::unitary_propagate(h.matrix(), rho0.matrix(), 1.0);
    auto error_at = [&](double dt) {
        IntegratorOpts o;
        o.method = Method::FixedRk4;
        o.dt = dt;
        o.t_max = 1.0;
        const Evolution ev = evolve(rho0, h, {}, o, {}, true);
        return (ev.states.back().matrix() - ref).cwiseAbs().maxCoeff();
    };
    const double e1 = error_at(0.02);
    const double e2 = error_at(0.01);
    const double ratio = e1 / e2;
    EXPECT_GT(ratio, 14.0);
    EXPECT_LT(ratio, 18.0);
}

TEST(Evolve, StepUnderflowIsNumericError) {
    const BasisSpec b = small_basis();
    const Operator h = random_h(b, 16) * Complex(50.0);
    IntegratorOpts o;
    o.t_max = 1.0;
    o.dt = 1.0;
    o.min_dt = 0.5;
    EXPECT_THROW(evolve(random_rho(b, 17), h, {}, o, {}), NumericError);
}

TEST(Evolve, InvalidOptionsRejected) {
    IntegratorOpts o;
    o.t_max = -1.0;
    EXPECT_THROW(o.validate(), InvalidArgument);
    o.t_max = 1.0;
    o.rel_tol = 0.0;
    EXPECT_THROW(o.validate(), InvalidArgument);
}

TEST(Evolve, TracksPositivityWhenAsked) {
    const BasisSpec b = small_basis();
    IntegratorOpts o;
    o.t_max = 1.0;
    o.sample_interval = 0.25;
    o.track_positivity = true;
    const Evolution ev = evolve(random_rho(b, 18), random_h(b, 18), some_collapse(b), o, {});
    EXPECT_GE(ev.stats.min_eigenvalue, -1e-8);
    o.track_positivity = false;
    EXPECT_TRUE(std::isnan(evolve(random_rho(b, 18), random_h(b, 18), {}, o, {}).stats.min_eigenvalue));
}
