#include <benchmark/benchmark.h>

#include "cpwqed/cavity_model.hpp"
#include "cpwqed/lindblad.hpp"

namespace {

using namespace cpwqed;

SystemParams vdw_params(double f) {
    return apply_recipe({RegimeKind::Vdw, f}, Decays{3e-3, 1.6e-5, 1.6e-5, 1.6e-5});
}

void BM_Kron3(benchmark::State& state) {
    const BasisSpec basis;
    const Matrix s = atom_transition(basis, level::b, level::r);
    const Matrix c = cavity_annihilation(basis.n_max()).adjoint();
    for (auto _ : state) benchmark::DoNotOptimize(kron3(basis, s, atom_identity(basis), c));
}
BENCHMARK(BM_Kron3);

void BM_BuildHamiltonian(benchmark::State& state) {
    const SystemParams p = vdw_params(10.0);
    for (auto _ : state) benchmark::DoNotOptimize(build_hamiltonian(p));
}
BENCHMARK(BM_BuildHamiltonian);

void BM_LindbladApply(benchmark::State& state) {
    const SystemParams p = vdw_params(10.0);
    const LindbladGenerator gen(build_hamiltonian(p), collapse_operators(p));
    const BasisSpec basis = p.basis();
    const Matrix rho = DensityMatrix::basis_state(basis, basis.index(level::r, level::r, 0)).matrix();
    Matrix out(basis.dim(), basis.dim());
    for (auto _ : state) {
        gen.apply(rho, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_LindbladApply);

void BM_DenseRhs(benchmark::State& state) {
    const SystemParams p = vdw_params(10.0);
    const Operator h = build_hamiltonian(p);
    const auto ops = collapse_operators(p);
    const BasisSpec basis = p.basis();
    const DensityMatrix rho = DensityMatrix::basis_state(basis, basis.index(level::r, level::r, 0));
    for (auto _ : state) benchmark::DoNotOptimize(lindblad_rhs(h, ops, rho));
}
BENCHMARK(BM_DenseRhs);

void BM_EvolveShort(benchmark::State& state) {
    const SystemParams p = vdw_params(10.0);
    IntegratorOpts opts;
    opts.t_max = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(run_full_model(p, opts).p_rr.back());
}
BENCHMARK(BM_EvolveShort)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
