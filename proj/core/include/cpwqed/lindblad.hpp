#pragma once

// Lindblad master equation
//     d rho/dt = -i[H, rho] + sum_k (L_k rho L_k† - 1/2 {L_k† L_k, rho})
// in units where hbar = 1 and time is measured in 1/g_r.

#include <cstddef>
#include <functional>
#include <vector>

#include "cpwqed/qops.hpp"

namespace cpwqed {

enum class Method { FixedRk4, AdaptiveRk45 };

struct IntegratorOpts {
    Method method = Method::AdaptiveRk45;
    double dt = 1e-2;           // fixed step (RK4) / first trial step (RK45)
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double t_max = 1.0;
    double sample_interval = 0.0;  // <= 0: only t = 0 and t = t_max
    double min_dt = 1e-12;         // RK45 underflow threshold
    std::size_t max_steps = 100'000'000;
    bool track_positivity = false;  // min eigenvalue at every sample (costly)

    void validate() const;
};

/// Precompiled right-hand side. Keeps the nonzeros of A = -i H_eff, with
/// H_eff = H - i/2 sum L†L, and the expanded jump terms L rho L†; the public
/// contract stays dense.
class LindbladGenerator {
public:
    LindbladGenerator(const Operator& hamiltonian, const std::vector<Operator>& collapse);

    const BasisSpec& basis() const { return basis_; }
    int dim() const { return basis_.dim(); }
    std::size_t collapse_count() const { return collapse_count_; }

    void apply(const Matrix& rho, Matrix& out) const;
    Matrix operator()(const Matrix& rho) const;

private:
    struct Entry {
        int row;
        int col;
        Complex value;
    };
    // out(row, col) += value * rho(src_row, src_col)
    struct JumpTerm {
        int row;
        int col;
        int src_row;
        int src_col;
        Complex value;
    };

    BasisSpec basis_;
    std::size_t collapse_count_ = 0;
    std::vector<Entry> drift_;  // nonzeros of -i H_eff
    std::vector<JumpTerm> jump_terms_;
};

/// One evaluation of the Lindblad right-hand side.
Matrix lindblad_rhs(const Operator& hamiltonian, const std::vector<Operator>& collapse,
                    const DensityMatrix& rho);

struct EvolutionStats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
    double max_trace_drift = 0.0;
    double max_hermiticity_defect = 0.0;
    double min_eigenvalue = 0.0;  // NaN unless track_positivity
};

using SampleObserver = std::function<void(double t, const DensityMatrix& rho)>;

/// Integrates from t = 0 to opts.t_max, calling `observer` at t = 0, at every
/// multiple of opts.sample_interval, and at t_max.
/// Throws NumericError on step-size underflow or a non-finite state.
EvolutionStats evolve(const DensityMatrix& rho0, const LindbladGenerator& generator,
                      const IntegratorOpts& opts, const SampleObserver& observer);

struct Evolution {
    std::vector<double> t;
    std::vector<std::vector<Complex>> expectations;  // [observable][sample]
    std::vector<DensityMatrix> states;
    EvolutionStats stats;
};

Evolution evolve(const DensityMatrix& rho0, const Operator& hamiltonian,
                 const std::vector<Operator>& collapse, const IntegratorOpts& opts,
                 const std::vector<Operator>& observables, bool keep_states = false);

}  // namespace cpwqed
