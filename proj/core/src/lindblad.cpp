#include "cpwqed/lindblad.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <cmath>
#include <limits>
#include <sstream>

#include "cpwqed/errors.hpp"

namespace cpwqed {

namespace {

constexpr Complex kI{0.0, 1.0};

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - b* (fifth minus embedded fourth order)
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

class Sampler {
public:
    Sampler(const IntegratorOpts& opts, const SampleObserver& observer, EvolutionStats& stats)
        : opts_(opts), observer_(observer), stats_(stats) {
        stats_.min_eigenvalue = opts.track_positivity ? std::numeric_limits<double>::infinity()
                                                      : std::numeric_limits<double>::quiet_NaN();
    }

    void record(double t, const Matrix& rho, const BasisSpec& basis) {
        if (!rho.allFinite()) {
            std::ostringstream msg;
            msg << "evolve: non-finite density matrix at t = " << t;
            throw NumericError(msg.str());
        }
        DensityMatrix state(basis, rho);
        stats_.max_trace_drift =
            std::max(stats_.max_trace_drift, std::abs(state.trace() - Complex{1.0, 0.0}));
        stats_.max_hermiticity_defect =
            std::max(stats_.max_hermiticity_defect, state.hermiticity_defect());
        if (opts_.track_positivity)
            stats_.min_eigenvalue = std::min(stats_.min_eigenvalue, state.min_eigenvalue());
        if (observer_) observer_(t, state);
    }

private:
    const IntegratorOpts& opts_;
    const SampleObserver& observer_;
    EvolutionStats& stats_;
};

// |z| without the overflow-safe hypot path of std::abs.
inline double modulus(Complex z) { return std::sqrt(z.real() * z.real() + z.imag() * z.imag()); }

double scaled_error(const Matrix& err, const Matrix& y0, const Matrix& y1, double rel, double abs) {
    double worst = 0.0;
    const Eigen::Index n = err.size();
    const Complex* pe = err.data();
    const Complex* p0 = y0.data();
    const Complex* p1 = y1.data();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double scale = abs + rel * std::max(modulus(p0[k]), modulus(p1[k]));
        worst = std::max(worst, modulus(pe[k]) / scale);
    }
    return worst;
}

EvolutionStats run_rk4(const DensityMatrix& rho0, const LindbladGenerator& gen,
                       const IntegratorOpts& opts, const SampleObserver& observer) {
    EvolutionStats stats;
    Sampler sampler(opts, observer, stats);

    const auto n_steps = static_cast<std::size_t>(std::max(1.0, std::round(opts.t_max / opts.dt)));
    if (n_steps > opts.max_steps) throw NumericError("evolve: fixed-step count exceeds max_steps");
    const double h = opts.t_max / static_cast<double>(n_steps);
    const std::size_t stride =
        opts.sample_interval > 0.0
            ? static_cast<std::size_t>(std::max(1.0, std::round(opts.sample_interval / h)))
            : n_steps;

    const int n = gen.dim();
    Matrix y = rho0.matrix();
    Matrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);
    sampler.record(0.0, y, gen.basis());

    for (std::size_t step = 1; step <= n_steps; ++step) {
        gen.apply(y, k1);
        tmp = y + (0.5 * h) * k1;
        gen.apply(tmp, k2);
        tmp = y + (0.5 * h) * k2;
        gen.apply(tmp, k3);
        tmp = y + h * k3;
        gen.apply(tmp, k4);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        stats.rhs_evals += 4;
        ++stats.steps;
        if (step % stride == 0 || step == n_steps) {
            const double t = step == n_steps ? opts.t_max : h * static_cast<double>(step);
            sampler.record(t, y, gen.basis());
        }
    }
    return stats;
}

EvolutionStats run_rk45(const DensityMatrix& rho0, const LindbladGenerator& gen,
                        const IntegratorOpts& opts, const SampleObserver& observer) {
    EvolutionStats stats;
    Sampler sampler(opts, observer, stats);

    const int n = gen.dim();
    Matrix y = rho0.matrix();
    Matrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), k5(n, n), k6(n, n), k7(n, n);
    Matrix stage(n, n), y_new(n, n), err(n, n);

    double t = 0.0;
    double h = std::min(opts.dt, opts.t_max);
    const double t_end = opts.t_max;
    const double eps_t = 1e-13 * std::max(1.0, t_end);
    std::size_t next_sample = 1;
    auto sample_time = [&](std::size_t k) {
        if (opts.sample_interval <= 0.0) return t_end;
        return std::min(t_end, opts.sample_interval * static_cast<double>(k));
    };

    sampler.record(0.0, y, gen.basis());
    gen.apply(y, k1);
    ++stats.rhs_evals;

    while (t < t_end - eps_t) {
        double target = sample_time(next_sample);
        while (target <= t + eps_t && target < t_end) target = sample_time(++next_sample);

        const bool clipped = t + h >= target - eps_t;
        const double step = clipped ? target - t : h;

        stage = y + step * (a21 * k1);
        gen.apply(stage, k2);
        stage = y + step * (a31 * k1 + a32 * k2);
        gen.apply(stage, k3);
        stage = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
        gen.apply(stage, k4);
        stage = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        gen.apply(stage, k5);
        stage = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        gen.apply(stage, k6);
        y_new = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        gen.apply(y_new, k7);
        stats.rhs_evals += 6;

        err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double norm = scaled_error(err, y, y_new, opts.rel_tol, opts.abs_tol);
        if (!std::isfinite(norm)) throw NumericError("evolve: non-finite error estimate");

        const double factor =
            norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
        if (norm <= 1.0) {
            t = clipped ? target : t + step;
            y.swap(y_new);
            k1.swap(k7);  // FSAL
            ++stats.steps;
            if (stats.steps > opts.max_steps)
                throw NumericError("evolve: step budget exhausted (max_steps)");
            if (clipped) {
                sampler.record(t, y, gen.basis());
                ++next_sample;
                // a step shortened to hit a sample time says nothing about the
                // achievable step size; keep the previous proposal
                h = std::max(h, step * factor);
            } else {
                h = step * factor;
            }
        } else {
            ++stats.rejected;
            h = step * factor;
        }
        if (h < opts.min_dt) {
            std::ostringstream msg;
            msg << "evolve: step-size underflow at t = " << t << " (h = " << h
                << "); the problem is stiff or misconfigured";
            throw NumericError(msg.str());
        }
    }
    return stats;
}

}  // namespace

void IntegratorOpts::validate() const {
    if (!(t_max > 0.0)) throw InvalidArgument("IntegratorOpts: t_max must be > 0");
    if (!(dt > 0.0)) throw InvalidArgument("IntegratorOpts: dt must be > 0");
    if (method == Method::AdaptiveRk45) {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw InvalidArgument("IntegratorOpts: tolerances must be > 0");
        if (!(min_dt > 0.0)) throw InvalidArgument("IntegratorOpts: min_dt must be > 0");
    }
    if (!std::isfinite(sample_interval))
        throw InvalidArgument("IntegratorOpts: sample_interval must be finite");
}

LindbladGenerator::LindbladGenerator(const Operator& hamiltonian, const std::vector<Operator>& collapse)
    : basis_(hamiltonian.basis()), collapse_count_(collapse.size()) {
    Matrix heff = hamiltonian.matrix();
    std::map<std::array<int, 4>, Complex> terms;
    for (const auto& op : collapse) {
        if (!(op.basis() == basis_)) throw DimensionError("LindbladGenerator: collapse basis mismatch");
        const Matrix& l = op.matrix();
        heff -= 0.5 * kI * (l.adjoint() * l);
        // L rho L† = sum L(a,b) rho(b,d) conj(L(c,d)) |a><c|
        for (int b = 0; b < l.cols(); ++b)
            for (int a = 0; a < l.rows(); ++a) {
                if (l(a, b) == Complex{}) continue;
                for (int d = 0; d < l.cols(); ++d)
                    for (int c = 0; c < l.rows(); ++c)
                        if (l(c, d) != Complex{}) terms[{a, c, b, d}] += l(a, b) * std::conj(l(c, d));
            }
    }
    for (const auto& [key, value] : terms)
        if (value != Complex{}) jump_terms_.push_back({key[0], key[1], key[2], key[3], value});
    const Matrix drift = -kI * heff;
    for (int c = 0; c < drift.cols(); ++c)
        for (int r = 0; r < drift.rows(); ++r)
            if (drift(r, c) != Complex{}) drift_.push_back({r, c, drift(r, c)});
}

namespace {

// Hermitian up to rounding noise; such states take the cheaper symmetric path.
bool near_hermitian(const Matrix& m) {
    double defect = 0.0;
    double scale = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = j; i < m.rows(); ++i) {
            const Complex a = m(i, j);
            const Complex b = m(j, i);
            defect = std::max({defect, std::abs(a.real() - b.real()), std::abs(a.imag() + b.imag())});
            scale = std::max({scale, std::abs(a.real()), std::abs(a.imag())});
        }
    return defect <= 1e-14 * (1.0 + scale);
}

}  // namespace

void LindbladGenerator::apply(const Matrix& rho, Matrix& out) const {
    if (rho.rows() != dim() || rho.cols() != dim())
        throw DimensionError("LindbladGenerator: state dimension mismatch");
    // A rho + rho A† using column operations only: rho A† gathers columns of rho.
    out.setZero(dim(), dim());
    for (const Entry& e : drift_) out.col(e.row) += std::conj(e.value) * rho.col(e.col);

    if (near_hermitian(rho)) {
        // A rho = (rho A†)†; halve the jump terms and symmetrise once
        for (const JumpTerm& j : jump_terms_) out(j.row, j.col) += 0.5 * j.value * rho(j.src_row, j.src_col);
        thread_local Matrix sym;
        sym = out.adjoint();
        out += sym;
        return;
    }
    // general input: A rho = (rho† A†)†
    thread_local Matrix rho_adj;
    thread_local Matrix left;
    rho_adj = rho.adjoint();
    left.setZero(dim(), dim());
    for (const Entry& e : drift_) left.col(e.row) += std::conj(e.value) * rho_adj.col(e.col);
    out += left.adjoint();
    for (const JumpTerm& j : jump_terms_) out(j.row, j.col) += j.value * rho(j.src_row, j.src_col);
}

Matrix LindbladGenerator::operator()(const Matrix& rho) const {
    Matrix out(dim(), dim());
    apply(rho, out);
    return out;
}

Matrix lindblad_rhs(const Operator& hamiltonian, const std::vector<Operator>& collapse,
                    const DensityMatrix& rho) {
    if (!(rho.basis() == hamiltonian.basis())) throw DimensionError("lindblad_rhs: basis mismatch");
    return LindbladGenerator(hamiltonian, collapse)(rho.matrix());
}

EvolutionStats evolve(const DensityMatrix& rho0, const LindbladGenerator& generator,
                      const IntegratorOpts& opts, const SampleObserver& observer) {
    opts.validate();
    if (!(rho0.basis() == generator.basis())) throw DimensionError("evolve: basis mismatch");
    rho0.validate();
    return opts.method == Method::FixedRk4 ? run_rk4(rho0, generator, opts, observer)
                                           : run_rk45(rho0, generator, opts, observer);
}

Evolution evolve(const DensityMatrix& rho0, const Operator& hamiltonian,
                 const std::vector<Operator>& collapse, const IntegratorOpts& opts,
                 const std::vector<Operator>& observables, bool keep_states) {
    for (const auto& o : observables)
        if (!(o.basis() == rho0.basis())) throw DimensionError("evolve: observable basis mismatch");

    Evolution out;
    out.expectations.resize(observables.size());
    const LindbladGenerator gen(hamiltonian, collapse);
    out.stats = evolve(rho0, gen, opts, [&](double t, const DensityMatrix& rho) {
        out.t.push_back(t);
        for (std::size_t k = 0; k < observables.size(); ++k)
            out.expectations[k].push_back(rho.expectation(observables[k]));
        if (keep_states) out.states.push_back(rho);
    });
    return out;
}

}  // namespace cpwqed
