#include "cpwqed/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cpwqed/errors.hpp"
#include "cpwqed/report.hpp"

namespace cpwqed {

void Trajectory::reserve(std::size_t n) {
    for (auto* col : {&t, &p_rr, &p_ba, &p_ab, &phi_rr, &trace, &sink_pop, &purity}) col->reserve(n);
}

const std::vector<double>& Trajectory::column(std::string_view name) const {
    if (name == "t") return t;
    if (name == "p_rr") return p_rr;
    if (name == "p_ba") return p_ba;
    if (name == "p_ab") return p_ab;
    if (name == "phi_rr") return phi_rr;
    if (name == "trace") return trace;
    if (name == "sink_pop") return sink_pop;
    if (name == "purity") return purity;
    throw InvalidArgument("Trajectory: unknown column '" + std::string(name) + "'");
}

double Trajectory::value_at(std::string_view name, double time) const {
    const auto& col = column(name);
    if (t.empty()) throw InvalidArgument("Trajectory: empty");
    if (time <= t.front()) return col.front();
    if (time >= t.back()) return col.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), time) - t.begin());
    const std::size_t lo = hi - 1;
    const double w = (time - t[lo]) / (t[hi] - t[lo]);
    return (1.0 - w) * col[lo] + w * col[hi];
}

void Trajectory::validate() const {
    for (const auto* col : {&p_rr, &p_ba, &p_ab, &phi_rr, &trace, &sink_pop, &purity})
        if (col->size() != t.size()) throw InvalidArgument("Trajectory: ragged columns");
    for (std::size_t k = 1; k < t.size(); ++k)
        if (!(t[k] > t[k - 1])) throw InvalidArgument("Trajectory: time grid not strictly increasing");
}

std::vector<std::string> csv_columns(const Trajectory& traj) {
    std::vector<std::string> cols{"t"};
    if (traj.seconds_per_unit) cols.emplace_back("t_seconds");
    for (const char* c : {"p_rr", "p_ba", "p_ab", "phi_rr", "trace", "sink_pop", "purity"}) cols.emplace_back(c);
    return cols;
}

void write_csv(std::ostream& out, const Trajectory& traj) {
    traj.validate();
    const auto cols = csv_columns(traj);
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
    out << '\n';
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << format_number(traj.t[k]);
        if (traj.seconds_per_unit) out << ',' << format_number(traj.t[k] * *traj.seconds_per_unit);
        for (const auto* col : {&traj.p_rr, &traj.p_ba, &traj.p_ab, &traj.phi_rr, &traj.trace,
                                &traj.sink_pop, &traj.purity})
            out << ',' << format_number((*col)[k]);
        out << '\n';
    }
}

double max_abs_deviation(const Trajectory& a, const Trajectory& b, std::string_view name, double t_max) {
    if (a.size() != b.size()) throw DimensionError("max_abs_deviation: time grids differ in length");
    const auto& ca = a.column(name);
    const auto& cb = b.column(name);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a.t[k] - b.t[k]) > 1e-9 * std::max(1.0, std::abs(a.t[k])))
            throw DimensionError("max_abs_deviation: time grids differ");
        if (a.t[k] > t_max * (1.0 + 1e-12)) break;
        worst = std::max(worst, std::abs(ca[k] - cb[k]));
    }
    return worst;
}

double PhaseUnwrapper::operator()(double wrapped) {
    if (!started_) {
        started_ = true;
        last_wrapped_ = wrapped;
        total_ = wrapped;
        return total_;
    }
    double step = wrapped - last_wrapped_;
    step -= 2.0 * std::numbers::pi * std::round(step / (2.0 * std::numbers::pi));
    total_ += step;
    last_wrapped_ = wrapped;
    return total_;
}

}  // namespace cpwqed
