#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "cpwqed/lindblad.hpp"

namespace cpwqed {

inline constexpr int kCsvSchemaVersion = 1;

/// Sampled two-atom observables. Times are in units of 1/g_r; when
/// `seconds_per_unit` is set the CSV also carries a `t_seconds` column.
struct Trajectory {
    std::vector<double> t;
    std::vector<double> p_rr;
    std::vector<double> p_ba;
    std::vector<double> p_ab;
    std::vector<double> phi_rr;  // conditional phase of |r r>, radians
    std::vector<double> trace;
    std::vector<double> sink_pop;
    std::vector<double> purity;

    /// Rate subtracted from the raw |r r> phase (single-atom Stark background).
    double phase_background = 0.0;
    std::optional<double> seconds_per_unit;
    EvolutionStats stats;

    std::size_t size() const { return t.size(); }
    void reserve(std::size_t n);
    const std::vector<double>& column(std::string_view name) const;
    /// Linear interpolation of a column at time `time` (clamped to the grid).
    double value_at(std::string_view name, double time) const;
    /// Checks that t is strictly increasing and every column has the same length.
    void validate() const;
};

/// CSV header fields, in output order.
std::vector<std::string> csv_columns(const Trajectory& traj);
void write_csv(std::ostream& out, const Trajectory& traj);

/// max_k |a[name][k] - b[name][k]| over samples with t <= t_max; both
/// trajectories must share their time grid.
double max_abs_deviation(const Trajectory& a, const Trajectory& b, std::string_view name,
                         double t_max);

/// Incremental phase unwrapping.
class PhaseUnwrapper {
public:
    double operator()(double wrapped);

private:
    bool started_ = false;
    double last_wrapped_ = 0.0;
    double total_ = 0.0;
};

}  // namespace cpwqed
