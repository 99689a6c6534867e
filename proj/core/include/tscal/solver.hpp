#pragma once

#include "tscal/averaging.hpp"
#include "tscal/vec.hpp"

#include <functional>
#include <optional>

namespace tscal {

/// Cauchy problem x^D = eps * rhs(t, x), x(t0) = x0 on a time scale.
/// `domain`, when present, is the box D with exit detection; `bound` is
/// the sup-norm bound M used for the condensation tail estimate.
struct DynamicSystem {
    std::size_t dimension = 1;
    std::function<Vec(double, const Vec&)> rhs;
    double epsilon = 0.0;
    double t0 = 0.0;
    Vec x0;
    std::optional<Box> domain;
    std::optional<double> bound;

    static DynamicSystem from_field(const VectorField& field, double epsilon,
                                    double t0, Vec x0,
                                    std::optional<Box> domain = std::nullopt);
    static DynamicSystem from_averaged(const AveragedField& avg, double epsilon,
                                       double t0, Vec x0,
                                       std::optional<Box> domain = std::nullopt);
};

enum class TerminalStatus { completed, left_domain, horizon_reached };

struct TrajectorySample {
    double t;
    Vec x;
    bool exact_step; // scattered step vs dense-segment integration
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    TerminalStatus status = TerminalStatus::completed;
    /// eps * M * (limit - t_end) when the walk stopped at the last
    /// materialized point before a condensation limit.
    std::optional<double> tail_bound;
};

/// Integrates the system up to horizon_end (a scale point).  Scattered
/// steps apply x(sigma(t)) = x(t) + mu(t) eps X(t, x(t)) exactly;
/// continuous runs use an adaptive embedded Runge-Kutta pair at 1e-10
/// tolerance.  The condensation point is never stepped onto.
/// `requested_end` past horizon_end marks the run as horizon_reached
/// (saturated scale).
Trajectory solve(const DynamicSystem& sys, const TimeScale& ts,
                 double horizon_end,
                 std::optional<double> requested_end = std::nullopt);

/// Exact product solution of the scalar linear problem
/// y(sigma^k(inf T)) = y0 prod_{i<k} [1 + p(i) mu(sigma^i(inf T))] on a
/// purely isolated scale, stepped through the same arithmetic as solve.
/// Throws NotIsolated when a dense point is reached before step k.
double product_solution_linear(const TimeScale& ts,
                               const std::function<double(std::size_t)>& p_of_i,
                               double y0, std::size_t steps);

struct ProximityReport {
    double max_diff = 0.0;
    double argmax_t = 0.0;
    std::size_t argmax_index = 0;
    std::vector<double> diffs; // sup-norm difference per sample
};

/// Pointwise comparison of two trajectories on the same grid.
/// Throws GridMismatch when the grids differ.
ProximityReport compare_trajectories(const Trajectory& a, const Trajectory& b);

/// Largest scale point not exceeding t0 + L / epsilon, never a
/// condensation limit.  Saturates at the scale supremum.
double horizon_for(double epsilon, double L, const TimeScale& ts, double t0);

} // namespace tscal
