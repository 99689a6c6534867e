#pragma once

#include "tscal/grid_function.hpp"
#include "tscal/timescale.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace tscal {

/// Default absolute tolerance on periodicity residuals.
inline constexpr double kVerifyTol = 1e-9;

/// Forward/backward shift operators delta_+/- (s, t) on a time scale,
/// associated with an initial point t0 and carrying the scale period P.
/// A shift is in-domain exactly when its image lands on the scale within
/// membership tolerance; a condensation limit is only reachable from
/// itself (it is the unique fixed point of any admissible shift).
class ShiftOperator {
public:
    /// delta_+(s, t) = t + (s - t0); the trivial scales R, Z, hZ.
    static ShiftOperator additive(double t0 = 0.0, double scale_period = 1.0);

    /// delta_+(s, t) = limit - (limit - t) q^{-(s - t0)}; the shift family
    /// of the condensation scale {limit - q^{-n}}.
    static ShiftOperator geometric(double q, double t0 = 0.0,
                                   double scale_period = 1.0,
                                   double limit = 1.0);

    /// Tabulated forward images t -> delta_+(period, t).  Only the tabled
    /// shift size is admissible.
    static ShiftOperator custom_table(std::vector<std::pair<double, double>> pairs,
                                      double period, double t0 = 0.0,
                                      double scale_period = 1.0);

    /// Fully general operator from raw maps; `deriv` may be empty, in
    /// which case the Delta-derivative is computed numerically.
    static ShiftOperator from_functions(
        std::function<double(double, double)> forward_raw,
        std::function<double(double, double)> backward_raw,
        std::function<double(double, double)> deriv, double t0,
        double scale_period);

    double t0() const noexcept { return t0_; }
    double scale_period() const noexcept { return scale_period_; }

    /// delta_+(s, t), snapped onto the scale. Throws ShiftLeavesScale.
    double forward(const TimeScale& ts, double s, double t) const;
    /// delta_-(s, t), snapped onto the scale. Throws ShiftLeavesScale.
    double backward(const TimeScale& ts, double s, double t) const;

    /// Delta-derivative of delta_+(s, .) at t; analytic when available,
    /// numeric otherwise.  Throws NonPositiveDerivative when the result is
    /// not strictly positive.
    double delta_derivative(const TimeScale& ts, double s, double t) const;

    /// i-fold composition delta^(i)(t); i = 0 returns t (snapped).
    /// ShiftLeavesScale from a failing step carries the iteration index.
    double iterate(const TimeScale& ts, double s, double t,
                   std::size_t count) const;

    /// Closed-form gap delta^(i+1)(t0) - delta^(i)(t0) when the operator
    /// kind admits one; stays accurate where point labels collapse.
    std::optional<double> analytic_gap(double s, double t0, std::size_t i) const;

private:
    ShiftOperator() = default;

    std::function<double(double, double)> fwd_;
    std::function<double(double, double)> bwd_;
    std::function<double(double, double)> deriv_;           // may be empty
    std::function<double(double, double, std::size_t)> gap_; // may be empty
    double t0_ = 0.0;
    double scale_period_ = 1.0;
};

enum class PeriodicityKind { none, delta_periodic, quasi_periodic };

/// Result of a periodicity verification run.  kind == none is a verdict,
/// not an error.
struct PeriodicityCertificate {
    PeriodicityKind kind = PeriodicityKind::none;
    double period = 0.0;
    double gamma = 1.0;   // exactly 1 for delta-periodic
    double max_residual = 0.0;
    std::size_t sample_count = 0;
};

/// Sampling specification for verification: all scattered points inside
/// [lo, hi] plus `dense_nodes` interior nodes per continuous run.
struct SampleWindow {
    double lo;
    double hi;
    int dense_nodes = 64;
};

std::vector<double> sample_points(const TimeScale& ts, const SampleWindow& w);

/// Checks f(delta_+(T,t)) delta_+^D(T,t) = f(t) over the sampled window.
/// Out-of-domain samples are skipped; throws DegenerateFunction if no
/// sample is admissible.  The backward identity is checked too when
/// check_backward is set.
PeriodicityCertificate verify_delta_periodic(const TimeScale& ts,
                                             const ShiftOperator& op,
                                             const GridFunction& f, double T,
                                             const SampleWindow& w,
                                             double tol = kVerifyTol,
                                             bool check_backward = false);

/// Estimates the factor gamma in f(delta_+(T,t)) delta_+^D(T,t) = gamma f(t)
/// as the median of pointwise ratios (denominator floor 1e-9 * max |f|),
/// then certifies the residual against gamma.  Negative gamma is allowed.
PeriodicityCertificate verify_quasiperiodic(const TimeScale& ts,
                                            const ShiftOperator& op,
                                            const GridFunction& f, double T,
                                            const SampleWindow& w,
                                            double tol = kVerifyTol);

/// A strictly increasing map of the scale, used by the substitution rule.
/// The time scale passed to from_shift must outlive the map.
struct MonotoneMap {
    std::function<double(double)> value;
    std::function<double(double)> delta_deriv; // empty -> numeric

    static MonotoneMap identity();
    static MonotoneMap from_shift(const ShiftOperator& op, const TimeScale& ts,
                                  double s);
};

/// Residual of the substitution rule
///   int_a^b g(s) nu^D(s) Ds  =  int_{nu(a)}^{nu(b)} g(nu^{-1}(s)) Ds~
/// with the right-hand side evaluated on the image scale nu(T).
/// Throws NotMonotone when sampled nu fails to increase strictly.
double substitution_rule_check(const TimeScale& ts, const MonotoneMap& nu,
                               const GridFunction& g, double a, double b);

/// Residual of the shifted-integral identity for certified functions:
///   int_{delta^T(t0)}^{delta^T(t)} f Ds  =  gamma * int_{t0}^{t} f Ds,
/// gamma = 1 in the delta-periodic case.
double periodic_integral_invariance_check(const TimeScale& ts,
                                          const ShiftOperator& op,
                                          const GridFunction& f, double T,
                                          double gamma, double t0, double t);

} // namespace tscal
