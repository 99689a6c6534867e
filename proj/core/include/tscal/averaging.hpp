#pragma once

#include "tscal/shift.hpp"
#include "tscal/vec.hpp"

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

namespace tscal {

/// Axis-aligned box in state space.
struct Box {
    Vec lo;
    Vec hi;

    bool contains(const Vec& x, double margin = 0.0) const {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < lo[i] + margin || x[i] > hi[i] - margin) return false;
        return true;
    }
    double max_extent() const {
        double m = 0.0;
        for (std::size_t i = 0; i < lo.size(); ++i) m = std::max(m, hi[i] - lo[i]);
        return m;
    }
};

/// Right-hand side X(t, x) with the regularity metadata the proximity
/// estimate needs: sup-norm bound M on Q and Lipschitz constant lambda in x.
struct VectorField {
    std::size_t dimension = 1;
    std::function<Vec(double, const Vec&)> eval;
    double bound = 0.0;     // M
    double lipschitz = 0.0; // lambda
    std::optional<PeriodicityCertificate> certificate;

    Vec operator()(double t, const Vec& x) const { return eval(t, x); }

    /// Time slice t -> X(t, x) at fixed x, for periodicity verification.
    GridFunction at(Vec x) const {
        return GridFunction{dimension, [f = eval, x = std::move(x)](double t) {
                                return f(t, x);
                            }};
    }
};

struct FieldBounds {
    double bound;      // sampled max of |X|
    double lipschitz;  // sampled max difference quotient
    std::size_t samples;
};

/// Empirical M and lambda over a sampled time window and state box.
/// Deterministic for a fixed seed.
FieldBounds estimate_field_bounds(const VectorField& field, const TimeScale& ts,
                                  const SampleWindow& window, const Box& domain,
                                  std::uint64_t seed,
                                  std::size_t x_samples = 64);

/// Piecewise-constant-in-t averaged right-hand side over the shift
/// intervals [delta^(i)(t0), delta^(i+1)(t0)).  The value on interval i is
///   gamma^i / (delta^(i+1)(t0) - delta^(i)(t0)) * int_{t0}^{delta_+(T,t0)} X(t,x) Dt,
/// which covers both the delta-periodic construction (gamma = 1) and the
/// geometric quasiperiodic one.  Immutable after construction; the
/// per-state cache of the base integral is mutex-guarded.
class AveragedField {
public:
    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<double>& interval_lengths() const noexcept { return lengths_; }
    std::size_t interval_count() const noexcept { return lengths_.size(); }
    double gamma() const noexcept { return gamma_; }
    std::size_t dimension() const noexcept { return field_.dimension; }
    double lipschitz() const noexcept { return field_.lipschitz; }
    /// Upper bound K on the interval lengths.
    double max_interval_length() const noexcept { return max_length_; }

    /// Base integral int_{t0}^{delta_+(T,t0)} X(t, x) Dt, cached per x.
    Vec base_integral(const Vec& x) const;

    /// Value on interval i (by index; exact at any depth).
    Vec interval_value(std::size_t i, const Vec& x) const;

    /// Value at time t.  Beyond the last materialized breakpoint the last
    /// interval's value is extended and the tail flag is raised.
    Vec value(double t, const Vec& x) const;

    bool tail_extension_used() const noexcept { return state_->tail_warned.load(); }

private:
    friend AveragedField build_averaged_field_periodic(const VectorField&,
                                                       const TimeScale&,
                                                       const ShiftOperator&,
                                                       double, double,
                                                       std::size_t);
    friend AveragedField build_averaged_field_quasiperiodic(const VectorField&,
                                                            const TimeScale&,
                                                            const ShiftOperator&,
                                                            double, double,
                                                            double, std::size_t);
    AveragedField(VectorField field, TimeScale ts, double gamma,
                  std::vector<double> breakpoints, std::vector<double> lengths,
                  double base_lo, double base_hi);

    struct SharedState {
        mutable std::mutex m;
        mutable std::map<Vec, Vec> cache;
        std::atomic<bool> tail_warned{false};
    };

    VectorField field_;
    TimeScale ts_;
    double gamma_ = 1.0;
    std::vector<double> breakpoints_;
    std::vector<double> lengths_;
    double base_lo_ = 0.0;
    double base_hi_ = 0.0;
    double max_length_ = 0.0;
    std::shared_ptr<SharedState> state_;
};

/// Mean of X(., x) over the first shift interval [t0, delta_+(T, t0)].
Vec base_average(const VectorField& field, const TimeScale& ts,
                 const ShiftOperator& op, double T, double t0, const Vec& x);

/// Averaged field for a delta-periodic right-hand side (gamma = 1).
/// Requires a delta_periodic certificate on the field.
AveragedField build_averaged_field_periodic(const VectorField& field,
                                            const TimeScale& ts,
                                            const ShiftOperator& op, double T,
                                            double t0, std::size_t n_intervals);

/// Averaged field for a geometric quasiperiodic right-hand side with the
/// certified factor gamma.  Requires a quasi_periodic (or, when gamma is 1,
/// delta_periodic) certificate.
AveragedField build_averaged_field_quasiperiodic(const VectorField& field,
                                                 const TimeScale& ts,
                                                 const ShiftOperator& op,
                                                 double T, double t0,
                                                 double gamma,
                                                 std::size_t n_intervals);

/// Theoretical proximity constant C = 2 M (lambda L + K) e^{lambda L}.
double error_bound_constant(double M, double lambda, double L, double K);

/// Max gap between consecutive shift breakpoints delta^(i)(t0), i < N.
/// The i = 0 gap is included (conservative).
double interval_length_bound(const TimeScale& ts, const ShiftOperator& op,
                             double T, double t0, std::size_t n_intervals);

} // namespace tscal
