#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

namespace tscal {

/// Relative tolerance used to decide whether a query value names a scale
/// point: |t - p| <= kMembershipTol * max(1, |p|).
inline constexpr double kMembershipTol = 1e-12;

/// Points start + i*step for i = 0..count-1.
struct UniformGrid {
    double start;
    double step;   // > 0
    std::size_t count;
};

/// Arbitrary strictly increasing finite point family.
struct ExplicitPoints {
    std::vector<double> points;
};

/// The real interval [a, b], a < b.
struct ContinuousInterval {
    double a;
    double b;
};

/// The family t_n = limit - q^{-n}, n = 0..n_max, together with the
/// condensation point `limit` itself (stored exactly; the represented
/// set is closed).  Deep members may collide in double precision; the
/// walk machinery keeps them apart by index.
struct GeometricCondensation {
    double q;           // > 1
    std::size_t n_max;
    double limit = 1.0;
};

using Segment = std::variant<UniformGrid, ExplicitPoints, ContinuousInterval,
                             GeometricCondensation>;

/// Side-by-side classification of a scale point.  The boundary points use
/// the usual conventions: sigma(max) = max, rho(min) = min, and a
/// condensation limit is left-dense.
struct PointClass {
    bool right_scattered = false;
    bool left_scattered = false;
    bool at_min = false;
    bool at_max = false;

    bool right_dense() const noexcept { return !right_scattered; }
    bool left_dense() const noexcept { return !left_scattered; }
    /// Isolated: scattered on both sides, where a boundary side counts as
    /// scattered-like (the minimum of an isolated family is isolated).
    bool isolated() const noexcept {
        return (right_scattered || at_max) && (left_scattered || at_min);
    }
    bool dense() const noexcept {
        return !right_scattered && !left_scattered && !at_min && !at_max;
    }
};

/// One element of an ordered walk of [a, b]_T: either a single point
/// (lo == hi, dense == false) or a continuous sub-interval [lo, hi].
struct ScaleRun {
    double lo;
    double hi;
    bool dense;

    static ScaleRun point(double t) { return {t, t, false}; }
    static ScaleRun interval(double a, double b) { return {a, b, true}; }
};

/// A right-scattered point together with its forward jump, as produced by
/// the integration walk.  `sigma_is_limit` marks jumps whose target is a
/// condensation limit; the solver refuses to step onto those.
struct ScatteredEvent {
    double t;
    double sigma;
    bool sigma_is_limit = false;
};

struct DenseEvent {
    double lo;
    double hi;
};

using WalkEvent = std::variant<ScatteredEvent, DenseEvent>;

/// Integration plan for [a, b]_T: every right-scattered point of [a, b)
/// appears as a ScatteredEvent (including right endpoints of continuous
/// runs), every continuous run as a DenseEvent, in ascending order.
struct WalkPlan {
    double a;
    double b;
    std::vector<WalkEvent> events;
};

/// A time scale: a nonempty closed bounded subset of the reals, stored as
/// ordered non-overlapping segments.  Immutable after construction; all
/// queries are pure.
class TimeScale {
public:
    explicit TimeScale(std::vector<Segment> segments);

    static TimeScale uniform(double start, double step, std::size_t count);
    static TimeScale interval(double a, double b);
    static TimeScale points(std::vector<double> pts);
    /// {limit - q^{-n} : n = 0..n_max} together with {limit}.
    static TimeScale geometric(double q, std::size_t n_max, double limit = 1.0);

    double inf() const noexcept { return inf_; }
    double sup() const noexcept { return sup_; }

    bool contains(double t) const;
    /// Nearest represented point within membership tolerance.
    /// Throws PointNotOnScale otherwise.
    double snap(double t) const;

    /// Forward jump inf{s in T : s > t}; sup convention at the maximum.
    double sigma(double t) const;
    /// Backward jump sup{s in T : s < t}; inf convention at the minimum.
    /// A condensation limit is its own backward jump (left-dense).
    double rho(double t) const;
    /// Graininess sigma(t) - t.
    double mu(double t) const;
    PointClass classify(double t) const;

    /// Ordered walk of [a, b]_T. Throws EmptyInterval when a > b.
    std::vector<ScaleRun> points_between(double a, double b) const;

    /// Integration plan for [a, b]_T (see WalkPlan).
    WalkPlan walk_plan(double a, double b) const;

    /// Largest represented point <= v; pass exclude_limits to skip
    /// condensation limit points. Throws EmptyHorizon when v < inf.
    double floor_point(double v, bool exclude_limits = false) const;

    bool is_condensation_limit(double t) const;
    /// True when the scale consists of point-family segments only.
    bool purely_discrete() const noexcept;

    const std::vector<Segment>& segments() const noexcept { return segments_; }

private:
    struct Locator {
        std::size_t seg;
        std::size_t idx;     // index within a point family; 0 for intervals
        double value;        // snapped label
        bool in_interval;    // value lies inside a ContinuousInterval
    };

    std::optional<Locator> locate(double t) const;
    double seg_min(std::size_t i) const;
    double seg_max(std::size_t i) const;
    double first_point_of(std::size_t seg) const;
    double last_point_of(std::size_t seg) const;
    /// Distinct representable members of a geometric family, limit excluded.
    const std::vector<double>& geo_points(std::size_t seg) const;

    std::vector<Segment> segments_;
    std::vector<std::vector<double>> geo_cache_; // per segment, built once
    double inf_ = 0.0;
    double sup_ = 0.0;
};

/// Membership tolerance at magnitude |p|.
inline double membership_tolerance(double p) {
    double m = p < 0 ? -p : p;
    return kMembershipTol * (m > 1.0 ? m : 1.0);
}

} // namespace tscal
