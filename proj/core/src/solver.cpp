#include "tscal/solver.hpp"

#include "tscal/calculus.hpp"
#include "tscal/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <variant>

namespace tscal {

DynamicSystem DynamicSystem::from_field(const VectorField& field, double epsilon,
                                        double t0, Vec x0,
                                        std::optional<Box> domain) {
    DynamicSystem sys;
    sys.dimension = field.dimension;
    sys.rhs = field.eval;
    sys.epsilon = epsilon;
    sys.t0 = t0;
    sys.x0 = std::move(x0);
    sys.domain = std::move(domain);
    if (field.bound > 0) sys.bound = field.bound;
    return sys;
}

DynamicSystem DynamicSystem::from_averaged(const AveragedField& avg,
                                           double epsilon, double t0, Vec x0,
                                           std::optional<Box> domain) {
    DynamicSystem sys;
    sys.dimension = avg.dimension();
    sys.rhs = [avg](double t, const Vec& x) { return avg.value(t, x); };
    sys.epsilon = epsilon;
    sys.t0 = t0;
    sys.x0 = std::move(x0);
    sys.domain = std::move(domain);
    return sys;
}

namespace {

Vec eval_rhs(const DynamicSystem& sys, double t, const Vec& x) {
    try {
        return sys.rhs(t, x);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw FieldEvaluationFailure("right-hand side failed at t = " +
                                     std::to_string(t) + ": " + e.what());
    }
}

void integrate_dense(const DynamicSystem& sys, Vec& x, double lo, double hi) {
    namespace ode = boost::numeric::odeint;
    auto system = [&](const Vec& y, Vec& dydt, double t) {
        const Vec f = eval_rhs(sys, t, y);
        dydt.resize(f.size());
        for (std::size_t j = 0; j < f.size(); ++j) dydt[j] = sys.epsilon * f[j];
    };
    // contractual tolerance is 1e-10; the controller is run tighter so the
    // cross-checks against exp_function hold with margin
    auto stepper =
        ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<Vec>());
    ode::integrate_adaptive(stepper, system, x, lo, hi, (hi - lo) / 16.0);
}

} // namespace

Trajectory solve(const DynamicSystem& sys, const TimeScale& ts,
                 double horizon_end, std::optional<double> requested_end) {
    const double start = ts.snap(sys.t0);
    const double end = ts.snap(horizon_end);
    if (end < start)
        throw EmptyInterval("solve: horizon_end precedes t0");
    if (!(sys.epsilon >= 0))
        throw std::invalid_argument("solve: epsilon must be nonnegative");
    if (sys.domain && !sys.domain->contains(sys.x0))
        throw std::invalid_argument("solve: x0 lies outside the domain box");

    Trajectory traj;
    Vec x = sys.x0;
    traj.samples.push_back({start, x, true});

    const auto plan = ts.walk_plan(start, end);
    for (const auto& ev : plan.events) {
        if (const auto* sc = std::get_if<ScatteredEvent>(&ev)) {
            if (sc->sigma_is_limit) {
                // stop short of the condensation point; report the tail
                traj.status = TerminalStatus::horizon_reached;
                if (sys.bound)
                    traj.tail_bound = sys.epsilon * *sys.bound * (sc->sigma - sc->t);
                return traj;
            }
            const double w = sc->sigma - sc->t;
            const Vec f = eval_rhs(sys, sc->t, x);
            for (std::size_t j = 0; j < x.size(); ++j)
                x[j] = x[j] + w * (sys.epsilon * f[j]);
            traj.samples.push_back({sc->sigma, x, true});
        } else {
            const auto& de = std::get<DenseEvent>(ev);
            integrate_dense(sys, x, de.lo, de.hi);
            traj.samples.push_back({de.hi, x, false});
        }
        if (sys.domain && !sys.domain->contains(x)) {
            traj.status = TerminalStatus::left_domain;
            return traj;
        }
    }

    if (requested_end && *requested_end > end + membership_tolerance(end))
        traj.status = TerminalStatus::horizon_reached;
    return traj;
}

double product_solution_linear(const TimeScale& ts,
                               const std::function<double(std::size_t)>& p_of_i,
                               double y0, std::size_t steps) {
    double t = ts.inf();
    double y = y0;
    for (std::size_t i = 0; i < steps; ++i) {
        const double sig = ts.sigma(t);
        if (sig == t)
            throw NotIsolated("dense point reached at step " + std::to_string(i));
        const double mu = sig - t;
        y = scattered_linear_step(y, mu, p_of_i(i));
        t = sig;
    }
    return y;
}

ProximityReport compare_trajectories(const Trajectory& a, const Trajectory& b) {
    if (a.samples.size() != b.samples.size())
        throw GridMismatch("trajectories have different sample counts");
    ProximityReport rep;
    rep.diffs.reserve(a.samples.size());
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        const auto& sa = a.samples[k];
        const auto& sb = b.samples[k];
        if (sa.t != sb.t)
            throw GridMismatch("trajectory grids differ at sample " +
                               std::to_string(k));
        if (sa.x.size() != sb.x.size())
            throw GridMismatch("trajectory dimensions differ");
        const double d = norm_inf_diff(sa.x, sb.x);
        rep.diffs.push_back(d);
        if (d > rep.max_diff) {
            rep.max_diff = d;
            rep.argmax_t = sa.t;
            rep.argmax_index = k;
        }
    }
    return rep;
}

double horizon_for(double epsilon, double L, const TimeScale& ts, double t0) {
    if (!(L > 0)) throw NonPositiveParameter("horizon_for needs L > 0");
    if (epsilon < 0) throw NonPositiveParameter("horizon_for needs epsilon >= 0");
    const double start = ts.snap(t0);
    double target = ts.sup();
    if (epsilon > 0) target = std::min(target, t0 + L / epsilon);
    const double p = ts.floor_point(target, /*exclude_limits=*/true);
    if (p < start) throw EmptyHorizon("no admissible scale point in the horizon");
    return p;
}

} // namespace tscal
