#include "tscal/calculus.hpp"

#include "tscal/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <variant>

namespace tscal {

namespace detail {

double quadrature(const std::function<double(double)>& f, double lo, double hi) {
    if (lo == hi) return 0.0;
    double err = 0.0;
    double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, lo, hi, 12, 1e-12, &err);
    if (err > std::max(kQuadAbsTol, kQuadRelTol * std::abs(val)))
        throw QuadratureFailure("quadrature error estimate " + std::to_string(err) +
                                " exceeds tolerance on a continuous segment");
    return val;
}

} // namespace detail

std::vector<double> delta_integral(const TimeScale& ts, const GridFunction& f,
                                   double a, double b) {
    const auto plan = ts.walk_plan(a, b);
    const std::size_t n = f.dimension;
    std::vector<detail::NeumaierSum> scattered(n);
    std::vector<double> dense(n, 0.0);

    for (const auto& ev : plan.events) {
        if (const auto* sc = std::get_if<ScatteredEvent>(&ev)) {
            const double w = sc->sigma - sc->t;
            const auto v = f(sc->t);
            for (std::size_t j = 0; j < n; ++j) scattered[j].add(v[j] * w);
        } else {
            const auto& de = std::get<DenseEvent>(ev);
            for (std::size_t j = 0; j < n; ++j)
                dense[j] += detail::quadrature(
                    [&](double t) { return f(t)[j]; }, de.lo, de.hi);
        }
    }

    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = scattered[j].value() + dense[j];
    return out;
}

double delta_integral_scalar(const TimeScale& ts,
                             const std::function<double(double)>& f,
                             double a, double b) {
    return delta_integral(ts, GridFunction::scalar(f), a, b)[0];
}

namespace {

// Largest materialized point strictly below a condensation limit.
double point_below_limit(const TimeScale& ts, double limit) {
    return ts.floor_point(limit, /*exclude_limits=*/true);
}

} // namespace

DeltaDerivative delta_derivative(const TimeScale& ts, const GridFunction& f,
                                 double t) {
    const double v = ts.snap(t);
    const double sig = ts.sigma(v);
    const std::size_t n = f.dimension;

    if (sig > v) {
        const double mu = sig - v;
        const auto fs = f(sig);
        const auto fv = f(v);
        std::vector<double> val(n);
        for (std::size_t j = 0; j < n; ++j) val[j] = (fs[j] - fv[j]) / mu;
        return {std::move(val), mu, true};
    }

    // right-dense, or the maximum by the sup convention
    if (v == ts.sup() && ts.rho(v) < v)
        throw KappaViolation("Delta-derivative undefined at a left-scattered maximum");

    // locate a continuous run around v
    const ContinuousInterval* run = nullptr;
    for (const auto& seg : ts.segments()) {
        if (const auto* c = std::get_if<ContinuousInterval>(&seg))
            if (c->a <= v && v <= c->b) { run = c; break; }
    }

    std::vector<double> val(n);
    if (run) {
        double h = std::max(1e-6, 1e-6 * std::abs(v));
        const double room_r = run->b - v;
        const double room_l = v - run->a;
        if (room_r >= h && room_l >= h) {
            const auto fp = f(v + h), fm = f(v - h);
            for (std::size_t j = 0; j < n; ++j) val[j] = (fp[j] - fm[j]) / (2 * h);
        } else if (room_r >= room_l) {
            h = std::min(h, room_r / 2);
            const auto f0 = f(v), f1 = f(v + h), f2 = f(v + 2 * h);
            for (std::size_t j = 0; j < n; ++j)
                val[j] = (-3 * f0[j] + 4 * f1[j] - f2[j]) / (2 * h);
        } else {
            h = std::min(h, room_l / 2);
            const auto f0 = f(v), f1 = f(v - h), f2 = f(v - 2 * h);
            for (std::size_t j = 0; j < n; ++j)
                val[j] = (3 * f0[j] - 4 * f1[j] + f2[j]) / (2 * h);
        }
        return {std::move(val), h, false};
    }

    // left-dense maximum of a point family (condensation limit): backward
    // quotient to the nearest materialized point
    const double prev = point_below_limit(ts, v);
    const auto fv = f(v);
    const auto fp = f(prev);
    const double h = v - prev;
    for (std::size_t j = 0; j < n; ++j) val[j] = (fv[j] - fp[j]) / h;
    return {std::move(val), h, false};
}

double exp_function(const TimeScale& ts, const GridFunction& p, double t,
                    double t0) {
    if (p.dimension != 1)
        throw std::invalid_argument("exp_function needs a scalar coefficient");
    const double sa = ts.snap(t0);
    const double sb = ts.snap(t);
    if (sb < sa) return 1.0 / exp_function(ts, p, t0, t);

    const auto plan = ts.walk_plan(sa, sb);
    double y = 1.0;
    for (const auto& ev : plan.events) {
        if (const auto* sc = std::get_if<ScatteredEvent>(&ev)) {
            const double mu = sc->sigma - sc->t;
            const double pv = p(sc->t)[0];
            if (std::abs(1.0 + mu * pv) <= 1e-14)
                throw NotRegressive("1 + mu*p vanishes at t = " + std::to_string(sc->t));
            y = scattered_linear_step(y, mu, pv);
        } else {
            const auto& de = std::get<DenseEvent>(ev);
            y *= std::exp(detail::quadrature([&](double u) { return p(u)[0]; },
                                             de.lo, de.hi));
        }
    }
    return y;
}

} // namespace tscal
