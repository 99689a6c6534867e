#include <doctest.h>

#include "test_support.hpp"

#include "tscal/calculus.hpp"
#include "tscal/errors.hpp"

#include <cmath>

using namespace tscal;

namespace {

// Alternating sign of the condensation-scale study, via the rounded index.
GridFunction alternating(double q) {
    const double lq = std::log(q);
    return GridFunction::scalar([lq](double t) {
        const long k = std::lround(-std::log1p(-t) / lq);
        return (k % 2 == 0) ? 1.0 : -1.0;
    });
}

// Independent scattered-sum oracle: ascending Neumaier summation of
// f(t) * mu(t) over the materialized points, same order as the library.
double scattered_sum_oracle(const TimeScale& ts,
                            const std::function<double(double)>& f, double a,
                            double b) {
    double s = 0.0, c = 0.0;
    const auto runs = ts.points_between(a, b);
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
        const double mu = runs[i + 1].lo - runs[i].lo;
        const double x = f(runs[i].lo) * mu;
        const double t = s + x;
        if (std::abs(s) >= std::abs(x)) c += (s - t) + x;
        else c += (x - t) + s;
        s = t;
    }
    return s + c;
}

} // namespace

TEST_CASE("delta integral telescopes to the interval length") {
    const auto geo = TimeScale::geometric(2.0, 40);
    const auto one = GridFunction::scalar([](double) { return 1.0; });
    CHECK(delta_integral(geo, one, 0.0, 1.0)[0] == 1.0);

    const auto geo18 = TimeScale::geometric(1.8, 40);
    const double b = geo18.floor_point(1.0, true);
    CHECK(delta_integral(geo18, one, 0.0, b)[0] == doctest::Approx(b).epsilon(1e-14));

    const TimeScale mixed({ExplicitPoints{{0.0, 1.0}}, ContinuousInterval{2.0, 3.0}});
    CHECK(delta_integral(mixed, one, 0.0, 3.0)[0] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("delta integral of the alternating function") {
    const auto geo = TimeScale::geometric(2.0, 64);
    // 1 * (1/2) + (-1) * (1/4)
    CHECK(delta_integral(geo, alternating(2.0), 0.0, 0.75)[0] == 0.25);
}

TEST_CASE("delta integral on a uniform grid is the plain sum") {
    const auto grid = TimeScale::uniform(0.0, 1.0, 4);
    const auto f = GridFunction::scalar([](double t) { return t; });
    CHECK(delta_integral(grid, f, 0.0, 3.0)[0] == 3.0); // 0 + 1 + 2
}

TEST_CASE("purely isolated scales match the brute-force sum bit for bit") {
    std::mt19937_64 rng(7041);
    for (int trial = 0; trial < 25; ++trial) {
        const auto ts = tst::random_isolated_scale(rng);
        const auto f = tst::random_smooth(rng);
        const double a = ts.inf();
        const double b = ts.floor_point(ts.sup(), true);
        const double lib = delta_integral(ts, GridFunction::scalar(f), a, b)[0];
        const double oracle = scattered_sum_oracle(ts, f, a, b);
        CHECK(lib == oracle);
    }
}

TEST_CASE("delta integral is additive and measures interval length") {
    std::mt19937_64 rng(99);
    const auto one = GridFunction::scalar([](double) { return 1.0; });
    for (int trial = 0; trial < 20; ++trial) {
        const auto ts = tst::random_scale(rng);
        const auto f = GridFunction::scalar(tst::random_smooth(rng));
        const auto pts = tst::probe_points(ts, ts.inf(), ts.sup());
        if (pts.size() < 3) continue;
        const double a = pts.front();
        const double m = ts.snap(pts[pts.size() / 2]);
        const double b = pts.back();
        const double whole = delta_integral(ts, f, a, b)[0];
        const double split =
            delta_integral(ts, f, a, m)[0] + delta_integral(ts, f, m, b)[0];
        CHECK(whole == doctest::Approx(split).epsilon(1e-10));
        CHECK(delta_integral(ts, one, a, b)[0] ==
              doctest::Approx(b - a).epsilon(1e-12));
    }
}

TEST_CASE("quadrature on continuous segments") {
    const auto iv = TimeScale::interval(0.0, 1.0);
    const auto f = GridFunction::scalar([](double t) { return t * t; });
    CHECK(delta_integral(iv, f, 0.0, 1.0)[0] ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // integrable singularity defeats the error tolerance
    const auto bad = GridFunction::scalar(
        [](double t) { return std::pow(std::abs(t - 0.318309886), -0.95); });
    CHECK_THROWS_AS((void)delta_integral(iv, bad, 0.0, 1.0), QuadratureFailure);
}

TEST_CASE("delta derivative: difference quotients and dense estimates") {
    const auto geo = TimeScale::geometric(2.0, 32);
    const auto sq = GridFunction::scalar([](double t) { return t * t; });
    const auto d0 = delta_derivative(geo, sq, 0.0);
    CHECK(d0.value[0] == 0.5); // (f(1/2) - f(0)) / (1/2)
    CHECK(d0.exact);

    const auto iv = TimeScale::interval(0.0, 1.0);
    const auto d1 = delta_derivative(iv, sq, 0.5);
    CHECK(d1.value[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(d1.exact);
    CHECK(d1.step > 0.0);

    // one-sided at the left endpoint
    const auto d2 = delta_derivative(iv, sq, 0.0);
    CHECK(d2.value[0] == doctest::Approx(0.0).epsilon(1e-8));

    // left-scattered maximum is outside T^kappa
    const auto grid = TimeScale::uniform(0.0, 1.0, 3);
    CHECK_THROWS_AS((void)delta_derivative(grid, sq, 2.0), KappaViolation);
}

TEST_CASE("delta derivative of e_p recovers p * e_p") {
    const auto geo = TimeScale::geometric(2.0, 32);
    const double p = 0.7;
    const auto pf = GridFunction::scalar([=](double) { return p; });
    const auto ef =
        GridFunction::scalar([&](double t) { return exp_function(geo, pf, t, 0.0); });
    for (int n = 0; n < 10; ++n) {
        const double t = 1.0 - std::pow(2.0, -n);
        const auto d = delta_derivative(geo, ef, t);
        const double expected = p * exp_function(geo, pf, t, 0.0);
        CHECK(d.value[0] == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("simple useful formula f(sigma) = f + mu f^D") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ts = tst::random_scale(rng);
        const auto fn = tst::random_smooth(rng);
        const auto f = GridFunction::scalar(fn);
        for (double t : tst::probe_points(ts, ts.inf(), ts.sup())) {
            if (t == ts.sup() && ts.rho(t) < t) continue; // outside T^kappa
            const double mu = ts.mu(t);
            if (mu == 0.0) continue;
            const auto d = delta_derivative(ts, f, t);
            const double resid =
                std::abs(fn(ts.sigma(t)) - fn(t) - mu * d.value[0]);
            CHECK(resid <= 1e-9 * mu + 1e-15);
        }
    }
}

TEST_CASE("exp_function closed forms") {
    const auto geo = TimeScale::geometric(2.0, 48);
    const double p = 0.8;
    const auto pf = GridFunction::scalar([=](double) { return p; });
    for (int k = 1; k <= 20; ++k) {
        long double prod = 1.0L;
        for (int i = 0; i < k; ++i)
            prod *= 1.0L + static_cast<long double>(p) * (2.0L - 1.0L) /
                               std::pow(2.0L, i + 1);
        const double t = 1.0 - std::pow(2.0, -k);
        CHECK(exp_function(geo, pf, t, 0.0) ==
              doctest::Approx(static_cast<double>(prod)).epsilon(1e-13));
    }

    const auto grid = TimeScale::uniform(0.0, 0.5, 9);
    CHECK(exp_function(grid, GridFunction::scalar([](double) { return 0.3; }), 2.0,
                       0.0) == doctest::Approx(std::pow(1.15, 4)).epsilon(1e-13));

    const auto iv = TimeScale::interval(0.0, 2.0);
    CHECK(exp_function(iv, pf, 1.5, 0.0) ==
          doctest::Approx(std::exp(p * 1.5)).epsilon(1e-9));
}

TEST_CASE("exp_function basics and regressivity") {
    const auto geo = TimeScale::geometric(1.8, 32);
    const auto zero = GridFunction::scalar([](double) { return 0.0; });
    for (int n = 0; n < 10; ++n)
        CHECK(exp_function(geo, zero, 1.0 - std::pow(1.8, -n), 0.0) == 1.0);

    // 1 + mu p = 0 on the unit grid with p = -1
    const auto grid = TimeScale::uniform(0.0, 1.0, 5);
    const auto bad = GridFunction::scalar([](double) { return -1.0; });
    CHECK_THROWS_AS((void)exp_function(grid, bad, 4.0, 0.0), NotRegressive);

    // reciprocal for reversed endpoints
    const auto pf = GridFunction::scalar([](double) { return 0.5; });
    const double fwd = exp_function(grid, pf, 3.0, 1.0);
    CHECK(exp_function(grid, pf, 1.0, 3.0) == 1.0 / fwd);
}

TEST_CASE("exp_function satisfies the forward step identity exactly") {
    const auto geo = TimeScale::geometric(1.8, 24);
    const auto pf = GridFunction::scalar([](double t) { return 0.3 + t; });
    for (int n = 0; n < 15; ++n) {
        const double t = geo.snap(1.0 - std::pow(1.8, -n));
        const double sig = geo.sigma(t);
        const double here = exp_function(geo, pf, t, 0.0);
        const double there = exp_function(geo, pf, sig, 0.0);
        CHECK(there == scattered_linear_step(here, sig - t, 0.3 + t));
    }
}
