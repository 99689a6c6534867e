#include <doctest.h>

#include "test_support.hpp"

#include "tscal/calculus.hpp"
#include "tscal/errors.hpp"
#include "tscal/shift.hpp"

#include <cmath>

using namespace tscal;

namespace {

GridFunction alternating_slice(double q, double x) {
    const double lq = std::log(q);
    return GridFunction::scalar([lq, x](double t) {
        const long k = std::lround(-std::log1p(-t) / lq);
        return (k % 2 == 0) ? x : -x;
    });
}

GridFunction inv_one_minus_t() {
    return GridFunction::scalar([](double t) { return 1.0 / (1.0 - t); });
}

} // namespace

TEST_CASE("forward shift closed forms") {
    const auto geo = TimeScale::geometric(2.0, 48);
    const auto op = ShiftOperator::geometric(2.0);
    CHECK(op.forward(geo, 2.0, 0.0) == 0.75); // (q^T + t - 1)/q^T
    for (int n = 0; n < 12; ++n) {
        const double t = geo.snap(1.0 - std::pow(2.0, -n));
        const double img = op.forward(geo, 3.0, t);
        CHECK(img == doctest::Approx((8.0 + t - 1.0) / 8.0).epsilon(1e-15));
    }

    const auto grid = TimeScale::uniform(0.0, 1.0, 30);
    const auto add = ShiftOperator::additive();
    CHECK(add.forward(grid, 7.0, 4.0) == 11.0);

    // non-integer shift size leaves the geometric scale
    CHECK_THROWS_AS((void)op.forward(geo, 1.5, 0.0), ShiftLeavesScale);
    // the condensation point is reachable only from itself
    CHECK(op.forward(geo, 2.0, 1.0) == 1.0);
}

TEST_CASE("shift Delta-derivative") {
    const auto geo = TimeScale::geometric(2.0, 48);
    const auto op = ShiftOperator::geometric(2.0);
    CHECK(op.delta_derivative(geo, 2.0, 0.5) == 0.25); // q^{-T}
    CHECK(op.delta_derivative(geo, 1.0, 0.0) == 0.5);

    const auto grid = TimeScale::uniform(0.0, 1.0, 30);
    CHECK(ShiftOperator::additive().delta_derivative(grid, 5.0, 3.0) == 1.0);

    const auto bad = ShiftOperator::from_functions(
        [](double, double t) { return t; }, [](double, double t) { return t; },
        [](double, double) { return -1.0; }, 0.0, 1.0);
    CHECK_THROWS_AS((void)bad.delta_derivative(geo, 1.0, 0.0),
                    NonPositiveDerivative);
}

TEST_CASE("iterated shifts") {
    const auto geo = TimeScale::geometric(2.0, 20);
    const auto op = ShiftOperator::geometric(2.0);
    CHECK(op.iterate(geo, 2.0, 0.0, 0) == 0.0);
    CHECK(op.iterate(geo, 2.0, 0.0, 1) == 0.75);
    CHECK(op.iterate(geo, 2.0, 0.0, 2) == 0.9375);

    const auto grid = TimeScale::uniform(0.0, 1.0, 50);
    const auto add = ShiftOperator::additive();
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(add.iterate(grid, 3.0, 2.0, i) == 2.0 + 3.0 * static_cast<double>(i));

    try {
        (void)op.iterate(geo, 2.0, 0.0, 40); // runs past n_max = 20
        FAIL("iterate should leave the scale");
    } catch (const ShiftLeavesScale& e) {
        CHECK(e.iteration() > 0);
    }
}

TEST_CASE("shift inverse pair and monotonicity") {
    const auto geo = TimeScale::geometric(1.8, 30);
    const auto op = ShiftOperator::geometric(1.8);
    double prev_img = -1.0;
    for (int n = 0; n < 20; ++n) {
        const double t = geo.snap(1.0 - std::pow(1.8, -n));
        const double img = op.forward(geo, 2.0, t);
        CHECK(op.backward(geo, 2.0, img) == t);
        CHECK(img > prev_img);
        prev_img = img;
    }
    const auto grid = TimeScale::uniform(0.0, 0.5, 40);
    const auto add = ShiftOperator::additive();
    for (double t : {2.0, 3.5, 6.0}) { // backward must stay on the scale
        CHECK(add.backward(grid, 2.0, add.forward(grid, 2.0, t)) == t);
        CHECK(add.forward(grid, 2.0, add.backward(grid, 2.0, t)) == t);
    }
    // backward off the left end is out of the domain
    CHECK_THROWS_AS((void)add.backward(grid, 2.0, 0.5), ShiftLeavesScale);
}

TEST_CASE("custom table shifts") {
    const auto geo = TimeScale::geometric(2.0, 24);
    std::vector<std::pair<double, double>> pairs;
    for (int n = 0; n + 2 <= 24; ++n) {
        const double t = geo.snap(1.0 - std::pow(2.0, -n));
        pairs.emplace_back(t, geo.snap(1.0 - std::pow(2.0, -(n + 2))));
    }
    const auto op = ShiftOperator::custom_table(pairs, 2.0);
    CHECK(op.forward(geo, 2.0, 0.0) == 0.75);
    CHECK(op.backward(geo, 2.0, 0.75) == 0.0);
    CHECK_THROWS_AS((void)op.forward(geo, 1.0, 0.0), ShiftLeavesScale);
    // numeric Delta-derivative from the table
    CHECK(op.delta_derivative(geo, 2.0, 0.0) ==
          doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("delta-periodic verification") {
    const auto geo = TimeScale::geometric(2.0, 48);
    const auto op = ShiftOperator::geometric(2.0);
    const SampleWindow w{0.0, geo.sup(), 64};

    const auto cert = verify_delta_periodic(geo, op, inv_one_minus_t(), 1.0, w);
    CHECK(cert.kind == PeriodicityKind::delta_periodic);
    CHECK(cert.gamma == 1.0);
    CHECK(cert.max_residual <= 1e-12);
    CHECK(cert.sample_count > 30);

    // periodic sequence on a uniform grid, additive shifts
    const auto grid = TimeScale::uniform(0.0, 1.0, 40);
    const auto add = ShiftOperator::additive();
    const auto seq = GridFunction::scalar([](double t) {
        return (static_cast<long>(std::lround(t)) % 2 == 0) ? 1.3 : -0.7;
    });
    const auto cert2 = verify_delta_periodic(
        grid, add, seq, 2.0, SampleWindow{0.0, 39.0, 8});
    CHECK(cert2.kind == PeriodicityKind::delta_periodic);
    CHECK(cert2.max_residual == 0.0);

    // constant functions are not delta-periodic on the condensation scale
    const auto one = GridFunction::scalar([](double) { return 1.0; });
    const auto cert3 = verify_delta_periodic(geo, op, one, 2.0, w);
    CHECK(cert3.kind == PeriodicityKind::none);
    CHECK(cert3.max_residual == doctest::Approx(1.0 - 0.25).epsilon(1e-14));

    // the backward identity holds as well when requested (window kept
    // clear of the left end so delta_- stays on the scale)
    const SampleWindow inner{geo.snap(1.0 - std::pow(2.0, -2)),
                             geo.snap(1.0 - std::pow(2.0, -12)), 8};
    const auto cert4 = verify_delta_periodic(geo, op, inv_one_minus_t(), 1.0,
                                             inner, kVerifyTol,
                                             /*check_backward=*/true);
    CHECK(cert4.kind == PeriodicityKind::delta_periodic);
    CHECK(cert4.max_residual <= 1e-10);
}

TEST_CASE("quasiperiodic verification and the factor gamma") {
    const auto geo = TimeScale::geometric(2.0, 48);
    const auto op = ShiftOperator::geometric(2.0);
    const SampleWindow w{0.0, geo.sup(), 64};

    const auto cert = verify_quasiperiodic(geo, op, alternating_slice(2.0, 1.0),
                                           2.0, w);
    CHECK(cert.kind == PeriodicityKind::quasi_periodic);
    CHECK(cert.gamma == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(cert.max_residual <= 1e-12);

    // odd period carries a negative factor
    const auto certodd = verify_quasiperiodic(geo, op, alternating_slice(2.0, 1.0),
                                              1.0, w);
    CHECK(certodd.gamma == doctest::Approx(-0.5).epsilon(1e-14));

    // a delta-periodic function is quasiperiodic with gamma = 1
    const auto certdp = verify_quasiperiodic(geo, op, inv_one_minus_t(), 1.0, w);
    CHECK(certdp.kind == PeriodicityKind::quasi_periodic);
    CHECK(certdp.gamma == doctest::Approx(1.0).epsilon(1e-10));

    // constant f: the ratio is exactly the shift derivative
    const auto one = GridFunction::scalar([](double) { return 1.0; });
    const auto certc = verify_quasiperiodic(geo, op, one, 3.0, w);
    CHECK(certc.kind == PeriodicityKind::quasi_periodic);
    CHECK(certc.gamma == doctest::Approx(std::pow(2.0, -3.0)).epsilon(1e-14));

    const auto zero = GridFunction::scalar([](double) { return 0.0; });
    CHECK_THROWS_AS((void)verify_quasiperiodic(geo, op, zero, 2.0, w),
                    DegenerateFunction);
}

TEST_CASE("substitution rule") {
    // identity map, purely discrete scale: both sides are the same sums
    const auto grid = TimeScale::uniform(0.0, 1.0, 12);
    const auto g = GridFunction::scalar([](double t) { return 0.3 * t * t - t; });
    CHECK(substitution_rule_check(grid, MonotoneMap::identity(), g, 0.0, 11.0) ==
          0.0);

    // nu(t) = 2t on the unit grid, enumerable by hand
    MonotoneMap doubling{[](double t) { return 2.0 * t; }, nullptr};
    const auto id = GridFunction::scalar([](double t) { return t; });
    CHECK(substitution_rule_check(grid, doubling, id, 0.0, 2.0) == 0.0);

    // forward shift on the condensation scale
    const auto geo = TimeScale::geometric(2.0, 40);
    const auto op = ShiftOperator::geometric(2.0);
    const auto nu = MonotoneMap::from_shift(op, geo, 2.0);
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 10; ++trial) {
        const auto fn = tst::random_smooth(rng);
        const double b = geo.snap(1.0 - std::pow(2.0, -20));
        CHECK(substitution_rule_check(geo, nu, GridFunction::scalar(fn), 0.0, b) <=
              1e-10);
    }

    // mixed scale with a dense run, identity map goes through bisection
    const TimeScale mixed({ExplicitPoints{{0.0, 0.5}}, ContinuousInterval{1.0, 2.0}});
    CHECK(substitution_rule_check(mixed, MonotoneMap::identity(), g, 0.0, 2.0) <=
          1e-12);

    MonotoneMap backwards{[](double t) { return -t; }, nullptr};
    CHECK_THROWS_AS((void)substitution_rule_check(grid, backwards, g, 0.0, 5.0),
                    NotMonotone);
}

TEST_CASE("shifted integral invariance") {
    const auto geo = TimeScale::geometric(2.0, 48);
    const auto op = ShiftOperator::geometric(2.0);

    // Shifted-integral identity with gamma = 1 for f = 1/(1-t), T = 1
    const double t_end = geo.snap(1.0 - std::pow(2.0, -10));
    CHECK(periodic_integral_invariance_check(geo, op, inv_one_minus_t(), 1.0, 1.0,
                                             0.0, t_end) <= 1e-10);

    // Alternating field at x = 1, T = 2, gamma = 1/4; both sides are finite
    // scattered sums, frozen here
    const auto X = alternating_slice(2.0, 1.0);
    CHECK(delta_integral(geo, X, 0.0, 0.75)[0] == 0.25);
    CHECK(delta_integral(geo, X, 0.75, 0.9375)[0] == 0.0625);
    CHECK(periodic_integral_invariance_check(geo, op, X, 2.0, 0.25, 0.0, 0.75) <=
          1e-12);

    // zero function: both sides vanish
    const auto zero = GridFunction::scalar([](double) { return 0.0; });
    CHECK(periodic_integral_invariance_check(geo, op, zero, 2.0, 0.7, 0.0, t_end) ==
          0.0);

    // gamma = 1 case agrees with the quasiperiodic route
    const double r_gamma1 =
        periodic_integral_invariance_check(geo, op, inv_one_minus_t(), 1.0, 1.0,
                                           0.0, t_end);
    const auto certdp = verify_quasiperiodic(geo, op, inv_one_minus_t(), 1.0,
                                             SampleWindow{0.0, geo.sup(), 64});
    const double r_certified = periodic_integral_invariance_check(
        geo, op, inv_one_minus_t(), 1.0, certdp.gamma, 0.0, t_end);
    CHECK(std::abs(r_gamma1 - r_certified) <= 1e-10);
}

TEST_CASE("shift interval lengths on the geometric scale") {
    for (double q : {2.0, 3.0}) {
        const auto geo = TimeScale::geometric(q, 40);
        const auto op = ShiftOperator::geometric(q);
        const double T = 2.0;
        double prev = 1e300;
        for (std::size_t i = 0; i < 8; ++i) {
            const auto gap = op.analytic_gap(T, 0.0, i);
            REQUIRE(gap.has_value());
            const double expected =
                (std::pow(q, T) - 1.0) / std::pow(q, T * (i + 1.0));
            CHECK(*gap == doctest::Approx(expected).epsilon(1e-14));
            // matches the label walk in the representable regime
            const double lo = op.iterate(geo, T, 0.0, i);
            const double hi = op.iterate(geo, T, 0.0, i + 1);
            CHECK(hi - lo == doctest::Approx(*gap).epsilon(1e-12));
            CHECK(*gap < prev);
            prev = *gap;
        }
        CHECK(prev <= (std::pow(q, T) - 1.0) / std::pow(q, T));
    }
}
