#pragma once

#include "tscal/grid_function.hpp"
#include "tscal/timescale.hpp"

#include <functional>
#include <vector>

namespace tscal {

/// Quadrature tolerances for continuous sub-segments.  Kept far below the
/// proximity bounds exercised by the averaging experiments.
inline constexpr double kQuadAbsTol = 1e-10;
inline constexpr double kQuadRelTol = 1e-10;

/// Definite Delta-integral of f over [a, b]_T: the sum of f(t) mu(t) over
/// right-scattered t in [a, b) plus Riemann integrals over continuous
/// runs.  Scattered terms are accumulated in ascending order with
/// compensated (Neumaier) summation.
std::vector<double> delta_integral(const TimeScale& ts, const GridFunction& f,
                                   double a, double b);

double delta_integral_scalar(const TimeScale& ts,
                             const std::function<double(double)>& f,
                             double a, double b);

struct DeltaDerivative {
    std::vector<double> value;
    double step;   // graininess at a scattered point, FD step at a dense one
    bool exact;    // true for the difference quotient across a jump
};

/// Numeric Delta-derivative at t in T^kappa: the exact difference quotient
/// (f(sigma(t)) - f(t)) / mu(t) at right-scattered points, a finite
/// difference estimate at dense points.
DeltaDerivative delta_derivative(const TimeScale& ts, const GridFunction& f,
                                 double t);

/// Time-scale exponential e_p(t, t0): unique solution of y^D = p(t) y,
/// y(t0) = 1.  Product of (1 + mu p) factors over scattered runs, exp of
/// the integral of p over continuous runs.  Requires p scalar and
/// regressive on the path.
double exp_function(const TimeScale& ts, const GridFunction& p, double t,
                    double t0);

/// Canonical forward step for scalar linear problems at a scattered point.
/// exp_function, the solver and the product oracle all step through this
/// exact expression, so the step identity holds bitwise.
inline double scattered_linear_step(double y, double mu, double p) {
    return y + mu * (p * y);
}

namespace detail {

/// Compensated (Neumaier) accumulator; the summation order is part of the
/// library contract for scattered sums.
struct NeumaierSum {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        double t = s + x;
        if ((s >= 0 ? s : -s) >= (x >= 0 ? x : -x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

/// Adaptive Gauss-Kronrod quadrature of a scalar integrand; throws
/// QuadratureFailure when the error estimate exceeds the tolerances.
double quadrature(const std::function<double(double)>& f, double lo, double hi);

} // namespace detail

} // namespace tscal
