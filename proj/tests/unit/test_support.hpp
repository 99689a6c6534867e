#pragma once

#include "tscal/timescale.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace tst {

using tscal::ContinuousInterval;
using tscal::ExplicitPoints;
using tscal::GeometricCondensation;
using tscal::Segment;
using tscal::TimeScale;
using tscal::UniformGrid;

// Scales stay within the regime where neighboring points are far apart in
// double precision, so label-based assertions are meaningful.
inline TimeScale random_scale(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> kind(0, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    switch (kind(rng)) {
        case 0: {
            const double q = 1.5 + 1.5 * u(rng);
            return TimeScale::geometric(q, 15 + static_cast<std::size_t>(10 * u(rng)));
        }
        case 1:
            return TimeScale::uniform(-1.0 + 2.0 * u(rng), 0.1 + 0.4 * u(rng),
                                      5 + static_cast<std::size_t>(15 * u(rng)));
        case 2: {
            const double a = -2.0 + u(rng);
            return TimeScale::interval(a, a + 0.5 + 2.0 * u(rng));
        }
        case 3: {
            std::vector<double> pts;
            double t = -1.0 + u(rng);
            const int n = 4 + static_cast<int>(10 * u(rng));
            for (int i = 0; i < n; ++i) {
                pts.push_back(t);
                t += 0.05 + u(rng);
            }
            return TimeScale::points(pts);
        }
        default: {
            std::vector<Segment> segs;
            segs.push_back(UniformGrid{0.0, 0.25 + 0.25 * u(rng), 4});
            const double a = 2.0 + u(rng);
            segs.push_back(ContinuousInterval{a, a + 1.0 + u(rng)});
            segs.push_back(ExplicitPoints{{a + 3.0, a + 3.5, a + 4.25}});
            return TimeScale(segs);
        }
    }
}

inline TimeScale random_isolated_scale(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < 0.5) {
        const double q = 1.5 + 1.5 * u(rng);
        return TimeScale::geometric(q, 12 + static_cast<std::size_t>(12 * u(rng)));
    }
    return TimeScale::uniform(-1.0 + 2.0 * u(rng), 0.05 + 0.4 * u(rng),
                              6 + static_cast<std::size_t>(20 * u(rng)));
}

inline std::function<double(double)> random_smooth(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double a = u(rng), b = u(rng), c = u(rng), w = 1.0 + std::abs(u(rng));
    return [=](double t) { return a + b * std::sin(w * t + c) + 0.3 * c * t; };
}

// Every point of the walk plus midpoints of continuous runs.
inline std::vector<double> probe_points(const TimeScale& ts, double a, double b) {
    std::vector<double> out;
    for (const auto& run : ts.points_between(a, b)) {
        out.push_back(run.lo);
        if (run.dense) {
            out.push_back(0.5 * (run.lo + run.hi));
            out.push_back(run.hi);
        }
    }
    return out;
}

} // namespace tst
