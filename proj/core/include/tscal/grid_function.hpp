#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace tscal {

/// A function defined on (at least) the points of a time scale, with
/// values in R^n.  Assumed rd-continuous on continuous segments; this is
/// only ever checked by sampling.
struct GridFunction {
    std::size_t dimension = 1;
    std::function<std::vector<double>(double)> eval;

    std::vector<double> operator()(double t) const { return eval(t); }

    static GridFunction scalar(std::function<double(double)> f) {
        return GridFunction{1, [f = std::move(f)](double t) {
                                return std::vector<double>{f(t)};
                            }};
    }

    static GridFunction constant(std::vector<double> value) {
        auto n = value.size();
        return GridFunction{n, [v = std::move(value)](double) { return v; }};
    }
};

} // namespace tscal
