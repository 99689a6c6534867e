#include "tscal/shift.hpp"

#include "tscal/calculus.hpp"
#include "tscal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tscal {

namespace {

std::string num(double v) { return std::to_string(v); }

// Near a condensation point the spacing drops below the membership
// tolerance, and a raw shift image can alias onto a neighbor of its true
// target.  A snapped image is credible only when its distance to the raw
// value is small against the local graininess.
bool image_plausible(const TimeScale& ts, double raw, double image) {
    const double d = std::abs(raw - image);
    if (d == 0.0) return true;
    const double right = ts.sigma(image) - image;
    const double left = image - ts.rho(image);
    double gap;
    if (right > 0 && left > 0) gap = std::min(right, left);
    else if (right > 0) gap = right;
    else if (left > 0) gap = left;
    else return true; // dense neighborhood; membership tolerance governs
    return d <= 0.25 * gap;
}

} // namespace

ShiftOperator ShiftOperator::additive(double t0, double scale_period) {
    ShiftOperator op;
    op.t0_ = t0;
    op.scale_period_ = scale_period;
    op.fwd_ = [t0](double s, double t) { return t + (s - t0); };
    op.bwd_ = [t0](double s, double t) { return t - (s - t0); };
    op.deriv_ = [](double, double) { return 1.0; };
    op.gap_ = [t0](double s, double, std::size_t) { return s - t0; };
    return op;
}

ShiftOperator ShiftOperator::geometric(double q, double t0, double scale_period,
                                       double limit) {
    if (!(q > 1)) throw NonPositiveParameter("geometric shift needs q > 1");
    ShiftOperator op;
    op.t0_ = t0;
    op.scale_period_ = scale_period;
    op.fwd_ = [q, t0, limit](double s, double t) {
        return limit - (limit - t) * std::pow(q, -(s - t0));
    };
    op.bwd_ = [q, t0, limit](double s, double t) {
        return limit - (limit - t) * std::pow(q, s - t0);
    };
    op.deriv_ = [q, t0](double s, double) { return std::pow(q, -(s - t0)); };
    op.gap_ = [q, t0, limit](double s, double start, std::size_t i) {
        const double step = std::pow(q, -(s - t0));
        // delta^(i)(start) = limit - (limit-start) step^i
        return (limit - start) * std::pow(step, static_cast<double>(i)) * (1.0 - step);
    };
    return op;
}

ShiftOperator ShiftOperator::custom_table(std::vector<std::pair<double, double>> pairs,
                                          double period, double t0,
                                          double scale_period) {
    std::sort(pairs.begin(), pairs.end());
    auto lookup = [pairs](double t) -> double {
        auto it = std::lower_bound(pairs.begin(), pairs.end(),
                                   std::make_pair(t, -std::numeric_limits<double>::infinity()));
        double best = std::numeric_limits<double>::quiet_NaN();
        double dist = membership_tolerance(t);
        auto consider = [&](const std::pair<double, double>& e) {
            double d = std::abs(e.first - t);
            if (d <= dist) { dist = d; best = e.second; }
        };
        if (it != pairs.end()) consider(*it);
        if (it != pairs.begin()) consider(*(it - 1));
        return best;
    };
    auto rlookup = [pairs](double u) -> double {
        double best = std::numeric_limits<double>::quiet_NaN();
        double dist = membership_tolerance(u);
        for (const auto& e : pairs) {
            double d = std::abs(e.second - u);
            if (d <= dist) { dist = d; best = e.first; }
        }
        return best;
    };
    ShiftOperator op;
    op.t0_ = t0;
    op.scale_period_ = scale_period;
    op.fwd_ = [lookup, period](double s, double t) {
        if (std::abs(s - period) > membership_tolerance(period))
            return std::numeric_limits<double>::quiet_NaN();
        return lookup(t);
    };
    op.bwd_ = [rlookup, period](double s, double u) {
        if (std::abs(s - period) > membership_tolerance(period))
            return std::numeric_limits<double>::quiet_NaN();
        return rlookup(u);
    };
    return op;
}

ShiftOperator ShiftOperator::from_functions(
    std::function<double(double, double)> forward_raw,
    std::function<double(double, double)> backward_raw,
    std::function<double(double, double)> deriv, double t0, double scale_period) {
    ShiftOperator op;
    op.fwd_ = std::move(forward_raw);
    op.bwd_ = std::move(backward_raw);
    op.deriv_ = std::move(deriv);
    op.t0_ = t0;
    op.scale_period_ = scale_period;
    return op;
}

double ShiftOperator::forward(const TimeScale& ts, double s, double t) const {
    const double v = ts.snap(t);
    const double raw = fwd_(s, v);
    if (!std::isfinite(raw))
        throw ShiftLeavesScale("forward shift (" + num(s) + ", " + num(t) +
                               ") has no admissible image");
    double image;
    try {
        image = ts.snap(raw);
    } catch (const PointNotOnScale&) {
        throw ShiftLeavesScale("forward shift image " + num(raw) +
                               " is not a scale point");
    }
    if (ts.is_condensation_limit(image) && !ts.is_condensation_limit(v))
        throw ShiftLeavesScale("forward shift image falls onto the condensation point");
    if (!image_plausible(ts, raw, image))
        throw ShiftLeavesScale("forward shift image " + num(raw) +
                               " is ambiguous at the scale resolution");
    return image;
}

double ShiftOperator::backward(const TimeScale& ts, double s, double t) const {
    const double v = ts.snap(t);
    const double raw = bwd_(s, v);
    if (!std::isfinite(raw))
        throw ShiftLeavesScale("backward shift (" + num(s) + ", " + num(t) +
                               ") has no admissible image");
    double image;
    try {
        image = ts.snap(raw);
    } catch (const PointNotOnScale&) {
        throw ShiftLeavesScale("backward shift image " + num(raw) +
                               " is not a scale point");
    }
    if (!image_plausible(ts, raw, image))
        throw ShiftLeavesScale("backward shift image " + num(raw) +
                               " is ambiguous at the scale resolution");
    return image;
}

double ShiftOperator::delta_derivative(const TimeScale& ts, double s,
                                       double t) const {
    double d;
    if (deriv_) {
        d = deriv_(s, ts.snap(t));
    } else {
        GridFunction g = GridFunction::scalar(
            [this, &ts, s](double u) { return forward(ts, s, u); });
        d = tscal::delta_derivative(ts, g, t).value[0];
    }
    if (!(d > 0))
        throw NonPositiveDerivative("shift Delta-derivative " + num(d) +
                                    " at t = " + num(t) + " is not positive");
    return d;
}

double ShiftOperator::iterate(const TimeScale& ts, double s, double t,
                              std::size_t count) const {
    double cur = ts.snap(t);
    for (std::size_t i = 0; i < count; ++i) {
        try {
            cur = forward(ts, s, cur);
        } catch (const ShiftLeavesScale& e) {
            throw ShiftLeavesScale("iterate_shift failed at step " +
                                       std::to_string(i + 1) + ": " + e.what(),
                                   static_cast<long>(i + 1));
        }
    }
    return cur;
}

std::optional<double> ShiftOperator::analytic_gap(double s, double t0,
                                                  std::size_t i) const {
    if (!gap_) return std::nullopt;
    return gap_(s, t0, i);
}

std::vector<double> sample_points(const TimeScale& ts, const SampleWindow& w) {
    std::vector<double> out;
    for (const auto& run : ts.points_between(w.lo, w.hi)) {
        if (!run.dense) {
            // scattered points only; a condensation limit or a trailing
            // maximum is not right-scattered and is skipped
            if (ts.sigma(run.lo) > run.lo) out.push_back(run.lo);
        } else {
            out.push_back(run.lo);
            const int n = std::max(1, w.dense_nodes);
            for (int k = 0; k < n; ++k)
                out.push_back(run.lo + (run.hi - run.lo) * (k + 0.5) / n);
            out.push_back(run.hi);
        }
    }
    return out;
}

namespace {

struct IdentitySamples {
    std::vector<double> lhs;   // f(delta_+(T,t)) * deriv, flattened
    std::vector<double> base;  // f(t), flattened
    std::size_t count = 0;     // admissible sample points
};

IdentitySamples collect_identity_samples(const TimeScale& ts,
                                         const ShiftOperator& op,
                                         const GridFunction& f, double T,
                                         const SampleWindow& w) {
    IdentitySamples out;
    for (double t : sample_points(ts, w)) {
        double img;
        try {
            img = op.forward(ts, T, t);
        } catch (const ShiftLeavesScale&) {
            continue;
        }
        const double d = op.delta_derivative(ts, T, t);
        const auto ft = f(t);
        const auto fi = f(img);
        for (std::size_t j = 0; j < f.dimension; ++j) {
            out.lhs.push_back(fi[j] * d);
            out.base.push_back(ft[j]);
        }
        ++out.count;
    }
    if (out.count == 0)
        throw DegenerateFunction("no admissible sample points in the window");
    return out;
}

} // namespace

PeriodicityCertificate verify_delta_periodic(const TimeScale& ts,
                                             const ShiftOperator& op,
                                             const GridFunction& f, double T,
                                             const SampleWindow& w, double tol,
                                             bool check_backward) {
    auto s = collect_identity_samples(ts, op, f, T, w);
    double residual = 0.0;
    for (std::size_t k = 0; k < s.lhs.size(); ++k)
        residual = std::max(residual, std::abs(s.lhs[k] - s.base[k]));

    if (check_backward) {
        GridFunction back = GridFunction::scalar(
            [&](double u) { return op.backward(ts, T, u); });
        for (double t : sample_points(ts, w)) {
            double img;
            try {
                img = op.backward(ts, T, t);
            } catch (const ShiftLeavesScale&) {
                continue;
            }
            const double d = tscal::delta_derivative(ts, back, t).value[0];
            if (!(d > 0)) continue;
            const auto ft = f(t);
            const auto fi = f(img);
            for (std::size_t j = 0; j < f.dimension; ++j)
                residual = std::max(residual, std::abs(fi[j] * d - ft[j]));
        }
    }

    PeriodicityCertificate cert;
    cert.kind = residual <= tol ? PeriodicityKind::delta_periodic
                                : PeriodicityKind::none;
    cert.period = T;
    cert.gamma = 1.0;
    cert.max_residual = residual;
    cert.sample_count = s.count;
    return cert;
}

PeriodicityCertificate verify_quasiperiodic(const TimeScale& ts,
                                            const ShiftOperator& op,
                                            const GridFunction& f, double T,
                                            const SampleWindow& w, double tol) {
    auto s = collect_identity_samples(ts, op, f, T, w);

    double fmax = 0.0;
    for (double b : s.base) fmax = std::max(fmax, std::abs(b));
    const double floor = 1e-9 * fmax;

    std::vector<double> ratios;
    for (std::size_t k = 0; k < s.base.size(); ++k)
        if (std::abs(s.base[k]) > floor) ratios.push_back(s.lhs[k] / s.base[k]);
    if (ratios.empty())
        throw DegenerateFunction("function vanishes at all sample points; "
                                 "factor is unidentifiable");

    auto mid = ratios.begin() + static_cast<long>(ratios.size() / 2);
    std::nth_element(ratios.begin(), mid, ratios.end());
    const double gamma = *mid;

    double residual = 0.0;
    for (std::size_t k = 0; k < s.base.size(); ++k)
        residual = std::max(residual, std::abs(s.lhs[k] - gamma * s.base[k]));

    PeriodicityCertificate cert;
    cert.kind = residual <= tol ? PeriodicityKind::quasi_periodic
                                : PeriodicityKind::none;
    cert.period = T;
    cert.gamma = gamma;
    cert.max_residual = residual;
    cert.sample_count = s.count;
    return cert;
}

MonotoneMap MonotoneMap::identity() {
    return {[](double t) { return t; }, [](double) { return 1.0; }};
}

MonotoneMap MonotoneMap::from_shift(const ShiftOperator& op, const TimeScale& ts,
                                    double s) {
    const TimeScale* scale = &ts;
    ShiftOperator copy = op;
    MonotoneMap m;
    m.value = [copy, scale, s](double t) { return copy.forward(*scale, s, t); };
    m.delta_deriv = [copy, scale, s](double t) {
        return copy.delta_derivative(*scale, s, t);
    };
    return m;
}

namespace {

// Inverse lookup for an image scale built from a monotone map: exact pairs
// for mapped points, bisection inside mapped continuous runs.
struct ImageInverse {
    std::vector<std::pair<double, double>> point_pairs; // (image, source)
    struct DenseMap {
        double img_lo, img_hi, src_lo, src_hi;
    };
    std::vector<DenseMap> dense_maps;
    const MonotoneMap* nu = nullptr;

    double operator()(double u) const {
        auto it = std::lower_bound(point_pairs.begin(), point_pairs.end(),
                                   std::make_pair(u, -1e308));
        if (it != point_pairs.end() && it->first == u) return it->second;
        if (it != point_pairs.begin() && (it - 1)->first == u) return (it - 1)->second;
        for (const auto& d : dense_maps) {
            if (u < d.img_lo || u > d.img_hi) continue;
            double lo = d.src_lo, hi = d.src_hi;
            for (int k = 0; k < 200 && lo < hi; ++k) {
                double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                if (nu->value(mid) < u) lo = mid;
                else hi = mid;
            }
            return 0.5 * (lo + hi);
        }
        // nearest tabulated point as a fallback
        if (it == point_pairs.end()) return point_pairs.back().second;
        if (it == point_pairs.begin()) return point_pairs.front().second;
        return (u - (it - 1)->first < it->first - u) ? (it - 1)->second : it->second;
    }
};

} // namespace

double substitution_rule_check(const TimeScale& ts, const MonotoneMap& nu,
                               const GridFunction& g, double a, double b) {
    const double sa = ts.snap(a), sb = ts.snap(b);
    const auto runs = ts.points_between(sa, sb);

    // strict monotonicity over the sampled walk
    {
        SampleWindow w{sa, sb, 16};
        auto samples = sample_points(ts, w);
        double prev = -std::numeric_limits<double>::infinity();
        double prev_img = -std::numeric_limits<double>::infinity();
        for (double t : samples) {
            if (t <= prev) continue;
            double img = nu.value(t);
            if (!(img > prev_img))
                throw NotMonotone("map is not strictly increasing at t = " + num(t));
            prev = t;
            prev_img = img;
        }
    }

    // nu^D as a grid function (analytic when supplied)
    GridFunction nu_fn = GridFunction::scalar(nu.value);
    auto nu_deriv = [&](double t) -> double {
        if (nu.delta_deriv) return nu.delta_deriv(t);
        return tscal::delta_derivative(ts, nu_fn, t).value[0];
    };
    GridFunction integrand{g.dimension, [&](double t) {
                               auto v = g(t);
                               const double d = nu_deriv(t);
                               for (auto& x : v) x *= d;
                               return v;
                           }};
    const auto lhs = delta_integral(ts, integrand, sa, sb);

    // image scale and inverse
    std::vector<Segment> image_segs;
    ImageInverse inv;
    inv.nu = &nu;
    std::vector<double> pending_points;
    auto flush_points = [&]() {
        if (!pending_points.empty()) {
            image_segs.push_back(ExplicitPoints{pending_points});
            pending_points.clear();
        }
    };
    for (const auto& run : runs) {
        if (!run.dense) {
            double img = nu.value(run.lo);
            pending_points.push_back(img);
            inv.point_pairs.emplace_back(img, run.lo);
        } else {
            flush_points();
            double ilo = nu.value(run.lo), ihi = nu.value(run.hi);
            image_segs.push_back(ContinuousInterval{ilo, ihi});
            inv.dense_maps.push_back({ilo, ihi, run.lo, run.hi});
        }
    }
    flush_points();
    std::sort(inv.point_pairs.begin(), inv.point_pairs.end());

    const TimeScale image(std::move(image_segs));
    GridFunction g_pull{g.dimension, [&](double u) { return g(inv(u)); }};
    const auto rhs = delta_integral(image, g_pull, nu.value(sa), nu.value(sb));

    double residual = 0.0;
    for (std::size_t j = 0; j < g.dimension; ++j)
        residual = std::max(residual, std::abs(lhs[j] - rhs[j]));
    return residual;
}

double periodic_integral_invariance_check(const TimeScale& ts,
                                          const ShiftOperator& op,
                                          const GridFunction& f, double T,
                                          double gamma, double t0, double t) {
    const double d0 = op.forward(ts, T, t0);
    const double d1 = op.forward(ts, T, t);
    const auto shifted = delta_integral(ts, f, d0, d1);
    const auto base = delta_integral(ts, f, t0, t);
    double residual = 0.0;
    for (std::size_t j = 0; j < f.dimension; ++j)
        residual = std::max(residual, std::abs(shifted[j] - gamma * base[j]));
    return residual;
}

} // namespace tscal
