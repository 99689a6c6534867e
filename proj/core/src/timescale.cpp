#include "tscal/timescale.hpp"

#include "tscal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tscal {

namespace {

std::string fmt_point(double t) {
    std::ostringstream os;
    os.precision(17);
    os << t;
    return os.str();
}

// Materialize the representable members of a condensation family.
// Materialization stops once double precision gives out: labels must stay
// strictly increasing, below the limit, and index-faithful (the family
// index n must be recoverable from the stored label, which formula-based
// functions such as the alternating example rely on).
std::vector<double> materialize_geometric(const GeometricCondensation& g) {
    const double lq = std::log(g.q);
    std::vector<double> pts;
    pts.reserve(g.n_max + 1);
    for (std::size_t n = 0; n <= g.n_max; ++n) {
        double label = g.limit - std::pow(g.q, -static_cast<double>(n));
        if (!pts.empty() && label <= pts.back()) break;
        if (label >= g.limit) break;
        if (n > 0 &&
            std::lround(-std::log(g.limit - label) / lq) != static_cast<long>(n))
            break;
        pts.push_back(label);
    }
    return pts;
}

} // namespace

TimeScale::TimeScale(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw std::invalid_argument("time scale needs at least one segment");
    for (const auto& seg : segments_) {
        if (const auto* u = std::get_if<UniformGrid>(&seg)) {
            if (!(u->step > 0)) throw std::invalid_argument("UniformGrid step must be positive");
            if (u->count == 0) throw std::invalid_argument("UniformGrid needs at least one point");
        } else if (const auto* e = std::get_if<ExplicitPoints>(&seg)) {
            if (e->points.empty()) throw std::invalid_argument("ExplicitPoints must be nonempty");
            if (std::adjacent_find(e->points.begin(), e->points.end(),
                                   [](double a, double b) { return b <= a; }) != e->points.end())
                throw std::invalid_argument("ExplicitPoints must be strictly increasing");
        } else if (const auto* c = std::get_if<ContinuousInterval>(&seg)) {
            if (!(c->a < c->b)) throw std::invalid_argument("ContinuousInterval needs a < b");
        } else if (const auto* g = std::get_if<GeometricCondensation>(&seg)) {
            if (!(g->q > 1)) throw std::invalid_argument("GeometricCondensation needs q > 1");
        }
    }
    geo_cache_.resize(segments_.size());
    for (std::size_t i = 0; i < segments_.size(); ++i)
        if (const auto* g = std::get_if<GeometricCondensation>(&segments_[i]))
            geo_cache_[i] = materialize_geometric(*g);
    for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
        if (!(seg_max(i) < seg_min(i + 1)))
            throw std::invalid_argument("segments must be disjoint and strictly increasing");
    }
    inf_ = first_point_of(0);
    sup_ = last_point_of(segments_.size() - 1);
}

TimeScale TimeScale::uniform(double start, double step, std::size_t count) {
    return TimeScale({UniformGrid{start, step, count}});
}

TimeScale TimeScale::interval(double a, double b) {
    return TimeScale({ContinuousInterval{a, b}});
}

TimeScale TimeScale::points(std::vector<double> pts) {
    return TimeScale({ExplicitPoints{std::move(pts)}});
}

TimeScale TimeScale::geometric(double q, std::size_t n_max, double limit) {
    return TimeScale({GeometricCondensation{q, n_max, limit}});
}

double TimeScale::seg_min(std::size_t i) const {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, UniformGrid>) return s.start;
            else if constexpr (std::is_same_v<T, ExplicitPoints>) return s.points.front();
            else if constexpr (std::is_same_v<T, ContinuousInterval>) return s.a;
            else return s.limit - 1.0; // geometric: t_0 = limit - q^0
        },
        segments_[i]);
}

double TimeScale::seg_max(std::size_t i) const {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, UniformGrid>)
                return s.start + s.step * static_cast<double>(s.count - 1);
            else if constexpr (std::is_same_v<T, ExplicitPoints>) return s.points.back();
            else if constexpr (std::is_same_v<T, ContinuousInterval>) return s.b;
            else return s.limit;
        },
        segments_[i]);
}

double TimeScale::first_point_of(std::size_t seg) const { return seg_min(seg); }
double TimeScale::last_point_of(std::size_t seg) const { return seg_max(seg); }

std::optional<TimeScale::Locator> TimeScale::locate(double t) const {
    const double tol = membership_tolerance(t);
    std::optional<Locator> best;
    auto consider = [&](std::size_t seg, std::size_t idx, double value, bool in_interval) {
        double d = std::abs(t - value);
        if (d > tol) return;
        if (!best || d < std::abs(t - best->value)) best = Locator{seg, idx, value, in_interval};
    };

    for (std::size_t i = 0; i < segments_.size(); ++i) {
        double lo = seg_min(i), hi = seg_max(i);
        if (t < lo - tol || t > hi + tol) continue;
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, UniformGrid>) {
                    double fi = std::round((t - s.start) / s.step);
                    if (fi < 0) fi = 0;
                    if (fi > static_cast<double>(s.count - 1)) fi = static_cast<double>(s.count - 1);
                    auto idx = static_cast<std::size_t>(fi);
                    consider(i, idx, s.start + s.step * fi, false);
                } else if constexpr (std::is_same_v<T, ExplicitPoints>) {
                    auto it = std::lower_bound(s.points.begin(), s.points.end(), t);
                    if (it != s.points.end())
                        consider(i, static_cast<std::size_t>(it - s.points.begin()), *it, false);
                    if (it != s.points.begin()) {
                        --it;
                        consider(i, static_cast<std::size_t>(it - s.points.begin()), *it, false);
                    }
                } else if constexpr (std::is_same_v<T, ContinuousInterval>) {
                    if (t <= s.a) consider(i, 0, s.a, true);
                    else if (t >= s.b) consider(i, 0, s.b, true);
                    else best = Locator{i, 0, t, true}; // exact interior point
                } else {
                    const auto& pts = geo_points(i);
                    // limit is the final index
                    consider(i, pts.size(), s.limit, false);
                    double u = s.limit - t;
                    if (u > 0) {
                        double fn = std::round(-std::log(u) / std::log(s.q));
                        for (double d = fn - 1; d <= fn + 1; ++d) {
                            if (d < 0 || d >= static_cast<double>(pts.size())) continue;
                            auto idx = static_cast<std::size_t>(d);
                            consider(i, idx, pts[idx], false);
                        }
                        // deep queries may round past the formula index
                        if (!pts.empty()) consider(i, pts.size() - 1, pts.back(), false);
                    }
                }
            },
            segments_[i]);
        if (best && best->in_interval && best->value == t) break;
    }
    return best;
}

const std::vector<double>& TimeScale::geo_points(std::size_t seg) const {
    return geo_cache_[seg];
}

bool TimeScale::contains(double t) const { return locate(t).has_value(); }

double TimeScale::snap(double t) const {
    auto loc = locate(t);
    if (!loc) throw PointNotOnScale("point " + fmt_point(t) + " is not on the time scale");
    return loc->value;
}

double TimeScale::sigma(double t) const {
    auto loc = locate(t);
    if (!loc) throw PointNotOnScale("sigma: point " + fmt_point(t) + " is not on the time scale");
    const double v = loc->value;
    double next = v;
    bool have_next = false;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, UniformGrid>) {
                if (loc->idx + 1 < s.count) {
                    next = s.start + s.step * static_cast<double>(loc->idx + 1);
                    have_next = true;
                }
            } else if constexpr (std::is_same_v<T, ExplicitPoints>) {
                if (loc->idx + 1 < s.points.size()) {
                    next = s.points[loc->idx + 1];
                    have_next = true;
                }
            } else if constexpr (std::is_same_v<T, ContinuousInterval>) {
                if (v < s.b) {
                    next = v; // right-dense
                    have_next = true;
                }
            } else {
                const auto& pts = geo_points(loc->seg);
                if (loc->idx < pts.size()) {
                    next = (loc->idx + 1 < pts.size()) ? pts[loc->idx + 1] : s.limit;
                    have_next = true;
                }
            }
        },
        segments_[loc->seg]);
    if (have_next) return next;
    if (loc->seg + 1 < segments_.size()) return first_point_of(loc->seg + 1);
    return v; // sup convention: inf of the empty set is sup T
}

double TimeScale::rho(double t) const {
    auto loc = locate(t);
    if (!loc) throw PointNotOnScale("rho: point " + fmt_point(t) + " is not on the time scale");
    const double v = loc->value;
    double prev = v;
    bool have_prev = false;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, UniformGrid>) {
                if (loc->idx > 0) {
                    prev = s.start + s.step * static_cast<double>(loc->idx - 1);
                    have_prev = true;
                }
            } else if constexpr (std::is_same_v<T, ExplicitPoints>) {
                if (loc->idx > 0) {
                    prev = s.points[loc->idx - 1];
                    have_prev = true;
                }
            } else if constexpr (std::is_same_v<T, ContinuousInterval>) {
                if (v > s.a) {
                    prev = v; // left-dense
                    have_prev = true;
                }
            } else {
                const auto& pts = geo_points(loc->seg);
                if (loc->idx == pts.size()) {
                    prev = s.limit; // condensation point is left-dense
                    have_prev = true;
                } else if (loc->idx > 0) {
                    prev = pts[loc->idx - 1];
                    have_prev = true;
                }
            }
        },
        segments_[loc->seg]);
    if (have_prev) return prev;
    if (loc->seg > 0) return last_point_of(loc->seg - 1);
    return v; // inf convention: sup of the empty set is inf T
}

double TimeScale::mu(double t) const { return sigma(t) - snap(t); }

PointClass TimeScale::classify(double t) const {
    const double v = snap(t);
    PointClass c;
    c.at_min = (v == inf_);
    c.at_max = (v == sup_);
    c.right_scattered = sigma(v) > v;
    c.left_scattered = rho(v) < v;
    return c;
}

std::vector<ScaleRun> TimeScale::points_between(double a, double b) const {
    const double sa = snap(a), sb = snap(b);
    if (sa > sb)
        throw EmptyInterval("points_between: " + fmt_point(a) + " > " + fmt_point(b));
    std::vector<ScaleRun> runs;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (seg_max(i) < sa || seg_min(i) > sb) continue;
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, UniformGrid>) {
                    double flo = std::ceil((sa - s.start) / s.step - 0.5e-9);
                    double fhi = std::floor((sb - s.start) / s.step + 0.5e-9);
                    if (flo < 0) flo = 0;
                    if (fhi > static_cast<double>(s.count - 1)) fhi = static_cast<double>(s.count - 1);
                    for (double f = flo; f <= fhi; ++f)
                        runs.push_back(ScaleRun::point(s.start + s.step * f));
                } else if constexpr (std::is_same_v<T, ExplicitPoints>) {
                    for (double p : s.points)
                        if (p >= sa && p <= sb) runs.push_back(ScaleRun::point(p));
                } else if constexpr (std::is_same_v<T, ContinuousInterval>) {
                    double lo = std::max(sa, s.a), hi = std::min(sb, s.b);
                    if (lo < hi) runs.push_back(ScaleRun::interval(lo, hi));
                    else if (lo == hi) runs.push_back(ScaleRun::point(lo));
                } else {
                    for (double p : geo_points(i))
                        if (p >= sa && p <= sb) runs.push_back(ScaleRun::point(p));
                    if (s.limit >= sa && s.limit <= sb) runs.push_back(ScaleRun::point(s.limit));
                }
            },
            segments_[i]);
    }
    return runs;
}

WalkPlan TimeScale::walk_plan(double a, double b) const {
    auto runs = points_between(a, b);
    WalkPlan plan;
    plan.a = snap(a);
    plan.b = snap(b);
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const auto& r = runs[k];
        if (r.dense) {
            plan.events.push_back(DenseEvent{r.lo, r.hi});
            if (r.hi < plan.b) {
                double nxt = runs[k + 1].lo;
                plan.events.push_back(ScatteredEvent{r.hi, nxt, is_condensation_limit(nxt)});
            }
        } else if (r.lo < plan.b) {
            double nxt = runs[k + 1].lo;
            plan.events.push_back(ScatteredEvent{r.lo, nxt, is_condensation_limit(nxt)});
        }
    }
    return plan;
}

double TimeScale::floor_point(double v, bool exclude_limits) const {
    const double tol = membership_tolerance(v);
    if (v < inf_ - tol) throw EmptyHorizon("no scale point at or below " + fmt_point(v));
    double best = -std::numeric_limits<double>::infinity();
    auto consider = [&](double cand) {
        if (cand <= v + tol && cand > best) best = cand;
    };
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (seg_min(i) > v + tol) continue;
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, UniformGrid>) {
                    double fi = std::floor((v - s.start) / s.step + 0.5e-9);
                    if (fi < 0) return;
                    if (fi > static_cast<double>(s.count - 1)) fi = static_cast<double>(s.count - 1);
                    consider(s.start + s.step * fi);
                } else if constexpr (std::is_same_v<T, ExplicitPoints>) {
                    auto it = std::upper_bound(s.points.begin(), s.points.end(), v + tol);
                    if (it != s.points.begin()) consider(*(it - 1));
                } else if constexpr (std::is_same_v<T, ContinuousInterval>) {
                    if (v >= s.a) consider(std::min(v, s.b));
                } else {
                    const auto& pts = geo_points(i);
                    if (!exclude_limits && s.limit <= v + tol) consider(s.limit);
                    if (exclude_limits || s.limit > v + tol) {
                        auto it = std::upper_bound(pts.begin(), pts.end(), v + tol);
                        if (it != pts.begin()) consider(*(it - 1));
                    }
                }
            },
            segments_[i]);
    }
    if (!std::isfinite(best)) throw EmptyHorizon("no scale point at or below " + fmt_point(v));
    return best;
}

bool TimeScale::is_condensation_limit(double t) const {
    for (const auto& seg : segments_)
        if (const auto* g = std::get_if<GeometricCondensation>(&seg))
            if (g->limit == t) return true;
    return false;
}

bool TimeScale::purely_discrete() const noexcept {
    for (const auto& seg : segments_)
        if (std::holds_alternative<ContinuousInterval>(seg)) return false;
    return true;
}

} // namespace tscal
