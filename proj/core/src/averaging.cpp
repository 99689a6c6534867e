#include "tscal/averaging.hpp"

#include "tscal/calculus.hpp"
#include "tscal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace tscal {

FieldBounds estimate_field_bounds(const VectorField& field, const TimeScale& ts,
                                  const SampleWindow& window, const Box& domain,
                                  std::uint64_t seed, std::size_t x_samples) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&]() {
        Vec x(field.dimension);
        for (std::size_t i = 0; i < field.dimension; ++i)
            x[i] = domain.lo[i] + (domain.hi[i] - domain.lo[i]) * unit(rng);
        return x;
    };

    const auto times = sample_points(ts, window);
    double m = 0.0, lam = 0.0;
    std::size_t count = 0;
    for (double t : times) {
        for (std::size_t k = 0; k < x_samples; ++k) {
            const Vec x1 = draw(), x2 = draw();
            const Vec v1 = field(t, x1), v2 = field(t, x2);
            m = std::max(m, std::max(norm_inf(v1), norm_inf(v2)));
            const double dx = norm_inf_diff(x1, x2);
            if (dx > 1e-12)
                lam = std::max(lam, norm_inf_diff(v1, v2) / dx);
            count += 2;
        }
    }
    return {m, lam, count};
}

AveragedField::AveragedField(VectorField field, TimeScale ts, double gamma,
                             std::vector<double> breakpoints,
                             std::vector<double> lengths, double base_lo,
                             double base_hi)
    : field_(std::move(field)),
      ts_(std::move(ts)),
      gamma_(gamma),
      breakpoints_(std::move(breakpoints)),
      lengths_(std::move(lengths)),
      base_lo_(base_lo),
      base_hi_(base_hi),
      state_(std::make_shared<SharedState>()) {
    for (double len : lengths_) max_length_ = std::max(max_length_, len);
}

Vec AveragedField::base_integral(const Vec& x) const {
    {
        std::lock_guard<std::mutex> lock(state_->m);
        auto it = state_->cache.find(x);
        if (it != state_->cache.end()) return it->second;
    }
    Vec val = delta_integral(ts_, field_.at(x), base_lo_, base_hi_);
    {
        std::lock_guard<std::mutex> lock(state_->m);
        if (state_->cache.size() >= 4096) state_->cache.clear();
        state_->cache.emplace(x, val);
    }
    return val;
}

Vec AveragedField::interval_value(std::size_t i, const Vec& x) const {
    if (i >= lengths_.size())
        throw FieldEvaluationFailure("averaged field has no interval " +
                                     std::to_string(i));
    Vec v = base_integral(x);
    const double c = std::pow(gamma_, static_cast<double>(i)) / lengths_[i];
    for (auto& e : v) e *= c;
    return v;
}

Vec AveragedField::value(double t, const Vec& x) const {
    if (t < breakpoints_.front())
        throw FieldEvaluationFailure("averaged field evaluated before t0");
    std::size_t i;
    if (t >= breakpoints_.back()) {
        state_->tail_warned.store(true);
        i = lengths_.size() - 1;
    } else {
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
        i = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
        if (i >= lengths_.size()) i = lengths_.size() - 1;
    }
    return interval_value(i, x);
}

namespace {

struct Breakdown {
    std::vector<double> breakpoints;
    std::vector<double> lengths;
};

// Walk the shift breakpoints delta^(i)(t0).  Interval lengths prefer the
// operator's closed form, which stays exact where point labels collapse
// near a condensation limit; label iteration that dies there is continued
// from the closed form.
Breakdown shift_breakdown(const TimeScale& ts, const ShiftOperator& op, double T,
                          double t0, std::size_t n_intervals) {
    Breakdown out;
    double cur = ts.snap(t0);
    out.breakpoints.push_back(cur);
    bool labels_alive = true;
    for (std::size_t i = 0; i < n_intervals; ++i) {
        const auto gap = op.analytic_gap(T, out.breakpoints.front(), i);
        double next = cur;
        if (labels_alive) {
            try {
                next = op.forward(ts, T, cur);
            } catch (const ShiftLeavesScale& e) {
                if (!gap) throw ShiftLeavesScale(
                    std::string("breakpoint walk failed: ") + e.what(),
                    static_cast<long>(i + 1));
                labels_alive = false;
            }
        }
        if (!labels_alive) next = std::min(cur + *gap, ts.sup());
        const double len = gap ? *gap : next - cur;
        if (!(len > 0))
            throw ZeroLengthPeriodInterval("shift interval " + std::to_string(i) +
                                           " has no positive length");
        out.breakpoints.push_back(next);
        out.lengths.push_back(len);
        cur = next;
    }
    return out;
}

struct BuildPieces {
    Breakdown bd;
    double lo;
    double hi;
};

BuildPieces build_pieces(const TimeScale& ts, const ShiftOperator& op, double T,
                         double t0, std::size_t n_intervals) {
    if (n_intervals < 1)
        throw std::invalid_argument("averaging needs at least one shift interval");
    const double lo = ts.snap(t0);
    const double hi = op.forward(ts, T, lo);
    if (hi == lo)
        throw ZeroLengthPeriodInterval("delta_+(T, t0) equals t0");
    return {shift_breakdown(ts, op, T, lo, n_intervals), lo, hi};
}

} // namespace

Vec base_average(const VectorField& field, const TimeScale& ts,
                 const ShiftOperator& op, double T, double t0, const Vec& x) {
    const double lo = ts.snap(t0);
    const double hi = op.forward(ts, T, lo);
    if (hi == lo)
        throw ZeroLengthPeriodInterval("delta_+(T, t0) equals t0");
    Vec v = delta_integral(ts, field.at(x), lo, hi);
    for (auto& e : v) e /= (hi - lo);
    return v;
}

AveragedField build_averaged_field_periodic(const VectorField& field,
                                            const TimeScale& ts,
                                            const ShiftOperator& op, double T,
                                            double t0,
                                            std::size_t n_intervals) {
    if (!field.certificate ||
        field.certificate->kind != PeriodicityKind::delta_periodic)
        throw CertificateMissing("delta-periodic averaging requires a "
                                 "delta_periodic certificate");
    auto p = build_pieces(ts, op, T, t0, n_intervals);
    return AveragedField(field, ts, 1.0, std::move(p.bd.breakpoints),
                         std::move(p.bd.lengths), p.lo, p.hi);
}

AveragedField build_averaged_field_quasiperiodic(const VectorField& field,
                                                 const TimeScale& ts,
                                                 const ShiftOperator& op,
                                                 double T, double t0,
                                                 double gamma,
                                                 std::size_t n_intervals) {
    if (!field.certificate || field.certificate->kind == PeriodicityKind::none)
        throw CertificateMissing("quasiperiodic averaging requires a "
                                 "periodicity certificate");
    auto p = build_pieces(ts, op, T, t0, n_intervals);
    return AveragedField(field, ts, gamma, std::move(p.bd.breakpoints),
                         std::move(p.bd.lengths), p.lo, p.hi);
}

double error_bound_constant(double M, double lambda, double L, double K) {
    if (!(M > 0) || !(lambda > 0) || !(L > 0) || !(K >= 0))
        throw NonPositiveParameter("error_bound_constant needs M, lambda, L > 0 "
                                   "and K >= 0");
    return 2.0 * M * (lambda * L + K) * std::exp(lambda * L);
}

double interval_length_bound(const TimeScale& ts, const ShiftOperator& op,
                             double T, double t0, std::size_t n_intervals) {
    auto bd = shift_breakdown(ts, op, T, ts.snap(t0), n_intervals);
    double k = 0.0;
    for (double len : bd.lengths) k = std::max(k, len);
    return k;
}

} // namespace tscal
