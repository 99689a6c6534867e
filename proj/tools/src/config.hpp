#pragma once

#include "expression.hpp"

#include "tscal/averaging.hpp"
#include "tscal/shift.hpp"
#include "tscal/timescale.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tscal::cli {

/// Sectioned key/value text, the on-disk configuration format:
///   [section]
///   key = value            # comment
/// Values are free-form strings; lists are whitespace separated.
struct RawConfig {
    std::map<std::string, std::map<std::string, std::string>> sections;

    static RawConfig parse_string(const std::string& text);
    static RawConfig parse_file(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
};

/// A fully validated experiment description.
struct ExperimentConfig {
    // [scale]
    std::string scale_kind;          // geometric | uniform | interval | explicit
    double q = 2.0;                  // geometric
    std::size_t n_max = 64;          // geometric
    double grid_start = 0.0, grid_step = 1.0;
    std::size_t grid_count = 2;      // uniform
    double interval_a = 0.0, interval_b = 1.0;
    std::vector<double> explicit_points;

    // [shift]
    std::string shift_kind;          // additive | geometric | custom-table
    double shift_t0 = 0.0;
    double scale_period = 1.0;       // P
    std::vector<std::pair<double, double>> shift_table;

    // [field]
    std::string field_kind;          // alternating-linear | inverse-one-minus-t
                                     // | constant | expression
    std::string field_expr;
    std::vector<double> constant_value{1.0};
    std::optional<double> bound;     // M; estimated when absent
    std::optional<double> lipschitz; // lambda; estimated when absent

    // [run]
    double period = 1.0;             // T, the averaging period
    std::vector<double> epsilons{0.005};
    double horizon_L = 1.0;
    double t0 = 0.0;
    Vec x0{1.0};
    Box domain{{-2.0}, {2.0}};
    double domain_margin_frac = 0.1; // rho-neighborhood, fraction of extent
    std::size_t n_intervals = 0;     // 0 = cover the horizon automatically
    std::string assertion = "none";  // none | delta-periodic | quasi-periodic

    // [output]
    std::string out_dir = "out";
    std::string format = "csv";      // csv | csv+svg
    std::uint64_t seed = 1;
    int parallel = 1;

    static ExperimentConfig from_raw(const RawConfig& raw);
    static ExperimentConfig from_file(const std::string& path);

    TimeScale make_scale() const;
    ShiftOperator make_shift() const;
    /// Field with metadata but no certificate yet; bound/lipschitz are
    /// estimated over `domain` when not supplied.
    VectorField make_field(const TimeScale& ts) const;
    /// True when the configured field does not depend on x.
    bool field_is_time_only() const;
};

} // namespace tscal::cli
