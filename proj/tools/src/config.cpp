#include "config.hpp"

#include "tscal/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace tscal::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse '" + tok + "' as a number in " + what);
        }
    }
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    auto v = parse_doubles(s, what);
    if (v.size() != 1) throw ConfigError(what + " expects a single number");
    return v[0];
}

std::size_t parse_size(const std::string& s, const std::string& what) {
    double v = parse_double(s, what);
    if (v < 0 || v != std::floor(v))
        throw ConfigError(what + " expects a nonnegative integer");
    return static_cast<std::size_t>(v);
}

} // namespace

RawConfig RawConfig::parse_string(const std::string& text) {
    RawConfig cfg;
    std::istringstream is(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            cfg.sections[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        cfg.sections[section][key] = val;
    }
    return cfg;
}

RawConfig RawConfig::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_string(buf.str());
}

bool RawConfig::has(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
}

std::string RawConfig::get(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    if (s == sections.end() || !s->second.count(key))
        throw ConfigError("missing config key [" + section + "] " + key);
    return s->second.at(key);
}

std::string RawConfig::get_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

ExperimentConfig ExperimentConfig::from_raw(const RawConfig& raw) {
    ExperimentConfig c;

    c.scale_kind = raw.get_or("scale", "kind", "geometric");
    if (c.scale_kind == "geometric") {
        c.q = parse_double(raw.get_or("scale", "q", "2.0"), "[scale] q");
        if (!(c.q > 1)) throw ConfigError("[scale] q must be greater than 1");
        c.n_max = parse_size(raw.get_or("scale", "n_max", "64"), "[scale] n_max");
    } else if (c.scale_kind == "uniform") {
        c.grid_start = parse_double(raw.get_or("scale", "start", "0"), "[scale] start");
        c.grid_step = parse_double(raw.get_or("scale", "step", "1"), "[scale] step");
        c.grid_count = parse_size(raw.get_or("scale", "count", "2"), "[scale] count");
    } else if (c.scale_kind == "interval") {
        c.interval_a = parse_double(raw.get_or("scale", "a", "0"), "[scale] a");
        c.interval_b = parse_double(raw.get_or("scale", "b", "1"), "[scale] b");
    } else if (c.scale_kind == "explicit") {
        c.explicit_points = parse_doubles(raw.get("scale", "points"), "[scale] points");
    } else {
        throw ConfigError("unknown scale kind '" + c.scale_kind + "'");
    }

    c.shift_kind = raw.get_or("shift", "kind",
                              c.scale_kind == "geometric" ? "geometric" : "additive");
    c.shift_t0 = parse_double(raw.get_or("shift", "t0", "0"), "[shift] t0");
    c.scale_period = parse_double(raw.get_or("shift", "scale_period", "1"),
                                  "[shift] scale_period");
    if (c.shift_kind == "custom-table") {
        auto vals = parse_doubles(raw.get("shift", "table"), "[shift] table");
        if (vals.size() < 2 || vals.size() % 2 != 0)
            throw ConfigError("[shift] table expects pairs 't image'");
        for (std::size_t i = 0; i + 1 < vals.size(); i += 2)
            c.shift_table.emplace_back(vals[i], vals[i + 1]);
    } else if (c.shift_kind != "additive" && c.shift_kind != "geometric") {
        throw ConfigError("unknown shift kind '" + c.shift_kind + "'");
    }

    c.field_kind = raw.get_or("field", "kind", "alternating-linear");
    if (c.field_kind == "expression") {
        c.field_expr = raw.get("field", "expr");
        Expression::parse(c.field_expr); // validate now
    } else if (c.field_kind == "constant") {
        c.constant_value = parse_doubles(raw.get_or("field", "value", "1"),
                                         "[field] value");
    } else if (c.field_kind != "alternating-linear" &&
               c.field_kind != "inverse-one-minus-t") {
        throw ConfigError("unknown field kind '" + c.field_kind + "'");
    }
    if (raw.has("field", "bound"))
        c.bound = parse_double(raw.get("field", "bound"), "[field] bound");
    if (raw.has("field", "lipschitz"))
        c.lipschitz = parse_double(raw.get("field", "lipschitz"), "[field] lipschitz");

    c.period = parse_double(raw.get_or("run", "period", "1"), "[run] period");
    if (c.period < c.scale_period)
        throw ConfigError("[run] period must be at least the scale period P");
    c.epsilons = parse_doubles(raw.get_or("run", "epsilon", "0.005"), "[run] epsilon");
    if (c.epsilons.empty()) throw ConfigError("[run] epsilon must not be empty");
    for (double e : c.epsilons)
        if (e < 0) throw ConfigError("[run] epsilon values must be nonnegative");
    c.horizon_L = parse_double(raw.get_or("run", "L", "1"), "[run] L");
    if (!(c.horizon_L > 0)) throw ConfigError("[run] L must be positive");
    c.t0 = parse_double(raw.get_or("run", "t0", "0"), "[run] t0");
    c.x0 = parse_doubles(raw.get_or("run", "x0", "1"), "[run] x0");
    if (c.x0.empty()) throw ConfigError("[run] x0 must not be empty");

    auto dom = parse_doubles(raw.get_or("run", "domain", "-2 2"), "[run] domain");
    if (dom.size() != 2 * c.x0.size())
        throw ConfigError("[run] domain expects 'lo hi' per state dimension");
    c.domain.lo.clear();
    c.domain.hi.clear();
    for (std::size_t i = 0; i + 1 < dom.size(); i += 2) {
        if (!(dom[i] < dom[i + 1]))
            throw ConfigError("[run] domain bounds must satisfy lo < hi");
        c.domain.lo.push_back(dom[i]);
        c.domain.hi.push_back(dom[i + 1]);
    }
    c.domain_margin_frac =
        parse_double(raw.get_or("run", "margin", "0.1"), "[run] margin");
    c.n_intervals = parse_size(raw.get_or("run", "intervals", "0"), "[run] intervals");
    c.assertion = raw.get_or("run", "assert", "none");
    if (c.assertion != "none" && c.assertion != "delta-periodic" &&
        c.assertion != "quasi-periodic")
        throw ConfigError("unknown [run] assert value '" + c.assertion + "'");

    c.out_dir = raw.get_or("output", "dir", "out");
    c.format = raw.get_or("output", "format", "csv");
    if (c.format != "csv" && c.format != "csv+svg")
        throw ConfigError("unknown [output] format '" + c.format + "'");
    c.seed = static_cast<std::uint64_t>(
        parse_size(raw.get_or("output", "seed", "1"), "[output] seed"));
    c.parallel = static_cast<int>(
        parse_size(raw.get_or("output", "parallel", "1"), "[output] parallel"));
    if (c.parallel < 1) c.parallel = 1;

    return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    return from_raw(RawConfig::parse_file(path));
}

TimeScale ExperimentConfig::make_scale() const {
    if (scale_kind == "geometric") return TimeScale::geometric(q, n_max);
    if (scale_kind == "uniform")
        return TimeScale::uniform(grid_start, grid_step, grid_count);
    if (scale_kind == "interval") return TimeScale::interval(interval_a, interval_b);
    return TimeScale::points(explicit_points);
}

ShiftOperator ExperimentConfig::make_shift() const {
    if (shift_kind == "geometric")
        return ShiftOperator::geometric(q, shift_t0, scale_period);
    if (shift_kind == "custom-table")
        return ShiftOperator::custom_table(shift_table, period, shift_t0,
                                           scale_period);
    return ShiftOperator::additive(shift_t0, scale_period);
}

bool ExperimentConfig::field_is_time_only() const {
    if (field_kind == "inverse-one-minus-t" || field_kind == "constant") return true;
    if (field_kind == "expression") return !Expression::parse(field_expr).uses_x();
    return false;
}

VectorField ExperimentConfig::make_field(const TimeScale& ts) const {
    VectorField f;
    if (field_kind == "alternating-linear") {
        if (scale_kind != "geometric")
            throw ConfigError("alternating-linear needs a geometric scale");
        const double lq = std::log(q);
        f.dimension = 1;
        f.eval = [lq](double t, const Vec& x) -> Vec {
            if (t >= 1.0) throw FieldEvaluationFailure(
                "alternating-linear is undefined at the condensation point");
            const long k = std::lround(-std::log1p(-t) / lq);
            return {(k % 2 == 0) ? x[0] : -x[0]};
        };
    } else if (field_kind == "inverse-one-minus-t") {
        f.dimension = 1;
        f.eval = [](double t, const Vec&) -> Vec {
            return {1.0 / (1.0 - t)};
        };
    } else if (field_kind == "constant") {
        f.dimension = constant_value.size();
        f.eval = [v = constant_value](double, const Vec&) { return v; };
    } else { // expression
        auto expr = Expression::parse(field_expr);
        f.dimension = 1;
        f.eval = [expr](double t, const Vec& x) -> Vec {
            return {expr.eval(t, x[0])};
        };
    }
    if (f.dimension != x0.size())
        throw ConfigError("field dimension and x0 length disagree");

    if (bound && lipschitz) {
        f.bound = *bound;
        f.lipschitz = *lipschitz;
    } else {
        const SampleWindow w{ts.inf(), ts.sup(), 16};
        const auto est = estimate_field_bounds(f, ts, w, domain, seed);
        f.bound = bound.value_or(est.bound);
        f.lipschitz = lipschitz.value_or(est.lipschitz);
    }
    return f;
}

} // namespace tscal::cli
