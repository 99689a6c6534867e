#include "experiments.hpp"

#include "csv.hpp"
#include "svg.hpp"

#include "tscal/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <ostream>

namespace tscal::cli {

namespace {

std::string gshort(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

const char* kind_name(PeriodicityKind k) {
    switch (k) {
        case PeriodicityKind::delta_periodic: return "delta_periodic";
        case PeriodicityKind::quasi_periodic: return "quasi_periodic";
        default: return "none";
    }
}

std::size_t auto_interval_count(const TimeScale& ts, const ShiftOperator& op,
                                double T, double t0, double horizon) {
    std::size_t n = 0;
    double cur = ts.snap(t0);
    while (cur < horizon && n < 65536) {
        try {
            cur = op.forward(ts, T, cur);
        } catch (const ShiftLeavesScale&) {
            break;
        }
        ++n;
    }
    return std::max<std::size_t>(n, 1);
}

double fit_slope(const std::vector<RunRow>& rows) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows)
        if (r.epsilon > 0 && r.max_diff > 0)
            pts.emplace_back(std::log(r.epsilon), std::log(r.max_diff));
    if (pts.size() < 2) return 0.0;
    double su = 0, sv = 0;
    for (auto [u, v] : pts) { su += u; sv += v; }
    const double mu = su / pts.size(), mv = sv / pts.size();
    double num = 0, den = 0;
    for (auto [u, v] : pts) {
        num += (u - mu) * (v - mv);
        den += (u - mu) * (u - mu);
    }
    return den > 0 ? num / den : 0.0;
}

CsvTable trajectory_table(const RunRow& row) {
    CsvTable t;
    t.header = {"t", "x", "xi", "absdiff"};
    for (std::size_t k = 0; k < row.original.samples.size(); ++k) {
        const auto& a = row.original.samples[k];
        const auto& b = row.averaged.samples[k];
        t.rows.push_back({g17(a.t), g17(a.x[0]), g17(b.x[0]),
                          g17(std::abs(a.x[0] - b.x[0]))});
    }
    return t;
}

CsvTable summary_table(const std::vector<RunRow>& rows,
                       const std::vector<std::pair<double, double>>& slopes) {
    CsvTable t;
    t.header = {"q", "epsilon", "max_diff", "ratio", "bound", "horizon",
                "slope", "kind"};
    for (const auto& r : rows)
        t.rows.push_back({g17(r.q), g17(r.epsilon), g17(r.max_diff),
                          g17(r.ratio), g17(r.bound), g17(r.horizon), "",
                          "point"});
    for (const auto& [q, slope] : slopes)
        t.rows.push_back({g17(q), "", "", "", "", "", g17(slope), "slope"});
    return t;
}

void ensure_out_dir(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
}

std::string out_path(const ExperimentConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

void emit_run_files(const ExperimentConfig& cfg, const std::vector<RunRow>& rows,
                    const std::vector<std::pair<double, double>>& slopes,
                    const std::string& summary_name, bool sweep_panel,
                    std::ostream& log) {
    ensure_out_dir(cfg);
    for (const auto& row : rows) {
        const auto name = trajectory_csv_name(row.epsilon);
        const auto csv = trajectory_table(row).to_string();
        write_file(out_path(cfg, name), csv);
        log << "wrote " << out_path(cfg, name) << "\n";
        if (cfg.format == "csv+svg") {
            const std::string title = "original vs averaged, q=" + gshort(row.q) +
                                      ", eps=" + gshort(row.epsilon);
            const auto svg_name = name.substr(0, name.size() - 4) + ".svg";
            write_file(out_path(cfg, svg_name),
                       trajectory_svg_from_csv(csv, title));
            log << "wrote " << out_path(cfg, svg_name) << "\n";
        }
    }
    const auto summary = summary_table(rows, slopes).to_string();
    write_file(out_path(cfg, summary_name), summary);
    log << "wrote " << out_path(cfg, summary_name) << "\n";
    if (sweep_panel && cfg.format == "csv+svg") {
        write_file(out_path(cfg, "sweep.svg"),
                   sweep_svg_from_csv(summary, "max |x - xi| against epsilon"));
        log << "wrote " << out_path(cfg, "sweep.svg") << "\n";
    }
}

} // namespace

std::string trajectory_csv_name(double epsilon) {
    return "trajectory_eps" + gshort(epsilon) + ".csv";
}

Workspace make_workspace(const ExperimentConfig& cfg) {
    Workspace ws{cfg.make_scale(), cfg.make_shift(), VectorField{}, {}, {}};
    ws.field = cfg.make_field(ws.ts);

    const SampleWindow window{ws.ts.inf(), ws.ts.sup(), 64};
    const GridFunction slice = ws.field.at(cfg.x0);
    ws.delta_cert =
        verify_delta_periodic(ws.ts, ws.op, slice, cfg.period, window);
    ws.quasi_cert =
        verify_quasiperiodic(ws.ts, ws.op, slice, cfg.period, window);

    if (cfg.assertion == "delta-periodic" &&
        ws.delta_cert.kind == PeriodicityKind::delta_periodic)
        ws.field.certificate = ws.delta_cert;
    else
        ws.field.certificate = ws.quasi_cert;
    return ws;
}

RunRow single_run(const ExperimentConfig& cfg, const Workspace& ws,
                  double epsilon) {
    if (ws.field.dimension != 1)
        throw ConfigError("trajectory output is defined for scalar systems");
    const auto t_start = std::chrono::steady_clock::now();

    RunRow row;
    row.q = cfg.q;
    row.epsilon = epsilon;
    row.horizon = horizon_for(epsilon, cfg.horizon_L, ws.ts, cfg.t0);
    const double requested =
        epsilon > 0 ? cfg.t0 + cfg.horizon_L / epsilon : ws.ts.sup();

    std::size_t n_intervals = cfg.n_intervals;
    if (n_intervals == 0)
        n_intervals =
            auto_interval_count(ws.ts, ws.op, cfg.period, cfg.t0, row.horizon);

    const double gamma = ws.field.certificate->kind ==
                                 PeriodicityKind::delta_periodic
                             ? 1.0
                             : ws.field.certificate->gamma;
    const AveragedField avg = build_averaged_field_quasiperiodic(
        ws.field, ws.ts, ws.op, cfg.period, cfg.t0, gamma, n_intervals);

    const double margin = cfg.domain_margin_frac * cfg.domain.max_extent();
    if (!cfg.domain.contains(cfg.x0, margin))
        throw ConfigError("x0 with its margin does not fit in the domain box");

    auto sys_orig =
        DynamicSystem::from_field(ws.field, epsilon, cfg.t0, cfg.x0, cfg.domain);
    auto sys_avg =
        DynamicSystem::from_averaged(avg, epsilon, cfg.t0, cfg.x0, cfg.domain);
    sys_avg.bound = ws.field.bound;

    row.original = solve(sys_orig, ws.ts, row.horizon, requested);
    row.averaged = solve(sys_avg, ws.ts, row.horizon, requested);
    row.tail_extension = avg.tail_extension_used();

    const auto rep = compare_trajectories(row.original, row.averaged);
    row.max_diff = rep.max_diff;
    row.ratio = epsilon > 0 ? rep.max_diff / epsilon : 0.0;

    const double K =
        interval_length_bound(ws.ts, ws.op, cfg.period, cfg.t0, n_intervals);
    row.bound =
        error_bound_constant(ws.field.bound, ws.field.lipschitz, cfg.horizon_L, K) *
        epsilon;

    row.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    return row;
}

namespace {

std::vector<RunRow> run_all(const ExperimentConfig& cfg, const Workspace& ws) {
    std::vector<double> eps = cfg.epsilons;
    std::sort(eps.begin(), eps.end(), std::greater<double>());
    std::vector<RunRow> rows(eps.size());
    const int par = std::max(1, cfg.parallel);
    for (std::size_t base = 0; base < eps.size();
         base += static_cast<std::size_t>(par)) {
        std::vector<std::future<RunRow>> batch;
        const std::size_t end =
            std::min(eps.size(), base + static_cast<std::size_t>(par));
        for (std::size_t i = base; i < end; ++i)
            batch.push_back(std::async(std::launch::async, [&, i] {
                return single_run(cfg, ws, eps[i]);
            }));
        for (std::size_t i = base; i < end; ++i) rows[i] = batch[i - base].get();
    }
    return rows;
}

void require_certified(const ExperimentConfig& cfg, const Workspace& ws) {
    if (ws.field.certificate->kind == PeriodicityKind::none)
        throw AssertionFailure(
            "field failed periodicity certification (max residual " +
            std::to_string(ws.field.certificate->max_residual) + ")");
    if (cfg.assertion == "delta-periodic" &&
        ws.delta_cert.kind != PeriodicityKind::delta_periodic)
        throw AssertionFailure("field is not delta-periodic as asserted");
    if (cfg.assertion == "quasi-periodic" &&
        ws.quasi_cert.kind != PeriodicityKind::quasi_periodic)
        throw AssertionFailure("field is not quasiperiodic as asserted");
}

} // namespace

namespace {

void warn_tail_extension(const std::vector<RunRow>& rows, std::ostream& log) {
    for (const auto& r : rows)
        if (r.tail_extension) {
            log << "note: the averaged field was extended past its last "
                   "breakpoint (eps=" << gshort(r.epsilon) << ")\n";
            return;
        }
}

} // namespace

void run_example(const ExperimentConfig& cfg, std::ostream& log) {
    const Workspace ws = make_workspace(cfg);
    require_certified(cfg, ws);
    const auto rows = run_all(cfg, ws);
    for (const auto& r : rows)
        log << "q=" << gshort(r.q) << " eps=" << gshort(r.epsilon)
            << " max_diff=" << g17(r.max_diff) << " bound=" << g17(r.bound)
            << " horizon=" << g17(r.horizon) << " runtime=" << r.runtime_seconds
            << "s\n";
    warn_tail_extension(rows, log);
    emit_run_files(cfg, rows, {}, "summary.csv", false, log);
}

void run_sweep(const ExperimentConfig& cfg, std::ostream& log) {
    if (cfg.epsilons.size() < 2)
        throw ConfigError("a sweep needs at least two epsilon values");
    const Workspace ws = make_workspace(cfg);
    require_certified(cfg, ws);
    const auto rows = run_all(cfg, ws);
    const double slope = fit_slope(rows);
    for (const auto& r : rows)
        log << "q=" << gshort(r.q) << " eps=" << gshort(r.epsilon)
            << " max_diff=" << g17(r.max_diff) << " ratio=" << g17(r.ratio)
            << " bound=" << g17(r.bound) << " runtime=" << r.runtime_seconds
            << "s\n";
    log << "log-log slope: " << g17(slope) << "\n";
    warn_tail_extension(rows, log);
    emit_run_files(cfg, rows, {{cfg.q, slope}}, "sweep_summary.csv", true, log);
}

SweepReport execute_sweep(const ExperimentConfig& cfg) {
    if (cfg.epsilons.size() < 2)
        throw ConfigError("a sweep needs at least two epsilon values");
    const Workspace ws = make_workspace(cfg);
    require_certified(cfg, ws);
    SweepReport report;
    report.rows = run_all(cfg, ws);
    report.slope = fit_slope(report.rows);
    return report;
}

void verify_command(const ExperimentConfig& cfg, std::ostream& log) {
    const Workspace ws = make_workspace(cfg);

    auto print = [&](const char* label, const PeriodicityCertificate& c) {
        log << label << ": kind=" << kind_name(c.kind) << " period=" << c.period
            << " gamma=" << g17(c.gamma) << " max_residual=" << g17(c.max_residual)
            << " samples=" << c.sample_count << "\n";
    };
    print("delta-periodic check", ws.delta_cert);
    print("quasiperiodic check", ws.quasi_cert);

    ensure_out_dir(cfg);
    CsvTable t;
    t.header = {"check", "kind", "period", "gamma", "max_residual", "samples"};
    t.rows.push_back({"delta_periodic", kind_name(ws.delta_cert.kind),
                      g17(ws.delta_cert.period), g17(ws.delta_cert.gamma),
                      g17(ws.delta_cert.max_residual),
                      std::to_string(ws.delta_cert.sample_count)});
    t.rows.push_back({"quasi_periodic", kind_name(ws.quasi_cert.kind),
                      g17(ws.quasi_cert.period), g17(ws.quasi_cert.gamma),
                      g17(ws.quasi_cert.max_residual),
                      std::to_string(ws.quasi_cert.sample_count)});
    write_file(out_path(cfg, "certificates.csv"), t.to_string());
    log << "wrote " << out_path(cfg, "certificates.csv") << "\n";

    if (cfg.assertion == "delta-periodic" &&
        ws.delta_cert.kind != PeriodicityKind::delta_periodic)
        throw AssertionFailure("field is not delta-periodic as asserted");
    if (cfg.assertion == "quasi-periodic" &&
        ws.quasi_cert.kind != PeriodicityKind::quasi_periodic)
        throw AssertionFailure("field is not quasiperiodic as asserted");
}

int guarded(const std::function<void()>& body, std::ostream& err) {
    try {
        body();
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const AssertionFailure& e) {
        err << "certification failure: " << e.what() << "\n";
        return kExitCertification;
    } catch (const DegenerateFunction& e) {
        err << "certification failure: " << e.what() << "\n";
        return kExitCertification;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

} // namespace tscal::cli
