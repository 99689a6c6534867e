#pragma once

#include "config.hpp"

#include "tscal/solver.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace tscal::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCertification = 3;
inline constexpr int kExitSolver = 4;

/// A configured periodicity assertion did not hold (exit code 3).
class AssertionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One solve pair of a run or sweep.
struct RunRow {
    double q = 0.0;
    double epsilon = 0.0;
    double max_diff = 0.0;
    double ratio = 0.0;       // max_diff / epsilon (0 when epsilon is 0)
    double bound = 0.0;       // C * epsilon
    double horizon = 0.0;
    double runtime_seconds = 0.0; // reported on the log stream, never in CSV
    bool tail_extension = false;  // averaged field evaluated past its last breakpoint
    Trajectory original;
    Trajectory averaged;
};

struct SweepReport {
    std::vector<RunRow> rows;   // epsilon descending
    double slope = 0.0;         // least-squares log-log fit per configured q
};

/// Scale, operator, certified field and the certificates themselves.
struct Workspace {
    TimeScale ts;
    ShiftOperator op;
    VectorField field;
    PeriodicityCertificate delta_cert;
    PeriodicityCertificate quasi_cert;
};

Workspace make_workspace(const ExperimentConfig& cfg);

/// One solve pair at the given epsilon, using the workspace certificates.
RunRow single_run(const ExperimentConfig& cfg, const Workspace& ws,
                  double epsilon);

SweepReport execute_sweep(const ExperimentConfig& cfg);

/// CLI entry points.  They throw ConfigError / AssertionFailure /
/// tscal::Error; `guarded` maps those to the documented exit codes.
void run_example(const ExperimentConfig& cfg, std::ostream& log);
void run_sweep(const ExperimentConfig& cfg, std::ostream& log);
void verify_command(const ExperimentConfig& cfg, std::ostream& log);

int guarded(const std::function<void()>& body, std::ostream& err);

/// Deterministic file names used by run and sweep.
std::string trajectory_csv_name(double epsilon);

} // namespace tscal::cli
