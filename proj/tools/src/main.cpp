#include "config.hpp"
#include "experiments.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

struct Overrides {
    std::optional<double> q;
    std::vector<double> epsilons;
    std::optional<std::size_t> n_max;
    std::optional<double> L;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    std::optional<std::uint64_t> seed;
    std::optional<int> parallel;
};

void apply(tscal::cli::ExperimentConfig& cfg, const Overrides& o) {
    if (o.q) {
        if (!(*o.q > 1)) throw tscal::cli::ConfigError("--q must be greater than 1");
        cfg.q = *o.q;
    }
    if (!o.epsilons.empty()) cfg.epsilons = o.epsilons;
    if (o.n_max) cfg.n_max = *o.n_max;
    if (o.L) {
        if (!(*o.L > 0)) throw tscal::cli::ConfigError("--L must be positive");
        cfg.horizon_L = *o.L;
    }
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.format) {
        if (*o.format != "csv" && *o.format != "csv+svg")
            throw tscal::cli::ConfigError("--format must be csv or csv+svg");
        cfg.format = *o.format;
    }
    if (o.seed) cfg.seed = *o.seed;
    if (o.parallel) cfg.parallel = std::max(1, *o.parallel);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tscal: calculus and averaging for dynamic systems on time scales"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment configuration file")
            ->required();
        sub->add_option("--q", o.q, "override the geometric scale ratio q");
        sub->add_option("--epsilon", o.epsilons,
                        "override the epsilon list (repeatable)");
        sub->add_option("--n-max", o.n_max, "override the condensation depth");
        sub->add_option("--L", o.L, "override the horizon constant L");
        sub->add_option("--out", o.out_dir, "output directory");
        sub->add_option("--format", o.format, "output format: csv or csv+svg");
        sub->add_option("--seed", o.seed, "seed for the M/lambda estimator");
        sub->add_option("--parallel", o.parallel, "parallel sweep entries");
    };

    auto* verify = app.add_subcommand("verify", "verify periodicity certificates");
    auto* run = app.add_subcommand("run", "solve the original and averaged systems");
    auto* sweep = app.add_subcommand("sweep", "epsilon convergence study");
    add_common(verify);
    add_common(run);
    add_common(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return tscal::cli::kExitConfig;
    }

    return tscal::cli::guarded(
        [&] {
            auto cfg = tscal::cli::ExperimentConfig::from_file(config_path);
            apply(cfg, o);
            if (verify->parsed())
                tscal::cli::verify_command(cfg, std::cout);
            else if (run->parsed())
                tscal::cli::run_example(cfg, std::cout);
            else
                tscal::cli::run_sweep(cfg, std::cout);
        },
        std::cerr);
}
