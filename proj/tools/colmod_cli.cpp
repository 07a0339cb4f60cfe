// Command-line runner for the collision-model experiments.
//
//   colmod sweep|ising2|xy|analyze|crosscheck [--config PATH] [--out PATH]
//          [--svg] [--threads N] [--override KEY=VALUE]...
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-validation abort.

#include "colmod/config.hpp"
#include "colmod/errors.hpp"
#include "colmod/experiments.hpp"
#include "colmod/output.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Options {
    std::string config;
    std::string out;
    bool svg = false;
    std::optional<std::size_t> threads;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "experiment configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output path (overrides output.path)");
    sub->add_flag("--svg", o.svg, "also write an SVG plot next to the output");
    sub->add_option("--threads", o.threads, "worker threads (0: all cores)");
    sub->add_option("--override", o.overrides, "override a config key, e.g. schedule.count=10")->take_all();
}

colmod::ExperimentConfig resolve(const std::string& experiment, const Options& o) {
    auto cfg = o.config.empty() ? colmod::parse_config("", experiment, o.overrides)
                                : colmod::load_config(o.config, experiment, o.overrides);
    if (!o.out.empty()) cfg.out = o.out;
    if (o.svg) cfg.svg = true;
    if (o.threads) cfg.threads = *o.threads;
    colmod::validate(cfg);
    return cfg;
}

void execute(const std::string& experiment, const colmod::ExperimentConfig& cfg) {
    using namespace colmod;
    if (experiment == "sweep") {
        const auto sweep = run_sweep(cfg);
        write_text(cfg.out, sweep_csv(sweep));
        if (cfg.svg) write_text(svg_path_for(cfg.out), sweep_svg(sweep));
        fmt::print("sweep: {} columns x {} collisions -> {}\n", sweep.h_b.size(), cfg.count, cfg.out);
    } else if (experiment == "ising2" || experiment == "xy") {
        const auto curves = experiment == "ising2" ? run_ising2(cfg) : run_xy(cfg);
        write_text(cfg.out, trajectory_csv(curves));
        if (cfg.svg) write_text(svg_path_for(cfg.out), trajectory_svg(curves, experiment));
        for (const auto& c : curves) {
            fmt::print("{}: final fidelity {:.6f}\n", c.label, c.samples.back().fidelity);
        }
        fmt::print("-> {}\n", cfg.out);
    } else if (experiment == "analyze") {
        const auto text = analysis_text(run_analyze(cfg));
        write_text(cfg.out, text);
        fmt::print("{}", text);
    } else if (experiment == "crosscheck") {
        const auto result = run_crosscheck(cfg);
        write_text(cfg.out, crosscheck_csv(result));
        fmt::print("crosscheck: {} samples, max trace distance {:.6e} -> {}\n", result.t.size(), result.max_deviation,
                   cfg.out);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collision-model thermalization simulator"};
    app.require_subcommand(1);
    Options opts;
    for (const char* name : {"sweep", "ising2", "xy", "analyze", "crosscheck"}) {
        add_common(app.add_subcommand(name, fmt::format("run the {} experiment", name)), opts);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string experiment = app.get_subcommands().front()->get_name();
    try {
        execute(experiment, resolve(experiment, opts));
    } catch (const colmod::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const colmod::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
