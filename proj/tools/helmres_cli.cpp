// Command-line front end: one scenario per process.
#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "helmres/errors.hpp"
#include "helmres/scenario.hpp"

using namespace helmres;

int main(int argc, char** argv) {
    CLI::App app{"helmres: Helmholtz resonator arrays, resonances and time-reversal focusing"};
    app.require_subcommand(1);
    std::string config, out;
    std::uint64_t seed = 0;
    int threads = 0;
    for (const char* name : {"capacity", "resonances", "psf", "imaging", "validate-integrals", "validate", "run"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "flat key = value scenario file");
        sub->add_option("--out", out, "output directory (created if missing)");
        sub->add_option("--seed", seed, "seed for randomized modes");
        sub->add_option("--threads", threads, "worker threads (overrides RES_THREADS)")->check(CLI::PositiveNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    const std::string cmd = app.get_subcommands().front()->get_name();
    auto* sub = app.get_subcommands().front();

    try {
        RunKind run;
        KeyValueConfig cfg;
        const bool have_cfg = !config.empty();
        if (have_cfg) cfg = KeyValueConfig::load(config);
        if (cmd == "run") {
            if (!have_cfg) throw ConfigError("run: --config is required");
            run = parse_run_kind(cfg.str("run"));
        } else {
            run = parse_run_kind(cmd);
        }
        Scenario s = have_cfg ? scenario_from_config(cfg, run) : default_scenario(run);
        if (const char* env = std::getenv("RES_THREADS")) {
            const int n = std::atoi(env);
            if (n < 1) throw ConfigError("RES_THREADS must be a positive integer");
            s.threads = n;
        }
        if (sub->count("--threads")) s.threads = threads;
        if (sub->count("--seed")) s.seed = seed;
        if (!out.empty()) s.out_dir = out;
        return run_scenario(s, std::cout);
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
}
