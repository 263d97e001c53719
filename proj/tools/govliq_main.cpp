#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "govliq/config.hpp"
#include "govliq/sweep.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_path;
    long long seed = -1;
    long long trials = -1;
    int workers = -1;
    bool inject_dk_dl_fault = false;
};

int run_command(const std::string& command, const CliOptions& options) {
    govliq::RunConfig config;
    try {
        config = options.config_path.empty() ? govliq::parse_config("")
                                             : govliq::load_config_file(options.config_path);
    } catch (const govliq::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return govliq::kExitConfig;
    }
    if (options.seed >= 0) config.seed = static_cast<std::uint64_t>(options.seed);
    if (options.trials >= 0) {
        if (options.trials < 1) {
            std::cerr << "error: --trials must be at least 1\n";
            return govliq::kExitConfig;
        }
        config.trials = static_cast<std::uint64_t>(options.trials);
    }
    if (options.workers >= 0) {
        config.workers = options.workers;
    } else if (const char* env = std::getenv("GOVLIQ_WORKERS")) {
        config.workers = std::atoi(env);
    }
    if (!options.out_path.empty()) config.output_path = options.out_path;

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!config.output_path.empty()) {
        file.open(config.output_path);
        if (!file) {
            std::cerr << "error: cannot open output file '" << config.output_path << "'\n";
            return govliq::kExitIo;
        }
        out = &file;
    }

    govliq::FaultInjection fault;
    fault.flip_dk_dl_sign = options.inject_dk_dl_fault;

    int code = govliq::kExitConfig;
    try {
        if (command == "analytic") {
            code = govliq::cmd_analytic(config, *out, std::cerr);
        } else if (command == "simulate") {
            code = govliq::cmd_simulate(config, *out, std::cerr);
        } else if (command == "synergy") {
            code = govliq::cmd_synergy(config, *out, std::cerr);
        } else {
            code = govliq::cmd_validate(config, *out, std::cerr, fault);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return govliq::kExitConfig;
    }

    if (file.is_open()) {
        file.close();
        if (!file) {
            std::cerr << "error: failed to finalize '" << config.output_path << "'\n";
            return govliq::kExitIo;
        }
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Governance / noise-trading liquidity model: analytic sweeps, Monte Carlo "
        "verification, synergy reports"};
    app.require_subcommand(1);

    CliOptions options;
    std::string active;
    for (const auto& [name, help] :
         {std::pair<const char*, const char*>{"analytic",
                                              "Tabulate exceedance probabilities and "
                                              "illiquidity indices over the sweep grid"},
          {"simulate", "Analytic table plus Monte Carlo estimates and agreement flags"},
          {"synergy", "Liquidity-gain difference tables and derivative sign map"},
          {"validate", "Run the full invariant and oracle check suite"}}) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", options.config_path, "Configuration file path");
        sub->add_option("--seed", options.seed, "Master seed (overrides config)");
        sub->add_option("--out", options.out_path, "Output file path (default: stdout)");
        sub->add_option("--trials", options.trials, "Monte Carlo trials (overrides config)");
        sub->add_option("--workers", options.workers,
                        "Worker thread count (overrides GOVLIQ_WORKERS and config)");
        if (std::string(name) == "validate")
            sub->add_flag("--inject-fault", options.inject_dk_dl_fault,
                          "Self-test hook: negate the analytic l-derivative inside the "
                          "derivative check");
        sub->callback([&active, name = std::string(name)] { active = name; });
    }

    CLI11_PARSE(app, argc, argv);
    return run_command(active, options);
}
