// Command-line entry point: infoprop <simulate|theory|meanfield|compare|all> [options]

#include "infoprop/config.hpp"
#include "infoprop/pipeline.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>
#include <string>

int main(int argc, char** argv)
{
    using namespace infoprop;

    CLI::App app{"Information propagation on random networks: simulation, expectation model and mean-field baseline"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string config_path;
    app.add_option("--config", config_path, "Config file with key = value lines");

    // Every flag maps onto the config key of the same name; flags win over the file.
    const std::map<std::string, std::string> flags = {
        {"--distribution", "distribution"}, {"--gamma", "gamma"},
        {"--gamma-prime", "gamma_prime"},   {"--k-min", "k_min"},
        {"--k-max", "k_max"},               {"--pmf-file", "pmf_file"},
        {"--n", "n"},                       {"--runs", "runs"},
        {"--mu", "mu"},                     {"--threshold", "threshold"},
        {"--i0", "i0"},                     {"--steps-per-section", "steps_per_section"},
        {"--seed", "seed"},                 {"--parallelism", "parallelism"},
        {"--milestones", "milestones"},     {"--out", "out"},
        {"--dt", "dt"},                     {"--t-end", "t_end"},
        {"--seeding", "seeding"},
    };
    std::map<std::string, std::string> flag_values;
    for (const auto& [flag, key] : flags)
        app.add_option(flag, flag_values[key], "Overrides config key '" + key + "'");

    const std::map<std::string, std::string> switches = {
        {"--dump-records", "dump_records"},
        {"--export-network", "export_network"},
    };
    for (const auto& [flag, key] : switches)
        app.add_flag(flag)->description("Sets config key '" + key + "' to true");

    bool print_config = false;
    app.add_flag("--print-config", print_config, "Print the resolved config and exit");

    for (const char* name : {"simulate", "theory", "meanfield", "compare", "all"})
        app.add_subcommand(name, std::string("Run the ") + name + " stage")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    RunConfig config;
    try {
        ConfigValues values;
        if (!config_path.empty())
            values = read_config_values(config_path);
        for (const auto& [flag, key] : flags)
            if (app.count(flag) > 0)
                values[key] = flag_values[key];
        for (const auto& [flag, key] : switches)
            if (app.count(flag) > 0)
                values[key] = "true";
        config = parse_config(values);
    } catch (const ConfigError& e) {
        std::cerr << "infoprop: " << e.what() << '\n';
        return kExitConfig;
    }

    if (print_config) {
        std::cout << serialize(config);
        return kExitOk;
    }

    const auto command = parse_command(app.get_subcommands().front()->get_name());
    const RunOutcome outcome = run(*command, config, std::cerr);
    if (outcome.exit_code != kExitOk) {
        std::cerr << "infoprop: " << outcome.message << '\n';
        return outcome.exit_code;
    }
    std::cerr << outcome.message << '\n';
    return kExitOk;
}
