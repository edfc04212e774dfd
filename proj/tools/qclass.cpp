// qclass: closed-form reports and simulations for learning to classify two
// unknown qubit states.
//
//   qclass report|gaussian-sim|qubit-sim|sweep --config <path>
//          [--out <path>] [--format csv|json] [--seed <u64>] [--threads <k>]

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "qclass/experiment_cli.hpp"

namespace {

using namespace qclass;
using namespace qclass::cli;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal classification of two unknown qubit states"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format_name;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    const std::pair<const char*, const char*> commands[] = {
        {"report", "closed-form risk constants for one configuration"},
        {"gaussian-sim", "Monte Carlo risk of the strategies in the Gaussian limit model"},
        {"qubit-sim", "finite-n rescaled excess risk of the tomography plug-in"},
        {"sweep", "closed-form report over a grid of configurations"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON experiment configuration")->required();
        sub->add_option("--out", out_path, "output file (default: stdout)");
        sub->add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", seed, "overrides the config seed");
        sub->add_option("--threads", threads, "worker threads, 0 = all cores; output does not depend on it");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    const CLI::App* sub = app.get_subcommands().front();
    const Command command = *parse_command(sub->get_name());

    try {
        ExperimentConfig cfg = parse_config_text(read_file(config_path));
        if (sub->count("--seed")) cfg.seed = seed;
        if (sub->count("--threads")) cfg.threads = threads;
        if (sub->count("--format")) cfg.format = parse_format(format_name);
        if (sub->count("--out")) cfg.out = out_path;

        const auto rows = run_command(command, cfg);
        const OutputFormat format = cfg.format.value_or(OutputFormat::Csv);
        if (cfg.out) {
            std::ofstream os(*cfg.out, std::ios::binary);
            if (!os) throw ConfigError("cannot open output file '" + *cfg.out + "'");
            write_rows(os, rows, format);
        } else {
            write_rows(std::cout, rows, format);
        }
        return kExitOk;
    } catch (const DegenerateTrainingSetError& e) {
        std::cerr << "qclass: runtime error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const ConfigError& e) {
        std::cerr << "qclass: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidStateError& e) {
        std::cerr << "qclass: invalid state: " << e.what() << '\n';
        return kExitConfig;
    } catch (const PreconditionError& e) {
        std::cerr << "qclass: precondition failed: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "qclass: runtime error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
