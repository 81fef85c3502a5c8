// scaledecay <scan|resonances|survival|validate|figures> --config <path> [--out <dir>] [--threads N]

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "scaledecay/tasks.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Decay of metastable states in uniformly moving scaling potentials"};
    app.set_version_flag("--version", std::string(scaledecay::version_string()));

    std::string task;
    std::string config;
    std::string out = ".";
    int threads = 1;
    app.add_option("task", task, "scan | resonances | survival | validate | figures")
        ->required()
        ->check(CLI::IsMember({"scan", "resonances", "survival", "validate", "figures"}));
    app.add_option("--config", config, "run configuration file")->required();
    app.add_option("--out", out, "output directory (created if missing)");
    app.add_option("--threads", threads, "worker threads for C2 scans")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return scaledecay::exit_config;
    }
    return scaledecay::run_task(task, config, out, threads, std::cerr);
}
