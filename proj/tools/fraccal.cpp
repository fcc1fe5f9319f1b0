// fraccal: run, synthesize or validate a JSON run configuration.

#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fraccal/run.hpp"

namespace {

int guarded(const std::function<void()>& body) {
    using namespace fraccal;
    try {
        body();
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IllPosed& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional Calderon problem toolkit"};
    app.require_subcommand(1);
    std::string path;

    auto* run = app.add_subcommand("run", "Execute the task named in the configuration");
    run->add_option("config", path, "Run configuration (JSON)")->required();
    auto* synth = app.add_subcommand("synthesize", "Write synthetic exterior DN data for the configured potential");
    synth->add_option("config", path, "Run configuration (JSON)")->required();
    auto* check = app.add_subcommand("validate", "Parse and validate the configuration only");
    check->add_option("config", path, "Run configuration (JSON)")->required();
    app.footer(std::string("Outputs go to output.directory, below $") + fraccal::kOutputRootEnv + " when it is set.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : fraccal::kExitConfig;
    }

    return guarded([&] {
        const fraccal::RunConfig cfg = fraccal::load_config(path);
        if (check->parsed()) {
            std::cout << "validate: ok (config hash " << cfg.hash << ", task " << fraccal::to_string(cfg.task.type)
                      << ")\n";
        } else if (synth->parsed()) {
            std::cout << fraccal::synthesize(cfg).summary << "\n";
        } else if (run->parsed()) {
            std::cout << fraccal::run(cfg).summary << "\n";
        }
    });
}
