#include "nlr/io.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"nlrlab: numerical laboratory for nonlocal radial diffusion problems"};
    app.require_subcommand(1);

    std::string run_path, validate_path;
    auto* run = app.add_subcommand("run", "run a scenario config and emit its artifacts");
    run->add_option("config", run_path, "path to the scenario config")->required();
    auto* validate = app.add_subcommand("validate", "parse and validate a scenario config");
    validate->add_option("config", validate_path, "path to the scenario config")->required();
    app.add_subcommand("version", "print the version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("version")) {
            std::cout << nlr::version_string() << "\n";
            return 0;
        }
        if (app.got_subcommand("validate")) {
            auto cfg = nlr::parse_config_file(validate_path);
            for (const auto& [key, value] : cfg.echo())
                std::cout << key << " = " << value << "\n";
            return 0;
        }
        auto cfg = nlr::parse_config_file(run_path);
        auto manifest = nlr::run_scenario(cfg);
        if (!manifest.ok) {
            std::cerr << "task failed: " << manifest.error << "\n";
            return 2;
        }
        for (const auto& f : manifest.files)
            std::cout << f.name << " " << f.digest << "\n";
        return 0;
    } catch (const nlr::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const nlr::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
