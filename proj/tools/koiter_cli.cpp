#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "koiter/commands.hpp"
#include "koiter/error.hpp"

namespace {

std::string usage() {
    std::string s = "usage: koiter_cli <command> --config <path> [--out <path>]\ncommands:";
    for (const auto& c : koiter::known_commands) s += " " + c;
    return s + "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Koiter shell boundary-layer and reduced-operator experiments"};
    std::string command, config_path, out_path;
    app.add_option("command", command, "command to run")->required();
    app.add_option("--config", config_path, "experiment config file")->required();
    app.add_option("--out", out_path, "CSV output path (default: output_path from config, else stdout)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help() << usage();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << usage();
        return 2;
    }

    if (std::find(koiter::known_commands.begin(), koiter::known_commands.end(), command) ==
        koiter::known_commands.end()) {
        std::cerr << "unknown command '" << command << "'\n" << usage();
        return 2;
    }

    koiter::ExperimentConfig cfg;
    try {
        cfg = koiter::load_config(config_path);
    } catch (const koiter::Error& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    }
    if (!cfg.command.empty() && cfg.command != command) {
        std::cerr << "validation error: config command '" << cfg.command << "' does not match '" << command
                  << "'\n";
        return 2;
    }
    cfg.command = command;

    std::string csv, message;
    int code = koiter::run(cfg, csv, message);
    if (code == 2) {
        std::cerr << "validation error: " << message << "\n";
        return code;
    }
    if (code != 0) {
        std::cerr << "numerical failure: " << message << "\n";
        return code;
    }

    std::string target = !out_path.empty() ? out_path : cfg.output_path;
    if (target.empty()) {
        std::cout << csv;
        return 0;
    }
    std::ofstream out(target, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write '" << target << "'\n";
        return 2;
    }
    out << csv;
    return 0;
}
