#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mcpr/pipeline.hpp"

namespace {

constexpr const char* kSubcommands[] = {"gen-synthetic", "split",     "embed",        "train",
                                        "eval",          "openworld", "sweep-lambda", "report"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-cue person recognition pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::int64_t seed_override = 0;
    bool has_seed_override = false;
    app.add_option("--config", config_path, "Run configuration file")->required();
    app.add_option("--out", out_dir, "Output directory (overrides the config's `out`)");
    app.add_option("--seed", seed_override, "Global seed override")
        ->each([&](const std::string&) { has_seed_override = true; });

    for (const char* name : kSubcommands) {
        app.add_subcommand(name)->silent(false);
    }

    CLI11_PARSE(app, argc, argv);

    mcpr::Config config;
    try {
        config = mcpr::Config::load(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return 2;
    }
    if (has_seed_override) config.set("seed", std::to_string(seed_override));
    if (out_dir.empty()) out_dir = config.get_string("out", "out");

    return mcpr::run_command(app.get_subcommands().front()->get_name(), config, out_dir);
}
