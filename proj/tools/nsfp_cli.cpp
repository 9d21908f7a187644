#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "nsfp/config.hpp"
#include "nsfp/driver.hpp"
#include "nsfp/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Picard solver and verification tiers for incompressible Navier-Stokes on box unions"};
    std::string subcommand, config_path, out_dir;
    unsigned long long seed = 0;
    bool override_smallness = false;

    std::vector<std::string> names(nsfp::kSubcommands.begin(), nsfp::kSubcommands.end());
    app.add_option("subcommand", subcommand, "tier to run; overrides the config's subcommand")
        ->check(CLI::IsMember(names));
    app.add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    auto* out_opt = app.add_option("--out", out_dir, "output directory; overrides the config's output");
    auto* seed_opt = app.add_option("--seed", seed, "random seed; overrides the config's seed");
    app.add_flag("--override-smallness", override_smallness, "solve even when the smallness conditions fail");
    CLI11_PARSE(app, argc, argv);

    try {
        nsfp::RunConfig cfg = nsfp::load_config(config_path);
        if (!subcommand.empty()) cfg.subcommand = subcommand;
        if (out_opt->count()) cfg.output = out_dir;
        if (seed_opt->count()) cfg.seed = seed;
        nsfp::RunOptions opt;
        opt.override_smallness = override_smallness;
        const nsfp::RunResult r = nsfp::run(cfg, opt);
        std::cout << cfg.subcommand << ": " << r.summary << "\n";
        for (const auto& f : r.files) std::cout << "  wrote " << f.string() << "\n";
        return r.exit_code;
    } catch (const nsfp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nsfp::Error& e) {
        std::cerr << "error in " << e.module() << ": " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
