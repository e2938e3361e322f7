#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cruler/config.hpp"
#include "cruler/runner.hpp"

namespace {

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const cruler::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        // configuration and capability problems exit 1; everything else is a
        // genuine runtime failure and also maps to 1 (2 is reserved for
        // tolerance verdicts)
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conformal-ruler: emergent conformal data from many-body states"};
    app.require_subcommand(1);

    std::string config_path, out_dir, ruler_name, profile;
    int jobs = 0, grid = 101;
    long long seed = -1;

    auto add_common = [&](CLI::App* cmd, bool positional_config) {
        if (positional_config)
            cmd->add_option("config_file", config_path, "run configuration (TOML or JSON)");
        cmd->add_option("--config", config_path, "run configuration (TOML or JSON)");
        cmd->add_option("--out", out_dir, "output directory override");
        cmd->add_option("--seed", seed, "random seed override");
        cmd->add_option("--jobs", jobs, "max parallel experiments");
        cmd->add_option("--tolerance-profile", profile, "tolerance profile (paper|desk)")
            ->check(CLI::IsMember({"paper", "desk"}));
    };

    CLI::App* run_cmd = app.add_subcommand("run", "run every experiment in the config");
    add_common(run_cmd, true);

    CLI::App* scan_cmd = app.add_subcommand("scan-sigma", "sigma(K_D(x)) scan for one ruler");
    add_common(scan_cmd, false);
    scan_cmd->add_option("--ruler", ruler_name, "ruler name")->required();
    scan_cmd->add_option("--grid", grid, "grid points on [0,1]");

    CLI::App* embed_cmd =
        app.add_subcommand("embed", "build and verify the circle embedding of the eta table");
    add_common(embed_cmd, false);

    CLI::App* oracle_cmd =
        app.add_subcommand("oracle-compare", "validate the fast backend against the dense oracle");
    add_common(oracle_cmd, false);

    CLI11_PARSE(app, argc, argv);

    return guarded([&]() -> int {
        if (config_path.empty()) cruler::fail("config-parse", "no configuration file given");
        cruler::RunConfig config = cruler::load_config(config_path);
        if (seed >= 0) config.seed = seed;

        if (app.got_subcommand("run")) {
            cruler::RunOutcome outcome =
                cruler::run_experiments(config, out_dir, jobs, profile);
            for (const std::string& path : outcome.report_paths)
                std::cout << "report: " << path << "\n";
            std::cout << (outcome.exit_code == 0 ? "all tolerances met"
                                                 : "tolerance failures present")
                      << "\n";
            return outcome.exit_code;
        }
        if (app.got_subcommand("scan-sigma")) {
            if (grid < 11) cruler::fail("config-parse", "grid must be at least 11");
            const std::string dir = out_dir.empty() ? config.output_dir : out_dir;
            nlohmann::json report = cruler::run_sigma_scan(config, ruler_name, grid, dir);
            const std::string path = dir + "/scan_" + ruler_name + ".json";
            std::ofstream json_out(path);
            json_out << report.dump(2) << '\n';
            std::cout << report.dump(2) << "\n";
            return 0;
        }
        if (app.got_subcommand("embed")) {
            const std::string dir = out_dir.empty() ? config.output_dir : out_dir;
            nlohmann::json report = cruler::run_embed(config, dir);
            const std::string path = dir + "/embedding.json";
            std::ofstream json_out(path);
            json_out << report.dump(2) << '\n';
            std::cout << report.dump(2) << "\n";
            return 0;
        }
        if (app.got_subcommand("oracle-compare")) {
            nlohmann::json report = cruler::run_oracle_compare(config);
            std::cout << report.dump(2) << "\n";
            return report.value("pass", false) ? 0 : 2;
        }
        return 1;
    });
}
