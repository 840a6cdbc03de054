#include "evoforge/core/error.hpp"
#include "evoforge/orchestrator/run.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <iostream>

namespace fs = std::filesystem;
using namespace evoforge;

int main(int argc, char** argv)
{
    CLI::App app{"LLM-guided program evolution with MAP-Elites"};
    app.require_subcommand(1);

    fs::path config_dir = orchestrator::default_data_dir() / "configs";
    fs::path runs_dir = "runs";
    std::string log_level = "info";
    app.add_option("--config-dir", config_dir, "Directory holding defaults.yaml, profiles/ and group options");
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

    std::string profile = "base";
    std::vector<std::string> overrides;
    auto* run = app.add_subcommand("run", "Compose a config and run evolution");
    run->add_option("--profile", profile, "Profile under configs/profiles");
    run->add_option("overrides", overrides, "group=option or dotted.key=value");

    auto* validate = app.add_subcommand("validate-config", "Compose and check a config without running");
    validate->add_option("--profile", profile, "Profile under configs/profiles");
    validate->add_option("overrides", overrides, "group=option or dotted.key=value");

    std::string ns;
    auto* insp = app.add_subcommand("inspect", "Print island occupancy and best-per-cell metrics");
    insp->add_option("namespace", ns)->required();
    insp->add_option("--runs-dir", runs_dir, "Directory holding run outputs");

    fs::path export_path;
    auto* exp = app.add_subcommand("export", "Write the archive snapshot and lineage edges as JSON");
    exp->add_option("namespace", ns)->required();
    exp->add_option("path", export_path)->required();
    exp->add_option("--runs-dir", runs_dir, "Directory holding run outputs");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(spdlog::level::from_str(log_level));

    try {
        if (*run || *validate) {
            auto config = orchestrator::compose_config(config_dir, profile, overrides);
            orchestrator::validate_run_config(config);
            if (*validate) {
                std::cout << config.tree.dump(2) << "\n";
                return 0;
            }
            auto result = orchestrator::run_evolution(config);
            std::cout << result.report.dump(2) << "\n";
            std::cerr << "outputs written to " << result.output_dir.string() << "\n";
            return 0;
        }
        if (*insp) {
            std::cout << orchestrator::inspect(runs_dir, ns);
            return 0;
        }
        if (*exp) {
            orchestrator::export_to_file(runs_dir, ns, export_path);
            std::cerr << "exported " << ns << " to " << export_path.string() << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
