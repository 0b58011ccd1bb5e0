#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmarl/cli/config.hpp"
#include "qmarl/cli/paramcount.hpp"
#include "qmarl/cli/report.hpp"
#include "qmarl/errors.hpp"
#include "qmarl/train/experiment.hpp"

namespace {

// --seeds accepts "0,1,2" (a list) or "5" (seeds 0..4)
std::vector<long> parse_seeds(const std::string& text) {
    std::vector<long> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) seeds.push_back(std::stol(item));
    if (seeds.size() == 1 && text.find(',') == std::string::npos) {
        const long n = seeds[0];
        seeds.clear();
        for (long s = 0; s < n; ++s) seeds.push_back(s);
    }
    return seeds;
}

int run_command(const std::string& config_path, const std::string& seeds_arg,
                const std::string& out_override, int jobs) {
    auto cfg = qmarl::cli::load_config_file(config_path);
    if (!seeds_arg.empty()) cfg.seeds = parse_seeds(seeds_arg);
    if (!out_override.empty()) cfg.out_dir = out_override;

    const auto result = qmarl::train::run_experiment(cfg, jobs);
    for (const auto& seed : result.seeds) {
        if (seed.diverged) {
            std::cerr << "seed " << seed.seed << " diverged: " << seed.error << "\n";
        }
    }
    std::cout << "wrote " << result.seeds.size() << " seed metric files to "
              << result.out_dir << "\n";
    return result.any_diverged ? 1 : 0;
}

int sweep_command(const std::string& sweep_path, int jobs) {
    std::ifstream in(sweep_path);
    if (!in) {
        std::cerr << "cannot open sweep file: " << sweep_path << "\n";
        return 2;
    }
    nlohmann::json sweep;
    in >> sweep;
    const auto configs = qmarl::cli::expand_sweep(sweep);
    std::cout << "sweep expands to " << configs.size() << " experiments\n";
    bool any_diverged = false;
    for (const auto& cfg : configs) {
        std::cout << "running " << cfg.out_dir << "\n";
        const auto result = qmarl::train::run_experiment(cfg, jobs);
        any_diverged = any_diverged || result.any_diverged;
    }
    return any_diverged ? 1 : 0;
}

int report_command(const std::vector<std::string>& dirs, const std::string& out,
                   int window) {
    qmarl::cli::ReportOptions options;
    options.out_dir = out;
    options.window = window;
    const auto result = qmarl::cli::write_report(dirs, options);
    for (const auto& variant : result.variants) {
        std::cout << variant.label << ": mean=" << variant.mean
                  << " std=" << variant.std << " best=" << variant.best
                  << (variant.complete ? "" : "  [incomplete seeds]") << "\n";
    }
    std::cout << "report written to " << options.out_dir << "\n";
    return 0;
}

int paramcount_command(const std::string& config_path, const std::string& expect_path) {
    if (!expect_path.empty()) {
        std::ifstream in(expect_path);
        if (!in) {
            std::cerr << "cannot open expectations file: " << expect_path << "\n";
            return 2;
        }
        nlohmann::json golden;
        in >> golden;
        const int mismatches =
            qmarl::cli::check_paramcount_expectations(golden, std::cerr);
        if (mismatches > 0) {
            std::cerr << mismatches << " parameter-count cell(s) mismatched\n";
            return 1;
        }
        std::cout << "all expected parameter-count cells match\n";
        return 0;
    }
    const auto cfg = qmarl::cli::load_config_file(config_path);
    qmarl::cli::print_paramcount(qmarl::cli::paramcount_report(cfg), std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum multi-agent RL laboratory"};
    app.require_subcommand(1);

    std::string config_path, seeds_arg, out_override, expect_path;
    std::vector<std::string> report_dirs;
    std::string report_out = "report";
    int jobs = 1;
    int window = 100;

    auto* run = app.add_subcommand("run", "train one experiment configuration");
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    run->add_option("--seeds", seeds_arg, "comma list of seeds, or a count");
    run->add_option("--out", out_override, "override the output directory");
    run->add_option("--jobs", jobs, "parallel seed workers");

    auto* sweep = app.add_subcommand("sweep", "expand and run a sweep file");
    sweep->add_option("--config", config_path, "sweep spec (JSON)")->required();
    sweep->add_option("--jobs", jobs, "parallel seed workers");

    auto* report = app.add_subcommand("report", "aggregate finished experiments");
    report->add_option("dirs", report_dirs, "result directories")->required();
    report->add_option("--out", report_out, "report output directory");
    report->add_option("--window", window, "rolling-mean window");

    auto* paramcount =
        app.add_subcommand("paramcount", "trainable-parameter accounting");
    paramcount->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    paramcount->add_option("--expect", expect_path, "golden cell expectations (JSON)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_command(config_path, seeds_arg, out_override, jobs);
        if (sweep->parsed()) return sweep_command(config_path, jobs);
        if (report->parsed()) return report_command(report_dirs, report_out, window);
        if (paramcount->parsed()) return paramcount_command(config_path, expect_path);
    } catch (const qmarl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
