#include "qmarl/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qmarl/metrics.hpp"

namespace qmarl::cli {

namespace {

namespace fs = std::filesystem;

std::string metric_column_for(const std::string& env) {
    if (env == "chsh") return "win_rate";
    if (env == "coopnav") return "success_rate";
    return "reward";
}

std::string x_column_for(const std::string& env) {
    return env == "chsh" ? "step" : "episode";
}

std::string dir_label(const fs::path& dir) {
    return dir.filename().empty() ? dir.parent_path().filename().string()
                                  : dir.filename().string();
}

}  // namespace

ReportResult write_report(const std::vector<std::string>& result_dirs,
                          const ReportOptions& options) {
    fs::create_directories(options.out_dir);
    ReportResult result;

    for (const auto& dir : result_dirs) {
        VariantSummary summary;
        summary.dir = dir;

        std::ifstream config_in(dir + "/config.json");
        if (!config_in) {
            throw std::runtime_error("no config.json in result dir: " + dir);
        }
        nlohmann::json config;
        config_in >> config;
        const std::string env = config.at("env").get<std::string>();
        summary.label = env + "/" + config.at("entanglement").get<std::string>() + "/" +
                        config.at("hybridisation").get<std::string>();
        const auto seeds = config.at("seeds").get<std::vector<long>>();
        summary.n_seeds_expected = static_cast<int>(seeds.size());

        const std::string metric = metric_column_for(env);
        std::vector<std::vector<double>> rolled_per_seed;
        std::vector<double> x_axis;
        std::vector<double> seed_means;
        for (long seed : seeds) {
            const std::string path = dir + "/seed_" + std::to_string(seed) + ".csv";
            if (!fs::exists(path)) {
                std::cerr << "warning: missing seed file " << path << "\n";
                continue;
            }
            const auto table = read_csv(path);
            const auto series = table.column(metric);
            if (x_axis.empty()) x_axis = table.column(x_column_for(env));
            rolled_per_seed.push_back(rolling_mean(series, options.window));
            double mean = 0.0;
            for (double v : series) mean += v;
            seed_means.push_back(series.empty() ? 0.0 : mean / series.size());
        }
        summary.n_seeds_present = static_cast<int>(seed_means.size());
        summary.complete = summary.n_seeds_present == summary.n_seeds_expected;
        if (!summary.complete) result.any_incomplete = true;

        if (!seed_means.empty()) {
            double mean = 0.0;
            for (double v : seed_means) mean += v;
            mean /= seed_means.size();
            double var = 0.0;
            for (double v : seed_means) var += (v - mean) * (v - mean);
            summary.mean = mean;
            summary.std = std::sqrt(var / seed_means.size());
            summary.best = *std::max_element(seed_means.begin(), seed_means.end());
            double final_sum = 0.0;
            for (const auto& rolled : rolled_per_seed) final_sum += rolled.back();
            summary.final_mean = final_sum / rolled_per_seed.size();

            // per-variant rolling series, mean and std across seeds
            const std::size_t length = rolled_per_seed.front().size();
            CsvWriter series_csv(options.out_dir + "/" + dir_label(dir) + "_series.csv",
                                 {x_column_for(env), "rolling_mean", "rolling_std",
                                  "n_seeds"});
            for (std::size_t i = 0; i < length; ++i) {
                double m = 0.0;
                int n = 0;
                for (const auto& rolled : rolled_per_seed) {
                    if (i < rolled.size()) {
                        m += rolled[i];
                        n += 1;
                    }
                }
                m /= n;
                double v = 0.0;
                for (const auto& rolled : rolled_per_seed) {
                    if (i < rolled.size()) v += (rolled[i] - m) * (rolled[i] - m);
                }
                series_csv.row(std::vector<double>{
                    i < x_axis.size() ? x_axis[i] : static_cast<double>(i), m,
                    std::sqrt(v / n), static_cast<double>(n)});
            }
        }
        result.variants.push_back(std::move(summary));
    }

    std::ofstream table(options.out_dir + "/summary_table.csv");
    table << "dir,label,n_seeds,complete,mean,std,best,final_mean\n";
    for (const auto& v : result.variants) {
        table << v.dir << "," << v.label << "," << v.n_seeds_present << ","
              << (v.complete ? 1 : 0) << "," << format_metric(v.mean) << ","
              << format_metric(v.std) << "," << format_metric(v.best) << ","
              << format_metric(v.final_mean) << "\n";
    }
    return result;
}

}  // namespace qmarl::cli
