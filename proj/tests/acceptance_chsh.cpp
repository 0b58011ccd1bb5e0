// CHSH training reproduction at paper scale (20000 steps, 10 seeds, lr 0.02,
// baseline momentum 0.95, beta = 0) and the per-input-pair signature. Runs
// the same experiment pipeline as the CLI and reads back the metric files.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qmarl/cli/config.hpp"
#include "qmarl/metrics.hpp"
#include "qmarl/train/experiment.hpp"

using namespace qmarl;
namespace fs = std::filesystem;

namespace {

void report(const char* name, bool pass, const std::string& detail) {
    std::printf("[ACCEPTANCE] %-34s %s  %s\n", name, pass ? "PASS" : "FAIL",
                detail.c_str());
}

struct VariantOutcome {
    std::vector<double> final_win;            // per seed, exact eval at the end
    std::array<double, 4> converged_pairs{};  // mean of the last 10% of evals
};

const fs::path kBase = fs::temp_directory_path() / "qmarl_acceptance_chsh";

VariantOutcome run_variant(const std::string& label, const std::string& hybridisation,
                           const std::string& entanglement) {
    cli::ExperimentConfig cfg = cli::parse_config(nlohmann::json{
        {"env", "chsh"},
        {"hybridisation", hybridisation},
        {"entanglement", entanglement},
        {"record_timing", false}});
    cfg.out_dir = (kBase / label).string();
    const auto result = train::run_experiment(cfg);
    REQUIRE(!result.any_diverged);

    VariantOutcome outcome;
    std::array<double, 4> pair_sums{};
    for (const auto& seed : result.seeds) {
        outcome.final_win.push_back(seed.final_metric);
        const auto table =
            read_csv(cfg.out_dir + "/seed_" + std::to_string(seed.seed) + ".csv");
        const std::size_t rows = table.rows.size();
        const std::size_t tail_start = rows - rows / 10;
        const char* columns[4] = {"win_pair_00", "win_pair_01", "win_pair_10",
                                  "win_pair_11"};
        for (int k = 0; k < 4; ++k) {
            const auto series = table.column(columns[k]);
            double sum = 0.0;
            for (std::size_t i = tail_start; i < rows; ++i) sum += series[i];
            pair_sums[k] += sum / static_cast<double>(rows - tail_start);
        }
    }
    for (int k = 0; k < 4; ++k) {
        outcome.converged_pairs[k] = pair_sums[k] / outcome.final_win.size();
    }
    return outcome;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / v.size();
}

}  // namespace

TEST_CASE("chsh training reproduction and per-pair signature") {
    fs::remove_all(kBase);

    const auto classical = run_variant("classical", "classical", "product");
    const auto product = run_variant("product", "quantum_actor", "product");
    std::map<std::string, VariantOutcome> bell;
    for (const std::string name : {"phi_plus", "phi_minus", "psi_plus", "psi_minus"}) {
        bell.emplace(name, run_variant(name, "quantum_actor", name));
    }

    // (a) classical plateaus at and below the classical bound
    const double classical_mean = mean(classical.final_win);
    const bool pass_a = classical_mean >= 0.70 && classical_mean <= 0.76;
    report("chsh-training-classical", pass_a,
           "mean final win rate " + format_metric(classical_mean) + " in [0.70, 0.76]");
    CHECK(pass_a);

    // (b) the entangled pair clears the classical bound
    const auto& phi_plus = bell.at("phi_plus");
    const double phi_mean = mean(phi_plus.final_win);
    int phi_above = 0;
    for (double w : phi_plus.final_win) phi_above += w > 0.75;
    const bool pass_b = phi_mean >= 0.80 && phi_above >= 8;
    report("chsh-training-phi-plus", pass_b,
           "mean final " + format_metric(phi_mean) + ", " + std::to_string(phi_above) +
               "/10 seeds above 0.75");
    CHECK(pass_b);

    // (c) the product-state control stays at the classical level
    const double product_mean = mean(product.final_win);
    const bool pass_c = product_mean <= 0.76;
    report("chsh-training-product", pass_c,
           "mean final " + format_metric(product_mean) + " <= 0.76");
    CHECK(pass_c);

    // per-input-pair signature at convergence (mean of the last 10% of
    // evaluation rows, averaged over seeds)
    bool entangled_11 = true;
    std::string entangled_detail;
    for (const auto& [name, outcome] : bell) {
        entangled_11 = entangled_11 && outcome.converged_pairs[3] >= 0.75;
        entangled_detail += name + "=" + format_metric(outcome.converged_pairs[3]) + " ";
    }
    report("chsh-pair-entangled-11", entangled_11,
           "(1,1) pair per variant: " + entangled_detail + "(all >= 0.75)");
    CHECK(entangled_11);

    const double product_11 = product.converged_pairs[3];
    const bool pass_product_11 = product_11 >= 0.55 && product_11 <= 0.75;
    report("chsh-pair-product-11", pass_product_11,
           "product (1,1) pair " + format_metric(product_11) + " in 0.65 +/- 0.10");
    CHECK(pass_product_11);

    // Match pairs >= 0.80 for all five QMARL variants. Note: for product
    // policies the four per-pair rates sum to at most 3 (the CHSH bound), so
    // this clause conflicts with the product (1,1) ~= 0.65 clause whenever
    // (1,1) exceeds 0.60; asserted as specified regardless.
    bool match_pass = true;
    std::string match_detail;
    auto check_matches = [&](const std::string& name, const VariantOutcome& outcome) {
        for (int k = 0; k < 3; ++k) {
            if (outcome.converged_pairs[k] < 0.80) {
                match_pass = false;
                match_detail += name + "[" + std::to_string(k / 2) +
                                std::to_string(k % 2) +
                                "]=" + format_metric(outcome.converged_pairs[k]) + " ";
            }
        }
    };
    for (const auto& [name, outcome] : bell) check_matches(name, outcome);
    check_matches("product", product);
    report("chsh-pair-match-pairs", match_pass,
           match_pass ? "all five QMARL variants >= 0.80 on the three match pairs"
                      : "cells below 0.80: " + match_detail);
    CHECK(match_pass);
}
