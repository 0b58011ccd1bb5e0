#pragma once

#include <array>
#include <string>
#include <vector>

#include "qmarl/cli/config.hpp"

namespace qmarl::train {

struct SeedResult {
    long seed = 0;
    bool diverged = false;
    std::string error;
    // primary metric: exact win rate (chsh), episode success (coopnav),
    // per-episode team reward (coingame)
    double final_metric = 0.0;        // rolling value at the end of training
    double mean_metric = 0.0;         // mean over the full run
    std::array<double, 4> final_per_pair{};  // chsh only, index x*2+y
    long wall_ms = 0;
};

struct ExperimentResult {
    std::string out_dir;
    std::vector<SeedResult> seeds;
    bool any_diverged = false;
};

// Trains every seed of the experiment, one metrics CSV per seed plus a
// summary JSON. Deterministic per (config, seed); seeds run in parallel when
// jobs > 1 without affecting file contents. Divergent seeds are recorded and
// the remaining seeds still run.
ExperimentResult run_experiment(const cli::ExperimentConfig& cfg, int jobs = 1);

}  // namespace qmarl::train
