// CoopNav directional reproduction at reduced scale: hybrid quantum-actor /
// classical-critic vs classical MAA2C at a matched budget (5x5, N=2,
// p_slip = 0.10, 2000 episodes, 5 seeds, published learning rates), using the
// continuous observation encoding the paper trains on. The criterion demands
// a >= 0.10 absolute gap in mean success rate.
//
// Measured behaviour of this implementation (see the series files the test
// writes): the uniform-random success floor on this task is ~0.70, both arms
// learn correctly but are still in the critic warm-up phase at episode 2000,
// and classical MAA2C reaches ~0.99 success by 10000 episodes rather than
// collapsing to the ~0.40 the paper reports. The gap below is therefore
// expected to sit near zero; the assertion is kept as specified.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "qmarl/cli/config.hpp"
#include "qmarl/train/experiment.hpp"

using namespace qmarl;
namespace fs = std::filesystem;

namespace {

void report(const char* name, bool pass, const std::string& detail) {
    std::printf("[ACCEPTANCE] %-34s %s  %s\n", name, pass ? "PASS" : "FAIL",
                detail.c_str());
}

double run_arm(const std::string& label, const std::string& hybridisation) {
    cli::ExperimentConfig cfg = cli::parse_config(nlohmann::json{
        {"env", "coopnav"},
        {"hybridisation", hybridisation},
        {"encoding", "continuous"},
        {"maa2c", {{"episodes", 2000}}},
        {"seeds", {0, 1, 2, 3, 4}},
        {"record_timing", false}});
    cfg.out_dir =
        (fs::temp_directory_path() / "qmarl_acceptance_coopnav" / label).string();
    const auto result = train::run_experiment(cfg);
    REQUIRE(!result.any_diverged);
    double mean = 0.0;
    for (const auto& seed : result.seeds) mean += seed.mean_metric;
    return mean / result.seeds.size();
}

}  // namespace

TEST_CASE("coopnav directional reproduction at reduced scale") {
    fs::remove_all(fs::temp_directory_path() / "qmarl_acceptance_coopnav");

    const double hybrid = run_arm("quantum_actor", "quantum_actor");
    const double classical = run_arm("classical", "classical");
    const double gap = hybrid - classical;

    const bool pass = gap >= 0.10;
    report("coopnav-directional-gap", pass,
           "hybrid mean SR " + format_metric(hybrid) + " vs classical " +
               format_metric(classical) + ", gap " + format_metric(gap) +
               (pass ? ""
                     : " — both arms track the ~0.70 random floor at this budget; "
                       "a correct classical baseline does not reproduce the "
                       "paper's ~0.40 collapse (see notes)"));
    CHECK(gap >= 0.10);
}
