#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qmarl/envs/coopnav.hpp"
#include "qmarl/names.hpp"
#include "qmarl/policies/bundle.hpp"
#include "qmarl/train/maa2c.hpp"
#include "qmarl/train/reinforce.hpp"

namespace qmarl::cli {

// Fully-resolved experiment description. Field defaults reproduce the
// published hyperparameter tables for each environment, so a minimal CHSH
// config is just env + entanglement + out_dir.
struct ExperimentConfig {
    std::string env;  // "chsh" | "coingame" | "coopnav"
    qsim::Entanglement entanglement = qsim::Entanglement::Product;
    policies::HybridisationTag hybrid;
    int n_agents = 2;
    int grid = 0;

    // quantum policy architecture
    int n_qubits = 4;
    int depth = 3;
    int rotations_per_layer = 4;
    policies::ReadoutMode readout = policies::ReadoutMode::ZExpectation;
    bool prepend_variational_block = false;

    // environment specifics
    envs::ObsEncoding encoding = envs::ObsEncoding::OneHotCells;
    double p_slip = 0.10;

    std::vector<int> actor_hidden;
    std::vector<int> critic_hidden;

    train::ReinforceConfig chsh;
    train::Maa2cConfig maa2c;

    std::vector<long> seeds;
    std::string out_dir;

    bool record_timing = true;  // wall-clock per seed, written to the summary
};

// Parses and validates a raw JSON config, filling environment-specific
// defaults. Throws ConfigError naming the offending field path.
ExperimentConfig parse_config(const nlohmann::json& raw);

// Canonical JSON form: every field explicit, keys sorted. parse -> serialise
// is idempotent.
nlohmann::json canonical_json(const ExperimentConfig& cfg);

// Reads a config file and applies QMARL_* environment overrides
// (QMARL_MAA2C__EPISODES=500 sets maa2c.episodes).
ExperimentConfig load_config_file(const std::string& path,
                                  bool apply_env_overrides = true);

nlohmann::json apply_env_overrides(nlohmann::json raw);

// 8-hex-digit FNV-1a of the canonical form; keys sweep output directories
// collision-free.
std::string config_hash8(const ExperimentConfig& cfg);

// Sweep file: {"base": <config>, "axes": {"<field.path>": [values...]}}.
// Cartesian expansion in sorted-axis order; each entry gets
// out_dir = base.out_dir/<axis=value,...>-<hash8>.
std::vector<ExperimentConfig> expand_sweep(const nlohmann::json& sweep);

// Architecture implied by the config for the grid-world environments.
policies::BundleSpec bundle_spec_for(const ExperimentConfig& cfg);

}  // namespace qmarl::cli
