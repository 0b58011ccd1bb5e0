#pragma once

#include <span>
#include <vector>

#include "qmarl/envs/coingame.hpp"  // Cell
#include "qmarl/rng.hpp"

namespace qmarl::envs {

enum CoopNavAction {
    kNavNorth = 0,
    kNavSouth = 1,
    kNavEast = 2,
    kNavWest = 3,
    kNavStay = 4
};

enum class ObsEncoding { ContinuousNormalised, OneHotCells };

struct CoopNavConfig {
    int n_agents = 2;
    int grid = 5;  // G in {5, 7, 9}
    int max_steps = 40;
    double p_slip = 0.10;
    double step_penalty = 0.01;
    double collision_penalty = 0.05;
    double success_reward = 1.0;
    ObsEncoding encoding = ObsEncoding::OneHotCells;

    int n_actions() const { return 5; }
    int obs_dim() const {
        return encoding == ObsEncoding::ContinuousNormalised
                   ? 2 * (n_agents + 1)
                   : (n_agents + 1) * grid * grid;
    }
    int global_obs_dim() const { return n_agents * obs_dim(); }
};

struct CoopNavState {
    std::vector<Cell> agents;
    Cell goal;
    int step = 0;
};

struct CoopNavStepResult {
    CoopNavState next;
    double shared_reward = 0.0;
    bool done = false;
    bool success = false;    // goal reached this step
    bool collision = false;  // two or more agents share a cell after moving
};

// Agents and goal placed uniformly at random on distinct cells.
CoopNavState coopnav_reset(const CoopNavConfig& cfg, Rng& rng);

// With probability p_slip per agent the intended action is replaced by a
// uniformly random action (which can equal the intended one). Shared reward
// is -step_penalty - collision_penalty*[collision] + success_reward*[goal].
CoopNavStepResult coopnav_step(const CoopNavConfig& cfg, const CoopNavState& state,
                               std::span<const int> actions, Rng& rng);

// Self first, then other agents in index order, then the goal; coordinates
// divided by the grid size (continuous) or one-hot cell planes.
std::vector<double> coopnav_observe(const CoopNavConfig& cfg,
                                    const CoopNavState& state, int agent);

}  // namespace qmarl::envs
