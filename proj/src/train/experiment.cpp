#include "qmarl/train/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "qmarl/envs/coingame.hpp"
#include "qmarl/envs/coopnav.hpp"
#include "qmarl/errors.hpp"
#include "qmarl/metrics.hpp"
#include "qmarl/train/maa2c.hpp"
#include "qmarl/train/reinforce.hpp"

namespace qmarl::train {

namespace {

namespace fs = std::filesystem;

std::string seed_csv_path(const std::string& out_dir, long seed) {
    return out_dir + "/seed_" + std::to_string(seed) + ".csv";
}

SeedResult run_chsh_seed(const cli::ExperimentConfig& cfg, long seed) {
    SeedResult result;
    result.seed = seed;
    Rng rng(static_cast<std::uint64_t>(seed));

    const auto mode = cfg.hybrid.quantum_actor
                          ? policies::ChshMode::QuantumLocalRotation
                          : policies::ChshMode::ClassicalBernoulli;
    ChshPolicyPair pair = init_chsh_pair(mode, cfg.entanglement, rng);
    BaselineState baseline;

    CsvWriter csv(seed_csv_path(cfg.out_dir, seed),
                  {"step", "win_rate", "win_pair_00", "win_pair_01", "win_pair_10",
                   "win_pair_11", "reward"});

    double window_reward = 0.0;
    long window_rounds = 0;
    double metric_sum = 0.0;
    long metric_count = 0;
    ChshEvaluation eval;
    for (long step = 1; step <= cfg.chsh.steps; ++step) {
        const auto round = reinforce_update(pair, baseline, cfg.chsh, rng);
        window_reward += round.reward;
        window_rounds += 1;
        if (step % cfg.chsh.eval_every == 0 || step == cfg.chsh.steps) {
            eval = evaluate_chsh(pair);
            csv.row(std::vector<double>{
                static_cast<double>(step), eval.win_rate, eval.per_pair[0],
                eval.per_pair[1], eval.per_pair[2], eval.per_pair[3],
                window_reward / static_cast<double>(window_rounds)});
            metric_sum += eval.win_rate;
            metric_count += 1;
            window_reward = 0.0;
            window_rounds = 0;
        }
    }
    result.final_metric = eval.win_rate;
    result.final_per_pair = eval.per_pair;
    result.mean_metric = metric_count ? metric_sum / metric_count : 0.0;
    return result;
}

SeedResult run_maa2c_seed(const cli::ExperimentConfig& cfg, long seed) {
    SeedResult result;
    result.seed = seed;
    Rng rng(static_cast<std::uint64_t>(seed));

    const auto spec = cli::bundle_spec_for(cfg);
    auto bundle = policies::PolicyBundle::build(spec, rng);
    AdamBank adam(bundle, cfg.maa2c.actor_lr, cfg.maa2c.critic_lr);

    const bool coingame = cfg.env == "coingame";
    envs::CoinGameConfig coin_cfg{cfg.n_agents, cfg.grid, cfg.maa2c.episode_len};
    envs::CoopNavConfig nav_cfg;
    nav_cfg.n_agents = cfg.n_agents;
    nav_cfg.grid = cfg.grid;
    nav_cfg.max_steps = cfg.maa2c.episode_len;
    nav_cfg.p_slip = cfg.p_slip;
    nav_cfg.encoding = cfg.encoding;

    std::vector<std::string> columns =
        coingame ? std::vector<std::string>{"episode", "reward", "episode_length"}
                 : std::vector<std::string>{"episode", "success_rate", "collisions",
                                            "episode_length", "reward"};
    CsvWriter csv(seed_csv_path(cfg.out_dir, seed), columns);

    std::vector<double> metric_series;
    metric_series.reserve(cfg.maa2c.episodes);

    auto observe_all = [&](const envs::CoinGameState* coin_state,
                           const envs::CoopNavState* nav_state) {
        std::vector<std::vector<double>> obs(cfg.n_agents);
        for (int i = 0; i < cfg.n_agents; ++i) {
            obs[i] = coingame ? coingame_observe(coin_cfg, *coin_state, i)
                              : coopnav_observe(nav_cfg, *nav_state, i);
        }
        return obs;
    };
    auto concat = [](const std::vector<std::vector<double>>& obs) {
        std::vector<double> global;
        for (const auto& o : obs) global.insert(global.end(), o.begin(), o.end());
        return global;
    };

    for (long episode = 0; episode < cfg.maa2c.episodes; ++episode) {
        std::vector<Transition> trajectory;
        double episode_reward = 0.0;
        int episode_len = 0;
        int collisions = 0;
        bool success = false;

        envs::CoinGameState coin_state;
        envs::CoopNavState nav_state;
        if (coingame) {
            coin_state = coingame_reset(coin_cfg, rng);
        } else {
            nav_state = coopnav_reset(nav_cfg, rng);
        }
        auto observations = observe_all(&coin_state, &nav_state);
        auto global_obs = concat(observations);

        bool done = false;
        while (!done) {
            const auto forward = bundle.forward_actors(observations);
            const auto action = bundle.act(forward, rng);

            Transition tr;
            tr.observations = observations;
            tr.actions = action.actions;
            tr.global_obs = global_obs;

            if (coingame) {
                const auto step = coingame_step(coin_cfg, coin_state, action.actions, rng);
                tr.rewards = step.rewards;
                double mean = 0.0;
                for (double r : step.rewards) mean += r;
                mean /= cfg.n_agents;
                tr.team_reward = mean;
                episode_reward += mean;
                coin_state = step.next;
                done = step.done;
            } else {
                const auto step = coopnav_step(nav_cfg, nav_state, action.actions, rng);
                tr.rewards.assign(cfg.n_agents, step.shared_reward);
                tr.team_reward = step.shared_reward;
                episode_reward += step.shared_reward;
                collisions += step.collision ? 1 : 0;
                success = success || step.success;
                nav_state = step.next;
                done = step.done;
            }
            tr.done = done;

            observations = observe_all(&coin_state, &nav_state);
            global_obs = concat(observations);
            tr.next_global_obs = global_obs;
            trajectory.push_back(std::move(tr));
            episode_len += 1;
        }

        maa2c_episode_update(bundle, trajectory, cfg.maa2c, adam);

        if (coingame) {
            csv.row(std::vector<double>{static_cast<double>(episode), episode_reward,
                                        static_cast<double>(episode_len)});
            metric_series.push_back(episode_reward);
        } else {
            csv.row(std::vector<double>{
                static_cast<double>(episode), success ? 1.0 : 0.0,
                static_cast<double>(collisions), static_cast<double>(episode_len),
                episode_reward});
            metric_series.push_back(success ? 1.0 : 0.0);
        }
    }

    const auto rolling = rolling_mean(metric_series, 100);
    result.final_metric = rolling.empty() ? 0.0 : rolling.back();
    double sum = 0.0;
    for (double v : metric_series) sum += v;
    result.mean_metric = metric_series.empty() ? 0.0 : sum / metric_series.size();
    return result;
}

SeedResult run_seed(const cli::ExperimentConfig& cfg, long seed) {
    const auto start = std::chrono::steady_clock::now();
    SeedResult result;
    try {
        result = cfg.env == "chsh" ? run_chsh_seed(cfg, seed)
                                   : run_maa2c_seed(cfg, seed);
    } catch (const DivergenceError& e) {
        result.seed = seed;
        result.diverged = true;
        result.error = e.what();
    }
    if (cfg.record_timing) {
        result.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    }
    return result;
}

}  // namespace

ExperimentResult run_experiment(const cli::ExperimentConfig& cfg, int jobs) {
    fs::create_directories(cfg.out_dir);
    {
        std::ofstream config_out(cfg.out_dir + "/config.json");
        config_out << cli::canonical_json(cfg).dump(2) << "\n";
    }

    ExperimentResult result;
    result.out_dir = cfg.out_dir;
    result.seeds.resize(cfg.seeds.size());

    if (jobs <= 1) {
        for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
            result.seeds[i] = run_seed(cfg, cfg.seeds[i]);
        }
    } else {
        std::mutex next_mutex;
        std::size_t next = 0;
        auto worker = [&]() {
            while (true) {
                std::size_t index;
                {
                    std::lock_guard<std::mutex> lock(next_mutex);
                    if (next >= cfg.seeds.size()) return;
                    index = next++;
                }
                result.seeds[index] = run_seed(cfg, cfg.seeds[index]);
            }
        };
        std::vector<std::thread> pool;
        const int n_threads = std::min<int>(jobs, static_cast<int>(cfg.seeds.size()));
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    nlohmann::json summary;
    summary["config_hash"] = cli::config_hash8(cfg);
    summary["env"] = cfg.env;
    nlohmann::json seed_rows = nlohmann::json::array();
    double mean_of_means = 0.0, mean_of_finals = 0.0;
    int ok_seeds = 0;
    for (const auto& s : result.seeds) {
        nlohmann::json row;
        row["seed"] = s.seed;
        row["diverged"] = s.diverged;
        if (s.diverged) {
            row["error"] = s.error;
            result.any_diverged = true;
        } else {
            row["final_metric"] = s.final_metric;
            row["mean_metric"] = s.mean_metric;
            if (cfg.env == "chsh") {
                row["final_per_pair"] = s.final_per_pair;
            }
            mean_of_means += s.mean_metric;
            mean_of_finals += s.final_metric;
            ok_seeds += 1;
        }
        if (cfg.record_timing) row["wall_ms"] = s.wall_ms;
        seed_rows.push_back(std::move(row));
    }
    summary["seeds"] = std::move(seed_rows);
    if (ok_seeds > 0) {
        double var_means = 0.0, var_finals = 0.0;
        for (const auto& s : result.seeds) {
            if (s.diverged) continue;
            var_means += std::pow(s.mean_metric - mean_of_means / ok_seeds, 2);
            var_finals += std::pow(s.final_metric - mean_of_finals / ok_seeds, 2);
        }
        summary["aggregate"] = {
            {"n_seeds", ok_seeds},
            {"mean_metric_mean", mean_of_means / ok_seeds},
            {"mean_metric_std", std::sqrt(var_means / ok_seeds)},
            {"final_metric_mean", mean_of_finals / ok_seeds},
            {"final_metric_std", std::sqrt(var_finals / ok_seeds)}};
    }
    std::ofstream summary_out(cfg.out_dir + "/summary.json");
    summary_out << summary.dump(2) << "\n";
    return result;
}

}  // namespace qmarl::train
