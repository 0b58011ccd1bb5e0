#include "qmarl/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>

#include "qmarl/envs/coingame.hpp"
#include "qmarl/errors.hpp"

extern char** environ;

namespace qmarl::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kTopLevelKeys{
    "env",          "entanglement",   "hybridisation",
    "n_agents",     "grid",           "n_qubits",
    "depth",        "rotations_per_layer", "readout",
    "prepend_variational_block",      "encoding",
    "p_slip",       "actor_hidden",   "critic_hidden",
    "chsh",         "maa2c",          "seeds",
    "out_dir",      "record_timing"};

const std::set<std::string> kChshKeys{"lr",          "baseline_momentum",
                                      "steps",       "entropy_coeff",
                                      "eval_episodes", "eval_every"};

const std::set<std::string> kMaa2cKeys{"actor_lr",      "critic_lr",
                                       "gamma",         "episode_len",
                                       "episodes",      "entropy_coeff",
                                       "grad_clip_norm"};

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& prefix) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) {
            throw ConfigError(prefix + key, "unknown field");
        }
    }
}

template <typename T>
T get_or(const json& obj, const std::string& key, const std::string& path, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(path, "wrong type");
    }
}

std::string get_enum(const json& obj, const std::string& key, const std::string& path,
                     const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) throw ConfigError(path, "expected a string");
    return obj.at(key).get<std::string>();
}

}  // namespace

ExperimentConfig parse_config(const json& raw) {
    if (!raw.is_object()) throw ConfigError("", "config must be a JSON object");
    reject_unknown_keys(raw, kTopLevelKeys, "");

    ExperimentConfig cfg;
    cfg.env = get_enum(raw, "env", "env", "");
    if (cfg.env != "chsh" && cfg.env != "coingame" && cfg.env != "coopnav") {
        throw ConfigError("env", "must be one of chsh|coingame|coopnav, got '" +
                                     cfg.env + "'");
    }

    try {
        cfg.entanglement = entanglement_from_string(
            get_enum(raw, "entanglement", "entanglement", "product"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("entanglement", e.what());
    }
    try {
        const std::string default_hybrid =
            cfg.env == "chsh" ? "quantum_actor" : "classical";
        cfg.hybrid = hybridisation_from_string(
            get_enum(raw, "hybridisation", "hybridisation", default_hybrid));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("hybridisation", e.what());
    }
    try {
        cfg.readout =
            readout_from_string(get_enum(raw, "readout", "readout", "z_expectation"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("readout", e.what());
    }
    try {
        cfg.encoding = encoding_from_string(get_enum(raw, "encoding", "encoding", "onehot"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("encoding", e.what());
    }

    cfg.n_agents = get_or<int>(raw, "n_agents", "n_agents", cfg.env == "coingame" ? 2 : 2);
    cfg.n_qubits = get_or<int>(raw, "n_qubits", "n_qubits", 4);
    cfg.depth = get_or<int>(raw, "depth", "depth", 3);
    cfg.rotations_per_layer =
        get_or<int>(raw, "rotations_per_layer", "rotations_per_layer", 4);
    cfg.prepend_variational_block = get_or<bool>(
        raw, "prepend_variational_block", "prepend_variational_block", false);
    cfg.p_slip = get_or<double>(raw, "p_slip", "p_slip", 0.10);
    cfg.record_timing = get_or<bool>(raw, "record_timing", "record_timing", true);

    // environment-specific defaults (published hyperparameter tables)
    if (cfg.env == "chsh") {
        if (cfg.n_agents != 2) throw ConfigError("n_agents", "chsh is a 2-agent game");
        if (cfg.hybrid.quantum_critic) {
            throw ConfigError("hybridisation",
                              "chsh has no critic; use classical or quantum_actor");
        }
        cfg.grid = 0;
    } else if (cfg.env == "coingame") {
        if (cfg.n_agents != 2 && cfg.n_agents != 4) {
            throw ConfigError("n_agents", "coingame supports 2 or 4 agents");
        }
        cfg.grid = get_or<int>(raw, "grid", "grid", cfg.n_agents == 2 ? 3 : 5);
        if (cfg.grid < 2) throw ConfigError("grid", "grid too small");
    } else {
        if (cfg.n_agents < 2 || cfg.n_agents > 4) {
            throw ConfigError("n_agents", "coopnav supports 2-4 agents");
        }
        cfg.grid = get_or<int>(raw, "grid", "grid", 5);
        if (cfg.grid != 5 && cfg.grid != 7 && cfg.grid != 9) {
            throw ConfigError("grid", "coopnav grids are 5, 7 or 9");
        }
    }

    if (raw.contains("actor_hidden")) {
        cfg.actor_hidden = raw.at("actor_hidden").get<std::vector<int>>();
    } else if (cfg.env == "coingame") {
        cfg.actor_hidden = {12};
    } else {
        cfg.actor_hidden = {16, 16};
    }
    if (raw.contains("critic_hidden")) {
        cfg.critic_hidden = raw.at("critic_hidden").get<std::vector<int>>();
    } else if (cfg.env == "coingame") {
        cfg.critic_hidden = cfg.n_agents == 2 ? std::vector<int>{12}
                                              : std::vector<int>{6};
    } else {
        cfg.critic_hidden = {32, 16};
    }

    const json chsh_raw = raw.contains("chsh") ? raw.at("chsh") : json::object();
    if (!chsh_raw.is_object()) throw ConfigError("chsh", "expected an object");
    reject_unknown_keys(chsh_raw, kChshKeys, "chsh.");
    cfg.chsh.lr = get_or<double>(chsh_raw, "lr", "chsh.lr", 0.02);
    cfg.chsh.baseline_momentum =
        get_or<double>(chsh_raw, "baseline_momentum", "chsh.baseline_momentum", 0.95);
    cfg.chsh.steps = get_or<long>(chsh_raw, "steps", "chsh.steps", 20000);
    cfg.chsh.entropy_coeff =
        get_or<double>(chsh_raw, "entropy_coeff", "chsh.entropy_coeff", 0.0);
    cfg.chsh.eval_episodes =
        get_or<int>(chsh_raw, "eval_episodes", "chsh.eval_episodes", 1000);
    cfg.chsh.eval_every = get_or<long>(chsh_raw, "eval_every", "chsh.eval_every", 200);
    if (cfg.chsh.baseline_momentum < 0.0 || cfg.chsh.baseline_momentum >= 1.0) {
        throw ConfigError("chsh.baseline_momentum", "must lie in [0, 1)");
    }
    if (cfg.chsh.lr <= 0.0) throw ConfigError("chsh.lr", "must be positive");

    const json maa2c_raw = raw.contains("maa2c") ? raw.at("maa2c") : json::object();
    if (!maa2c_raw.is_object()) throw ConfigError("maa2c", "expected an object");
    reject_unknown_keys(maa2c_raw, kMaa2cKeys, "maa2c.");
    const bool coin = cfg.env == "coingame";
    cfg.maa2c.actor_lr =
        get_or<double>(maa2c_raw, "actor_lr", "maa2c.actor_lr", coin ? 3e-4 : 2e-4);
    cfg.maa2c.critic_lr =
        get_or<double>(maa2c_raw, "critic_lr", "maa2c.critic_lr", coin ? 1e-3 : 3e-4);
    cfg.maa2c.gamma = get_or<double>(maa2c_raw, "gamma", "maa2c.gamma", coin ? 0.95 : 0.99);
    cfg.maa2c.episode_len =
        get_or<int>(maa2c_raw, "episode_len", "maa2c.episode_len", coin ? 150 : 40);
    const long default_episodes =
        coin ? (cfg.n_agents == 2 ? 3000 : 5000) : 10000;
    cfg.maa2c.episodes =
        get_or<long>(maa2c_raw, "episodes", "maa2c.episodes", default_episodes);
    cfg.maa2c.entropy_coeff =
        get_or<double>(maa2c_raw, "entropy_coeff", "maa2c.entropy_coeff", 0.0);
    cfg.maa2c.grad_clip_norm =
        get_or<double>(maa2c_raw, "grad_clip_norm", "maa2c.grad_clip_norm", 0.0);
    if (cfg.maa2c.gamma <= 0.0 || cfg.maa2c.gamma > 1.0) {
        throw ConfigError("maa2c.gamma", "must lie in (0, 1]");
    }

    if (raw.contains("seeds")) {
        try {
            cfg.seeds = raw.at("seeds").get<std::vector<long>>();
        } catch (const json::exception&) {
            throw ConfigError("seeds", "expected a list of integers");
        }
    } else {
        for (long s = 0; s < 10; ++s) cfg.seeds.push_back(s);
    }
    if (cfg.seeds.empty()) throw ConfigError("seeds", "at least one seed required");

    cfg.out_dir = get_or<std::string>(raw, "out_dir", "out_dir", "results/" + cfg.env);

    // architecture-level validation for the quantum variants
    if (cfg.env != "chsh" && cfg.hybrid.quantum_actor) {
        bundle_spec_for(cfg).validate();
    }
    return cfg;
}

nlohmann::json canonical_json(const ExperimentConfig& cfg) {
    json out;
    out["env"] = cfg.env;
    out["entanglement"] = to_string(cfg.entanglement);
    out["hybridisation"] = to_string(cfg.hybrid);
    out["n_agents"] = cfg.n_agents;
    out["grid"] = cfg.grid;
    out["n_qubits"] = cfg.n_qubits;
    out["depth"] = cfg.depth;
    out["rotations_per_layer"] = cfg.rotations_per_layer;
    out["readout"] = to_string(cfg.readout);
    out["prepend_variational_block"] = cfg.prepend_variational_block;
    out["encoding"] = to_string(cfg.encoding);
    out["p_slip"] = cfg.p_slip;
    out["actor_hidden"] = cfg.actor_hidden;
    out["critic_hidden"] = cfg.critic_hidden;
    out["chsh"] = {{"lr", cfg.chsh.lr},
                   {"baseline_momentum", cfg.chsh.baseline_momentum},
                   {"steps", cfg.chsh.steps},
                   {"entropy_coeff", cfg.chsh.entropy_coeff},
                   {"eval_episodes", cfg.chsh.eval_episodes},
                   {"eval_every", cfg.chsh.eval_every}};
    out["maa2c"] = {{"actor_lr", cfg.maa2c.actor_lr},
                    {"critic_lr", cfg.maa2c.critic_lr},
                    {"gamma", cfg.maa2c.gamma},
                    {"episode_len", cfg.maa2c.episode_len},
                    {"episodes", cfg.maa2c.episodes},
                    {"entropy_coeff", cfg.maa2c.entropy_coeff},
                    {"grad_clip_norm", cfg.maa2c.grad_clip_norm}};
    out["seeds"] = cfg.seeds;
    out["out_dir"] = cfg.out_dir;
    out["record_timing"] = cfg.record_timing;
    return out;
}

nlohmann::json apply_env_overrides(nlohmann::json raw) {
    for (char** env = environ; *env != nullptr; ++env) {
        const std::string entry(*env);
        const auto eq = entry.find('=');
        if (eq == std::string::npos) continue;
        std::string key = entry.substr(0, eq);
        const std::string value = entry.substr(eq + 1);
        if (key.rfind("QMARL_", 0) != 0) continue;
        key = key.substr(6);
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char c) { return std::tolower(c); });

        // double underscore nests: QMARL_MAA2C__EPISODES -> maa2c.episodes
        std::vector<std::string> path;
        std::size_t start = 0;
        while (true) {
            const auto sep = key.find("__", start);
            if (sep == std::string::npos) {
                path.push_back(key.substr(start));
                break;
            }
            path.push_back(key.substr(start, sep - start));
            start = sep + 2;
        }

        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::exception&) {
            parsed = value;  // plain string
        }
        json* node = &raw;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            node = &(*node)[path[i]];
        }
        (*node)[path.back()] = parsed;
    }
    return raw;
}

ExperimentConfig load_config_file(const std::string& path, bool env_overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file: " + path);
    json raw;
    try {
        in >> raw;
    } catch (const json::exception& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    if (env_overrides) raw = apply_env_overrides(std::move(raw));
    return parse_config(raw);
}

std::string config_hash8(const ExperimentConfig& cfg) {
    const std::string dump = canonical_json(cfg).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (int i = 0; i < 8; ++i) {
        out.push_back(hex[(h >> (60 - 4 * i)) & 0xF]);
    }
    return out;
}

std::vector<ExperimentConfig> expand_sweep(const nlohmann::json& sweep) {
    if (!sweep.is_object() || !sweep.contains("base") || !sweep.contains("axes")) {
        throw ConfigError("", "sweep file needs 'base' and 'axes'");
    }
    const json& base = sweep.at("base");
    const json& axes = sweep.at("axes");
    if (!axes.is_object()) throw ConfigError("axes", "expected an object");

    std::map<std::string, std::vector<json>> axis_values;  // sorted by key
    for (const auto& [key, values] : axes.items()) {
        if (!values.is_array() || values.empty()) {
            throw ConfigError("axes." + key, "expected a non-empty array");
        }
        axis_values[key] = std::vector<json>(values.begin(), values.end());
    }

    auto set_path = [](json& obj, const std::string& dotted, const json& value) {
        json* node = &obj;
        std::size_t start = 0;
        while (true) {
            const auto dot = dotted.find('.', start);
            if (dot == std::string::npos) {
                (*node)[dotted.substr(start)] = value;
                return;
            }
            node = &(*node)[dotted.substr(start, dot - start)];
            start = dot + 1;
        }
    };
    auto sanitise = [](std::string text) {
        for (char& c : text) {
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') {
                c = '_';
            }
        }
        return text;
    };

    const std::string base_out =
        base.contains("out_dir") ? base.at("out_dir").get<std::string>() : "results/sweep";

    std::vector<ExperimentConfig> expanded;
    std::vector<std::size_t> index(axis_values.size(), 0);
    while (true) {
        json entry = base;
        std::string label;
        std::size_t axis = 0;
        for (const auto& [key, values] : axis_values) {
            const json& value = values[index[axis]];
            set_path(entry, key, value);
            if (!label.empty()) label += ",";
            const std::string value_text =
                value.is_string() ? value.get<std::string>() : value.dump();
            label += sanitise(key) + "=" + sanitise(value_text);
            ++axis;
        }
        ExperimentConfig cfg = parse_config(entry);
        cfg.out_dir = base_out + "/" + label + "-" + config_hash8(cfg);
        expanded.push_back(std::move(cfg));

        // odometer increment over the sorted axes
        std::size_t pos = 0;
        for (auto it = axis_values.begin(); it != axis_values.end(); ++it, ++pos) {
            index[pos] += 1;
            if (index[pos] < it->second.size()) break;
            index[pos] = 0;
            if (pos + 1 == axis_values.size()) return expanded;
        }
        if (axis_values.empty()) return expanded;
    }
}

policies::BundleSpec bundle_spec_for(const ExperimentConfig& cfg) {
    policies::BundleSpec spec;
    spec.n_agents = cfg.n_agents;
    spec.hybrid = cfg.hybrid;
    spec.entanglement = cfg.hybrid.quantum_actor ? cfg.entanglement
                                                 : qsim::Entanglement::Product;
    spec.actor_hidden = cfg.actor_hidden;
    spec.critic_hidden = cfg.critic_hidden;
    spec.actor_vqc = {cfg.n_qubits, cfg.depth, cfg.rotations_per_layer,
                      cfg.prepend_variational_block, cfg.readout};
    spec.critic_vqc = spec.actor_vqc;

    if (cfg.env == "coingame") {
        envs::CoinGameConfig env_cfg{cfg.n_agents, cfg.grid, cfg.maa2c.episode_len};
        spec.obs_dim = env_cfg.obs_dim();
        spec.n_actions = env_cfg.n_actions();
    } else if (cfg.env == "coopnav") {
        envs::CoopNavConfig env_cfg;
        env_cfg.n_agents = cfg.n_agents;
        env_cfg.grid = cfg.grid;
        env_cfg.encoding = cfg.encoding;
        spec.obs_dim = env_cfg.obs_dim();
        spec.n_actions = env_cfg.n_actions();
    } else {
        throw ConfigError("env", "bundle_spec_for applies to grid environments only");
    }
    spec.global_obs_dim = spec.obs_dim * cfg.n_agents;
    return spec;
}

}  // namespace qmarl::cli
