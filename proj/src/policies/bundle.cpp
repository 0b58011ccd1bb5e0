#include "qmarl/policies/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "qmarl/errors.hpp"
#include "qmarl/names.hpp"

namespace qmarl::policies {

namespace {

std::vector<nets::LayerSpec> mlp_layers(int in_dim, const std::vector<int>& hidden,
                                        int out_dim) {
    std::vector<nets::LayerSpec> layers;
    int prev = in_dim;
    for (int h : hidden) {
        layers.push_back({prev, h, nets::Activation::ReLU, true});
        prev = h;
    }
    layers.push_back({prev, out_dim, nets::Activation::Linear, true});
    return layers;
}

qsim::CircuitSpec single_register_circuit(const VqcCoreConfig& cfg) {
    qsim::CircuitSpec circuit;
    circuit.n_qubits = cfg.n_qubits;
    circuit.prep = qsim::Entanglement::Product;
    circuit.n_params = cfg.params_per_agent();
    append_agent_gates(circuit, cfg, 0, 0);
    return circuit;
}

qsim::CircuitSpec joint_actor_circuit(const BundleSpec& spec) {
    qsim::CircuitSpec circuit;
    circuit.n_qubits = spec.n_agents * spec.actor_vqc.n_qubits;
    circuit.prep = spec.entanglement;
    for (int i = 0; i < spec.n_agents; ++i) {
        circuit.designated.push_back(i * spec.actor_vqc.n_qubits);
    }
    circuit.n_params = spec.n_agents * spec.actor_vqc.params_per_agent();
    for (int i = 0; i < spec.n_agents; ++i) {
        append_agent_gates(circuit, spec.actor_vqc, i * spec.actor_vqc.n_qubits,
                           i * spec.actor_vqc.params_per_agent());
    }
    return circuit;
}

double log_prob_of(const std::vector<double>& probs, int action) {
    const double p = std::max(probs[action], 1e-300);
    return std::log(p);
}

}  // namespace

void BundleSpec::validate() const {
    if (n_agents < 1) throw std::invalid_argument("BundleSpec: n_agents must be >= 1");
    if (obs_dim < 1 || n_actions < 1 || global_obs_dim < 1) {
        throw std::invalid_argument("BundleSpec: dimensions must be positive");
    }
    if (hybrid.quantum_actor) {
        actor_vqc.validate();
        if (qsim::is_bell(entanglement) && n_agents != 2) {
            throw std::invalid_argument(
                "BundleSpec: Bell entanglement pairs exactly 2 agents");
        }
        if (entanglement == qsim::Entanglement::GHZ && n_agents < 3) {
            throw std::invalid_argument("BundleSpec: GHZ needs at least 3 agents");
        }
        if (joint_actor_qubits() > qsim::kMaxQubits) {
            throw std::invalid_argument(
                "BundleSpec: entangled joint register exceeds " +
                std::to_string(qsim::kMaxQubits) + " qubits");
        }
    }
    if (hybrid.quantum_critic) critic_vqc.validate();
}

int BundleSpec::joint_actor_qubits() const {
    return entanglement == qsim::Entanglement::Product
               ? actor_vqc.n_qubits
               : n_agents * actor_vqc.n_qubits;
}

ParamCounts count_bundle_params(const BundleSpec& spec) {
    ParamCounts counts;
    if (spec.hybrid.quantum_actor) {
        counts.preprocessing =
            static_cast<long>(spec.obs_dim) * spec.actor_vqc.encoding_count() +
            spec.actor_vqc.encoding_count();
        counts.vqc = spec.actor_vqc.trainable_count();
        counts.readout = static_cast<long>(spec.actor_vqc.feature_dim()) * spec.n_actions;
        counts.actor = counts.preprocessing + counts.vqc + counts.readout;
    } else {
        for (const auto& l : mlp_layers(spec.obs_dim, spec.actor_hidden, spec.n_actions)) {
            counts.actor += l.param_count();
        }
    }
    if (spec.hybrid.quantum_critic) {
        counts.critic =
            static_cast<long>(spec.global_obs_dim) * spec.critic_vqc.encoding_count() +
            spec.critic_vqc.encoding_count() + spec.critic_vqc.trainable_count() +
            spec.critic_vqc.feature_dim();
    } else {
        for (const auto& l : mlp_layers(spec.global_obs_dim, spec.critic_hidden, 1)) {
            counts.critic += l.param_count();
        }
    }
    counts.total = counts.actor + counts.critic;
    return counts;
}

PolicyBundle PolicyBundle::build(const BundleSpec& spec, Rng& rng) {
    spec.validate();
    PolicyBundle bundle(spec);

    for (int i = 0; i < spec.n_agents; ++i) {
        if (spec.hybrid.quantum_actor) {
            QuantumNet net;
            net.preprocessing = nets::Mlp::glorot(
                {{spec.obs_dim, spec.actor_vqc.encoding_count(),
                  nets::Activation::Linear, true}},
                rng);
            net.angles = init_vqc_angles(spec.actor_vqc, rng);
            net.readout = nets::Mlp::glorot(
                {{spec.actor_vqc.feature_dim(), spec.n_actions,
                  nets::Activation::Linear, false}},
                rng);
            bundle.quantum_actors_.push_back(std::move(net));
        } else {
            bundle.classical_actors_.push_back(nets::Mlp::glorot(
                mlp_layers(spec.obs_dim, spec.actor_hidden, spec.n_actions), rng));
        }
    }

    if (spec.hybrid.quantum_critic) {
        bundle.quantum_critic_.preprocessing = nets::Mlp::glorot(
            {{spec.global_obs_dim, spec.critic_vqc.encoding_count(),
              nets::Activation::Linear, true}},
            rng);
        bundle.quantum_critic_.angles = init_vqc_angles(spec.critic_vqc, rng);
        bundle.quantum_critic_.readout = nets::Mlp::glorot(
            {{spec.critic_vqc.feature_dim(), 1, nets::Activation::Linear, false}}, rng);
    } else {
        bundle.classical_critic_ = nets::Mlp::glorot(
            mlp_layers(spec.global_obs_dim, spec.critic_hidden, 1), rng);
    }
    return bundle;
}

qsim::Statevector PolicyBundle::run_joint_actor_circuit(const Forward& forward) const {
    const auto circuit = joint_actor_circuit(spec_);
    std::vector<double> params;
    params.reserve(circuit.n_params);
    for (int i = 0; i < spec_.n_agents; ++i) {
        const auto agent_params = assemble_agent_params(
            spec_.actor_vqc, quantum_actors_[i].angles, forward.agents[i].encoding);
        params.insert(params.end(), agent_params.begin(), agent_params.end());
    }
    return run_circuit(circuit, params);
}

PolicyBundle::Forward PolicyBundle::forward_actors(
    const std::vector<std::vector<double>>& observations) const {
    if (static_cast<int>(observations.size()) != spec_.n_agents) {
        throw std::invalid_argument("forward_actors: observation arity mismatch");
    }
    Forward forward;
    forward.agents.resize(spec_.n_agents);

    if (!spec_.hybrid.quantum_actor) {
        for (int i = 0; i < spec_.n_agents; ++i) {
            auto& agent = forward.agents[i];
            agent.logits =
                classical_actors_[i].forward(observations[i], &agent.actor_tape);
            agent.probs = agent.logits;
            nets::softmax_inplace(agent.probs);
        }
        return forward;
    }

    // encoding angles come from each agent's own observation only
    for (int i = 0; i < spec_.n_agents; ++i) {
        auto& agent = forward.agents[i];
        agent.encoding =
            quantum_actors_[i].preprocessing.forward(observations[i], &agent.preproc_tape);
    }

    if (spec_.entanglement == qsim::Entanglement::Product) {
        const auto circuit = single_register_circuit(spec_.actor_vqc);
        for (int i = 0; i < spec_.n_agents; ++i) {
            auto& agent = forward.agents[i];
            const auto params = assemble_agent_params(
                spec_.actor_vqc, quantum_actors_[i].angles, agent.encoding);
            agent.features =
                agent_features(run_circuit(circuit, params), spec_.actor_vqc, 0);
        }
    } else {
        const auto state = run_joint_actor_circuit(forward);
        for (int i = 0; i < spec_.n_agents; ++i) {
            forward.agents[i].features = agent_features(
                state, spec_.actor_vqc, i * spec_.actor_vqc.n_qubits);
        }
    }

    for (int i = 0; i < spec_.n_agents; ++i) {
        auto& agent = forward.agents[i];
        agent.logits =
            quantum_actors_[i].readout.forward(agent.features, &agent.readout_tape);
        agent.probs = agent.logits;
        nets::softmax_inplace(agent.probs);
    }
    return forward;
}

PolicyBundle::ActResult PolicyBundle::act(const Forward& forward, Rng& rng) const {
    ActResult result;
    for (int i = 0; i < spec_.n_agents; ++i) {
        const auto& probs = forward.agents[i].probs;
        for (double p : probs) {
            if (!std::isfinite(p)) {
                throw DivergenceError("act: non-finite action probability", i);
            }
        }
        const int action = rng.sample_discrete(probs);
        result.actions.push_back(action);
        result.log_probs.push_back(log_prob_of(probs, action));
    }
    return result;
}

std::vector<double> PolicyBundle::quantum_actor_chain(
    const Forward& forward, int agent, std::span<const double> dlogits) const {
    const auto& net = quantum_actors_[agent];
    const auto& fw = forward.agents[agent];
    const auto& cfg = spec_.actor_vqc;

    const auto readout_grads = net.readout.backward(fw.readout_tape, dlogits);
    const auto& dfeatures = readout_grads.input_grad;

    // circuit Jacobian over this agent's parameter block
    std::vector<std::vector<double>> jac;
    if (spec_.entanglement == qsim::Entanglement::Product) {
        const auto circuit = single_register_circuit(cfg);
        const auto params = assemble_agent_params(cfg, net.angles, fw.encoding);
        jac = param_shift_jacobian(circuit, params, [&](const qsim::Statevector& s) {
            return agent_features(s, cfg, 0);
        });
    } else {
        const auto circuit = joint_actor_circuit(spec_);
        std::vector<double> params;
        params.reserve(circuit.n_params);
        for (int i = 0; i < spec_.n_agents; ++i) {
            const auto agent_params = assemble_agent_params(
                cfg, quantum_actors_[i].angles, forward.agents[i].encoding);
            params.insert(params.end(), agent_params.begin(), agent_params.end());
        }
        const int begin = agent * cfg.params_per_agent();
        jac = param_shift_jacobian(
            circuit, params,
            [&](const qsim::Statevector& s) {
                return agent_features(s, cfg, agent * cfg.n_qubits);
            },
            begin, begin + cfg.params_per_agent());
    }

    const auto layout = vqc_param_layout(cfg);
    auto contract = [&](int row) {
        double acc = 0.0;
        for (std::size_t f = 0; f < dfeatures.size(); ++f) {
            acc += dfeatures[f] * jac[row][f];
        }
        return acc;
    };

    std::vector<double> d_angles(cfg.trainable_count(), 0.0);
    for (int k = 0; k < cfg.prepend_count(); ++k) {
        d_angles[k] = contract(layout.prepend_offset + k);
    }
    for (int k = 0; k < cfg.variational_count(); ++k) {
        d_angles[cfg.prepend_count() + k] = contract(layout.variational_offset + k);
    }

    std::vector<double> d_encoding(cfg.encoding_count());
    for (int k = 0; k < cfg.encoding_count(); ++k) {
        d_encoding[k] = contract(layout.encoding_offset + k);
    }
    const auto preproc_grads = net.preprocessing.backward(fw.preproc_tape, d_encoding);

    std::vector<double> flat;
    flat.reserve(actor_param_count());
    flat.insert(flat.end(), preproc_grads.param_grad.begin(),
                preproc_grads.param_grad.end());
    flat.insert(flat.end(), d_angles.begin(), d_angles.end());
    flat.insert(flat.end(), readout_grads.param_grad.begin(),
                readout_grads.param_grad.end());
    return flat;
}

std::vector<double> PolicyBundle::actor_grad_log_prob(const Forward& forward, int agent,
                                                      int action) const {
    const auto& probs = forward.agents[agent].probs;
    std::vector<double> dlogits(probs.size());
    for (std::size_t k = 0; k < probs.size(); ++k) {
        dlogits[k] = (static_cast<int>(k) == action ? 1.0 : 0.0) - probs[k];
    }
    if (!spec_.hybrid.quantum_actor) {
        return classical_actors_[agent]
            .backward(forward.agents[agent].actor_tape, dlogits)
            .param_grad;
    }
    return quantum_actor_chain(forward, agent, dlogits);
}

std::vector<double> PolicyBundle::actor_grad_entropy(const Forward& forward,
                                                     int agent) const {
    const auto& probs = forward.agents[agent].probs;
    double entropy = 0.0;
    for (double p : probs) {
        if (p > 0) entropy -= p * std::log(p);
    }
    std::vector<double> dlogits(probs.size());
    for (std::size_t k = 0; k < probs.size(); ++k) {
        const double log_p = std::log(std::max(probs[k], 1e-300));
        dlogits[k] = -probs[k] * (log_p + entropy);
    }
    if (!spec_.hybrid.quantum_actor) {
        return classical_actors_[agent]
            .backward(forward.agents[agent].actor_tape, dlogits)
            .param_grad;
    }
    return quantum_actor_chain(forward, agent, dlogits);
}

double PolicyBundle::critic_value(std::span<const double> global_obs) const {
    if (!spec_.hybrid.quantum_critic) {
        return classical_critic_.forward(global_obs)[0];
    }
    const auto& net = quantum_critic_;
    const auto encoding = net.preprocessing.forward(global_obs);
    const auto circuit = single_register_circuit(spec_.critic_vqc);
    const auto params = assemble_agent_params(spec_.critic_vqc, net.angles, encoding);
    const auto features =
        agent_features(run_circuit(circuit, params), spec_.critic_vqc, 0);
    return net.readout.forward(features)[0];
}

std::pair<double, std::vector<double>> PolicyBundle::critic_value_grad(
    std::span<const double> global_obs) const {
    if (!spec_.hybrid.quantum_critic) {
        nets::Mlp::Tape tape;
        const double value = classical_critic_.forward(global_obs, &tape)[0];
        auto grads = classical_critic_.backward(tape, std::vector<double>{1.0});
        return {value, std::move(grads.param_grad)};
    }

    const auto& net = quantum_critic_;
    const auto& cfg = spec_.critic_vqc;
    nets::Mlp::Tape preproc_tape;
    const auto encoding = net.preprocessing.forward(global_obs, &preproc_tape);
    const auto circuit = single_register_circuit(cfg);
    const auto params = assemble_agent_params(cfg, net.angles, encoding);
    const auto features = agent_features(run_circuit(circuit, params), cfg, 0);

    nets::Mlp::Tape readout_tape;
    const double value = net.readout.forward(features, &readout_tape)[0];
    const auto readout_grads =
        net.readout.backward(readout_tape, std::vector<double>{1.0});

    const auto jac = param_shift_jacobian(circuit, params, [&](const qsim::Statevector& s) {
        return agent_features(s, cfg, 0);
    });
    const auto layout = vqc_param_layout(cfg);
    auto contract = [&](int row) {
        double acc = 0.0;
        for (std::size_t f = 0; f < readout_grads.input_grad.size(); ++f) {
            acc += readout_grads.input_grad[f] * jac[row][f];
        }
        return acc;
    };
    std::vector<double> d_angles(cfg.trainable_count(), 0.0);
    for (int k = 0; k < cfg.prepend_count(); ++k) {
        d_angles[k] = contract(layout.prepend_offset + k);
    }
    for (int k = 0; k < cfg.variational_count(); ++k) {
        d_angles[cfg.prepend_count() + k] = contract(layout.variational_offset + k);
    }
    std::vector<double> d_encoding(cfg.encoding_count());
    for (int k = 0; k < cfg.encoding_count(); ++k) {
        d_encoding[k] = contract(layout.encoding_offset + k);
    }
    const auto preproc_grads = net.preprocessing.backward(preproc_tape, d_encoding);

    std::vector<double> flat;
    flat.reserve(critic_param_count());
    flat.insert(flat.end(), preproc_grads.param_grad.begin(),
                preproc_grads.param_grad.end());
    flat.insert(flat.end(), d_angles.begin(), d_angles.end());
    flat.insert(flat.end(), readout_grads.param_grad.begin(),
                readout_grads.param_grad.end());
    return {value, std::move(flat)};
}

int PolicyBundle::actor_param_count() const {
    const auto counts = count_bundle_params(spec_);
    return static_cast<int>(counts.actor);
}

int PolicyBundle::critic_param_count() const {
    const auto counts = count_bundle_params(spec_);
    return static_cast<int>(counts.critic);
}

std::vector<double> PolicyBundle::actor_params(int agent) const {
    std::vector<double> flat;
    if (!spec_.hybrid.quantum_actor) {
        const auto p = classical_actors_[agent].params();
        return std::vector<double>(p.begin(), p.end());
    }
    const auto& net = quantum_actors_[agent];
    flat.insert(flat.end(), net.preprocessing.params().begin(),
                net.preprocessing.params().end());
    flat.insert(flat.end(), net.angles.begin(), net.angles.end());
    flat.insert(flat.end(), net.readout.params().begin(), net.readout.params().end());
    return flat;
}

void PolicyBundle::set_actor_params(int agent, std::span<const double> values) {
    if (static_cast<int>(values.size()) != actor_param_count()) {
        throw std::invalid_argument("set_actor_params: length mismatch");
    }
    if (!spec_.hybrid.quantum_actor) {
        std::copy(values.begin(), values.end(),
                  classical_actors_[agent].params().begin());
        return;
    }
    auto& net = quantum_actors_[agent];
    auto it = values.begin();
    std::copy(it, it + net.preprocessing.param_count(),
              net.preprocessing.params().begin());
    it += net.preprocessing.param_count();
    std::copy(it, it + static_cast<long>(net.angles.size()), net.angles.begin());
    it += static_cast<long>(net.angles.size());
    std::copy(it, it + net.readout.param_count(), net.readout.params().begin());
}

std::vector<double> PolicyBundle::critic_params() const {
    if (!spec_.hybrid.quantum_critic) {
        const auto p = classical_critic_.params();
        return std::vector<double>(p.begin(), p.end());
    }
    std::vector<double> flat;
    flat.insert(flat.end(), quantum_critic_.preprocessing.params().begin(),
                quantum_critic_.preprocessing.params().end());
    flat.insert(flat.end(), quantum_critic_.angles.begin(), quantum_critic_.angles.end());
    flat.insert(flat.end(), quantum_critic_.readout.params().begin(),
                quantum_critic_.readout.params().end());
    return flat;
}

void PolicyBundle::set_critic_params(std::span<const double> values) {
    if (static_cast<int>(values.size()) != critic_param_count()) {
        throw std::invalid_argument("set_critic_params: length mismatch");
    }
    if (!spec_.hybrid.quantum_critic) {
        std::copy(values.begin(), values.end(), classical_critic_.params().begin());
        return;
    }
    auto& net = quantum_critic_;
    auto it = values.begin();
    std::copy(it, it + net.preprocessing.param_count(),
              net.preprocessing.params().begin());
    it += net.preprocessing.param_count();
    std::copy(it, it + static_cast<long>(net.angles.size()), net.angles.begin());
    it += static_cast<long>(net.angles.size());
    std::copy(it, it + net.readout.param_count(), net.readout.params().begin());
}

void PolicyBundle::save(const std::string& path_prefix) const {
    nlohmann::json desc;
    desc["n_agents"] = spec_.n_agents;
    desc["obs_dim"] = spec_.obs_dim;
    desc["n_actions"] = spec_.n_actions;
    desc["global_obs_dim"] = spec_.global_obs_dim;
    desc["hybridisation"] = to_string(spec_.hybrid);
    desc["entanglement"] = to_string(spec_.entanglement);
    if (spec_.hybrid.quantum_actor) {
        desc["actor_circuit"] = {
            {"n_qubits", spec_.actor_vqc.n_qubits},
            {"depth", spec_.actor_vqc.depth},
            {"rotations_per_qubit_per_layer",
             spec_.actor_vqc.rotations_per_qubit_per_layer},
            {"prepend_variational_block", spec_.actor_vqc.prepend_variational_block},
            {"readout", to_string(spec_.actor_vqc.readout)}};
    }
    if (spec_.hybrid.quantum_critic) {
        desc["critic_circuit"] = {
            {"n_qubits", spec_.critic_vqc.n_qubits},
            {"depth", spec_.critic_vqc.depth},
            {"rotations_per_qubit_per_layer",
             spec_.critic_vqc.rotations_per_qubit_per_layer},
            {"prepend_variational_block", spec_.critic_vqc.prepend_variational_block},
            {"readout", to_string(spec_.critic_vqc.readout)}};
    }
    desc["actor_param_count"] = actor_param_count();
    desc["critic_param_count"] = critic_param_count();

    std::ofstream out(path_prefix + ".bundle.json");
    if (!out) throw std::runtime_error("cannot open for write: " + path_prefix);
    out << desc.dump(2) << "\n";

    std::vector<double> all;
    for (int i = 0; i < spec_.n_agents; ++i) {
        const auto p = actor_params(i);
        all.insert(all.end(), p.begin(), p.end());
    }
    const auto c = critic_params();
    all.insert(all.end(), c.begin(), c.end());
    nets::write_f64_le(path_prefix + ".params.bin", all);
}

PolicyBundle PolicyBundle::load(const BundleSpec& spec, const std::string& path_prefix) {
    Rng scratch(0);
    PolicyBundle bundle = build(spec, scratch);
    const auto all = nets::read_f64_le(path_prefix + ".params.bin");
    const std::size_t expected =
        static_cast<std::size_t>(bundle.actor_param_count()) * spec.n_agents +
        bundle.critic_param_count();
    if (all.size() != expected) {
        throw std::runtime_error("bundle checkpoint parameter count mismatch");
    }
    std::size_t offset = 0;
    for (int i = 0; i < spec.n_agents; ++i) {
        bundle.set_actor_params(
            i, std::span<const double>(all).subspan(offset, bundle.actor_param_count()));
        offset += bundle.actor_param_count();
    }
    bundle.set_critic_params(
        std::span<const double>(all).subspan(offset, bundle.critic_param_count()));
    return bundle;
}

}  // namespace qmarl::policies
