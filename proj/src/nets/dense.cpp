#include "qmarl/dense.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "qmarl/errors.hpp"

namespace qmarl::nets {

namespace {

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Linear: return "linear";
        case Activation::ReLU: return "relu";
        case Activation::Softmax: return "softmax";
    }
    return "linear";
}

Activation activation_from_name(const std::string& name) {
    if (name == "linear") return Activation::Linear;
    if (name == "relu") return Activation::ReLU;
    if (name == "softmax") return Activation::Softmax;
    throw std::invalid_argument("unknown activation: " + name);
}

void check_chain(const std::vector<LayerSpec>& layers) {
    if (layers.empty()) throw std::invalid_argument("Mlp: no layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        if (layers[i].in_dim <= 0 || layers[i].out_dim <= 0) {
            throw std::invalid_argument("Mlp: non-positive layer dimension");
        }
        if (i + 1 < layers.size() &&
            layers[i].out_dim != layers[i + 1].in_dim) {
            throw std::invalid_argument("Mlp: layer dimensions do not chain");
        }
    }
}

}  // namespace

void softmax_inplace(std::vector<double>& logits) {
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double& v : logits) {
        v = std::exp(v - max_logit);
        sum += v;
    }
    for (double& v : logits) v /= sum;
}

Mlp::Mlp(std::vector<LayerSpec> layers) : layers_(std::move(layers)) {
    check_chain(layers_);
    int total = 0;
    for (const auto& l : layers_) total += l.param_count();
    params_.assign(total, 0.0);
}

Mlp Mlp::glorot(std::vector<LayerSpec> layers, Rng& rng) {
    Mlp net(std::move(layers));
    std::size_t offset = 0;
    for (const auto& layer : net.layers_) {
        const double bound = std::sqrt(6.0 / (layer.in_dim + layer.out_dim));
        const std::size_t n_w = static_cast<std::size_t>(layer.in_dim) * layer.out_dim;
        for (std::size_t i = 0; i < n_w; ++i) {
            net.params_[offset + i] = rng.uniform(-bound, bound);
        }
        offset += layer.param_count();  // biases stay zero
    }
    return net;
}

std::vector<double> Mlp::forward(std::span<const double> input, Tape* tape) const {
    if (static_cast<int>(input.size()) != input_dim()) {
        throw std::invalid_argument("Mlp::forward: input length " +
                                    std::to_string(input.size()) + " != " +
                                    std::to_string(input_dim()));
    }
    if (tape) {
        tape->input.assign(input.begin(), input.end());
        tape->pre_activations.clear();
        tape->post_activations.clear();
    }
    std::vector<double> x(input.begin(), input.end());
    std::size_t offset = 0;
    for (const auto& layer : layers_) {
        std::vector<double> z(layer.out_dim, 0.0);
        for (int r = 0; r < layer.out_dim; ++r) {
            const double* w = &params_[offset + static_cast<std::size_t>(r) * layer.in_dim];
            double acc = 0.0;
            for (int c = 0; c < layer.in_dim; ++c) acc += w[c] * x[c];
            z[r] = acc;
        }
        if (layer.bias) {
            const double* b =
                &params_[offset + static_cast<std::size_t>(layer.out_dim) * layer.in_dim];
            for (int r = 0; r < layer.out_dim; ++r) z[r] += b[r];
        }
        if (tape) tape->pre_activations.push_back(z);

        switch (layer.activation) {
            case Activation::Linear: break;
            case Activation::ReLU:
                for (double& v : z) v = v > 0.0 ? v : 0.0;
                break;
            case Activation::Softmax:
                softmax_inplace(z);
                break;
        }
        if (tape) tape->post_activations.push_back(z);
        x = std::move(z);
        offset += layer.param_count();
    }
    return x;
}

Mlp::Gradients Mlp::backward(const Tape& tape,
                             std::span<const double> output_grad) const {
    if (tape.pre_activations.size() != layers_.size()) {
        throw std::invalid_argument("Mlp::backward: tape does not match network");
    }
    if (static_cast<int>(output_grad.size()) != output_dim()) {
        throw std::invalid_argument("Mlp::backward: output_grad length mismatch");
    }

    Gradients g;
    g.param_grad.assign(params_.size(), 0.0);

    std::vector<double> grad(output_grad.begin(), output_grad.end());
    std::size_t offset = params_.size();
    for (int li = static_cast<int>(layers_.size()) - 1; li >= 0; --li) {
        const auto& layer = layers_[li];
        offset -= layer.param_count();

        // dLoss/dz from dLoss/d(activation output)
        std::vector<double> dz(layer.out_dim, 0.0);
        switch (layer.activation) {
            case Activation::Linear:
                dz = grad;
                break;
            case Activation::ReLU:
                for (int r = 0; r < layer.out_dim; ++r) {
                    dz[r] = tape.pre_activations[li][r] > 0.0 ? grad[r] : 0.0;
                }
                break;
            case Activation::Softmax: {
                const auto& y = tape.post_activations[li];
                double inner = 0.0;
                for (int r = 0; r < layer.out_dim; ++r) inner += grad[r] * y[r];
                for (int r = 0; r < layer.out_dim; ++r) {
                    dz[r] = y[r] * (grad[r] - inner);
                }
                break;
            }
        }

        const std::vector<double>& layer_input =
            li == 0 ? tape.input : tape.post_activations[li - 1];

        for (int r = 0; r < layer.out_dim; ++r) {
            double* wg = &g.param_grad[offset + static_cast<std::size_t>(r) * layer.in_dim];
            for (int c = 0; c < layer.in_dim; ++c) wg[c] = dz[r] * layer_input[c];
        }
        if (layer.bias) {
            double* bg =
                &g.param_grad[offset + static_cast<std::size_t>(layer.out_dim) * layer.in_dim];
            for (int r = 0; r < layer.out_dim; ++r) bg[r] = dz[r];
        }

        std::vector<double> grad_prev(layer.in_dim, 0.0);
        for (int r = 0; r < layer.out_dim; ++r) {
            const double* w = &params_[offset + static_cast<std::size_t>(r) * layer.in_dim];
            for (int c = 0; c < layer.in_dim; ++c) grad_prev[c] += w[c] * dz[r];
        }
        grad = std::move(grad_prev);
    }
    g.input_grad = std::move(grad);
    return g;
}

nlohmann::json Mlp::architecture_json() const {
    nlohmann::json arch = nlohmann::json::array();
    for (const auto& l : layers_) {
        arch.push_back({{"in", l.in_dim},
                        {"out", l.out_dim},
                        {"activation", activation_name(l.activation)},
                        {"bias", l.bias}});
    }
    return nlohmann::json{{"layers", arch}};
}

Mlp Mlp::from_architecture_json(const nlohmann::json& arch) {
    std::vector<LayerSpec> layers;
    for (const auto& l : arch.at("layers")) {
        layers.push_back({l.at("in").get<int>(), l.at("out").get<int>(),
                          activation_from_name(l.at("activation").get<std::string>()),
                          l.at("bias").get<bool>()});
    }
    return Mlp(std::move(layers));
}

int count_params(const Mlp& net) { return net.param_count(); }

void write_f64_le(const std::string& path, std::span<const double> values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    for (double v : values) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        if constexpr (std::endian::native == std::endian::big) {
            bits = __builtin_bswap64(bits);
        }
        out.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
    }
}

std::vector<double> read_f64_le(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for read: " + path);
    std::vector<double> values;
    std::uint64_t bits;
    while (in.read(reinterpret_cast<char*>(&bits), sizeof(bits))) {
        if constexpr (std::endian::native == std::endian::big) {
            bits = __builtin_bswap64(bits);
        }
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        values.push_back(v);
    }
    return values;
}

void save_checkpoint(const Mlp& net, const std::string& path_prefix) {
    std::ofstream arch(path_prefix + ".arch.json");
    if (!arch) throw std::runtime_error("cannot open for write: " + path_prefix);
    arch << net.architecture_json().dump(2) << "\n";
    write_f64_le(path_prefix + ".params.bin", net.params());
}

Mlp load_checkpoint(const std::string& path_prefix) {
    std::ifstream arch_in(path_prefix + ".arch.json");
    if (!arch_in) throw std::runtime_error("cannot open for read: " + path_prefix);
    nlohmann::json arch;
    arch_in >> arch;
    Mlp net = Mlp::from_architecture_json(arch);
    const auto values = read_f64_le(path_prefix + ".params.bin");
    if (static_cast<int>(values.size()) != net.param_count()) {
        throw std::runtime_error("checkpoint parameter count mismatch");
    }
    std::copy(values.begin(), values.end(), net.params().begin());
    return net;
}

AdamState::AdamState(int n_params, double learning_rate)
    : lr(learning_rate),
      first_moment(n_params, 0.0),
      second_moment(n_params, 0.0) {}

void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state) {
    if (params.size() != grads.size() ||
        params.size() != state.first_moment.size()) {
        throw std::invalid_argument("adam_step: length mismatch");
    }
    for (double g : grads) {
        if (!std::isfinite(g)) {
            throw DivergenceError("adam_step: non-finite gradient", state.step);
        }
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, state.step);
    const double bc2 = 1.0 - std::pow(state.beta2, state.step);
    for (std::size_t i = 0; i < params.size(); ++i) {
        double& m = state.first_moment[i];
        double& v = state.second_moment[i];
        m = state.beta1 * m + (1.0 - state.beta1) * grads[i];
        v = state.beta2 * v + (1.0 - state.beta2) * grads[i] * grads[i];
        const double m_hat = m / bc1;
        const double v_hat = v / bc2;
        params[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
}

}  // namespace qmarl::nets
