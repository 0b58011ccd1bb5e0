#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmarl/rng.hpp"

namespace qmarl::nets {

enum class Activation { Linear, ReLU, Softmax };

struct LayerSpec {
    int in_dim = 0;
    int out_dim = 0;
    Activation activation = Activation::Linear;
    bool bias = true;

    int param_count() const { return in_dim * out_dim + (bias ? out_dim : 0); }
};

// Minimal dense feedforward network over a flat 64-bit parameter vector.
// Parameter layout: per layer, weights row-major (out x in) then bias.
class Mlp {
public:
    Mlp() = default;
    explicit Mlp(std::vector<LayerSpec> layers);  // zero-initialised parameters

    // Glorot-uniform weights in +-sqrt(6/(in+out)), zero biases.
    static Mlp glorot(std::vector<LayerSpec> layers, Rng& rng);

    const std::vector<LayerSpec>& layers() const { return layers_; }
    int param_count() const { return static_cast<int>(params_.size()); }
    int input_dim() const { return layers_.empty() ? 0 : layers_.front().in_dim; }
    int output_dim() const { return layers_.empty() ? 0 : layers_.back().out_dim; }

    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }

    struct Tape {
        std::vector<double> input;
        std::vector<std::vector<double>> pre_activations;   // per layer
        std::vector<std::vector<double>> post_activations;  // per layer
    };

    std::vector<double> forward(std::span<const double> input,
                                Tape* tape = nullptr) const;

    struct Gradients {
        std::vector<double> param_grad;  // same layout as params()
        std::vector<double> input_grad;
    };

    // Reverse-mode gradients for a tape produced by forward() on this net.
    // `output_grad` is dLoss/d(post-activation output).
    Gradients backward(const Tape& tape, std::span<const double> output_grad) const;

    nlohmann::json architecture_json() const;
    static Mlp from_architecture_json(const nlohmann::json& arch);

private:
    std::vector<LayerSpec> layers_;
    std::vector<double> params_;
};

int count_params(const Mlp& net);

// Parameter snapshot: `<prefix>.arch.json` + `<prefix>.params.bin`
// (little-endian 64-bit floats).
void save_checkpoint(const Mlp& net, const std::string& path_prefix);
Mlp load_checkpoint(const std::string& path_prefix);

// Raw flat-vector helpers shared with the quantum policies' checkpoints.
void write_f64_le(const std::string& path, std::span<const double> values);
std::vector<double> read_f64_le(const std::string& path);

struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
    std::vector<double> first_moment;
    std::vector<double> second_moment;

    AdamState() = default;
    AdamState(int n_params, double learning_rate);
};

// One bias-corrected Adam step, params -= update. Throws DivergenceError on
// non-finite gradients.
void adam_step(std::span<double> params, std::span<const double> grads,
               AdamState& state);

// In-place numerically-stable softmax helper shared by the policies.
void softmax_inplace(std::vector<double>& logits);

}  // namespace qmarl::nets
