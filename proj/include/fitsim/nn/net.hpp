#pragma once

#include <cstdint>
#include <vector>

#include "fitsim/nn/params.hpp"
#include "fitsim/rng.hpp"

namespace fitsim::nn {

// Architecture family shared by the hybrid net and its ablations:
// an encoder (LSTM over the observation window, or the flattened window),
// a stack of tanh dense layers, and actor/critic heads. The actor head
// doubles as the Q head for value-based training.
struct NetSpec {
    int window = 7;               // W epochs per observation
    int features = 6;             // per-epoch features
    bool recurrent = true;        // LSTM encoder; false flattens the window
    int lstm_hidden = 32;         // H
    std::vector<int> dense{64};   // tanh trunk layers after the encoder
    int actions = 10;             // actor head width

    static NetSpec hybrid() { return NetSpec{}; }
    static NetSpec mlp() { return NetSpec{7, 6, false, 0, {64, 64}, 10}; }
    static NetSpec lstm_only() { return NetSpec{7, 6, true, 32, {}, 10}; }

    int encoder_out() const { return recurrent ? lstm_hidden : window * features; }
    int trunk_out() const { return dense.empty() ? encoder_out() : dense.back(); }
    std::size_t input_size() const { return static_cast<std::size_t>(window) * features; }
    void validate() const;
};

struct NetOutput {
    std::vector<double> logits;
    double value = 0.0;
    std::vector<double> hidden;  // final recurrent state (h, then c); empty for MLP
};

// Intermediate activations kept for backpropagation. One cache per forward.
struct ForwardCache {
    std::vector<double> input;                 // W*F row-major
    std::vector<double> gate_i, gate_f, gate_g, gate_o;  // W*H each
    std::vector<double> cells;                 // (W+1)*H, c_0..c_W
    std::vector<double> hiddens;               // (W+1)*H, h_0..h_W
    std::vector<double> tanh_cell;             // W*H, tanh(c_{k+1})
    std::vector<std::vector<double>> dense_out;  // post-tanh activations per layer
    std::vector<double> logits;
    double value = 0.0;
};

class PolicyValueNet {
public:
    explicit PolicyValueNet(NetSpec spec);

    const NetSpec& spec() const { return spec_; }

    // Zero-valued parameters with this architecture's layout.
    ParamVector make_params() const;

    // Uniform +-1/sqrt(fan_in) init; LSTM forget-gate bias starts at +1.
    void init_params(ParamVector& params, Rng& rng) const;

    std::size_t param_count() const;

    NetOutput forward(const ParamVector& params, const std::vector<double>& window,
                      ForwardCache* cache = nullptr) const;

    // Backpropagates head gradients (dL/dlogits, dL/dvalue) through the trunk
    // and, when recurrent, through time; accumulates into `grads`.
    void backward(const ParamVector& params, const ForwardCache& cache,
                  const std::vector<double>& dlogits, double dvalue, ParamVector& grads) const;

private:
    NetSpec spec_;
    // Tensor indices resolved once at construction.
    std::size_t lstm_w_ = 0, lstm_u_ = 0, lstm_b_ = 0;
    std::vector<std::size_t> dense_w_, dense_b_;
    std::size_t actor_w_ = 0, actor_b_ = 0, critic_w_ = 0, critic_b_ = 0;
    ParamVector layout_;  // prototype (zeros) used for make_params
};

// Numerically stable softmax of finite logits; the result is a probability
// vector (nonnegative, sums to 1).
std::vector<double> softmax(const std::vector<double>& logits);

// log softmax, stable for large logits.
std::vector<double> log_softmax(const std::vector<double>& logits);

// Shannon entropy of a probability vector.
double entropy(const std::vector<double>& probs);

int argmax(const std::vector<double>& values);

// Samples an index from a categorical distribution given by `probs`.
int sample_categorical(const std::vector<double>& probs, Rng& rng);

// One step of an actor-critic trajectory segment.
struct SegmentSample {
    std::vector<double> window;
    int action = 0;   // index into the logits
    double ret = 0.0;  // n-step return target R_t
};

// Gradients of  L = sum_t [ -log pi(a_t) * A_t - beta_e * H(pi_t)
//                           + c_v * (R_t - V_t)^2 ],  A_t = R_t - V_t (detached).
// Accumulates into `grads` and returns the loss value.
double actor_critic_backward(const PolicyValueNet& net, const ParamVector& params,
                             const std::vector<SegmentSample>& segment, double entropy_coef,
                             double value_coef, ParamVector& grads);

// Gradient of (Q[action] - target)^2 through the actor/Q head; returns the
// squared error. Used by value-based training.
double q_backward(const PolicyValueNet& net, const ParamVector& params,
                  const std::vector<double>& window, int action, double target, double scale,
                  ParamVector& grads);

}  // namespace fitsim::nn
