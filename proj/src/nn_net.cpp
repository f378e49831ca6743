#include "fitsim/nn/net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fitsim::nn {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// y = M x + b, M is rows x cols, x has cols entries.
void affine(ConstMatView m, ConstMatView b, const double* x, double* y) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        double acc = b(r, 0);
        const double* row = m.data() + r * m.cols();
        for (std::size_t c = 0; c < m.cols(); ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

// y += M^T g  (accumulate input gradient).
void add_mat_t_vec(ConstMatView m, const double* g, double* y) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const double* row = m.data() + r * m.cols();
        const double gr = g[r];
        for (std::size_t c = 0; c < m.cols(); ++c) y[c] += row[c] * gr;
    }
}

// dM += g x^T, db += g.
void accumulate_outer(MatView dm, MatView db, const double* g, const double* x) {
    for (std::size_t r = 0; r < dm.rows(); ++r) {
        double* row = dm.data() + r * dm.cols();
        const double gr = g[r];
        for (std::size_t c = 0; c < dm.cols(); ++c) row[c] += gr * x[c];
        db(r, 0) += gr;
    }
}

}  // namespace

void NetSpec::validate() const {
    if (window < 1 || features < 1 || actions < 1) {
        throw std::domain_error("net spec dimensions must be positive");
    }
    if (recurrent && lstm_hidden < 1) throw std::domain_error("lstm_hidden must be positive");
    for (int d : dense) {
        if (d < 1) throw std::domain_error("dense layer sizes must be positive");
    }
}

PolicyValueNet::PolicyValueNet(NetSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const int H = spec_.lstm_hidden;
    const int F = spec_.features;
    if (spec_.recurrent) {
        lstm_w_ = layout_.add_tensor("lstm.W", 4 * H, F);
        lstm_u_ = layout_.add_tensor("lstm.U", 4 * H, H);
        lstm_b_ = layout_.add_tensor("lstm.b", 4 * H, 1);
    }
    int in = spec_.encoder_out();
    for (std::size_t i = 0; i < spec_.dense.size(); ++i) {
        const int out = spec_.dense[i];
        dense_w_.push_back(layout_.add_tensor("dense" + std::to_string(i) + ".W", out, in));
        dense_b_.push_back(layout_.add_tensor("dense" + std::to_string(i) + ".b", out, 1));
        in = out;
    }
    actor_w_ = layout_.add_tensor("actor.W", spec_.actions, in);
    actor_b_ = layout_.add_tensor("actor.b", spec_.actions, 1);
    critic_w_ = layout_.add_tensor("critic.W", 1, in);
    critic_b_ = layout_.add_tensor("critic.b", 1, 1);
}

ParamVector PolicyValueNet::make_params() const { return layout_; }

std::size_t PolicyValueNet::param_count() const { return layout_.size(); }

void PolicyValueNet::init_params(ParamVector& params, Rng& rng) const {
    if (!params.same_layout(layout_)) throw std::invalid_argument("parameter layout mismatch");
    for (const TensorInfo& t : params.tensors()) {
        // fan_in of a weight matrix is its column count; biases start at 0.
        const bool is_bias = t.cols == 1 && t.name.size() > 2 && t.name.substr(t.name.size() - 2) == ".b";
        double* p = params.data() + t.offset;
        if (is_bias) {
            std::fill(p, p + t.size(), 0.0);
        } else {
            const double bound = 1.0 / std::sqrt(static_cast<double>(t.cols));
            for (std::size_t i = 0; i < t.size(); ++i) p[i] = rng.uniform(-bound, bound);
        }
    }
    if (spec_.recurrent) {
        // Forget-gate bias +1 keeps early memories alive.
        MatView b = params.view(lstm_b_);
        const int H = spec_.lstm_hidden;
        for (int j = 0; j < H; ++j) b(H + j, 0) = 1.0;
    }
}

NetOutput PolicyValueNet::forward(const ParamVector& params, const std::vector<double>& window,
                                  ForwardCache* cache) const {
    if (!params.same_layout(layout_)) throw std::invalid_argument("parameter layout mismatch");
    if (window.size() != spec_.input_size()) {
        throw std::invalid_argument("observation window has wrong size");
    }
    const int W = spec_.window;
    const int F = spec_.features;
    const int H = spec_.lstm_hidden;

    ForwardCache local;
    ForwardCache& cc = cache ? *cache : local;
    cc.input = window;

    std::vector<double> trunk;
    if (spec_.recurrent) {
        cc.gate_i.assign(static_cast<std::size_t>(W) * H, 0.0);
        cc.gate_f.assign(static_cast<std::size_t>(W) * H, 0.0);
        cc.gate_g.assign(static_cast<std::size_t>(W) * H, 0.0);
        cc.gate_o.assign(static_cast<std::size_t>(W) * H, 0.0);
        cc.cells.assign(static_cast<std::size_t>(W + 1) * H, 0.0);
        cc.hiddens.assign(static_cast<std::size_t>(W + 1) * H, 0.0);
        cc.tanh_cell.assign(static_cast<std::size_t>(W) * H, 0.0);

        ConstMatView Wx = params.view(lstm_w_);
        ConstMatView Uh = params.view(lstm_u_);
        ConstMatView b = params.view(lstm_b_);

        std::vector<double> pre(static_cast<std::size_t>(4) * H);
        for (int k = 0; k < W; ++k) {
            const double* x = window.data() + static_cast<std::size_t>(k) * F;
            const double* h = cc.hiddens.data() + static_cast<std::size_t>(k) * H;
            const double* c = cc.cells.data() + static_cast<std::size_t>(k) * H;
            for (int r = 0; r < 4 * H; ++r) {
                double acc = b(r, 0);
                const double* wrow = Wx.data() + static_cast<std::size_t>(r) * F;
                for (int j = 0; j < F; ++j) acc += wrow[j] * x[j];
                const double* urow = Uh.data() + static_cast<std::size_t>(r) * H;
                for (int j = 0; j < H; ++j) acc += urow[j] * h[j];
                pre[r] = acc;
            }
            double* gi = cc.gate_i.data() + static_cast<std::size_t>(k) * H;
            double* gf = cc.gate_f.data() + static_cast<std::size_t>(k) * H;
            double* gg = cc.gate_g.data() + static_cast<std::size_t>(k) * H;
            double* go = cc.gate_o.data() + static_cast<std::size_t>(k) * H;
            double* cn = cc.cells.data() + static_cast<std::size_t>(k + 1) * H;
            double* hn = cc.hiddens.data() + static_cast<std::size_t>(k + 1) * H;
            double* tc = cc.tanh_cell.data() + static_cast<std::size_t>(k) * H;
            for (int j = 0; j < H; ++j) {
                gi[j] = sigmoid(pre[j]);
                gf[j] = sigmoid(pre[H + j]);
                gg[j] = std::tanh(pre[2 * H + j]);
                go[j] = sigmoid(pre[3 * H + j]);
                cn[j] = gf[j] * c[j] + gi[j] * gg[j];
                tc[j] = std::tanh(cn[j]);
                hn[j] = go[j] * tc[j];
            }
        }
        trunk.assign(cc.hiddens.end() - H, cc.hiddens.end());
    } else {
        trunk = window;  // flattened
    }

    cc.dense_out.clear();
    for (std::size_t i = 0; i < dense_w_.size(); ++i) {
        std::vector<double> out(static_cast<std::size_t>(spec_.dense[i]));
        affine(params.view(dense_w_[i]), params.view(dense_b_[i]), trunk.data(), out.data());
        for (double& v : out) v = std::tanh(v);
        cc.dense_out.push_back(out);
        trunk = std::move(out);
    }

    NetOutput result;
    result.logits.assign(static_cast<std::size_t>(spec_.actions), 0.0);
    affine(params.view(actor_w_), params.view(actor_b_), trunk.data(), result.logits.data());
    double v = 0.0;
    affine(params.view(critic_w_), params.view(critic_b_), trunk.data(), &v);
    result.value = v;
    if (spec_.recurrent) {
        result.hidden.assign(cc.hiddens.end() - H, cc.hiddens.end());
        result.hidden.insert(result.hidden.end(), cc.cells.end() - H, cc.cells.end());
    }
    for (double z : result.logits) {
        if (!std::isfinite(z)) throw std::runtime_error("non-finite logits in forward pass");
    }
    if (!std::isfinite(result.value)) throw std::runtime_error("non-finite value in forward pass");
    cc.logits = result.logits;
    cc.value = result.value;
    return result;
}

void PolicyValueNet::backward(const ParamVector& params, const ForwardCache& cache,
                              const std::vector<double>& dlogits, double dvalue,
                              ParamVector& grads) const {
    if (!params.same_layout(layout_) || !grads.same_layout(layout_)) {
        throw std::invalid_argument("parameter layout mismatch");
    }
    if (dlogits.size() != static_cast<std::size_t>(spec_.actions)) {
        throw std::invalid_argument("dlogits has wrong size");
    }
    const int W = spec_.window;
    const int F = spec_.features;
    const int H = spec_.lstm_hidden;

    // Trunk activations feeding the heads.
    const std::vector<double>* head_in;
    std::vector<double> encoder_out;
    if (spec_.recurrent) {
        encoder_out.assign(cache.hiddens.end() - H, cache.hiddens.end());
    } else {
        encoder_out = cache.input;
    }
    head_in = cache.dense_out.empty() ? &encoder_out : &cache.dense_out.back();

    // Heads.
    std::vector<double> dtrunk(head_in->size(), 0.0);
    accumulate_outer(grads.view(actor_w_), grads.view(actor_b_), dlogits.data(), head_in->data());
    add_mat_t_vec(params.view(actor_w_), dlogits.data(), dtrunk.data());
    accumulate_outer(grads.view(critic_w_), grads.view(critic_b_), &dvalue, head_in->data());
    add_mat_t_vec(params.view(critic_w_), &dvalue, dtrunk.data());

    // Dense stack, last layer first. tanh' = 1 - y^2 on the cached outputs.
    for (std::size_t li = dense_w_.size(); li-- > 0;) {
        const std::vector<double>& out = cache.dense_out[li];
        const std::vector<double>& in = li == 0 ? encoder_out : cache.dense_out[li - 1];
        std::vector<double> dpre(out.size());
        for (std::size_t j = 0; j < out.size(); ++j) dpre[j] = dtrunk[j] * (1.0 - out[j] * out[j]);
        std::vector<double> din(in.size(), 0.0);
        accumulate_outer(grads.view(dense_w_[li]), grads.view(dense_b_[li]), dpre.data(), in.data());
        add_mat_t_vec(params.view(dense_w_[li]), dpre.data(), din.data());
        dtrunk = std::move(din);
    }

    if (!spec_.recurrent) return;  // flattened input needs no further backprop

    // Backpropagation through time over the window.
    ConstMatView Wx = params.view(lstm_w_);
    ConstMatView Uh = params.view(lstm_u_);
    MatView dW = grads.view(lstm_w_);
    MatView dU = grads.view(lstm_u_);
    MatView db = grads.view(lstm_b_);

    std::vector<double> dh(dtrunk);  // gradient wrt h_W
    std::vector<double> dc(static_cast<std::size_t>(H), 0.0);
    std::vector<double> dpre(static_cast<std::size_t>(4) * H);
    for (int k = W - 1; k >= 0; --k) {
        const double* x = cache.input.data() + static_cast<std::size_t>(k) * F;
        const double* hprev = cache.hiddens.data() + static_cast<std::size_t>(k) * H;
        const double* cprev = cache.cells.data() + static_cast<std::size_t>(k) * H;
        const double* gi = cache.gate_i.data() + static_cast<std::size_t>(k) * H;
        const double* gf = cache.gate_f.data() + static_cast<std::size_t>(k) * H;
        const double* gg = cache.gate_g.data() + static_cast<std::size_t>(k) * H;
        const double* go = cache.gate_o.data() + static_cast<std::size_t>(k) * H;
        const double* tc = cache.tanh_cell.data() + static_cast<std::size_t>(k) * H;

        for (int j = 0; j < H; ++j) {
            const double do_ = dh[j] * tc[j];
            const double dcell = dc[j] + dh[j] * go[j] * (1.0 - tc[j] * tc[j]);
            const double di = dcell * gg[j];
            const double df = dcell * cprev[j];
            const double dg = dcell * gi[j];
            dpre[j] = di * gi[j] * (1.0 - gi[j]);
            dpre[H + j] = df * gf[j] * (1.0 - gf[j]);
            dpre[2 * H + j] = dg * (1.0 - gg[j] * gg[j]);
            dpre[3 * H + j] = do_ * go[j] * (1.0 - go[j]);
            dc[j] = dcell * gf[j];
        }
        for (int r = 0; r < 4 * H; ++r) {
            const double gr = dpre[r];
            double* wrow = dW.data() + static_cast<std::size_t>(r) * F;
            for (int j = 0; j < F; ++j) wrow[j] += gr * x[j];
            double* urow = dU.data() + static_cast<std::size_t>(r) * H;
            for (int j = 0; j < H; ++j) urow[j] += gr * hprev[j];
            db(r, 0) += gr;
        }
        std::fill(dh.begin(), dh.end(), 0.0);
        for (int r = 0; r < 4 * H; ++r) {
            const double gr = dpre[r];
            const double* urow = Uh.data() + static_cast<std::size_t>(r) * H;
            for (int j = 0; j < H; ++j) dh[j] += urow[j] * gr;
        }
        (void)Wx;
    }
}

std::vector<double> softmax(const std::vector<double>& logits) {
    const double zmax = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - zmax);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
}

std::vector<double> log_softmax(const std::vector<double>& logits) {
    const double zmax = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - zmax);
    const double lse = zmax + std::log(sum);
    std::vector<double> lp(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) lp[i] = logits[i] - lse;
    return lp;
}

double entropy(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

int argmax(const std::vector<double>& values) {
    return static_cast<int>(std::max_element(values.begin(), values.end()) - values.begin());
}

int sample_categorical(const std::vector<double>& probs, Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

double actor_critic_backward(const PolicyValueNet& net, const ParamVector& params,
                             const std::vector<SegmentSample>& segment, double entropy_coef,
                             double value_coef, ParamVector& grads) {
    double loss = 0.0;
    ForwardCache cache;
    for (const SegmentSample& s : segment) {
        const NetOutput out = net.forward(params, s.window, &cache);
        const std::vector<double> logp = log_softmax(out.logits);
        const std::vector<double> p = softmax(out.logits);
        const double h = entropy(p);
        const double adv = s.ret - out.value;  // detached baseline

        loss += -logp[static_cast<std::size_t>(s.action)] * adv - entropy_coef * h +
                value_coef * (s.ret - out.value) * (s.ret - out.value);

        std::vector<double> dlogits(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double onehot = static_cast<int>(j) == s.action ? 1.0 : 0.0;
            // policy term + entropy term
            dlogits[j] = adv * (p[j] - onehot) + entropy_coef * p[j] * (std::log(std::max(p[j], 1e-300)) + h);
        }
        const double dvalue = 2.0 * value_coef * (out.value - s.ret);
        net.backward(params, cache, dlogits, dvalue, grads);
    }
    if (!std::isfinite(loss)) throw std::runtime_error("non-finite training loss");
    return loss;
}

double q_backward(const PolicyValueNet& net, const ParamVector& params,
                  const std::vector<double>& window, int action, double target, double scale,
                  ParamVector& grads) {
    ForwardCache cache;
    const NetOutput out = net.forward(params, window, &cache);
    const double q = out.logits[static_cast<std::size_t>(action)];
    const double err = q - target;
    std::vector<double> dlogits(out.logits.size(), 0.0);
    dlogits[static_cast<std::size_t>(action)] = 2.0 * err * scale;
    net.backward(params, cache, dlogits, 0.0, grads);
    return err * err;
}

}  // namespace fitsim::nn
