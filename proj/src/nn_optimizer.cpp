#include "fitsim/nn/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace fitsim::nn {

double global_norm(const ParamVector& grads) {
    double sq = 0.0;
    for (std::size_t i = 0; i < grads.size(); ++i) sq += grads[i] * grads[i];
    return std::sqrt(sq);
}

double clip_global_norm(ParamVector& grads, double max_norm) {
    const double norm = global_norm(grads);
    if (max_norm > 0.0 && norm > max_norm) {
        const double scale = max_norm / norm;
        for (std::size_t i = 0; i < grads.size(); ++i) grads[i] *= scale;
    }
    return norm;
}

RmsProp::RmsProp(const ParamVector& layout, RmsPropConfig cfg)
    : cfg_(cfg), mean_square_(layout.zeros_like()) {
    if (cfg_.lr <= 0.0) throw std::domain_error("learning rate must be positive");
    if (cfg_.decay <= 0.0 || cfg_.decay >= 1.0) throw std::domain_error("decay must be in (0,1)");
    if (cfg_.epsilon <= 0.0) throw std::domain_error("epsilon must be positive");
}

void RmsProp::apply(ParamVector& params, ParamVector& grads) {
    if (!params.same_layout(mean_square_) || !grads.same_layout(mean_square_)) {
        throw std::invalid_argument("optimizer layout mismatch");
    }
    for (std::size_t i = 0; i < grads.size(); ++i) {
        if (!std::isfinite(grads[i])) {
            ++rejected_;
            return;  // drop the whole update, keep the last valid parameters
        }
    }
    clip_global_norm(grads, cfg_.clip_norm);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        mean_square_[i] = cfg_.decay * mean_square_[i] + (1.0 - cfg_.decay) * g * g;
        params[i] -= cfg_.lr * g / std::sqrt(mean_square_[i] + cfg_.epsilon);
    }
}

}  // namespace fitsim::nn
