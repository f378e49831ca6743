#pragma once

#include <cstdint>
#include <mutex>

#include "fitsim/nn/params.hpp"

namespace fitsim::nn {

struct RmsPropConfig {
    double lr = 7e-4;
    double decay = 0.99;     // squared-gradient moving-average factor
    double epsilon = 1e-5;
    double clip_norm = 40.0;  // global gradient norm ceiling; <=0 disables
};

// Euclidean norm of the gradient vector.
double global_norm(const ParamVector& grads);

// Scales `grads` in place so its global norm is at most `max_norm`.
// Returns the pre-clip norm.
double clip_global_norm(ParamVector& grads, double max_norm);

// RMSProp with a single squared-gradient accumulator, shared across all
// asynchronous learners updating the same parameter vector.
class RmsProp {
public:
    RmsProp(const ParamVector& layout, RmsPropConfig cfg);

    // Clips, then applies g to params:  s <- d*s + (1-d)*g^2,
    // theta <- theta - lr * g / sqrt(s + eps). Updates holding non-finite
    // entries are rejected whole and counted instead of applied.
    void apply(ParamVector& params, ParamVector& grads);

    const RmsPropConfig& config() const { return cfg_; }
    std::uint64_t rejected_updates() const { return rejected_; }

private:
    RmsPropConfig cfg_;
    ParamVector mean_square_;
    std::uint64_t rejected_ = 0;
};

// Central parameter store for asynchronous training: workers snapshot the
// current parameters, compute gradients locally, and apply them through the
// shared optimizer under one lock (Hogwild-free variant; deterministic with
// a single worker).
class SharedParams {
public:
    SharedParams(ParamVector initial, RmsPropConfig cfg)
        : params_(std::move(initial)), opt_(params_, cfg) {}

    ParamVector snapshot() const {
        std::lock_guard<std::mutex> lock(mu_);
        return params_;
    }

    void apply_gradients(ParamVector& grads) {
        std::lock_guard<std::mutex> lock(mu_);
        opt_.apply(params_, grads);
    }

    std::uint64_t rejected_updates() const {
        std::lock_guard<std::mutex> lock(mu_);
        return opt_.rejected_updates();
    }

private:
    mutable std::mutex mu_;
    ParamVector params_;
    RmsProp opt_;
};

}  // namespace fitsim::nn
