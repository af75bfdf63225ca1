// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/model/weights.hpp"

#include <cmath>
#include <random>

namespace armt::model {

template <Real T>
LayerWeights<T> GroupedWeights<T>::layer(std::size_t l) const {
    if (l >= n_layers()) {
        throw DimensionError("layer " + std::to_string(l) + " out of range (L=" +
                             std::to_string(n_layers()) + ")");
    }
    const std::size_t d = attn_norm.dim(1);
    return LayerWeights<T>{
        .wq = wq.slab(l),
        .wk = wk.slab(l),
        .wv = wv.slab(l),
        .wo = wo.slab(l),
        .w_gate = w_gate.slab(l),
        .w_up = w_up.slab(l),
        .w_down = w_down.slab(l),
        .attn_norm = std::span<const T>(attn_norm.data().data() + l * d, d),
        .mlp_norm = std::span<const T>(mlp_norm.data().data() + l * d, d),
        .mem_wk = mem_wk.slab(l),
        .mem_wv = mem_wv.slab(l),
        .mem_wbeta = mem_wbeta.slab(l),
        .mem_wq = mem_wq.slab(l),
    };
}

template <Real T>
void GroupedWeights<T>::for_each(
    const std::function<void(const std::string&, const Tensor<T>&)>& fn) const {
    fn("layers.wq", wq);
    fn("layers.wk", wk);
    fn("layers.wv", wv);
    fn("layers.wo", wo);
    fn("layers.w_gate", w_gate);
    fn("layers.w_up", w_up);
    fn("layers.w_down", w_down);
    fn("layers.attn_norm", attn_norm);
    fn("layers.mlp_norm", mlp_norm);
    fn("layers.mem_wk", mem_wk);
    fn("layers.mem_wv", mem_wv);
    fn("layers.mem_wbeta", mem_wbeta);
    fn("layers.mem_wq", mem_wq);
    fn("embedding", embedding);
    fn("unembedding", unembedding);
    fn("mem_tokens", mem_tokens);
}

template <Real T>
void GroupedWeights<T>::for_each_mut(const std::function<void(const std::string&, Tensor<T>&)>& fn) {
    const auto& self = *this;
    self.for_each([&](const std::string& name, const Tensor<T>& t) {
        fn(name, const_cast<Tensor<T>&>(t));
    });
}

Shape expected_shape(const ModelConfig& c, const std::string& name) {
    const std::size_t L = c.n_layers, d = c.d_model;
    if (name == "layers.wq" || name == "layers.wk" || name == "layers.wv" || name == "layers.wo" ||
        name == "layers.mem_wv")
        return {L, d, d};
    if (name == "layers.w_gate" || name == "layers.w_up") return {L, d, c.d_ff};
    if (name == "layers.w_down") return {L, c.d_ff, d};
    if (name == "layers.attn_norm" || name == "layers.mlp_norm") return {L, d};
    if (name == "layers.mem_wk" || name == "layers.mem_wq") return {L, c.d_mem, d};
    if (name == "layers.mem_wbeta") return {L, 1, d};
    if (name == "embedding") return {c.vocab_size, d};
    if (name == "unembedding") return {d, c.vocab_size};
    if (name == "mem_tokens") return {c.num_mem_tokens, d};
    throw InputError("unknown weight tensor '" + name + "'");
}

template <Real T>
void check_shapes(const ModelConfig& config, const GroupedWeights<T>& weights) {
    weights.for_each([&](const std::string& name, const Tensor<T>& t) {
        const Shape want = expected_shape(config, name);
        if (t.shape() != want) {
            throw DimensionError("weight '" + name + "' has shape " + shape_string(t.shape()) +
                                 ", config requires " + shape_string(want));
        }
    });
}

namespace {

/// Fan-in of the projection stored in `name`; 0 marks tensors that are not
/// projections.
std::size_t fan_in(const ModelConfig& c, const std::string& name) {
    if (name == "layers.w_down") return c.d_ff;
    if (name == "layers.attn_norm" || name == "layers.mlp_norm" || name == "embedding" ||
        name == "mem_tokens")
        return 0;
    return c.d_model;
}

}  // namespace

GroupedWeights<double> init_weights(const ModelConfig& config) {
    config.validate();
    GroupedWeights<double> w;
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    w.for_each_mut([&](const std::string& name, Tensor<double>& t) {
        t = Tensor<double>(expected_shape(config, name));
        if (name == "layers.attn_norm" || name == "layers.mlp_norm") {
            std::fill(t.storage().begin(), t.storage().end(), 1.0);
            return;
        }
        const std::size_t fi = fan_in(config, name);
        const double scale = fi ? 1.0 / std::sqrt(static_cast<double>(fi)) : 1.0;
        for (auto& v : t.storage()) {
            v = normal(rng) * scale;
        }
    });
    return w;
}

template <Real T>
GroupedWeights<T> zero_weights(const ModelConfig& config) {
    config.validate();
    GroupedWeights<T> w;
    w.for_each_mut([&](const std::string& name, Tensor<T>& t) {
        const bool gain = name == "layers.attn_norm" || name == "layers.mlp_norm";
        t = Tensor<T>(expected_shape(config, name), gain ? T{1} : T{0});
    });
    return w;
}

template struct GroupedWeights<float>;
template struct GroupedWeights<double>;
template void check_shapes<float>(const ModelConfig&, const GroupedWeights<float>&);
template void check_shapes<double>(const ModelConfig&, const GroupedWeights<double>&);
template GroupedWeights<float> zero_weights<float>(const ModelConfig&);
template GroupedWeights<double> zero_weights<double>(const ModelConfig&);

}  // namespace armt::model
