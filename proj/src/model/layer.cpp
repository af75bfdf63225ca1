// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include "armt/model/layer.hpp"

#include <cmath>
#include <numeric>

#include "armt/tensor/ops.hpp"

namespace armt::model {

template <Real T>
void apply_rotary(MatrixView<T> m, std::size_t n_heads, double theta) {
    const std::size_t dh = m.cols / n_heads;
    const std::size_t half = dh / 2;
    std::vector<T> cos_t(m.rows * half), sin_t(m.rows * half);
    for (std::size_t p = 0; p < m.rows; ++p) {
        for (std::size_t i = 0; i < half; ++i) {
            const double freq = std::pow(theta, -2.0 * static_cast<double>(i) / static_cast<double>(dh));
            const double angle = static_cast<double>(p) * freq;
            cos_t[p * half + i] = static_cast<T>(std::cos(angle));
            sin_t[p * half + i] = static_cast<T>(std::sin(angle));
        }
    }
    for (std::size_t p = 0; p < m.rows; ++p) {
        T* row = m.row(p);
        for (std::size_t h = 0; h < n_heads; ++h) {
            T* head = row + h * dh;
            for (std::size_t i = 0; i < half; ++i) {
                const T c = cos_t[p * half + i];
                const T s = sin_t[p * half + i];
                const T x0 = head[2 * i];
                const T x1 = head[2 * i + 1];
                head[2 * i] = x0 * c - x1 * s;
                head[2 * i + 1] = x0 * s + x1 * c;
            }
        }
    }
}

template <Real T>
void causal_attention(ConstMatrixView<T> q, ConstMatrixView<T> k, ConstMatrixView<T> v,
                      std::size_t n_heads, MatrixView<T> out) {
    const std::size_t P = q.rows;
    const std::size_t d = q.cols;
    if (k.rows != P || v.rows != P || k.cols != d || v.cols != d || out.rows != P ||
        out.cols != d || d % n_heads != 0) {
        throw DimensionError("causal_attention: q/k/v/out shapes disagree");
    }
    const std::size_t dh = d / n_heads;
    const T scale = static_cast<T>(1.0 / std::sqrt(static_cast<double>(dh)));

    Tensor<T> qh = Tensor<T>::matrix(P, dh);
    Tensor<T> kh_t = Tensor<T>::matrix(dh, P);
    Tensor<T> vh = Tensor<T>::matrix(P, dh);
    Tensor<T> scores = Tensor<T>::matrix(P, P);
    Tensor<T> ctx = Tensor<T>::matrix(P, dh);
    std::vector<std::size_t> valid(P);
    std::iota(valid.begin(), valid.end(), std::size_t{1});

    for (std::size_t h = 0; h < n_heads; ++h) {
        const std::size_t c0 = h * dh;
        for (std::size_t p = 0; p < P; ++p) {
            for (std::size_t c = 0; c < dh; ++c) {
                qh.at(p, c) = q(p, c0 + c);
                kh_t.at(c, p) = k(p, c0 + c);
                vh.at(p, c) = v(p, c0 + c);
            }
        }
        kernels::gemm<T>(qh.view(), kh_t.view(), scores.view());
        for (auto& s : scores.storage()) s = s * scale;
        softmax_prefix_rows<T>(scores.view(), valid);
        kernels::gemm<T>(scores.view(), vh.view(), ctx.view());
        for (std::size_t p = 0; p < P; ++p) {
            for (std::size_t c = 0; c < dh; ++c) {
                out(p, c0 + c) = ctx.at(p, c);
            }
        }
    }
}

namespace {

// gate <- silu(gate) * up
template <Real T>
void swiglu_inplace(std::span<T> gate, std::span<const T> up) {
    for (std::size_t i = 0; i < gate.size(); ++i) {
        gate[i] = silu<T>(gate[i]) * up[i];
    }
}

template <Real T>
void rope_and_attend(const ModelConfig& config, MatrixView<T> q, MatrixView<T> k,
                     ConstMatrixView<T> v, MatrixView<T> ctx) {
    apply_rotary<T>(q, config.n_heads, config.rope_theta);
    apply_rotary<T>(k, config.n_heads, config.rope_theta);
    causal_attention<T>(q, k, v, config.n_heads, ctx);
}

template <Real T>
void require_cursor(const SegmentActivation<T>& x, std::size_t l, const ModelConfig& config) {
    if (x.layer_cursor != l) {
        throw SchedulingError("segment " + std::to_string(x.segment_index) + " is at layer " +
                              std::to_string(x.layer_cursor) + " but was scheduled on layer " +
                              std::to_string(l));
    }
    if (x.hidden.rank() != 2 || x.hidden.rows() != config.positions() ||
        x.hidden.cols() != config.d_model) {
        throw DimensionError("segment activation has shape " + shape_string(x.hidden.shape()) +
                             ", expected [" + std::to_string(config.positions()) + "x" +
                             std::to_string(config.d_model) + "]");
    }
}

}  // namespace

template <Real T>
void layer_forward(const LayerWeights<T>& w, const ModelConfig& config, std::size_t l,
                   SegmentActivation<T>& x) {
    require_cursor(x, l, config);
    const std::size_t P = config.positions();
    const std::size_t d = config.d_model;
    const T eps = static_cast<T>(config.eps_norm);
    MatrixView<T> hidden = x.hidden.view();

    Tensor<T> h = Tensor<T>::matrix(P, d);
    rms_norm_rows<T>(hidden, w.attn_norm, eps, h.view());
    Tensor<T> q = Tensor<T>::matrix(P, d), k = Tensor<T>::matrix(P, d), v = Tensor<T>::matrix(P, d);
    kernels::gemm<T>(h.view(), w.wq, q.view());
    kernels::gemm<T>(h.view(), w.wk, k.view());
    kernels::gemm<T>(h.view(), w.wv, v.view());
    Tensor<T> ctx = Tensor<T>::matrix(P, d);
    rope_and_attend<T>(config, q.view(), k.view(), v.view(), ctx.view());
    Tensor<T> attn = Tensor<T>::matrix(P, d);
    kernels::gemm<T>(ctx.view(), w.wo, attn.view());
    kernels::add_inplace<T>(attn.data(), x.hidden.data());

    rms_norm_rows<T>(hidden, w.mlp_norm, eps, h.view());
    Tensor<T> gate = Tensor<T>::matrix(P, config.d_ff), up = Tensor<T>::matrix(P, config.d_ff);
    kernels::gemm<T>(h.view(), w.w_gate, gate.view());
    kernels::gemm<T>(h.view(), w.w_up, up.view());
    swiglu_inplace<T>(gate.data(), up.data());
    Tensor<T> down = Tensor<T>::matrix(P, d);
    kernels::gemm<T>(gate.view(), w.w_down, down.view());
    kernels::add_inplace<T>(down.data(), x.hidden.data());

    x.layer_cursor = l + 1;
}

template <Real T>
void grouped_layer_forward(const GroupedWeights<T>& weights, const ModelConfig& config,
                           std::span<const GroupMember<T>> members, ThreadPool* pool) {
    const std::size_t G = members.size();
    if (G == 0) {
        return;
    }
    if (G > config.n_layers) {
        throw SchedulingError("group of " + std::to_string(G) + " members exceeds " +
                              std::to_string(config.n_layers) + " layers");
    }
    std::vector<bool> seen(config.n_layers, false);
    for (const auto& m : members) {
        if (m.layer >= config.n_layers) {
            throw SchedulingError("member layer " + std::to_string(m.layer) + " out of range");
        }
        if (seen[m.layer]) {
            throw SchedulingError("layer " + std::to_string(m.layer) +
                                  " appears twice in one group");
        }
        seen[m.layer] = true;
        require_cursor(*m.activation, m.layer, config);
    }

    const std::size_t P = config.positions();
    const std::size_t d = config.d_model;
    const std::size_t f = config.d_ff;
    const T eps = static_cast<T>(config.eps_norm);

    auto for_members = [&](auto&& fn) {
        if (pool) {
            pool->parallel_for(G, [&](std::size_t g, std::size_t) { fn(g); });
        } else {
            for (std::size_t g = 0; g < G; ++g) fn(g);
        }
    };

    // Stacked inputs and per-member parameter slices.
    GroupedBuffer<T> x(G, {P, d});
    Tensor<T> attn_gains = Tensor<T>::matrix(G, d);
    Tensor<T> mlp_gains = Tensor<T>::matrix(G, d);
    std::vector<ConstMatrixView<T>> wq(G), wk(G), wv(G), wo(G), wg(G), wu(G), wd(G);
    for (std::size_t g = 0; g < G; ++g) {
        const std::size_t l = members[g].layer;
        const auto src = members[g].activation->hidden.data();
        std::copy(src.begin(), src.end(), x.slice(g).begin());
        const auto lw = weights.layer(l);
        std::copy(lw.attn_norm.begin(), lw.attn_norm.end(), attn_gains.view().row(g));
        std::copy(lw.mlp_norm.begin(), lw.mlp_norm.end(), mlp_gains.view().row(g));
        wq[g] = lw.wq;
        wk[g] = lw.wk;
        wv[g] = lw.wv;
        wo[g] = lw.wo;
        wg[g] = lw.w_gate;
        wu[g] = lw.w_up;
        wd[g] = lw.w_down;
    }
    auto member_views = [G](const GroupedBuffer<T>& buf) {
        std::vector<ConstMatrixView<T>> v(G);
        for (std::size_t g = 0; g < G; ++g) v[g] = buf.matrix(g);
        return v;
    };

    GroupedBuffer<T> h(G, {P, d});
    rms_norm_stacked<T>(x, attn_gains.view(), eps, h, pool);
    const auto h_views = member_views(h);
    GroupedBuffer<T> q(G, {P, d}), k(G, {P, d}), v(G, {P, d});
    grouped_gemm<T>(h_views, wq, q, pool);
    grouped_gemm<T>(h_views, wk, k, pool);
    grouped_gemm<T>(h_views, wv, v, pool);
    GroupedBuffer<T> ctx(G, {P, d});
    for_members([&](std::size_t g) {
        rope_and_attend<T>(config, q.matrix(g), k.matrix(g), v.matrix(g), ctx.matrix(g));
    });
    GroupedBuffer<T> attn(G, {P, d});
    grouped_gemm<T>(member_views(ctx), wo, attn, pool);
    for_members([&](std::size_t g) { kernels::add_inplace<T>(attn.slice(g), x.slice(g)); });

    rms_norm_stacked<T>(x, mlp_gains.view(), eps, h, pool);
    GroupedBuffer<T> gate(G, {P, f}), up(G, {P, f});
    grouped_gemm<T>(h_views, wg, gate, pool);
    grouped_gemm<T>(h_views, wu, up, pool);
    for_members([&](std::size_t g) { swiglu_inplace<T>(gate.slice(g), up.slice(g)); });
    GroupedBuffer<T> down(G, {P, d});
    grouped_gemm<T>(member_views(gate), wd, down, pool);
    for_members([&](std::size_t g) { kernels::add_inplace<T>(down.slice(g), x.slice(g)); });

    for (std::size_t g = 0; g < G; ++g) {
        auto& act = *members[g].activation;
        const auto out = x.slice(g);
        std::copy(out.begin(), out.end(), act.hidden.data().begin());
        act.layer_cursor = members[g].layer + 1;
    }
}

template <Real T>
std::vector<SegmentActivation<T>> grouped_layer_forward(
    const GroupedWeights<T>& weights, const ModelConfig& config,
    std::vector<std::pair<std::size_t, SegmentActivation<T>>> members, ThreadPool* pool) {
    std::vector<GroupMember<T>> refs;
    refs.reserve(members.size());
    for (auto& [layer, act] : members) {
        refs.push_back({layer, &act});
    }
    grouped_layer_forward<T>(weights, config, refs, pool);
    std::vector<SegmentActivation<T>> out;
    out.reserve(members.size());
    for (auto& m : members) {
        out.push_back(std::move(m.second));
    }
    return out;
}

#define ARMT_INSTANTIATE_LAYER(T)                                                                  \
    template void apply_rotary<T>(MatrixView<T>, std::size_t, double);                             \
    template void causal_attention<T>(ConstMatrixView<T>, ConstMatrixView<T>, ConstMatrixView<T>,  \
                                      std::size_t, MatrixView<T>);                                 \
    template void layer_forward<T>(const LayerWeights<T>&, const ModelConfig&, std::size_t,        \
                                   SegmentActivation<T>&);                                         \
    template void grouped_layer_forward<T>(const GroupedWeights<T>&, const ModelConfig&,           \
                                           std::span<const GroupMember<T>>, ThreadPool*);          \
    template std::vector<SegmentActivation<T>> grouped_layer_forward<T>(                           \
        const GroupedWeights<T>&, const ModelConfig&,                                              \
        std::vector<std::pair<std::size_t, SegmentActivation<T>>>, ThreadPool*);

ARMT_INSTANTIATE_LAYER(float)
ARMT_INSTANTIATE_LAYER(double)

}  // namespace armt::model
