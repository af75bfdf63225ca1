// Copyright 2026 The ARMT Diagonal Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "armt/model/assoc.hpp"
#include "armt/tensor/ops.hpp"
#include "test_support.hpp"

using namespace armt;
using namespace armt::model;
using armt::testing::random_vector;
using armt::testing::tiny_config;

namespace {

// Direct transcription of the feature map: r = [relu(x), relu(-x)],
// block j holds r[i] * r[(i - j) mod 2d].
std::vector<double> dpfp_oracle(const std::vector<double>& x, std::size_t nu) {
    const std::size_t w = 2 * x.size();
    std::vector<double> r(w);
    for (std::size_t i = 0; i < x.size(); ++i) {
        r[i] = x[i] > 0 ? x[i] : 0;
        r[x.size() + i] = -x[i] > 0 ? -x[i] : 0;
    }
    std::vector<double> out;
    for (std::size_t j = 1; j <= nu; ++j) {
        for (std::size_t i = 0; i < w; ++i) {
            out.push_back(r[i] * r[(i + w * j - j) % w]);
        }
    }
    return out;
}

// Dense vector on the grid {±1/4, ±2/4, ..., ±8/4}: products and short sums are exact.
std::vector<double> dyadic_vector(std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> mag(1, 8);
    std::bernoulli_distribution neg(0.5);
    std::vector<double> v(n);
    for (auto& e : v) e = (neg(rng) ? -1 : 1) * mag(rng) * 0.25;
    return v;
}

std::vector<double> lookup(const MemoryState<double>& s, std::size_t l,
                           const std::vector<double>& key, std::size_t nu, std::size_t width,
                           double eps) {
    const auto phi = dpfp<double>(key, nu);
    std::vector<double> out(width);
    assoc_lookup<double>(s, l, phi, eps, out);
    return out;
}

void write_one(MemoryState<double>& s, std::size_t l, const std::vector<double>& key,
               const std::vector<double>& value, std::size_t nu, double eps) {
    const double beta = 1.0;
    assoc_write<double>(s, l, ConstMatrixView<double>{key.data(), 1, key.size()},
                        ConstMatrixView<double>{value.data(), 1, value.size()},
                        std::span<const double>(&beta, 1), nu, eps);
}

}  // namespace

TEST_CASE("dpfp hand-evaluated example", "[dpfp]") {
    const std::vector<double> x{2.0};
    CHECK(dpfp<double>(x, 3) == std::vector<double>{0, 0, 4, 0, 0, 0});
    CHECK(dpfp<double>(std::vector<double>(5, 0.0), 3) == std::vector<double>(30, 0.0));
}

TEST_CASE("dpfp shape law and nonnegativity", "[dpfp][property]") {
    for (std::size_t nu : {1u, 2u, 3u}) {
        for (std::size_t d : {1u, 2u, 4u, 7u, 16u}) {
            for (std::uint64_t seed = 0; seed < 25; ++seed) {
                const auto x = random_vector<double>(d, seed * 31 + d);
                const auto phi = dpfp<double>(x, nu);
                REQUIRE(phi.size() == 2 * nu * d);
                for (double v : phi) CHECK(v >= 0.0);
                CHECK(phi == dpfp_oracle(x, nu));
                const auto phi32 = dpfp<float>(std::vector<float>(x.begin(), x.end()), nu);
                CHECK(phi32.size() == 2 * nu * d);
                for (float v : phi32) CHECK(v >= 0.0f);
            }
        }
    }
}

TEST_CASE("dpfp of a dense nonzero vector is nonzero for nu >= 2", "[dpfp][property]") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        for (std::size_t nu : {2u, 3u}) {
            const auto x = dyadic_vector(1 + trial % 9, rng);
            const auto phi = dpfp<double>(x, nu);
            CHECK(dot<double>(phi, phi) > 0.0);
        }
    }
}

TEST_CASE("dpfp can vanish on nonzero inputs", "[dpfp]") {
    // Only r[0] is nonzero, and every shifted product pairs it with a zero.
    CHECK(dot<double>(dpfp<double>(std::vector<double>{1.0, 0.0, 0.0}, 3),
                      dpfp<double>(std::vector<double>{1.0, 0.0, 0.0}, 3)) == 0.0);
    // With nu = 1 only the shift-by-one block exists; alternating signs at odd
    // width leave no two cyclically adjacent nonzeros in r.
    for (const std::vector<double>& x : {std::vector<double>{2.0}, std::vector<double>{1.0, -1.0, 3.0}}) {
        const auto phi = dpfp<double>(x, 1);
        CHECK(dot<double>(phi, phi) == 0.0);
        const auto phi2 = dpfp<double>(x, 2);
        CHECK(dot<double>(phi2, phi2) > 0.0);
    }
}

TEST_CASE("memory state shape law", "[assoc]") {
    for (std::size_t nu : {1u, 2u, 3u}) {
        auto c = tiny_config();
        c.dpfp_nu = nu;
        const auto s = MemoryState<float>::fresh(c);
        REQUIRE(s.n_layers() == c.n_layers);
        for (std::size_t l = 0; l < c.n_layers; ++l) {
            CHECK(s.A[l].shape() == Shape{c.d_model, 2 * nu * c.d_mem});
            CHECK(s.z[l].size() == 2 * nu * c.d_mem);
            CHECK(s.updates[l] == 0);
            for (float v : s.A[l].data()) CHECK(v == 0.0f);
            for (float v : s.z[l]) CHECK(v == 0.0f);
        }
    }
}

TEST_CASE("fresh memory retrieval is the identity", "[assoc][property]") {
    const auto c = tiny_config();
    auto w = init_weights(c);
    const auto s = MemoryState<double>::fresh(c);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SegmentActivation<double> x = SegmentActivation<double>::zeros(c);
        x.hidden = armt::testing::random_tensor<double>({c.positions(), c.d_model}, seed, 3.0);
        const auto before = x.hidden;
        const auto out = assoc_retrieve<double>(s, seed % c.n_layers, w.layer(seed % c.n_layers), c, x);
        CHECK(bitwise_equal(out.hidden, before));
    }
}

TEST_CASE("delta rule: store then retrieve is exact on a dyadic grid", "[assoc][property]") {
    auto c = tiny_config();
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 150; ++trial) {
        auto s = MemoryState<double>::fresh(c);
        const std::size_t l = trial % c.n_layers;
        const auto k = dyadic_vector(c.d_mem, rng);
        const auto v1 = dyadic_vector(c.d_model, rng);
        const auto v2 = dyadic_vector(c.d_model, rng);
        const double eps = c.eps_assoc<double>();

        write_one(s, l, k, v1, c.dpfp_nu, eps);
        CHECK(s.updates[l] == 1);
        CHECK(lookup(s, l, k, c.dpfp_nu, c.d_model, eps) == v1);

        write_one(s, l, k, v2, c.dpfp_nu, eps);
        CHECK(s.updates[l] == 2);
        CHECK(lookup(s, l, k, c.dpfp_nu, c.d_model, eps) == v2);
        // gamma was 0 on the repeat store, so z still equals phi(k).
        CHECK(s.z[l] == dpfp<double>(k, c.dpfp_nu));
    }
}

TEST_CASE("delta rule holds to rounding for real-valued keys", "[assoc][property]") {
    auto c = tiny_config();
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        auto s = MemoryState<double>::fresh(c);
        auto k = random_vector<double>(c.d_mem, 1000 + seed);
        const double norm = std::sqrt(dot<double>(k, k));
        for (auto& e : k) e /= norm;
        const auto v1 = random_vector<double>(c.d_model, 2000 + seed);
        const auto v2 = random_vector<double>(c.d_model, 3000 + seed);
        const double eps = c.eps_assoc<double>();
        write_one(s, 0, k, v1, c.dpfp_nu, eps);
        const auto r1 = lookup(s, 0, k, c.dpfp_nu, c.d_model, eps);
        write_one(s, 0, k, v2, c.dpfp_nu, eps);
        const auto r2 = lookup(s, 0, k, c.dpfp_nu, c.d_model, eps);
        for (std::size_t i = 0; i < c.d_model; ++i) {
            CHECK(r1[i] == Catch::Approx(v1[i]).epsilon(1e-12).margin(1e-12));
            CHECK(r2[i] == Catch::Approx(v2[i]).epsilon(1e-12).margin(1e-12));
        }
    }
}

TEST_CASE("retrieval through the query projection returns the stored value", "[assoc]") {
    auto c = tiny_config();
    auto w = zero_weights<double>(c);
    // Query projection [I | 0]: the first d_mem features of x are the key.
    for (std::size_t l = 0; l < c.n_layers; ++l) {
        for (std::size_t i = 0; i < c.d_mem; ++i) {
            w.mem_wq.slab(l)(i, i) = 1.0;
        }
    }
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto s = MemoryState<double>::fresh(c);
        const auto k = dyadic_vector(c.d_mem, rng);
        const auto v = dyadic_vector(c.d_model, rng);
        write_one(s, 1, k, v, c.dpfp_nu, c.eps_assoc<double>());

        auto x = SegmentActivation<double>::zeros(c);
        for (std::size_t p = 0; p < c.positions(); ++p) {
            const auto row = dyadic_vector(c.d_model, rng);
            std::copy(row.begin(), row.end(), x.hidden.view().row(p));
            std::copy(k.begin(), k.end(), x.hidden.view().row(p));
        }
        const auto out = assoc_retrieve<double>(s, 1, w.layer(1), c, x);
        for (std::size_t p = 0; p < c.positions(); ++p) {
            for (std::size_t j = 0; j < c.d_model; ++j) {
                CHECK(out.hidden.at(p, j) - x.hidden.at(p, j) == v[j]);
            }
        }
        CHECK(bitwise_equal(assoc_retrieve<double>(s, 0, w.layer(0), c, x).hidden, x.hidden));
    }
}

TEST_CASE("denominator at the guard threshold reads as zero", "[assoc]") {
    for (double eps : {1e-12, 1e-6, 0.25}) {
        MemoryState<double> s;
        s.A.push_back(Tensor<double>({2, 2}, 5.0));
        s.z.push_back({eps, 0.0});
        s.updates.push_back(1);
        std::vector<double> out(2, 9.0);
        const std::vector<double> phi{1.0, 3.0};
        CHECK_FALSE(assoc_lookup<double>(s, 0, phi, eps, out));
        CHECK(out == std::vector<double>{0.0, 0.0});
        // Just above the threshold the read goes through.
        s.z[0][0] = eps * 2;
        CHECK(assoc_lookup<double>(s, 0, phi, eps, out));
        CHECK(std::isfinite(out[0]));
        CHECK(out[0] == Catch::Approx(20.0 / (2 * eps)));
    }
    MemoryState<float> s;
    s.A.push_back(Tensor<float>({1, 1}, 1.0f));
    s.z.push_back({-1e-6f});
    s.updates.push_back(1);
    std::vector<float> out(1);
    const std::vector<float> phi{1.0f};
    CHECK_FALSE(assoc_lookup<float>(s, 0, phi, 1e-6f, out));
    CHECK(out[0] == 0.0f);
}

TEST_CASE("zero memory-token outputs leave A and z unchanged", "[assoc]") {
    const auto c = tiny_config();
    const auto w = init_weights(c);
    auto s = MemoryState<double>::fresh(c);
    Tensor<double> mem = Tensor<double>::matrix(c.num_mem_tokens, c.d_model);
    for (std::size_t l = 0; l < c.n_layers; ++l) {
        assoc_update<double>(s, l, w.layer(l), c, mem.view());
        CHECK(s.updates[l] == 1);
        for (double v : s.A[l].data()) CHECK(v == 0.0);
        for (double v : s.z[l]) CHECK(v == 0.0);
    }
    // A zero write on a populated state also changes nothing.
    auto populated = armt::testing::random_tensor<double>({c.num_mem_tokens, c.d_model}, 4);
    assoc_update<double>(s, 0, w.layer(0), c, populated.view());
    const auto A = s.A[0];
    const auto z = s.z[0];
    assoc_update<double>(s, 0, w.layer(0), c, mem.view());
    CHECK(bitwise_equal(s.A[0], A));
    CHECK(s.z[0] == z);
    CHECK(s.updates[0] == 3);
}

TEST_CASE("assoc update folds memory tokens in order", "[assoc]") {
    const auto c = tiny_config();
    const auto w = init_weights(c);
    const auto m = armt::testing::random_tensor<double>({c.num_mem_tokens, c.d_model}, 77);

    auto fused = MemoryState<double>::fresh(c);
    assoc_update<double>(fused, 2, w.layer(2), c, m.view());

    // Oracle: project by hand, then write one token at a time.
    auto folded = MemoryState<double>::fresh(c);
    const auto lw = w.layer(2);
    for (std::size_t i = 0; i < c.num_mem_tokens; ++i) {
        std::span<const double> row(m.view().row(i), c.d_model);
        std::vector<double> k(c.d_mem), v(c.d_model);
        matvec<double>(lw.mem_wk, row, k);
        matvec<double>(lw.mem_wv, row, v);
        const double beta = sigmoid<double>(dot<double>(std::span<const double>(lw.mem_wbeta.row(0), c.d_model), row));
        assoc_write<double>(folded, 2, ConstMatrixView<double>{k.data(), 1, k.size()},
                            ConstMatrixView<double>{v.data(), 1, v.size()},
                            std::span<const double>(&beta, 1), c.dpfp_nu, c.eps_assoc<double>());
    }
    CHECK(bitwise_equal(fused.A[2], folded.A[2]));
    CHECK(fused.z[2] == folded.z[2]);
    CHECK(fused.updates[2] == 1);
    CHECK(folded.updates[2] == c.num_mem_tokens);
}

TEST_CASE("normalizer stays nonnegative under repeated writes", "[assoc][property]") {
    const auto c = tiny_config();
    auto s = MemoryState<double>::fresh(c);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto keys = armt::testing::random_tensor<double>({4, c.d_mem}, seed, 2.0);
        const auto vals = armt::testing::random_tensor<double>({4, c.d_model}, seed + 500);
        const std::vector<double> betas{0.3, 0.9, 0.5, 1.0};
        assoc_write<double>(s, 0, keys.view(), vals.view(), betas, c.dpfp_nu, c.eps_assoc<double>());
        for (double v : s.z[0]) CHECK(v >= 0.0);
        CHECK(all_finite<double>(s.A[0].data()));
    }
}

TEST_CASE("assoc update rejects a wrong memory row count", "[assoc]") {
    const auto c = tiny_config();
    const auto w = init_weights(c);
    auto s = MemoryState<double>::fresh(c);
    Tensor<double> bad = Tensor<double>::matrix(c.num_mem_tokens + 1, c.d_model);
    CHECK_THROWS_AS(assoc_update<double>(s, 0, w.layer(0), c, bad.view()), DimensionError);
    Tensor<double> ok = Tensor<double>::matrix(c.num_mem_tokens, c.d_model);
    CHECK_THROWS_AS(assoc_update<double>(s, c.n_layers, w.layer(0), c, ok.view()), DimensionError);
}
